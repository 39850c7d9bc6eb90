"""Certification and construction of nonhomogeneous steady-state patterns.

A two-sided test: the quotient's minimum eigenvalue must be negative enough
that |T'(u*)| * lambda_min < -1 while the reduced graph is bipartite.  When
certified, a nonhomogeneous root of z = Pbar T(z) is located by damped
Newton iteration (with a monotone-flow integration fallback) from starts
perturbed off the homogeneous state along the minimum eigenvector, and the
class values are lifted to the full network.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cells import HillMap, fixed_point, t_eval, t_prime
from .errors import (
    BadOptions,
    DimensionMismatch,
    NotConnected,
    OnlyHomogeneousFound,
    PatternQError,
)
from .graphs import ScaledAdjacency
from .partitions import QuotientModel
from .spectral import eigen_reversible

__all__ = [
    "CERTIFIED",
    "INCONCLUSIVE",
    "ASSUMPTION_FAILED",
    "ExistenceCertificate",
    "ReducedSolution",
    "PatternSolution",
    "certify",
    "solve_reduced",
    "lift",
]

CERTIFIED = "CERTIFIED"
INCONCLUSIVE = "INCONCLUSIVE"
ASSUMPTION_FAILED = "ASSUMPTION_FAILED"

_RESIDUAL_ACCEPT = 1e-10
_NONHOM_REL = 1e-6
# strict thresholds get a small guard band so boundary cases (condition
# exactly -1 up to float noise) never certify
_CONDITION_MARGIN = 1e-9


@dataclass(frozen=True)
class ExistenceCertificate:
    """Outcome of the eigenvalue test on a quotient model.

    condition_value = |T'(u*)| * min_eigenvalue; the verdict is CERTIFIED
    exactly when the reduced graph is bipartite and condition_value < -1.
    A zero or positive minimum eigenvalue can never certify and yields
    INCONCLUSIVE.
    """

    verdict: str
    min_eigenvalue: float
    min_eigenvector: np.ndarray
    min_multiplicity: int
    fixed_point_value: float
    slope_at_fixed_point: float
    condition_value: float
    reduced_bipartite: bool


def certify(qm: QuotientModel, model: HillMap) -> ExistenceCertificate:
    """Evaluate the bipartite-reduced-graph eigenvalue test."""
    if not qm.reduced_connected:
        raise NotConnected("reduced graph is disconnected; use a connected contact graph")
    fp = fixed_point(model)
    slope = t_prime(model, fp.value)
    spec = eigen_reversible(qm.matrix, qm.class_degrees)
    lam = spec.min_eigenvalue
    vec = spec.min_eigenvector()
    mult = int(np.sum(np.abs(spec.eigenvalues - lam) < 1e-9))
    bip = qm.reduced_coloring is not None
    condition = abs(slope) * lam
    if not bip:
        verdict = ASSUMPTION_FAILED
    elif condition < -1.0 - _CONDITION_MARGIN:
        verdict = CERTIFIED
    else:
        verdict = INCONCLUSIVE
    return ExistenceCertificate(
        verdict=verdict,
        min_eigenvalue=lam,
        min_eigenvector=vec,
        min_multiplicity=mult,
        fixed_point_value=fp.value,
        slope_at_fixed_point=float(slope),
        condition_value=float(condition),
        reduced_bipartite=bip,
    )


@dataclass(frozen=True)
class ReducedSolution:
    """A root of the reduced equation z = Pbar T(z) with bookkeeping."""

    class_values: np.ndarray
    residual: float
    homogeneous: bool
    warning: str | None = None
    alternate_class_values: np.ndarray | None = None


@dataclass(frozen=True)
class PatternSolution:
    """Class values plus their lift to per-cell inputs and states."""

    class_values: np.ndarray
    cell_inputs: np.ndarray
    cell_states: np.ndarray
    residual_reduced: float
    residual_full: float
    homogeneous: bool
    warning: str | None = None


def _reduced_residual(pbar: np.ndarray, model: HillMap, z: np.ndarray) -> float:
    return float(np.abs(z - pbar @ t_eval(model, z)).max())


def _newton_root(pbar: np.ndarray, model: HillMap, z0: np.ndarray,
                 tol: float = 1e-12, max_iter: int = 100,
                 progress=None) -> np.ndarray | None:
    """Damped Newton on G(z) = z - Pbar T(z); None when the search stalls."""
    r = len(z0)
    z = z0.copy()
    res = _reduced_residual(pbar, model, z)
    for iteration in range(max_iter):
        if progress is not None:
            progress("newton", iteration)
        if res < tol:
            return z
        jac = np.eye(r) - pbar * t_prime(model, z)[None, :]
        try:
            step = np.linalg.solve(jac, -(z - pbar @ t_eval(model, z)))
        except np.linalg.LinAlgError:
            return None
        alpha = 1.0
        for _ in range(40):
            z_new = z + alpha * step
            if np.all(z_new >= 0):
                res_new = _reduced_residual(pbar, model, z_new)
                if res_new < res * (1.0 - 1e-4 * alpha) or res_new < tol:
                    z = z_new
                    res = res_new
                    break
            alpha *= 0.5
        else:
            return None
    return z if res < tol * 100 else None


def _check_cooperative(pbar: np.ndarray, model: HillMap, u_star: float,
                       coloring) -> None:
    """The sign-flipped linearization must have nonnegative off-diagonals
    before the monotone-flow route may be trusted."""
    r = pbar.shape[0]
    signs = np.ones(r)
    for k in coloring[1]:
        signs[k] = -1.0
    jac = -np.eye(r) + float(t_prime(model, u_star)) * pbar
    flipped = signs[:, None] * jac * signs[None, :]
    off = flipped - np.diag(np.diag(flipped))
    if off.min() < -1e-12:
        raise PatternQError(
            f"flow is not cooperative after the sign flip (min off-diag {off.min():.2e})")


def _ode_root(pbar: np.ndarray, model: HillMap, z0: np.ndarray,
              tol: float = 1e-11, max_steps: int = 10_000_000,
              progress=None) -> np.ndarray | None:
    """Integrate the reduced flow z' = (-z + Pbar T(z)) / tau until the
    derivative norm drops below tol; the limit is an equilibrium."""
    h = 0.01 * model.tau
    z = np.maximum(z0, 0.0)

    def f(state: np.ndarray) -> np.ndarray:
        return (-state + pbar @ t_eval(model, state)) / model.tau

    for step in range(max_steps):
        if progress is not None and step % 5000 == 0:
            progress("flow", step)
        k1 = f(z)
        if np.abs(k1).max() < tol:
            return z
        k2 = f(np.maximum(z + 0.5 * h * k1, 0.0))
        k3 = f(np.maximum(z + 0.5 * h * k2, 0.0))
        k4 = f(np.maximum(z + h * k3, 0.0))
        z = np.maximum(z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4), 0.0)
    return None


def solve_reduced(qm: QuotientModel, model: HillMap,
                  strategy: str = "newton", progress=None) -> ReducedSolution:
    """Find a nonhomogeneous root of the reduced equation.

    Starts from u* 1 +- 0.1 u* v_min (both signs).  Under a CERTIFIED
    verdict at least one start must land on a nonhomogeneous root; if both
    collapse to the homogeneous state even after the flow fallback, the
    contradiction is raised as OnlyHomogeneousFound rather than returned.
    Without certification the homogeneous solution is returned with a
    warning instead of an error.  `progress`, when given, is called as
    progress(phase, iteration) during long solves.
    """
    if strategy not in ("newton", "ode"):
        raise BadOptions(f"unknown strategy {strategy!r}")
    cert = certify(qm, model)
    pbar = qm.matrix
    u_star = cert.fixed_point_value
    hom = np.full(qm.r, u_star)
    if cert.verdict != CERTIFIED:
        return ReducedSolution(
            class_values=hom,
            residual=_reduced_residual(pbar, model, hom),
            homogeneous=True,
            warning=f"verdict {cert.verdict}: returning the homogeneous state",
        )

    direction = cert.min_eigenvector.copy()
    direction /= np.abs(direction).max()
    starts = [np.clip(hom + sign * 0.1 * u_star * direction, 0.0, None)
              for sign in (1.0, -1.0)]

    def is_nonhomogeneous(z: np.ndarray) -> bool:
        return float(z.max() - z.min()) > _NONHOM_REL * u_star

    found: list[np.ndarray] = []
    for z0 in starts:
        if strategy == "newton":
            root = _newton_root(pbar, model, z0, progress=progress)
            if root is None or not is_nonhomogeneous(root):
                # the homogeneous root attracts Newton from small starts;
                # ride the unstable flow off the saddle, then polish
                _check_cooperative(pbar, model, u_star, qm.reduced_coloring)
                staged = _ode_root(pbar, model, z0, tol=1e-6, progress=progress)
                if staged is not None:
                    polished = _newton_root(pbar, model, staged, progress=progress)
                    root = polished if polished is not None else staged
        else:
            _check_cooperative(pbar, model, u_star, qm.reduced_coloring)
            root = _ode_root(pbar, model, z0, tol=1e-11, progress=progress)
        if (root is not None and is_nonhomogeneous(root)
                and _reduced_residual(pbar, model, root) < _RESIDUAL_ACCEPT):
            found.append(root)
    if not found:
        raise OnlyHomogeneousFound(
            "both solver starts converged to the homogeneous state despite a "
            "CERTIFIED eigenvalue condition")

    # deterministic pick: largest first entry under the partition's class order
    found.sort(key=lambda z: tuple(-z))
    best = found[0]
    alternate = None
    for z in found[1:]:
        if np.abs(z - best).max() > 1e-8:
            alternate = z
            break
    return ReducedSolution(
        class_values=best,
        residual=_reduced_residual(pbar, model, best),
        homogeneous=False,
        alternate_class_values=alternate,
    )


def lift(qm: QuotientModel, z, model: HillMap, sa: ScaledAdjacency) -> PatternSolution:
    """Expand class values to all cells and measure both residuals.

    Because the partition is equitable, a reduced root lifts to a root of
    the full steady-state equation; residual_full verifies that mechanically
    against the full averaging matrix.
    """
    z = np.asarray(z, dtype=float)
    pi = qm.partition
    if z.shape != (pi.r,):
        raise DimensionMismatch(f"expected {pi.r} class values, got {z.shape}")
    if sa.n != pi.n:
        raise DimensionMismatch(f"graph has {sa.n} cells, partition covers {pi.n}")
    u = pi.expand(z)
    x = t_eval(model, u)
    residual_full = float(np.abs(u - sa.matrix @ t_eval(model, u)).max())
    u_star = fixed_point(model).value
    return PatternSolution(
        class_values=z,
        cell_inputs=u,
        cell_states=np.asarray(x, dtype=float),
        residual_reduced=_reduced_residual(qm.matrix, model, z),
        residual_full=residual_full,
        homogeneous=float(z.max() - z.min()) <= _NONHOM_REL * u_star,
    )
