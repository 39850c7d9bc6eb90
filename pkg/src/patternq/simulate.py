"""Full-network integration of the coupled inhibition dynamics.

The network state obeys x' = (-x + T(P x)) / tau: every cell relaxes toward
the inhibitory response to the weighted average of its neighbors' outputs.
Fixed-step fourth-order integration is enough because the right-hand side
is smooth and trajectories stay inside the box [0, A]^N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cells import HillMap, t_eval
from .errors import BadOptions, NotConverged, StateOutOfBox
from .existence import CERTIFIED, ExistenceCertificate, PatternSolution, certify
from .graphs import WeightedGraph, scaled_adjacency
from .partitions import Partition, quotient

__all__ = [
    "SimOptions",
    "SimulationTrace",
    "EmpiricalPattern",
    "CertificateCheck",
    "integrate",
    "perturbed_start",
    "classify",
    "verify_certificate",
    "max_within_class_spread",
]

_MAX_SAMPLES = 10_000
_BOX_SLOP_REL = 1e-7


@dataclass(frozen=True)
class SimOptions:
    """step and max_time default to 0.01 tau and 1e4 tau when left None."""

    step: float | None = None
    max_time: float | None = None
    conv_tol: float = 1e-9

    def resolved(self, tau: float) -> tuple[float, float, float]:
        step = 0.01 * tau if self.step is None else self.step
        max_time = 1e4 * tau if self.max_time is None else self.max_time
        if step <= 0 or max_time <= 0 or self.conv_tol <= 0:
            raise BadOptions("step, max_time and conv_tol must be positive")
        if step > max_time:
            raise BadOptions("step exceeds max_time")
        return step, max_time, self.conv_tol


@dataclass(frozen=True)
class SimulationTrace:
    times: np.ndarray
    states: np.ndarray
    final_state: np.ndarray
    final_time: float
    converged: bool
    final_derivative_norm: float


def integrate(g: WeightedGraph, model: HillMap, x0,
              opts: SimOptions | None = None) -> SimulationTrace:
    """Integrate from x0 until the derivative norm drops below conv_tol.

    Samples are thinned to at most 10^4 rows.  States leaving [0, A] by more
    than float dust abort with StateOutOfBox (the exact flow never leaves
    the box, so an escape means the step is too large); dust-level
    excursions are clipped back.
    """
    opts = opts or SimOptions()
    step, max_time, conv_tol = opts.resolved(model.tau)
    sa = scaled_adjacency(g)
    p = sa.matrix
    amp = model.amplitude
    x = np.array(x0, dtype=float)
    if x.shape != (g.n,):
        raise BadOptions(f"x0 must have {g.n} entries, got shape {x.shape}")
    if x.min() < 0 or x.max() > amp:
        raise BadOptions(f"x0 must lie in [0, {amp}]")

    def rhs(state: np.ndarray) -> np.ndarray:
        # intermediate stage states may poke below zero with large steps;
        # the neighbor average of nonnegative outputs never does
        return (-state + t_eval(model, np.maximum(p @ state, 0.0))) / model.tau

    n_steps = int(math.ceil(max_time / step))
    stride = max(1, int(math.ceil((n_steps + 1) / (_MAX_SAMPLES - 1))))
    slop = _BOX_SLOP_REL * amp

    times = [0.0]
    states = [x.copy()]
    t = 0.0
    converged = False
    deriv = rhs(x)
    deriv_norm = float(np.abs(deriv).max())
    for k in range(1, n_steps + 1):
        if deriv_norm < conv_tol:
            converged = True
            break
        k1 = deriv
        k2 = rhs(x + 0.5 * step * k1)
        k3 = rhs(x + 0.5 * step * k2)
        k4 = rhs(x + step * k3)
        x = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = k * step
        if x.min() < -slop or x.max() > amp + slop:
            raise StateOutOfBox(
                f"state left [0, {amp}] at t={t:.3f}; reduce the step size")
        np.clip(x, 0.0, amp, out=x)
        deriv = rhs(x)
        deriv_norm = float(np.abs(deriv).max())
        if k % stride == 0:
            times.append(t)
            states.append(x.copy())
    else:
        converged = deriv_norm < conv_tol
    if times[-1] != t:
        times.append(t)
        states.append(x.copy())
    return SimulationTrace(
        times=np.array(times),
        states=np.array(states),
        final_state=x.copy(),
        final_time=t,
        converged=converged,
        final_derivative_norm=deriv_norm,
    )


def perturbed_start(model: HillMap, u_hom: float, direction, eps: float) -> np.ndarray:
    """Homogeneous state nudged by eps along direction (max-norm normalized),
    clipped into [0, A]."""
    d = np.asarray(direction, dtype=float)
    scale = np.abs(d).max()
    if scale == 0:
        raise BadOptions("perturbation direction is zero")
    return np.clip(u_hom + eps * d / scale, 0.0, model.amplitude)


@dataclass(frozen=True)
class EmpiricalPattern:
    """Cells grouped by final value (descending), one value per group."""

    groups: tuple[tuple[int, ...], ...]
    values: tuple[float, ...]


def classify(trace: SimulationTrace, cluster_tol: float) -> EmpiricalPattern:
    """Single-linkage clustering of final values with a gap threshold."""
    if not trace.converged:
        raise NotConverged("simulation did not converge; nothing to classify")
    final = trace.final_state
    order = np.argsort(-final)
    groups: list[list[int]] = [[int(order[0])]]
    for idx in order[1:]:
        prev = groups[-1][-1]
        if final[prev] - final[idx] > cluster_tol:
            groups.append([int(idx)])
        else:
            groups[-1].append(int(idx))
    values = tuple(float(np.mean(final[grp])) for grp in groups)
    return EmpiricalPattern(groups=tuple(tuple(sorted(grp)) for grp in groups),
                            values=values)


def max_within_class_spread(states: np.ndarray, pi: Partition) -> float:
    """Worst max-min spread of any class at any sampled instant."""
    worst = 0.0
    for cls in pi.classes:
        block = states[:, list(cls)]
        worst = max(worst, float((block.max(axis=1) - block.min(axis=1)).max()))
    return worst


@dataclass(frozen=True)
class CertificateCheck:
    """Outcome of replaying a certificate through direct simulation."""

    match: bool
    exploratory: bool
    converged: bool
    max_deviation: float
    empirical: EmpiricalPattern | None
    note: str


def verify_certificate(g: WeightedGraph, pi: Partition, model: HillMap,
                       pattern: PatternSolution,
                       certificate: ExistenceCertificate | None = None,
                       eps: float = 0.01,
                       opts: SimOptions | None = None) -> CertificateCheck:
    """Simulate from a perturbation along the lifted minimum eigenvector and
    compare the settled pattern with the predicted one.

    A failure to match is reported, never raised: nothing guarantees the
    chosen start lies in the predicted pattern's basin.
    """
    qm = quotient(g, pi)
    cert = certificate or certify(qm, model)
    exploratory = cert.verdict != CERTIFIED
    direction = pi.expand(cert.min_eigenvector)
    # orient the unstable direction toward the predicted pattern, otherwise
    # the run lands on the class-swapped twin
    if not pattern.homogeneous:
        toward = float(direction @ (pattern.cell_states - cert.fixed_point_value))
        if toward < 0:
            direction = -direction
    x0 = perturbed_start(model, cert.fixed_point_value, direction, eps)
    trace = integrate(g, model, x0, opts)
    if not trace.converged:
        return CertificateCheck(
            match=False, exploratory=exploratory, converged=False,
            max_deviation=float("nan"), empirical=None,
            note="simulation hit max_time before converging")
    empirical = classify(trace, cluster_tol=1e-4 * model.amplitude)
    same_grouping = (frozenset(map(frozenset, empirical.groups))
                     == frozenset(map(frozenset, pi.classes)))
    deviation = float(np.abs(trace.final_state - pattern.cell_states).max())
    if exploratory:
        note = "no certificate; simulation exploratory only"
    elif same_grouping:
        note = "simulated grouping matches the partition"
    else:
        note = "NO_MATCH: simulation settled on a different grouping"
    return CertificateCheck(
        match=same_grouping,
        exploratory=exploratory,
        converged=True,
        max_deviation=deviation,
        empirical=empirical,
        note=note,
    )
