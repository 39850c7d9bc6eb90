"""Stability certification of lifted patterns by three routes.

Direct route: spectral abscissa of the full network Jacobian.  Block route:
the [Q R] similarity splits the Jacobian into a representative subsystem
driven by the quotient matrix and a transverse subsystem driven by the
upper-triangular remainder block; the union of their spectra must equal the
full spectrum.  Small-gain route: rho(P Gamma) < 1 with per-class dc-gains,
evaluated on the quotient where it is provably equal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cells import HillMap, dc_gain, t_eval, t_prime
from .errors import DimensionMismatch, NotSteadyState, OrderingMismatch
from .graphs import WeightedGraph, scaled_adjacency
from .partitions import BlockDecomposition, Partition, block_decompose, quotient
from .spectral import (
    Spectrum,
    jacobian_spectrum,
    multiset_extract,
    spectral_radius_nonneg,
)

__all__ = [
    "STABLE",
    "UNSTABLE",
    "MARGINAL",
    "CERTIFIED_STABLE",
    "NOT_CERTIFIED",
    "GainProfile",
    "FullStability",
    "BlockStability",
    "SmallGainResult",
    "StabilityReport",
    "full_jacobian_stability",
    "block_stability",
    "small_gain",
    "m_matrix_diagnostic",
    "stability_report",
]

STABLE = "STABLE"
UNSTABLE = "UNSTABLE"
MARGINAL = "MARGINAL"
CERTIFIED_STABLE = "CERTIFIED_STABLE"
NOT_CERTIFIED = "NOT_CERTIFIED"

_MARGIN = 1e-9
_STEADY_TOL = 1e-8


@dataclass(frozen=True)
class GainProfile:
    """Per-class gains and their expansion to every cell."""

    class_gains: np.ndarray
    cell_gains: np.ndarray


@dataclass(frozen=True)
class FullStability:
    abscissa: float
    verdict: str
    spectrum: Spectrum


@dataclass(frozen=True)
class BlockStability:
    representative_spectrum: np.ndarray
    transverse_spectrum: np.ndarray
    consistency: float
    transverse_matrix: np.ndarray


@dataclass(frozen=True)
class SmallGainResult:
    rho_full: float
    rho_reduced: float
    verdict: str
    gains: GainProfile
    perron_full: np.ndarray
    perron_reduced: np.ndarray


@dataclass(frozen=True)
class StabilityReport:
    full_spectral_abscissa: float
    full_verdict: str
    block: BlockStability | None
    small_gain: SmallGainResult | None
    m_matrix_ok: bool | None


def _verdict_from_abscissa(abscissa: float) -> str:
    if abscissa < -_MARGIN:
        return STABLE
    if abscissa > _MARGIN:
        return UNSTABLE
    return MARGINAL


def full_jacobian_stability(g: WeightedGraph, model: HillMap, u) -> FullStability:
    """Spectral abscissa of (-I + diag(T'(u)) P) / tau at a steady pattern u."""
    sa = scaled_adjacency(g)
    u = np.asarray(u, dtype=float)
    if u.shape != (g.n,):
        raise DimensionMismatch(f"expected {g.n} inputs, got {u.shape}")
    residual = float(np.abs(u - sa.matrix @ t_eval(model, u)).max())
    if residual > _STEADY_TOL:
        raise NotSteadyState(f"pattern residual {residual:.2e} exceeds {_STEADY_TOL}")
    slopes = np.asarray(t_prime(model, u), dtype=float)
    spec = jacobian_spectrum(sa.matrix, sa.degrees, slopes, tau=model.tau)
    abscissa = float(spec.eigenvalues[0])
    return FullStability(abscissa=abscissa, verdict=_verdict_from_abscissa(abscissa),
                         spectrum=spec)


def _validate_ordering(decomp: BlockDecomposition) -> None:
    expected = tuple(v for cls in decomp.partition.classes for v in cls[1:])
    if decomp.transverse_vertices != expected:
        raise OrderingMismatch("transverse columns are not in class-major order")
    n = decomp.p.shape[0]
    for col, v in enumerate(expected):
        col_vec = decomp.r_basis[:, col]
        if col_vec[v] != 1.0 or np.count_nonzero(col_vec) != 1 or len(col_vec) != n:
            raise OrderingMismatch(f"column {col} is not the basis vector of vertex {v}")


def block_stability(g: WeightedGraph, decomp: BlockDecomposition, model: HillMap,
                    z) -> BlockStability:
    """Spectra of the representative and transverse stability blocks.

    The representative block (-I + diag(T'(z)) Pbar) / tau is symmetric-
    similar through the class degrees and solved directly; the transverse
    spectrum is recovered by removing the representative eigenvalues from
    the full Jacobian spectrum, and `consistency` reports the worst matching
    distance of that extraction.
    """
    _validate_ordering(decomp)
    pi = decomp.partition
    z = np.asarray(z, dtype=float)
    if z.shape != (pi.r,):
        raise DimensionMismatch(f"expected {pi.r} class values, got {z.shape}")
    sa = scaled_adjacency(g)
    dbar = np.array([sa.degrees[list(cls)].sum() for cls in pi.classes])
    slopes_r = np.asarray(t_prime(model, z), dtype=float)
    if pi.r == pi.n:
        # every class a singleton: no transverse space, the representative
        # block is the full Jacobian
        full = jacobian_spectrum(sa.matrix, sa.degrees, slopes_r, tau=model.tau)
        return BlockStability(
            representative_spectrum=full.eigenvalues,
            transverse_spectrum=np.empty(0),
            consistency=0.0,
            transverse_matrix=np.empty((0, 0)),
        )
    rep = jacobian_spectrum(decomp.quotient_block, dbar, slopes_r, tau=model.tau,
                            vectors=False)
    u = pi.expand(z)
    slopes_full = np.asarray(t_prime(model, u), dtype=float)
    full = jacobian_spectrum(sa.matrix, sa.degrees, slopes_full, tau=model.tau,
                             vectors=False)
    transverse, worst = multiset_extract(full.eigenvalues, rep.eigenvalues)
    slopes_trans = slopes_full[list(decomp.transverse_vertices)]
    n_t = len(decomp.transverse_vertices)
    trans_matrix = (-np.eye(n_t)
                    + slopes_trans[:, None] * decomp.transverse_block) / model.tau
    return BlockStability(
        representative_spectrum=rep.eigenvalues,
        transverse_spectrum=transverse,
        consistency=worst,
        transverse_matrix=trans_matrix,
    )


def small_gain(g: WeightedGraph, pi: Partition, model: HillMap, z) -> SmallGainResult:
    """Evaluate rho(P Gamma) and its quotient twin rho(Pbar Gammabar).

    Gains are the per-class dc-gains |T'(z_i)|, expanded so cells in a class
    share one gain.  The certificate fires exactly when the quotient radius
    sits below 1 by more than the marginal band.
    """
    z = np.asarray(z, dtype=float)
    qm = quotient(g, pi)
    if z.shape != (pi.r,):
        raise DimensionMismatch(f"expected {pi.r} class values, got {z.shape}")
    class_gains = np.array([dc_gain(model, float(val)) for val in z])
    cell_gains = pi.expand(class_gains)
    sa = scaled_adjacency(g)
    rho_full, v_full = spectral_radius_nonneg(sa.matrix * cell_gains[None, :])
    rho_reduced, v_red = spectral_radius_nonneg(qm.matrix * class_gains[None, :])
    verdict = CERTIFIED_STABLE if rho_reduced < 1.0 - _MARGIN else NOT_CERTIFIED
    return SmallGainResult(
        rho_full=rho_full,
        rho_reduced=rho_reduced,
        verdict=verdict,
        gains=GainProfile(class_gains=class_gains, cell_gains=cell_gains),
        perron_full=v_full,
        perron_reduced=v_red,
    )


def m_matrix_diagnostic(g: WeightedGraph, cell_gains) -> bool:
    """Check that I - Gamma P is a nonsingular M-matrix via leading minors.

    I - Gamma P has nonpositive off-diagonals, so positive leading principal
    minors are equivalent to the M-matrix property.  Only meaningful when
    the gain radius sits below one.
    """
    gains = np.asarray(cell_gains, dtype=float)
    p = scaled_adjacency(g).matrix
    a = np.eye(g.n) - gains[:, None] * p
    for k in range(1, g.n + 1):
        if np.linalg.det(a[:k, :k]) <= 0:
            return False
    return True


def stability_report(g: WeightedGraph, pi: Partition, model: HillMap, z,
                     methods: tuple[str, ...] = ("full", "block", "smallgain"),
                     ) -> StabilityReport:
    """Run the requested certification routes on the lifted pattern of z."""
    z = np.asarray(z, dtype=float)
    u = pi.expand(z)
    full = full_jacobian_stability(g, model, u)
    block = None
    if "block" in methods:
        block = block_stability(g, block_decompose(g, pi), model, z)
    sg = None
    m_ok = None
    if "smallgain" in methods:
        sg = small_gain(g, pi, model, z)
        if sg.rho_full < 1.0:
            m_ok = m_matrix_diagnostic(g, sg.gains.cell_gains)
    return StabilityReport(
        full_spectral_abscissa=full.abscissa,
        full_verdict=full.verdict,
        block=block,
        small_gain=sg,
        m_matrix_ok=m_ok,
    )
