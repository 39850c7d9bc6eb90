"""Eigenvalue machinery built entirely on symmetric solvers.

Every matrix this package needs a spectrum for is similar to a symmetric
one: the averaging matrix and its quotients through detailed balance, the
gain-weighted products through a degree/gain diagonal similarity, and the
one-state network Jacobian through a degree/slope similarity.  The only
solvers here are cyclic Jacobi rotations and a two-step power iteration;
no unsymmetric QR is ever used.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DetailedBalanceViolated, NoConvergence, NotSymmetric, Reducible

__all__ = [
    "Spectrum",
    "sym_eigen",
    "eigen_reversible",
    "spectral_radius_nonneg",
    "jacobian_spectrum",
    "spectral_abscissa",
    "multiset_extract",
]

_MAX_SWEEPS = 100
_POWER_MAX_ITERS = 100_000


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues sorted descending, optional matching unit eigenvectors.

    approximate marks the Gershgorin/power-iteration fallback used when a
    matrix is not symmetric-similar; abscissa_bound then carries the
    Gershgorin upper bound on the real parts.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    approximate: bool = False
    abscissa_bound: float | None = None

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def min_eigenvector(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("spectrum carries no eigenvectors")
        return self.eigenvectors[:, -1]


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # deterministic orientation: the largest-magnitude entry is positive
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            out[:, k] = -col
    return out


def sym_eigen(a: np.ndarray, vectors: bool = True) -> Spectrum:
    """Full spectrum of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate every off-diagonal pair above a small relative threshold
    until the off-diagonal Frobenius norm falls below 1e-13 of the matrix
    norm (safely under the 1e-12 contract).  Raises NotSymmetric when the
    input deviates from its transpose by more than 1e-10, NoConvergence
    after 100 sweeps.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    if n == 0:
        return Spectrum(np.empty(0), np.empty((0, 0)) if vectors else None)
    if np.abs(a - a.T).max() > 1e-10:
        raise NotSymmetric(
            f"matrix is not symmetric (max deviation {np.abs(a - a.T).max():.2e})")
    m = (a + a.T) / 2.0
    v = np.eye(n) if vectors else None
    scale = np.linalg.norm(m)
    if scale == 0.0 or n == 1:
        vals = np.diag(m).copy()
        order = np.argsort(-vals)
        vecs = v[:, order] if vectors else None
        return Spectrum(vals[order], vecs)

    skip = 1e-14 * scale / n
    for _sweep in range(_MAX_SWEEPS):
        # summing the off-diagonal entries directly avoids the cancellation
        # of ||M||^2 - ||diag||^2, which reads as zero long before the
        # off-diagonal part actually is
        off = np.linalg.norm(m - np.diag(np.diag(m)))
        if off <= 1e-13 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= skip:
                    continue
                # rotation angle zeroing m[p,q]
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = np.sign(theta) if theta != 0 else 1.0
                    t /= abs(theta) + np.sqrt(theta * theta + 1.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = m[:, p].copy()
                col_q = m[:, q].copy()
                m[:, p] = c * col_p - s * col_q
                m[:, q] = s * col_p + c * col_q
                row_p = m[p, :].copy()
                row_q = m[q, :].copy()
                m[p, :] = c * row_p - s * row_q
                m[q, :] = s * row_p + c * row_q
                m[p, q] = 0.0
                m[q, p] = 0.0
                if vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
    else:
        raise NoConvergence(f"Jacobi sweeps did not converge in {_MAX_SWEEPS} sweeps")

    vals = np.diag(m).copy()
    order = np.argsort(-vals)
    vals = vals[order]
    vecs = _fix_signs(v[:, order]) if vectors else None
    return Spectrum(vals, vecs)


def eigen_reversible(p: np.ndarray, d: np.ndarray, vectors: bool = True) -> Spectrum:
    """Spectrum of a row-stochastic matrix satisfying detailed balance.

    With d_i p_ij = d_j p_ji the similarity D^{1/2} P D^{-1/2} is symmetric,
    so the whole spectrum is real; eigenvectors are mapped back through
    D^{-1/2} and renormalized.  The largest eigenvalue comes out as 1 with a
    positive eigenvector.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise DetailedBalanceViolated("weight vector must be strictly positive")
    flux = d[:, None] * p
    err = np.abs(flux - flux.T).max()
    if err > 1e-10 * max(1.0, np.abs(flux).max()):
        raise DetailedBalanceViolated(
            f"detailed balance violated (max flux asymmetry {err:.2e})")
    root = np.sqrt(d)
    sym = (root[:, None] * p) / root[None, :]
    sym = (sym + sym.T) / 2.0
    spec = sym_eigen(sym, vectors=vectors)
    if not vectors:
        return spec
    back = spec.eigenvectors / root[:, None]
    norms = np.linalg.norm(back, axis=0)
    back = _fix_signs(back / norms)
    return Spectrum(spec.eigenvalues, back)


def _strongly_connected(support: np.ndarray) -> bool:
    n = support.shape[0]

    def reach(adj: np.ndarray) -> int:
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            u = stack.pop()
            for w in np.where(adj[u])[0]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
        return int(seen.sum())

    return reach(support) == n and reach(support.T) == n


def spectral_radius_nonneg(m: np.ndarray) -> tuple[float, np.ndarray]:
    """Perron root and positive eigenvector of a nonnegative irreducible matrix.

    Power iteration is applied two steps at a time (in effect powering M^2)
    so that the +-rho peripheral pair of a bipartite support becomes a
    single dominant eigenvalue rho^2; no shift is needed and the spectral
    gap is untouched.  The Perron direction is recovered as x + Mx/rho,
    which cancels the alternating component exactly.  Starts from the
    all-ones vector, normalizes in max-norm, and accepts once the residual
    ||Mv - rho v|| drops below 1e-10 rho (floored at machine noise relative
    to ||M|| for degenerate, vanishingly small radii).
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.min() < 0:
        raise Reducible(f"matrix has negative entries (min {m.min():.2e})")
    if n == 1:
        return float(m[0, 0]), np.array([1.0])
    if not _strongly_connected(m > 0):
        raise Reducible("support is not strongly connected")
    scale = float(np.abs(m).sum(axis=1).max())
    x = np.ones(n)
    for _ in range(_POWER_MAX_ITERS // 2):
        z = m @ (m @ x)
        lam2 = float(np.abs(z).max())
        if lam2 == 0.0:
            raise NoConvergence("iterate vanished; radius below machine precision")
        x = z / lam2
        rho = np.sqrt(lam2)
        v = x + (m @ x) / rho
        vmax = float(np.abs(v).max())
        if vmax > 0:
            v = v / vmax
            residual = float(np.abs(m @ v - rho * v).max())
            if residual <= 1e-10 * rho + 1e-14 * scale:
                if v.min() <= 0:
                    raise NoConvergence("power iteration lost positivity")
                return rho, v
    raise NoConvergence(
        f"power iteration did not converge in {_POWER_MAX_ITERS // 2} doubled steps")


def jacobian_spectrum(p: np.ndarray, d: np.ndarray, slopes: np.ndarray,
                      tau: float = 1.0, vectors: bool = True) -> Spectrum:
    """Spectrum of the one-state network Jacobian (-I + diag(slopes) P) / tau.

    With all slopes negative, diag(slopes) P is similar to the symmetric
    matrix with entries -w_ij sqrt(|t_i||t_j| / (d_i d_j)) via the diagonal
    sqrt(d_i/|t_i|), so the spectrum is real and computed by sym_eigen.
    When some slope is nonnegative that similarity fails; the fallback
    returns a Gershgorin bound plus a power-iteration estimate of the
    spectral abscissa, flagged approximate.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    t = np.asarray(slopes, dtype=float)
    n = p.shape[0]
    if t.shape != (n,):
        raise DetailedBalanceViolated(f"expected {n} slopes, got {t.shape}")
    if np.all(t < 0):
        gamma = -t
        scale = np.sqrt(d / gamma)
        b = t[:, None] * p
        sym = (scale[:, None] * b) / scale[None, :]
        sym = (sym + sym.T) / 2.0
        inner = sym_eigen(sym, vectors=vectors)
        vals = (-1.0 + inner.eigenvalues) / tau
        if not vectors:
            return Spectrum(vals)
        back = inner.eigenvectors / scale[:, None]
        norms = np.linalg.norm(back, axis=0)
        return Spectrum(vals, _fix_signs(back / norms))

    # approximate fallback: some slopes are nonnegative
    j = (-np.eye(n) + t[:, None] * p) / tau
    centers = np.diag(j)
    radii = np.abs(j).sum(axis=1) - np.abs(centers)
    bound = float((centers + radii).max())
    c = (1.0 + float(np.abs(t).max())) / tau
    shifted = j + c * np.eye(n)
    x = np.ones(n) / np.sqrt(n)
    estimate = -c
    for _ in range(10_000):
        y = shifted @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            break
        x_new = y / norm
        rayleigh = float(x_new @ (shifted @ x_new))
        if abs(rayleigh - (estimate + c)) <= 1e-12 * max(1.0, abs(rayleigh)):
            estimate = rayleigh - c
            break
        estimate = rayleigh - c
        x = x_new
    return Spectrum(
        eigenvalues=np.array([min(estimate, bound)]),
        eigenvectors=None,
        approximate=True,
        abscissa_bound=bound,
    )


def spectral_abscissa(spec: Spectrum) -> float:
    """Largest eigenvalue of a real spectrum (eigenvalues are sorted descending)."""
    return float(spec.eigenvalues[0])


def multiset_extract(full, part) -> tuple[np.ndarray, float]:
    """Remove `part` from `full` by nearest matching; return remainder and
    the worst matched distance.

    Used to recover the transverse-block spectrum as full-minus-quotient;
    callers compare the returned distance against their tolerance.  Raises
    ValueError when `part` has more elements than `full`.
    """
    pool = sorted(float(x) for x in full)
    want = sorted(float(x) for x in part)
    if len(want) > len(pool):
        raise ValueError("cannot extract a larger multiset")
    used = [False] * len(pool)
    worst = 0.0
    for x in want:
        best, best_d = -1, np.inf
        for i, y in enumerate(pool):
            if used[i]:
                continue
            dist = abs(y - x)
            if dist < best_d:
                best, best_d = i, dist
        used[best] = True
        worst = max(worst, best_d)
    remainder = np.array(sorted((y for i, y in enumerate(pool) if not used[i]),
                                reverse=True))
    return remainder, worst
