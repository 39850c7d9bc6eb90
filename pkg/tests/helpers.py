"""Independent oracles shared across the test modules.

Everything here deliberately avoids the library's own solution paths:
eigenvalues come from characteristic-polynomial companion roots, reduced
roots from 1-D bisection on composed maps, and coarsest refinements from
full partition enumeration.
"""
from __future__ import annotations

import numpy as np

from patternq.cells import HillMap, fixed_point, t_eval
from patternq.graphs import WeightedGraph
from patternq.partitions import Partition, is_equitable, make_partition, refines


def char_poly_eigs(a: np.ndarray) -> np.ndarray:
    """Eigenvalues via Faddeev-LeVerrier coefficients and companion roots."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    coeffs = [1.0]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    roots = np.roots(coeffs)
    return np.sort(roots.real)[::-1]


def set_partitions(n: int):
    """All partitions of range(n) as lists of sorted lists."""
    def helper(k):
        if k == 0:
            yield []
            return
        for rest in helper(k - 1):
            for i in range(len(rest)):
                yield rest[:i] + [rest[i] + [k - 1]] + rest[i + 1:]
            yield rest + [[k - 1]]
    yield from helper(n)


def brute_force_coarsest(g: WeightedGraph, seed: Partition) -> Partition:
    """Enumerate every partition, keep the equitable ones refining the seed,
    and return the one all the others refine."""
    candidates = [make_partition(blocks, g.n) for blocks in set_partitions(g.n)]
    candidates = [p for p in candidates
                  if refines(p, seed) and is_equitable(g, p).ok]
    best = min(candidates, key=lambda p: p.r)
    assert all(refines(p, best) for p in candidates), "no unique coarsest element"
    return best


def connected_by_closure(g: WeightedGraph) -> bool:
    """Connectivity through boolean matrix closure (no BFS)."""
    w = g.weight_matrix() > 0
    reach = np.eye(g.n, dtype=bool) | w
    for _ in range(g.n):
        reach = reach | (reach.astype(int) @ w.astype(int) > 0)
    return bool(reach[0].all())


def two_cycle_oracle(model: HillMap) -> tuple[float, float]:
    """(z_high, z_low) with z_low = T(z_high), z_high = T(z_low), z_low < u*.

    Bisection on T(T(z)) - z over (0, u*); valid when |T'(u*)| > 1 so the
    composed map leaves the fixed point along this branch.
    """
    u_star = fixed_point(model).value

    def f(z: float) -> float:
        return t_eval(model, t_eval(model, z)) - z

    lo, hi = 0.0, u_star - 1e-9
    assert f(lo) > 0 > f(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    z_low = 0.5 * (lo + hi)
    return t_eval(model, z_low), z_low


def scan_roots(fn, lo: float, hi: float, samples: int = 4000) -> list[float]:
    """All sign-change roots of fn on (lo, hi), refined by bisection."""
    xs = np.linspace(lo, hi, samples)
    vals = np.array([fn(x) for x in xs])
    roots = []
    for i in range(samples - 1):
        if vals[i] == 0.0:
            roots.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0:
            a, b = float(xs[i]), float(xs[i + 1])
            fa = vals[i]
            for _ in range(200):
                mid = 0.5 * (a + b)
                fm = fn(mid)
                if fa * fm <= 0:
                    b = mid
                else:
                    a = mid
                    fa = fm
            roots.append(0.5 * (a + b))
    return roots


def pentagon_hexagon_root_oracle(model: HillMap) -> tuple[float, float]:
    """Nonhomogeneous root of the 12/24-style quotient [[0,1],[1/2,1/2]].

    Eliminating z_1 = T(z_2) reduces the system to a scalar equation in z_2;
    the unique sign change below the fixed point is refined by bisection.
    """
    u_star = fixed_point(model).value

    def f(z2: float) -> float:
        return z2 - 0.5 * (t_eval(model, t_eval(model, z2)) + t_eval(model, z2))

    roots = [z for z in scan_roots(f, 1e-9, u_star - 1e-6) if abs(z - u_star) > 1e-5]
    assert len(roots) == 1, f"expected one nonhomogeneous root, found {roots}"
    z2 = roots[0]
    return t_eval(model, z2), z2


def random_connected_graph(rng: np.random.Generator, n: int,
                           weighted: bool = True) -> WeightedGraph:
    """Random connected graph: a random spanning tree plus random extras."""
    from patternq.graphs import build_graph

    order = rng.permutation(n)
    edges = {}
    for i in range(1, n):
        a, b = int(order[i]), int(order[int(rng.integers(0, i))])
        edges[(min(a, b), max(a, b))] = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < 0.35:
                edges[(i, j)] = 1.0
    if weighted:
        edges = {k: float(np.round(rng.uniform(0.5, 2.0), 3)) for k in edges}
    return build_graph(n, [(i, j, w) for (i, j), w in edges.items()])
