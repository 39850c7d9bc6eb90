"""Equitable-partition algebra on weighted graphs.

A partition of the vertex set is equitable when the summed scaled weights
from any vertex of class i into class j depend only on the pair (i, j);
those sums form the row-stochastic quotient matrix.  This module verifies
equitability, refines partitions to the coarsest equitable one, builds orbit
partitions from automorphism generators, and performs the [Q R] similarity
that splits the averaging matrix into its quotient and transverse blocks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadLatticeSize,
    NotAutomorphism,
    NotEquitable,
    NotPermutation,
    PartitionMismatch,
    SingularTransform,
)
from .graphs import WeightedGraph, bipartition, scaled_adjacency

__all__ = [
    "Partition",
    "EquitabilityCheck",
    "QuotientModel",
    "BlockDecomposition",
    "make_partition",
    "trivial_partition",
    "singleton_partition",
    "refines",
    "canonical_partition",
    "is_equitable",
    "quotient",
    "coarsest_equitable_refinement",
    "orbits_from_generators",
    "block_decompose",
    "bipartition_partition",
    "torus_domino_partition",
    "hex_two_level_partition",
    "HEX_PATTERNS",
    "buckyball_face_partition",
]

_EQ_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    """Disjoint vertex classes covering [0, n).

    Elements ascend within a class.  Class order is preserved from the
    caller (it fixes the row order of quotient matrices); partitions the
    library derives itself (refinement, orbits, 2-colorings) order classes
    by their minimum element so repeated runs agree byte for byte.
    """

    classes: tuple[tuple[int, ...], ...]
    n: int

    @property
    def r(self) -> int:
        return len(self.classes)

    def class_of(self) -> np.ndarray:
        """Length-n vector mapping each vertex to its class index."""
        out = np.empty(self.n, dtype=int)
        for k, cls in enumerate(self.classes):
            for v in cls:
                out[v] = k
        return out

    def indicator_matrix(self) -> np.ndarray:
        """n x r matrix with a 1 where vertex i belongs to class j."""
        q = np.zeros((self.n, self.r))
        for k, cls in enumerate(self.classes):
            for v in cls:
                q[v, k] = 1.0
        return q

    def expand(self, class_values) -> np.ndarray:
        """Lift per-class values to a per-vertex vector."""
        vals = np.asarray(class_values, dtype=float)
        if vals.shape != (self.r,):
            raise PartitionMismatch(
                f"expected {self.r} class values, got shape {vals.shape}")
        return vals[self.class_of()]


def make_partition(classes, n: int) -> Partition:
    """Validate a collection of vertex classes, keeping their given order."""
    cleaned = [tuple(sorted(int(v) for v in cls)) for cls in classes if len(cls)]
    seen: set[int] = set()
    for cls in cleaned:
        for v in cls:
            if not 0 <= v < n:
                raise PartitionMismatch(f"vertex {v} outside [0,{n})")
            if v in seen:
                raise PartitionMismatch(f"vertex {v} appears in two classes")
            seen.add(v)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise PartitionMismatch(f"vertices not covered: {missing}")
    return Partition(classes=tuple(cleaned), n=n)


def canonical_partition(classes, n: int) -> Partition:
    """make_partition with classes reordered by their minimum element."""
    pi = make_partition(classes, n)
    return Partition(classes=tuple(sorted(pi.classes, key=lambda c: c[0])), n=n)


def trivial_partition(n: int) -> Partition:
    return make_partition([range(n)], n)


def singleton_partition(n: int) -> Partition:
    return make_partition([[v] for v in range(n)], n)


def refines(finer: Partition, coarser: Partition) -> bool:
    """True when every class of `finer` lies inside one class of `coarser`."""
    if finer.n != coarser.n:
        raise PartitionMismatch("partitions on different vertex sets")
    owner = coarser.class_of()
    return all(len({owner[v] for v in cls}) == 1 for cls in finer.classes)


@dataclass(frozen=True)
class EquitabilityCheck:
    ok: bool
    # witness on failure: (class_i, class_j, vertex_u, vertex_v, sum_u, sum_v)
    witness: tuple[int, int, int, int, float, float] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _class_sums(p: np.ndarray, pi: Partition) -> np.ndarray:
    """n x r matrix of row sums of p into each class."""
    return p @ pi.indicator_matrix()


def is_equitable(g: WeightedGraph, pi: Partition,
                 tol: float = _EQ_TOL) -> EquitabilityCheck:
    """Check that within each class, all vertices share the same class-sum row."""
    if pi.n != g.n:
        raise PartitionMismatch(f"partition covers {pi.n} vertices, graph has {g.n}")
    p = scaled_adjacency(g).matrix
    sums = _class_sums(p, pi)
    for i, cls in enumerate(pi.classes):
        ref = cls[0]
        for u in cls[1:]:
            diff = np.abs(sums[u] - sums[ref])
            j = int(np.argmax(diff))
            if diff[j] > tol:
                return EquitabilityCheck(
                    ok=False,
                    witness=(i, j, ref, u, float(sums[ref, j]), float(sums[u, j])),
                )
    return EquitabilityCheck(ok=True)


def _two_coloring(r: int, edges: list[tuple[int, int]]):
    """2-color a simple graph on r vertices; None if an odd cycle exists.

    Isolated vertices land on side 0, so a single class is trivially
    2-colorable.
    """
    nbrs: list[list[int]] = [[] for _ in range(r)]
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    color = [-1] * r
    for start in range(r):
        if color[start] != -1:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v in nbrs[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    stack.append(v)
                elif color[v] == color[u]:
                    return None
    side0 = tuple(k for k in range(r) if color[k] == 0)
    side1 = tuple(k for k in range(r) if color[k] == 1)
    return side0, side1


@dataclass(frozen=True)
class QuotientModel:
    """Quotient matrix of an equitable partition plus its reduced graph.

    matrix is row-stochastic and satisfies detailed balance against the
    class-aggregated degrees; reduced_edges lists unordered class pairs with
    a nonzero quotient entry in either direction (self-loops omitted);
    reduced_coloring is the 2-coloring of that reduced graph when bipartite.
    """

    matrix: np.ndarray
    class_degrees: np.ndarray
    reduced_edges: tuple[tuple[int, int], ...]
    reduced_coloring: tuple[tuple[int, ...], tuple[int, ...]] | None
    reduced_connected: bool
    partition: Partition

    @property
    def r(self) -> int:
        return self.matrix.shape[0]


def quotient(g: WeightedGraph, pi: Partition) -> QuotientModel:
    """Build the quotient matrix from representative rows of each class."""
    check = is_equitable(g, pi)
    if not check.ok:
        raise NotEquitable(f"partition is not equitable: witness {check.witness}")
    sa = scaled_adjacency(g)
    sums = _class_sums(sa.matrix, pi)
    reps = [cls[0] for cls in pi.classes]
    pbar = sums[reps, :]
    dbar = np.array([sa.degrees[list(cls)].sum() for cls in pi.classes])
    r = pi.r
    redges = [
        (i, j)
        for i in range(r)
        for j in range(i + 1, r)
        if pbar[i, j] != 0.0 or pbar[j, i] != 0.0
    ]
    coloring = _two_coloring(r, redges)
    # connectivity of the reduced graph (ignoring self-loops)
    seen = {0}
    stack = [0]
    nbrs: list[list[int]] = [[] for _ in range(r)]
    for a, b in redges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    while stack:
        u = stack.pop()
        for v in nbrs[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return QuotientModel(
        matrix=pbar,
        class_degrees=dbar,
        reduced_edges=tuple(redges),
        reduced_coloring=coloring,
        reduced_connected=(len(seen) == r),
        partition=pi,
    )


def coarsest_equitable_refinement(g: WeightedGraph,
                                  seed: Partition | None = None) -> Partition:
    """Iteratively split seed classes by their class-sum signatures.

    Within each class, vertices are grouped by the vector of scaled-weight
    sums into every current class (quantized at 1e-12 to keep float grouping
    stable); splitting repeats until no class changes, keeping every split
    at its parent's position.  The fixed point is the coarsest equitable
    partition refining the seed; an already equitable seed comes back
    unchanged.  Note the single all-vertex class is equitable for every
    graph (each row of the averaging matrix sums to one), so the default
    seed returns unchanged.
    """
    if seed is None:
        seed = trivial_partition(g.n)
    if seed.n != g.n:
        raise PartitionMismatch(f"seed covers {seed.n} vertices, graph has {g.n}")
    p = scaled_adjacency(g).matrix
    pi = seed
    while True:
        sums = _class_sums(p, pi)
        keys = [tuple(round(x, 12) for x in row) for row in sums]
        new_classes: list[list[int]] = []
        for cls in pi.classes:
            groups: dict[tuple, list[int]] = {}
            for v in cls:
                groups.setdefault(keys[v], []).append(v)
            # splits stay where their parent class was; siblings order by
            # minimum element so reruns agree
            new_classes.extend(sorted(groups.values(), key=lambda grp: grp[0]))
        if len(new_classes) == pi.r:
            return pi
        pi = make_partition(new_classes, g.n)


def _check_permutation(perm, n: int) -> list[int]:
    p = [int(x) for x in perm]
    if len(p) != n or sorted(p) != list(range(n)):
        raise NotPermutation(f"not a permutation of [0,{n}): {perm}")
    return p


def orbits_from_generators(g: WeightedGraph, perms) -> Partition:
    """Orbit partition of the group generated by weight-preserving permutations.

    Each permutation must map every edge onto an edge of equal weight
    (NotAutomorphism with the offending edge otherwise).  Orbits are computed
    by union-find closure under the generators, never materializing the
    group itself.
    """
    weight = {(i, j): w for i, j, w in g.edges}
    checked = []
    for perm in perms:
        p = _check_permutation(perm, g.n)
        for i, j, w in g.edges:
            a, b = p[i], p[j]
            if a > b:
                a, b = b, a
            w2 = weight.get((a, b))
            if w2 is None or abs(w2 - w) > 1e-12 * max(1.0, abs(w)):
                raise NotAutomorphism(
                    f"edge ({i},{j},{w}) maps to ({a},{b},{w2}) under {p}")
        checked.append(p)

    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in checked:
        for i in range(g.n):
            ri, rj = find(i), find(p[i])
            if ri != rj:
                parent[ri] = rj
    orbits: dict[int, list[int]] = {}
    for v in range(g.n):
        orbits.setdefault(find(v), []).append(v)
    return canonical_partition(orbits.values(), g.n)


@dataclass(frozen=True)
class BlockDecomposition:
    """Similarity T = [Q R] splitting the averaging matrix into blocks.

    q stacks class indicator columns; r_basis holds standard basis columns
    for the non-representative vertices in class-major order.  Conjugating
    by T yields [[quotient, coupling], [0, transverse]]; the spectrum of the
    transverse block is the full spectrum minus the quotient's.
    """

    partition: Partition
    representatives: tuple[int, ...]
    transverse_vertices: tuple[int, ...]
    q: np.ndarray
    r_basis: np.ndarray
    t: np.ndarray
    quotient_block: np.ndarray
    coupling_block: np.ndarray
    transverse_block: np.ndarray
    p: np.ndarray

    @property
    def n(self) -> int:
        return self.p.shape[0]

    @property
    def r(self) -> int:
        return self.quotient_block.shape[0]


def block_decompose(g: WeightedGraph, pi: Partition) -> BlockDecomposition:
    """Build Q, R and the conjugated block-triangular form of the averaging matrix."""
    check = is_equitable(g, pi)
    if not check.ok:
        raise NotEquitable(f"partition is not equitable: witness {check.witness}")
    p = scaled_adjacency(g).matrix
    n, r = g.n, pi.r
    q = pi.indicator_matrix()
    reps = tuple(cls[0] for cls in pi.classes)
    trans = tuple(v for cls in pi.classes for v in cls[1:])
    r_basis = np.zeros((n, n - r))
    for col, v in enumerate(trans):
        r_basis[v, col] = 1.0
    t = np.hstack([q, r_basis])
    try:
        ptilde = np.linalg.solve(t, p @ t)
    except np.linalg.LinAlgError as exc:  # defensive; t is unimodular
        raise SingularTransform(str(exc)) from exc
    lower_left = ptilde[r:, :r]
    if lower_left.size and np.abs(lower_left).max() > 1e-10:
        raise SingularTransform(
            f"conjugated matrix not block-triangular (max {np.abs(lower_left).max():.2e})")
    return BlockDecomposition(
        partition=pi,
        representatives=reps,
        transverse_vertices=trans,
        q=q,
        r_basis=r_basis,
        t=t,
        quotient_block=ptilde[:r, :r],
        coupling_block=ptilde[:r, r:],
        transverse_block=ptilde[r:, r:],
        p=p,
    )


# ---------------------------------------------------------------------------
# Known two-level partitions of the built-in lattices.
# ---------------------------------------------------------------------------

def bipartition_partition(g: WeightedGraph) -> Partition:
    """The 2-coloring of a connected bipartite graph as a Partition."""
    sides = bipartition(g)
    if sides is None:
        raise BadLatticeSize("graph is not bipartite")
    return make_partition(sides, g.n)


def torus_domino_partition(rows: int, cols: int) -> Partition:
    """Staggered two-cell stripes: class 0 holds (i,j) with j = floor(i/2) mod 2."""
    if rows % 4 or cols % 2:
        raise BadLatticeSize("domino partition needs rows % 4 == 0 and even cols")
    c0 = [i * cols + j for i in range(rows) for j in range(cols)
          if j % 2 == (i // 2) % 2]
    c1 = [v for v in range(rows * cols) if v not in set(c0)]
    return make_partition([c0, c1], rows * cols)


# name -> (membership predicate, (row divisor, col divisor) validity)
HEX_PATTERNS = {
    "diag3": (lambda i, j: (i - j) % 3 == 0, (3, 3)),
    "row2": (lambda i, j: i % 2 == 0, (2, 1)),
    "col3": (lambda i, j: j % 3 == 0, (1, 3)),
    "row3": (lambda i, j: i % 3 == 0, (3, 1)),
    "col2": (lambda i, j: j % 2 == 0, (1, 2)),
}


def hex_two_level_partition(rows: int, cols: int, pattern: str) -> Partition:
    """One of the five two-class equitable splits of the hex torus.

    diag3 groups cells by (i - j) mod 3 == 0 (quotient [[0,1],[1/2,1/2]]);
    row2/col2 are alternating stripes ([[1/3,2/3],[2/3,1/3]]); row3/col3
    keep every third stripe ([[1/3,2/3],[1/3,2/3]]).
    """
    if pattern not in HEX_PATTERNS:
        raise BadLatticeSize(f"unknown hex pattern {pattern!r}; "
                             f"choose from {sorted(HEX_PATTERNS)}")
    pred, (rdiv, cdiv) = HEX_PATTERNS[pattern]
    if rows % rdiv or cols % cdiv:
        raise BadLatticeSize(
            f"hex pattern {pattern} needs rows % {rdiv} == 0 and cols % {cdiv} == 0")
    c0 = [i * cols + j for i in range(rows) for j in range(cols) if pred(i, j)]
    c1 = [v for v in range(rows * cols) if v not in set(c0)]
    return make_partition([c0, c1], rows * cols)


def buckyball_face_partition() -> Partition:
    """Pentagon cells (0..11) versus hexagon cells (12..31)."""
    return make_partition([range(12), range(12, 32)], 32)
