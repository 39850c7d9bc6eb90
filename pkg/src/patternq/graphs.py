"""Weighted contact graphs, built-in lattices and the row-stochastic averaging matrix.

Vertices are 0-based integers.  Edges are undirected with strictly positive
weights; an absent edge means weight zero.  The averaging (scaled adjacency)
matrix divides each row of the weight matrix by the node degree, so every row
sums to one and the network input u = P y is a weighted average of neighbor
outputs.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadIndex,
    BadLatticeSize,
    DuplicateEdge,
    IsolatedVertex,
    NonpositiveWeight,
    NotConnected,
    SelfLoop,
)

__all__ = [
    "WeightedGraph",
    "ScaledAdjacency",
    "build_graph",
    "scaled_adjacency",
    "is_connected",
    "bipartition",
    "generate",
    "GENERATOR_KINDS",
    "path_graph",
    "cycle_graph",
    "torus_mesh",
    "hex_torus",
    "buckyball",
    "triangle_bridge",
    "torus_shift_perm",
    "torus_flip_shift_perm",
    "torus_checkerboard_generators",
    "torus_domino_generators",
    "cycle_rotation_perm",
    "hex_shift_perm",
    "hex_transpose_perm",
    "hex_diagonal_generators",
    "buckyball_rotation_generators",
]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph with canonical edge storage (i < j, sorted)."""

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def weight_matrix(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        for i, j, wt in self.edges:
            w[i, j] = wt
            w[j, i] = wt
        return w

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n)
        for i, j, wt in self.edges:
            d[i] += wt
            d[j] += wt
        return d

    def neighbor_lists(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for i, j, _ in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return nbrs


@dataclass(frozen=True)
class ScaledAdjacency:
    """Row-stochastic neighbor-averaging matrix and the degree vector behind it."""

    matrix: np.ndarray
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def build_graph(n: int, edges) -> WeightedGraph:
    """Validate and canonicalize an edge list into a WeightedGraph.

    Raises BadIndex, SelfLoop, NonpositiveWeight or DuplicateEdge on invalid
    input.  Edges are stored with i < j and sorted lexicographically.
    """
    if n <= 0:
        raise BadIndex(f"vertex count must be positive, got {n}")
    seen: set[tuple[int, int]] = set()
    canon = []
    for e in edges:
        i, j, w = int(e[0]), int(e[1]), float(e[2])
        if not (0 <= i < n and 0 <= j < n):
            raise BadIndex(f"edge ({i},{j}) outside [0,{n})")
        if i == j:
            raise SelfLoop(f"self-loop at vertex {i}")
        if w <= 0:
            raise NonpositiveWeight(f"edge ({i},{j}) has weight {w}")
        a, b = (i, j) if i < j else (j, i)
        if (a, b) in seen:
            raise DuplicateEdge(f"duplicate edge ({a},{b})")
        seen.add((a, b))
        canon.append((a, b, w))
    canon.sort()
    return WeightedGraph(n=n, edges=tuple(canon))


def scaled_adjacency(g: WeightedGraph) -> ScaledAdjacency:
    """Divide each weight-matrix row by the node degree d_i = sum_j w_ij.

    Every vertex must have positive degree, otherwise the scaling is
    undefined and IsolatedVertex is raised.
    """
    d = g.degrees()
    isolated = np.where(d == 0)[0]
    if isolated.size:
        raise IsolatedVertex(f"vertices with zero degree: {isolated.tolist()}")
    p = g.weight_matrix() / d[:, None]
    return ScaledAdjacency(matrix=p, degrees=d)


def is_connected(g: WeightedGraph) -> bool:
    """True iff a breadth-first search from vertex 0 reaches every vertex."""
    nbrs = g.neighbor_lists()
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in nbrs[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == g.n


def bipartition(g: WeightedGraph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Two-color a connected graph; None when an odd cycle exists.

    The first returned class contains vertex 0.  Raises NotConnected on
    disconnected input.
    """
    if not is_connected(g):
        raise NotConnected("bipartition requires a connected graph")
    color = [-1] * g.n
    nbrs = g.neighbor_lists()
    color[0] = 0
    queue = [0]
    while queue:
        u = queue.pop()
        for v in nbrs[u]:
            if color[v] == -1:
                color[v] = 1 - color[u]
                queue.append(v)
            elif color[v] == color[u]:
                return None
    side0 = tuple(v for v in range(g.n) if color[v] == 0)
    side1 = tuple(v for v in range(g.n) if color[v] == 1)
    return side0, side1


# ---------------------------------------------------------------------------
# Built-in lattices.  All generators are deterministic: calling twice with the
# same arguments yields byte-identical edge lists.
# ---------------------------------------------------------------------------

GENERATOR_KINDS = ("path", "cycle", "torus_mesh", "hex_torus", "buckyball", "triangle_bridge")


def path_graph(n: int) -> WeightedGraph:
    if n < 2:
        raise BadLatticeSize("path needs at least 2 vertices")
    return build_graph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def cycle_graph(n: int) -> WeightedGraph:
    if n < 3:
        raise BadLatticeSize("cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def _accumulate(n: int, pairs) -> WeightedGraph:
    # wraparound lattices on a 2-wide dimension hit the same neighbor twice;
    # coincident contacts accumulate weight so the weighted degree stays fixed
    acc: dict[tuple[int, int], float] = {}
    for i, j in pairs:
        a, b = (i, j) if i < j else (j, i)
        acc[(a, b)] = acc.get((a, b), 0.0) + 1.0
    return build_graph(n, [(a, b, w) for (a, b), w in sorted(acc.items())])


def torus_mesh(rows: int, cols: int) -> WeightedGraph:
    """Square lattice with wraparound; row-major numbering v = i*cols + j."""
    if rows < 2 or cols < 2 or rows % 2 or cols % 2:
        raise BadLatticeSize("torus_mesh needs even rows and cols >= 2")
    pairs = []
    for i in range(rows):
        for j in range(cols):
            u = i * cols + j
            pairs.append((u, i * cols + (j + 1) % cols))
            pairs.append((u, ((i + 1) % rows) * cols + j))
    return _accumulate(rows * cols, pairs)


_HEX_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


def hex_torus(rows: int, cols: int) -> WeightedGraph:
    """Hexagonal lattice with wraparound in axial coordinates (6 neighbors)."""
    if rows < 2 or cols < 2 or rows % 2 or cols % 2:
        raise BadLatticeSize("hex_torus needs even rows and cols >= 2")
    pairs = []
    for i in range(rows):
        for j in range(cols):
            u = i * cols + j
            for di, dj in ((1, 0), (0, 1), (1, -1)):
                pairs.append((u, ((i + di) % rows) * cols + (j + dj) % cols))
    return _accumulate(rows * cols, pairs)


_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def _icosahedron() -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """Vertex coordinates (sorted, deterministic) and triangular faces."""
    verts = []
    for a, b in itertools.product((1.0, -1.0), repeat=2):
        verts.append((0.0, a, b * _GOLDEN))
        verts.append((a, b * _GOLDEN, 0.0))
        verts.append((a * _GOLDEN, 0.0, b))
    coords = np.array(sorted(verts))
    d2 = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(-1)
    adj = [set() for _ in range(12)]
    for i in range(12):
        for j in range(i + 1, 12):
            if abs(d2[i, j] - 4.0) < 1e-9:
                adj[i].add(j)
                adj[j].add(i)
    faces = sorted(
        (i, j, k)
        for i in range(12)
        for j in adj[i] if j > i
        for k in (adj[i] & adj[j]) if k > j
    )
    return coords, faces


def buckyball() -> WeightedGraph:
    """Face-adjacency graph of the truncated icosahedron (32 cells).

    The 12 pentagonal faces come first (indices 0..11), then the 20 hexagonal
    faces (12..31).  Two cells are joined when the faces share an edge:
    each pentagon touches 5 hexagons; each hexagon touches 3 pentagons and
    3 hexagons.
    """
    _, faces = _icosahedron()
    edges = []
    for fi, f in enumerate(faces):
        for v in f:
            edges.append((v, 12 + fi, 1.0))
    for fi in range(20):
        for fj in range(fi + 1, 20):
            if len(set(faces[fi]) & set(faces[fj])) == 2:
                edges.append((12 + fi, 12 + fj, 1.0))
    return build_graph(32, edges)


def triangle_bridge() -> WeightedGraph:
    """8-vertex graph: two triangles joined through a 3-edge path.

    The two degree-3 vertices (2 and 5) form an equitable 2-class split even
    though the graph is neither bipartite nor symmetric enough for that split
    to arise from automorphism orbits.
    """
    edges = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (6, 7)]
    return build_graph(8, [(i, j, 1.0) for i, j in edges])


def generate(kind: str, **params) -> WeightedGraph:
    """Dispatch to a built-in lattice by kind name.

    kind in {"path", "cycle", "torus_mesh", "hex_torus", "buckyball",
    "triangle_bridge"}; path/cycle take n, torus_mesh/hex_torus take
    rows and cols.
    """
    if kind == "path":
        return path_graph(int(params["n"]))
    if kind == "cycle":
        return cycle_graph(int(params["n"]))
    if kind == "torus_mesh":
        return torus_mesh(int(params["rows"]), int(params["cols"]))
    if kind == "hex_torus":
        return hex_torus(int(params["rows"]), int(params["cols"]))
    if kind == "buckyball":
        return buckyball()
    if kind == "triangle_bridge":
        return triangle_bridge()
    raise BadLatticeSize(f"unknown lattice kind {kind!r}")


# ---------------------------------------------------------------------------
# Known automorphism generators for the built-in lattices.  These feed the
# orbit-partition machinery; users may supply their own permutations instead.
# ---------------------------------------------------------------------------

def torus_shift_perm(rows: int, cols: int, dr: int, dc: int) -> list[int]:
    """Translation (i,j) -> (i+dr, j+dc) on the wraparound mesh."""
    return [((i + dr) % rows) * cols + (j + dc) % cols
            for i in range(rows) for j in range(cols)]


def torus_flip_shift_perm(rows: int, cols: int) -> list[int]:
    """Glide symmetry (i,j) -> (1-i, -j): a row reflection about row 1/2
    combined with a column reflection."""
    return [((1 - i) % rows) * cols + (-j) % cols
            for i in range(rows) for j in range(cols)]


def torus_checkerboard_generators(rows: int, cols: int) -> list[list[int]]:
    """Translations whose orbits are the two parity classes of the mesh."""
    return [torus_shift_perm(rows, cols, 1, 1), torus_shift_perm(rows, cols, 0, 2)]


def torus_domino_generators(rows: int, cols: int) -> list[list[int]]:
    """Generators whose orbits pair rows into staggered two-cell stripes.

    On the 4x4 mesh the two orbits are {0,2,4,6,9,11,13,15} and its
    complement, with quotient [[1/4,3/4],[3/4,1/4]].  Needs rows % 4 == 0.
    """
    if rows % 4 or cols % 2:
        raise BadLatticeSize("domino orbits need rows % 4 == 0 and even cols")
    return [torus_shift_perm(rows, cols, 2, 1), torus_flip_shift_perm(rows, cols)]


def cycle_rotation_perm(n: int) -> list[int]:
    return [(i + 1) % n for i in range(n)]


def hex_shift_perm(rows: int, cols: int, dr: int, dc: int) -> list[int]:
    return [((i + dr) % rows) * cols + (j + dc) % cols
            for i in range(rows) for j in range(cols)]


def hex_transpose_perm(rows: int, cols: int) -> list[int]:
    """(i,j) -> (j,i); an automorphism of the axial hex torus when square."""
    if rows != cols:
        raise BadLatticeSize("transpose needs a square hex torus")
    return [j * cols + i for i in range(rows) for j in range(cols)]


def hex_diagonal_generators(rows: int, cols: int) -> list[list[int]]:
    """Generators whose orbits split the hex torus by (i-j) mod 3 into the
    12/24 two-level classes (quotient [[0,1],[1/2,1/2]] on the 6x6)."""
    if rows != cols or rows % 3:
        raise BadLatticeSize("diagonal orbits need a square side divisible by 3")
    return [
        hex_shift_perm(rows, cols, 1, 1),
        hex_shift_perm(rows, cols, 3, 0),
        hex_transpose_perm(rows, cols),
    ]


def _rotation_vertex_perm(coords: np.ndarray, rot: np.ndarray) -> list[int]:
    image = coords @ rot.T
    perm = []
    for row in image:
        hits = np.where(((coords - row) ** 2).sum(1) < 1e-6)[0]
        if hits.size != 1:
            raise BadLatticeSize("rotation does not permute the vertex set")
        perm.append(int(hits[0]))
    return perm


def buckyball_rotation_generators() -> list[list[int]]:
    """Two rotations of the solid, as permutations of the 32 face-cells.

    A coordinate 3-cycle (order 3) and a fifth-turn about a pentagon axis
    (order 5) generate the full rotation group; the orbits are the 12
    pentagons and the 20 hexagons.
    """
    coords, faces = _icosahedron()
    r3 = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    axis = coords[0] / np.linalg.norm(coords[0])
    th = 2.0 * math.pi / 5.0
    k = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    r5 = np.eye(3) + math.sin(th) * k + (1.0 - math.cos(th)) * (k @ k)
    face_index = {f: i for i, f in enumerate(faces)}
    perms = []
    for rot in (r3, r5):
        vp = _rotation_vertex_perm(coords, rot)
        fp = [face_index[tuple(sorted(vp[v] for v in faces[i]))] for i in range(20)]
        perms.append(vp + [12 + x for x in fp])
    return perms
