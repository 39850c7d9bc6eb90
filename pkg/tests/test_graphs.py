import numpy as np
import pytest

from patternq.errors import (
    BadIndex,
    BadLatticeSize,
    DuplicateEdge,
    IsolatedVertex,
    NonpositiveWeight,
    NotConnected,
    SelfLoop,
)
from patternq.graphs import (
    bipartition,
    build_graph,
    buckyball,
    cycle_graph,
    generate,
    hex_torus,
    is_connected,
    path_graph,
    scaled_adjacency,
    torus_mesh,
    triangle_bridge,
)

from helpers import connected_by_closure


def test_build_smallest_graph():
    g = build_graph(2, [(0, 1, 1.0)])
    assert g.n == 2
    assert g.edges == ((0, 1, 1.0),)


def test_build_path_of_three():
    g = build_graph(3, [(1, 2, 1), (0, 1, 1)])
    assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))


def test_build_canonicalizes_orientation():
    g = build_graph(3, [(2, 0, 1.5)])
    assert g.edges == ((0, 2, 1.5),)


@pytest.mark.parametrize("edges,exc", [
    ([(0, 1, 1), (0, 1, 2)], DuplicateEdge),
    ([(1, 0, 1), (0, 1, 2)], DuplicateEdge),
    ([(0, 0, 1)], SelfLoop),
    ([(0, 3, 1)], BadIndex),
    ([(0, -1, 1)], BadIndex),
    ([(0, 1, 0.0)], NonpositiveWeight),
    ([(0, 1, -2.0)], NonpositiveWeight),
])
def test_build_rejects_bad_edges(edges, exc):
    with pytest.raises(exc):
        build_graph(3, edges)


def test_scaled_adjacency_path_of_three():
    sa = scaled_adjacency(path_graph(3))
    expected = np.array([[0, 1, 0], [0.5, 0, 0.5], [0, 1, 0]])
    assert np.array_equal(sa.matrix, expected)
    assert np.array_equal(sa.degrees, [1, 2, 1])


def test_scaled_adjacency_two_vertices():
    sa = scaled_adjacency(build_graph(2, [(0, 1, 3.0)]))
    assert np.array_equal(sa.matrix, [[0, 1], [1, 0]])


def test_scaled_adjacency_torus_rows():
    sa = scaled_adjacency(torus_mesh(4, 4))
    # brute-force row check: four entries of 1/4 in every row
    for row in sa.matrix:
        nz = row[row > 0]
        assert len(nz) == 4
        assert np.all(nz == 0.25)


def test_scaled_adjacency_rejects_isolated_vertex():
    with pytest.raises(IsolatedVertex):
        scaled_adjacency(build_graph(3, [(0, 1, 1)]))


@pytest.mark.parametrize("g", [
    path_graph(3),
    cycle_graph(5),
    torus_mesh(4, 4),
    hex_torus(6, 6),
    buckyball(),
    triangle_bridge(),
])
def test_rows_sum_to_one_and_support_symmetric(g):
    sa = scaled_adjacency(g)
    assert np.abs(sa.matrix.sum(axis=1) - 1.0).max() < 1e-12
    assert np.array_equal(sa.matrix > 0, sa.matrix.T > 0)
    assert sa.matrix.min() >= 0


def test_is_connected_basics():
    assert is_connected(path_graph(3))
    assert not is_connected(build_graph(4, [(0, 1, 1), (2, 3, 1)]))


def test_buckyball_connected_against_closure_oracle():
    g = buckyball()
    assert is_connected(g) == connected_by_closure(g)
    assert is_connected(g)


def test_bipartition_torus_matches_parity_classes():
    sides = bipartition(torus_mesh(4, 4))
    assert sides is not None
    assert set(sides[0]) == {0, 2, 5, 7, 8, 10, 13, 15}
    assert set(sides[1]) == {1, 3, 4, 6, 9, 11, 12, 14}


def test_bipartition_proper_two_coloring():
    g = torus_mesh(4, 6)
    sides = bipartition(g)
    side0 = set(sides[0])
    for i, j, _ in g.edges:
        assert (i in side0) != (j in side0)


def test_bipartition_odd_cycle_is_none():
    assert bipartition(cycle_graph(3)) is None


def test_bipartition_triangle_bridge_is_none():
    # odd cycles on both ends
    assert bipartition(triangle_bridge()) is None


def test_bipartition_requires_connected():
    with pytest.raises(NotConnected):
        bipartition(build_graph(4, [(0, 1, 1), (2, 3, 1)]))


def test_torus_mesh_degrees():
    g = torus_mesh(4, 4)
    assert g.n == 16
    assert np.all(g.degrees() == 4)


def test_torus_mesh_two_rows_keeps_weighted_degree():
    # wraparound on a 2-row mesh doubles the vertical contact weight
    g = torus_mesh(2, 4)
    assert np.all(g.degrees() == 4)
    weights = {w for _, _, w in g.edges}
    assert weights == {1.0, 2.0}


def test_hex_torus_degrees():
    g = hex_torus(6, 6)
    assert g.n == 36
    assert np.all(g.degrees() == 6)


def test_buckyball_structure():
    g = buckyball()
    assert g.n == 32
    deg = g.degrees()
    assert np.all(deg[:12] == 5)
    assert np.all(deg[12:] == 6)
    assert len(g.edges) == 90
    # pentagons never touch pentagons
    assert not any(i < 12 and j < 12 for i, j, _ in g.edges)
    # hexagons touch exactly 3 pentagons and 3 hexagons
    for v in range(12, 32):
        nbrs = [j if i == v else i for i, j, _ in g.edges if v in (i, j)]
        assert sum(1 for u in nbrs if u < 12) == 3


def test_triangle_bridge_edge_set():
    g = triangle_bridge()
    expected = {(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (6, 7)}
    assert {(i, j) for i, j, _ in g.edges} == expected


def test_generators_are_deterministic():
    for kind, params in [
        ("torus_mesh", {"rows": 4, "cols": 4}),
        ("hex_torus", {"rows": 6, "cols": 6}),
        ("buckyball", {}),
        ("triangle_bridge", {}),
        ("path", {"n": 5}),
        ("cycle", {"n": 6}),
    ]:
        assert generate(kind, **params).edges == generate(kind, **params).edges


def test_builtin_generator_validation():
    from patternq.graphs import (
        hex_diagonal_generators,
        hex_transpose_perm,
        torus_domino_generators,
    )
    with pytest.raises(BadLatticeSize):
        hex_transpose_perm(6, 4)
    with pytest.raises(BadLatticeSize):
        torus_domino_generators(6, 4)
    with pytest.raises(BadLatticeSize):
        hex_diagonal_generators(4, 4)


def test_hex_partition_validation():
    from patternq.partitions import hex_two_level_partition
    with pytest.raises(BadLatticeSize):
        hex_two_level_partition(4, 4, "diag3")
    with pytest.raises(BadLatticeSize):
        hex_two_level_partition(6, 6, "spiral")


@pytest.mark.parametrize("kind,params", [
    ("path", {"n": 1}),
    ("cycle", {"n": 2}),
    ("torus_mesh", {"rows": 3, "cols": 4}),
    ("torus_mesh", {"rows": 4, "cols": 1}),
    ("hex_torus", {"rows": 5, "cols": 6}),
    ("nonsense", {}),
])
def test_generate_rejects_bad_sizes(kind, params):
    with pytest.raises(BadLatticeSize):
        generate(kind, **params)
