import dataclasses

import numpy as np
import pytest

from patternq.cells import HillMap, dc_gain, fixed_point, t_prime
from patternq.errors import NotSteadyState, OrderingMismatch
from patternq.existence import solve_reduced
from patternq.graphs import (
    build_graph,
    buckyball,
    hex_torus,
    torus_mesh,
    triangle_bridge,
)
from patternq.partitions import (
    bipartition_partition,
    block_decompose,
    buckyball_face_partition,
    hex_two_level_partition,
    make_partition,
    quotient,
    singleton_partition,
    torus_domino_partition,
)
from patternq.stability import (
    CERTIFIED_STABLE,
    MARGINAL,
    NOT_CERTIFIED,
    STABLE,
    UNSTABLE,
    block_stability,
    full_jacobian_stability,
    m_matrix_diagnostic,
    small_gain,
    stability_report,
)


def _hom(g, m):
    return np.full(g.n, fixed_point(m).value)


# ---- direct Jacobian route ----

def test_homogeneous_state_unstable_at_strong_inhibition():
    g = torus_mesh(4, 4)
    m = HillMap(exponent=6)  # slope magnitude 3
    res = full_jacobian_stability(g, m, _hom(g, m))
    assert res.verdict == UNSTABLE
    # the most negative averaging eigenvalue is -1 on a bipartite graph,
    # so the abscissa is -1 + 3 = 2
    assert abs(res.abscissa - 2.0) < 1e-9


def test_homogeneous_state_stable_at_weak_inhibition():
    g = torus_mesh(4, 4)
    m = HillMap(exponent=1.5)  # slope magnitude 0.75
    res = full_jacobian_stability(g, m, _hom(g, m))
    assert res.verdict == STABLE
    assert abs(res.abscissa - (-1.0 + 0.75)) < 1e-9


def test_homogeneous_state_marginal_at_unit_slope():
    g = torus_mesh(4, 4)
    m = HillMap(exponent=2)
    res = full_jacobian_stability(g, m, _hom(g, m))
    assert res.verdict == MARGINAL


def test_checkerboard_verdict_tracks_slope_product():
    g = torus_mesh(4, 4)
    pi = bipartition_partition(g)
    for h in (4, 6, 8):
        m = HillMap(exponent=h)
        qm = quotient(g, pi)
        red = solve_reduced(qm, m)
        u = pi.expand(red.class_values)
        res = full_jacobian_stability(g, m, u)
        product = float(t_prime(m, red.class_values[0])
                        * t_prime(m, red.class_values[1]))
        assert (res.verdict == STABLE) == (product < 1.0)
        # bipartite closed form: abscissa = -1 + sqrt(t1 t2)
        assert abs(res.abscissa - (-1.0 + np.sqrt(product))) < 1e-9


def test_full_stability_rejects_non_steady_pattern():
    g = torus_mesh(4, 4)
    m = HillMap(exponent=6)
    with pytest.raises(NotSteadyState):
        full_jacobian_stability(g, m, np.linspace(0.1, 1.9, g.n))


# ---- block route ----

def test_block_singleton_partition_is_degenerate():
    g = build_graph(2, [(0, 1, 1.0)])
    m = HillMap(exponent=6)
    dec = block_decompose(g, singleton_partition(2))
    blk = block_stability(g, dec, m, np.full(2, 1.0))
    full = full_jacobian_stability(g, m, _hom(g, m))
    assert blk.transverse_spectrum.size == 0
    assert np.abs(np.sort(blk.representative_spectrum)
                  - np.sort(full.spectrum.eigenvalues)).max() < 1e-12


def test_block_homogeneous_representative_spectrum_closed_form():
    g = torus_mesh(4, 4)
    m = HillMap(exponent=6)
    pi = bipartition_partition(g)
    dec = block_decompose(g, pi)
    z = np.full(2, fixed_point(m).value)
    blk = block_stability(g, dec, m, z)
    t = t_prime(m, 1.0)
    assert np.abs(np.sort(blk.representative_spectrum)
                  - np.sort([-1.0 + t, -1.0 - t])).max() < 1e-9


def _pattern_cases():
    g_t = torus_mesh(4, 4)
    g_h = hex_torus(6, 6)
    return [
        (g_t, bipartition_partition(g_t), 6),
        (g_t, torus_domino_partition(4, 4), 6),
        (buckyball(), buckyball_face_partition(), 6),
        (g_h, hex_two_level_partition(6, 6, "diag3"), 6),
        (triangle_bridge(), make_partition([[2, 5], [0, 1, 3, 4, 6, 7]], 8), 6),
    ]


@pytest.mark.parametrize("g,pi,h", _pattern_cases())
def test_block_union_matches_full_spectrum(g, pi, h):
    m = HillMap(exponent=h)
    qm = quotient(g, pi)
    red = solve_reduced(qm, m)
    dec = block_decompose(g, pi)
    blk = block_stability(g, dec, m, red.class_values)
    assert blk.consistency < 1e-8
    # and the extracted transverse spectrum matches a dense solve of the
    # transverse stability matrix itself
    dense = np.linalg.eigvals(blk.transverse_matrix)
    assert np.abs(dense.imag).max() < 1e-8
    assert np.abs(np.sort(dense.real) - np.sort(blk.transverse_spectrum)).max() < 1e-8


def test_block_ordering_mismatch_detected():
    g = torus_mesh(4, 4)
    pi = bipartition_partition(g)
    dec = block_decompose(g, pi)
    tampered = dataclasses.replace(
        dec, transverse_vertices=tuple(reversed(dec.transverse_vertices)))
    with pytest.raises(OrderingMismatch):
        block_stability(g, tampered, HillMap(), np.ones(2))


# ---- small-gain route ----

def test_small_gain_bipartite_is_geometric_mean():
    g = torus_mesh(4, 4)
    pi = bipartition_partition(g)
    m = HillMap(exponent=6)
    red = solve_reduced(quotient(g, pi), m)
    sg = small_gain(g, pi, m, red.class_values)
    g1, g2 = sg.gains.class_gains
    assert abs(sg.rho_reduced - np.sqrt(g1 * g2)) < 1e-10
    assert abs(sg.rho_full - sg.rho_reduced) < 1e-9
    assert sg.verdict == CERTIFIED_STABLE
    assert (g1 * g2 < 1.0)


def test_small_gain_homogeneous_unit_slope_is_marginal():
    g = torus_mesh(4, 4)
    pi = bipartition_partition(g)
    m = HillMap(exponent=2)  # dc-gain exactly 1 at the fixed point
    z = np.full(2, fixed_point(m).value)
    sg = small_gain(g, pi, m, z)
    assert abs(sg.rho_reduced - 1.0) < 1e-10
    assert sg.verdict == NOT_CERTIFIED


def test_small_gain_buckyball_pattern_is_not_certified():
    g = buckyball()
    pi = buckyball_face_partition()
    m = HillMap(exponent=6)
    red = solve_reduced(quotient(g, pi), m)
    sg = small_gain(g, pi, m, red.class_values)
    assert sg.rho_reduced > 1.0
    assert sg.verdict == NOT_CERTIFIED
    # and indeed the full Jacobian confirms the instability
    u = pi.expand(red.class_values)
    assert full_jacobian_stability(g, m, u).verdict == UNSTABLE


@pytest.mark.parametrize("g,pi,h", _pattern_cases())
def test_small_gain_reduction_equality_and_soundness(g, pi, h):
    m = HillMap(exponent=h)
    qm = quotient(g, pi)
    red = solve_reduced(qm, m)
    sg = small_gain(g, pi, m, red.class_values)
    assert abs(sg.rho_full - sg.rho_reduced) < 1e-9
    # Perron vector of the full product is constant on classes
    v = sg.perron_full / np.abs(sg.perron_full).max()
    for cls in pi.classes:
        vals = v[list(cls)]
        assert vals.max() - vals.min() < 1e-8
    if sg.verdict == CERTIFIED_STABLE:
        u = pi.expand(red.class_values)
        assert full_jacobian_stability(g, m, u).verdict == STABLE


def test_small_gain_certificate_threshold_matches_homogeneous_slope():
    # for the homogeneous pattern the certificate fires exactly when the
    # fixed-point gain sits below one
    g = torus_mesh(4, 4)
    pi = bipartition_partition(g)
    for h, expected in [(1.5, CERTIFIED_STABLE), (4, NOT_CERTIFIED)]:
        m = HillMap(exponent=h)
        z = np.full(2, fixed_point(m).value)
        sg = small_gain(g, pi, m, z)
        assert sg.verdict == expected
        assert abs(sg.rho_reduced - dc_gain(m, fixed_point(m).value)) < 1e-9


def test_m_matrix_diagnostic():
    g = torus_mesh(4, 4)
    m = HillMap(exponent=1.5)
    gains = np.full(g.n, dc_gain(m, 1.0))  # 0.75 < 1
    assert m_matrix_diagnostic(g, gains)
    assert not m_matrix_diagnostic(g, np.full(g.n, 1.25))


# ---- combined report ----

def test_stability_report_full_pipeline():
    g = torus_mesh(4, 4)
    pi = bipartition_partition(g)
    m = HillMap(exponent=6)
    red = solve_reduced(quotient(g, pi), m)
    rep = stability_report(g, pi, m, red.class_values)
    assert rep.full_verdict == STABLE
    assert rep.block is not None and rep.block.consistency < 1e-8
    assert rep.small_gain.verdict == CERTIFIED_STABLE
    assert rep.m_matrix_ok is True


def test_stability_report_selected_methods():
    g = triangle_bridge()
    pi = make_partition([[2, 5], [0, 1, 3, 4, 6, 7]], 8)
    m = HillMap(exponent=6)
    red = solve_reduced(quotient(g, pi), m)
    rep = stability_report(g, pi, m, red.class_values, methods=("full",))
    assert rep.block is None and rep.small_gain is None
