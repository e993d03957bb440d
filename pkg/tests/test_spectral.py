import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from jacgraph.abgroup import all_char_sums, cyclic_product
from jacgraph.curve import CurveData
from jacgraph.jac import ModulusSpec
from jacgraph.spectral import (
    SpectralBoundViolation,
    SpectrumReport,
    block_eigenvalues,
    block_matrix,
    emit_distribution_data,
    jacobi_eigenvalues,
    max_discrepancy,
    normalize_and_judge,
    semicircle_cdf,
    semicircle_sample,
    spectrum_char,
    spectrum_dense,
    trace_identity_gap,
    w1_to_semicircle,
)
from jacgraph.sumgraph import build_sum_graph, graph_from_edges
from jacgraph.survey import jacobian_graph

from conftest import genus1_examples


def w1_quad(values):
    """W1 by adaptive quadrature of |F_emp - F_sc| between breakpoints."""
    v = np.sort(np.clip(values, -2, 2))
    pts = [-2.0] + list(v) + [2.0]
    total = 0.0
    for k in range(len(pts) - 1):
        a, b = pts[k], pts[k + 1]
        if b > a:
            level = k / len(v)
            total += integrate.quad(lambda x: abs(level - float(semicircle_cdf(x))), a, b, limit=200)[0]
    return total


def test_char_examples():
    G4 = cyclic_product([4])
    assert np.allclose(spectrum_char(G4, [1, 3]).eigenvalues, [-1, 0, 0, 1])
    G5 = cyclic_product([5])
    c1, c2 = math.cos(2 * math.pi / 5), math.cos(4 * math.pi / 5)
    assert np.allclose(spectrum_char(G5, [1, 4]).eigenvalues, sorted([1, c1, -c1, c2, -c2]))


def test_dense_examples():
    g = graph_from_edges(1, [(0, 0)])
    assert spectrum_dense(g).eigenvalues.tolist() == [1.0]
    G5 = cyclic_product([5])
    g5 = build_sum_graph(G5, [1, 4])
    assert max_discrepancy(spectrum_dense(g5).eigenvalues, spectrum_char(G5, [1, 4]).eigenvalues) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_jacobi_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    A = A + A.T
    assert np.abs(jacobi_eigenvalues(A) - np.linalg.eigvalsh(A)).max() < 1e-9 * max(1, np.abs(A).max())


def test_block_jacobi_matches_lapack():
    rng = np.random.default_rng(5)
    for n in (130, 257):
        A = rng.standard_normal((n, n))
        A = (A + A.T) / 2
        assert np.abs(jacobi_eigenvalues(A, block=16) - np.linalg.eigvalsh(A)).max() < 1e-9


def corpus():
    out = [jacobian_graph(C, m) for C, m in genus1_examples((5, 7, 11, 13), 2)]
    out.append(jacobian_graph(CurveData.hyperelliptic(7, [1, 0, 0, 0, 0, 1]), ModulusSpec.empty()))
    out.append(jacobian_graph(CurveData.elliptic(5, 1, 1), ModulusSpec.split((0, 1), (2, 1)), 2))
    return out


CORPUS = corpus()


@pytest.mark.parametrize("jg", CORPUS, ids=lambda jg: f"{jg.ctx.curve.spec()}|{jg.ctx.modulus.spec()}|{jg.ctx.n}")
def test_oracle_equivalence_and_bounds(jg):
    ch = spectrum_char(jg.group, jg.S)
    de = spectrum_dense(jg.graph, "jacobi")
    assert max_discrepancy(ch.eigenvalues, de.eigenvalues) < 1e-6
    for rep in (ch, de):
        assert trace_identity_gap(rep, jg.graph.n_loops) < 1e-6
    judged = normalize_and_judge(ch, jg.q_n)
    assert judged.max_nontrivial_abs <= judged.c2_bound + 1e-9
    if judged.criterion_dn_ge_qn_plus_1:
        assert judged.ramanujan


def test_bound_violation_is_fatal():
    # d = 10, q_n = 1: the bound is 0.2
    fake = SpectrumReport(np.array([-0.9, 0.0, 1.0]), 10, "synthetic")
    with pytest.raises(SpectralBoundViolation):
        normalize_and_judge(fake, 1)
    assert normalize_and_judge(fake, 1, enforce_bound=False).max_nontrivial_abs == 0.9


def test_z5_judgement():
    G5 = cyclic_product([5])
    judged = normalize_and_judge(spectrum_char(G5, [1, 4]), 1)
    assert judged.c2_bound == 1.0 and judged.ramanujan
    assert judged.w1_semicircle is not None


def test_w1_atom_and_sample():
    assert abs(w1_to_semicircle([0.0]) - 8 / (3 * math.pi)) < 1e-6
    assert w1_to_semicircle(semicircle_sample(10_000, seed=0)) < 0.05


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-2.5, 2.5, allow_nan=False), min_size=1, max_size=30))
def test_w1_matches_quadrature(values):
    assert abs(w1_to_semicircle(values) - w1_quad(np.array(values))) < 1e-6


def test_distribution_tables():
    cdf, hist = emit_distribution_data([0.0], 4)
    assert hist[:, 4].tolist() == [0, 0, 1, 0]
    assert np.isclose(hist[2, 2], 1.0)
    sym = np.array([-1.5, -0.3, 0.3, 1.5, -0.9, 0.9])
    _, h = emit_distribution_data(sym, 6)
    assert h[:, 4].tolist() == h[::-1, 4].tolist()
    assert (np.diff(cdf[:, 1]) >= 0).all() and cdf[-1, 1] == 1.0


def test_block_eigenvalues():
    rng = np.random.default_rng(6)
    for _ in range(100):
        a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        ev = np.linalg.eigvals(block_matrix(a, b))
        pred = np.array(block_eigenvalues(a, b))
        assert min(np.abs(ev - pred).max(), np.abs(ev - pred[::-1]).max()) < 1e-10
        M = block_matrix(a, np.conj(a))
        assert np.allclose(M, M.conj().T)
        assert not np.allclose(block_matrix(a, b), block_matrix(a, b).conj().T) or np.isclose(b, np.conj(a))


def test_realness_center_zero():
    jg = jacobian_graph(CurveData.hyperelliptic(7, [1, 0, 0, 0, 0, 1]), ModulusSpec.empty())
    sums = all_char_sums(jg.group, jg.S)
    assert np.abs(sums.imag).max() < 1e-8


def double_point_cases():
    out = []
    for C, m in genus1_examples((5, 7, 11, 13), 2):
        if m.kind == "double" and math.gcd(C.p, C.zeta.curve_count(1)) == 1:
            out.append((C, m, 1))
    out.append((CurveData.elliptic(5, 1, 1), ModulusSpec.double((0, 1)), 2))
    return out


@pytest.mark.parametrize("C,m,n", double_point_cases(), ids=lambda x: str(x))
def test_double_point_sums_nonzero(C, m, n):
    jg = jacobian_graph(C, m, n)
    assert jg.group.order <= 10_000
    if math.gcd(jg.q_n, len(jg.S) + 1) != 1:
        pytest.skip("gcd condition fails over this extension")
    sums = all_char_sums(jg.group, jg.S)
    assert np.abs(sums).min() > 1e-6
