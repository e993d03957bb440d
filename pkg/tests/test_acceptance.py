"""Acceptance criteria, one recorded line per check (printed at the end of the run)."""

import json
import math
import time

import numpy as np
import pytest

from jacgraph.abgroup import all_char_sums, cyclic_product, group_structure
from jacgraph.cli import load_graph, main
from jacgraph.curve import CurveData, count_points_ext, enumerate_points, hasse_ok
from jacgraph.ff import make_ext_field
from jacgraph.jac import (
    ModulusSpec,
    abel_jacobi_image,
    enumerate_jacobian,
    literal_split_center,
    make_context,
    predicted_center,
    sidon_check,
)
from jacgraph.spectral import (
    max_discrepancy,
    normalize_and_judge,
    spectrum_char,
    spectrum_dense,
    w1_to_semicircle,
)
from jacgraph.sumgraph import build_sum_graph, common_neighbour_stats, graph_from_edges
from jacgraph.survey import (
    count_points_histogram,
    count_points_legendre,
    jacobian_graph,
    parse_weierstrass,
    prime_scan_trace_stats,
    primes_upto,
    ramanujan_density_scan,
)

from conftest import ACCEPTANCE, F53_CURVE, genus1_examples

E5 = CurveData.elliptic(5, 1, 1)
H7 = CurveData.hyperelliptic(7, [1, 0, 0, 0, 0, 1])
GENUS1 = genus1_examples((5, 7, 11, 13), 2)
PIPELINE_BUDGET_S = 15 * 60


def record(num, label, ok, detail):
    ACCEPTANCE.setdefault(num, []).append((label, bool(ok), detail))
    return ok


@pytest.fixture(scope="module")
def f53_run(tmp_path_factory):
    """Full F_53 showcase pipeline through the CLI: enumerate, build, both spectra (Jacobi), verify."""
    out = tmp_path_factory.mktemp("f53")
    common = ["--curve", F53_CURVE, "--modulus", "m=empty", "--out", str(out)]
    t0 = time.perf_counter()
    codes = [main(["build", *common]),
             main(["spectrum", *common, "--method", "both", "--dense-method", "jacobi"]),
             main(["spectrum", *common[:-1], str(out / "char")])]
    spec = json.loads((out / "report.json").read_text())
    codes.append(main(["verify", *common[:-1], str(out / "verify")]))
    elapsed = time.perf_counter() - t0
    ver = json.loads((out / "verify" / "report.json").read_text())
    return {"out": out, "codes": codes, "elapsed": elapsed, "spectrum": spec, "verify": ver}


def test_criterion1_f53_pipeline(f53_run):
    header = (f53_run["out"] / "graph.edges").read_text().split("\n", 1)[0]
    n = int(header.split()[0])
    ok = record(1, "|J(F_53)| = 2660", n == 2660 and f53_run["codes"] == [0, 0, 0, 0], f"header {header!r}")
    t = f53_run["elapsed"]
    ok &= record(1, "pipeline <= 15 min", t <= PIPELINE_BUDGET_S, f"{t:.1f} s")
    g = load_graph(f53_run["out"] / "graph.edges")
    ok &= record(1, "graph.edges re-ingests", g.n_vertices == 2660, f"degree {g.degree}, loops {g.n_loops}")
    assert ok


def test_criterion2_spectral_bound(f53_run):
    rep = f53_run["spectrum"]
    ok = record(2, "F_53 showcase bound", rep["max_nontrivial_abs"] <= rep["c2_bound"],
                f"max |lambda| {rep['max_nontrivial_abs']:.6f} <= {rep['c2_bound']:.6f}")
    worst, violations = 0.0, 0
    for C, m in GENUS1:
        for n in (1, 2):
            jg = jacobian_graph(C, m, n)
            j = normalize_and_judge(spectrum_char(jg.group, jg.S), jg.q_n, enforce_bound=False)
            violations += j.max_nontrivial_abs > j.c2_bound + 1e-12
            worst = max(worst, j.max_nontrivial_abs / j.c2_bound)
    ok &= record(2, "genus-1 bound", violations == 0,
                 f"{2 * len(GENUS1)} graphs over k_1, k_2, {violations} violations, worst ratio {worst:.4f}")
    assert ok


def test_criterion3_k23(f53_run):
    ver = f53_run["verify"]
    ok = record(3, "F_53 showcase K23-free", ver["k23_free"] and ver["max_common_neighbors"] <= 2,
                f"max common neighbours {ver['max_common_neighbors']}")
    kinds, worst = set(), 0
    for C, m in GENUS1:
        jg = jacobian_graph(C, m)
        worst = max(worst, common_neighbour_stats(jg.graph)[1])
        kinds.add(m.kind)
    ok &= record(3, "genus-1 graphs K23-free", worst <= 2 and len(GENUS1) >= 10 and kinds == {"split", "double"},
                 f"{len(GENUS1)} graphs over F_5..F_13, max {worst}")
    planted = graph_from_edges(5, [(u, v) for u in (0, 1) for v in (2, 3, 4)])
    z12 = build_sum_graph(cyclic_product([12]), range(6))
    hits = [common_neighbour_stats(planted)[1], common_neighbour_stats(z12)[1]]
    ok &= record(3, "planted K23 detected", min(hits) >= 3, f"max common neighbours {hits}")
    assert ok


def sidon_examples():
    out = [make_context(C, m) for C, m in GENUS1]
    out += [make_context(E5, ModulusSpec.split((0, 1), (2, 1)), 2), make_context(H7, ModulusSpec.empty())]
    return out


def test_criterion4_predicted_center(f53_run):
    bad = []
    ctxs = sidon_examples()
    for ctx in ctxs:
        rep = sidon_check(abel_jacobi_image(ctx), ctx)
        if not (rep.is_sidon and rep.is_symmetric and rep.center == predicted_center(ctx)):
            bad.append(ctx.curve.spec())
    ver = f53_run["verify"]
    f53_ok = ver["is_sidon"] and ver["is_symmetric"] and ver["center_matches_prediction"]
    ok = record(4, "symmetric Sidon, center (M+N,1) / (2x0,0) / identity", not bad and f53_ok,
                f"{len(ctxs)} examples + F_53 showcase, {len(bad)} mismatches")
    assert ok


@pytest.mark.xfail(strict=True, reason="the split center is (M+N, 1); see the decisions ledger")
def test_criterion4_literal_split_center():
    split = [make_context(C, m) for C, m in GENUS1 if m.kind == "split"]
    hits = sum(sidon_check(abel_jacobi_image(c), c).center == literal_split_center(c) for c in split)
    ok = record(4, "literal split center (-(M+N),1)", hits == len(split),
                f"matches on {hits} of {len(split)} split examples")
    assert ok


def test_criterion5_oracle_equivalence(f53_run):
    corpus = [jacobian_graph(C, m) for C, m in GENUS1]
    corpus += [jacobian_graph(H7, ModulusSpec.empty()),
               jacobian_graph(E5, ModulusSpec.split((0, 1), (2, 1)), 2)]
    worst = max(max_discrepancy(spectrum_char(jg.group, jg.S).eigenvalues,
                                spectrum_dense(jg.graph, "jacobi").eigenvalues) for jg in corpus)
    ok = record(5, "corpus char vs Jacobi", worst < 1e-6, f"{len(corpus)} graphs, max discrepancy {worst:.2e}")
    rep = f53_run["spectrum"]
    d = rep["max_spectrum_discrepancy"]
    ok &= record(5, "F_53 showcase char vs Jacobi", d < 1e-6, f"2660 vertices, discrepancy {d:.2e}")
    assert ok


def test_criterion6_semicircle(f53_run):
    w = f53_run["spectrum"]["w1_semicircle"]
    ok = record(6, "F_53 showcase W1 < 0.10", w < 0.10, f"W1 = {w:.4f}")
    atom = w1_to_semicircle([0.0])
    ok &= record(6, "W1 atom at 0 = 8/(3 pi)", abs(atom - 8 / (3 * math.pi)) < 1e-6, f"{atom:.9f}")
    assert ok


def certify(ctx):
    """Pairwise homomorphism check of the dlog bijection: certifies the group axioms."""
    J = enumerate_jacobian(ctx)
    G = group_structure(J, ctx.add, ctx.identity)
    idx = G.index
    cols = np.arange(G.order)
    for i, x in enumerate(J):
        got = np.array([idx[ctx.add(x, y)] for y in J])
        if not (got == G.add_idx(np.full(G.order, i), cols)).all():
            return False, len(J)
    return True, len(J)


def test_criterion7_group_law():
    cases = [make_context(E5, ModulusSpec.split((0, 1), (2, 1))),
             make_context(E5, ModulusSpec.double((0, 1))),
             make_context(H7, ModulusSpec.empty())]
    cases += [make_context(C, m) for C, m in genus1_examples((7, 11), 1)]
    sizes, ok_all = [], True
    for ctx in cases:
        ok, n = certify(ctx)
        ok_all &= ok and n <= 2000
        sizes.append(n)
    ok = record(7, "exhaustive group law", ok_all, f"|J| = {sizes}")
    seq = []
    for ctx in cases:
        pts = enumerate_points(ctx.curve, ctx.K)
        if ctx.kind == "empty":
            seq.append(len(enumerate_jacobian(ctx)) == ctx.curve.zeta.jacobian_order(1))
        else:
            factor = ctx.K.q - 1 if ctx.kind == "split" else ctx.K.q
            seq.append(len(enumerate_jacobian(ctx)) == factor * len(pts))
    ok &= record(7, "exact-sequence orders and L(1)", all(seq), f"{sum(seq)}/{len(seq)} match")
    assert ok


def test_criterion8_point_counts():
    curves = [C for C, m in GENUS1 if m.kind == "split"] + [H7, CurveData.hyperelliptic(5, [1, 0, 0, 1, 1, 1])]
    checked = 0
    ok_counts = True
    for C in curves:
        n = 1
        while C.p**n <= 20_000:
            K = make_ext_field(C.p, n)
            ok_counts &= count_points_ext(C.zeta, n)[0] == len(enumerate_points(C, K))
            checked += 1
            n += 1
    ok = record(8, "recurrence = enumeration, q^n <= 20000", ok_counts, f"{checked} (curve, n) pairs")
    ok &= record(8, "Hasse/Weil", all(hasse_ok(C.zeta, 20) for C in curves), f"{len(curves)} curves, n <= 20")
    div = all((count_points_ext(C.zeta, n)[0] % C.p == 0) == (pow(C.zeta.a, n, C.p) == 1)
              for C in curves if C.genus == 1 for n in range(1, 21))
    ok &= record(8, "p | |C(k_n)| iff a^n = 1 mod p", div, "n <= 20")
    assert ok


def test_criterion9_double_point_sums():
    cases = [(C, m, 1) for C, m in GENUS1 if m.kind == "double"]
    cases.append((E5, ModulusSpec.double((0, 1)), 2))
    tested, smallest = 0, math.inf
    for C, m, n in cases:
        jg = jacobian_graph(C, m, n)
        if math.gcd(jg.q_n, len(jg.S) + 1) != 1 or jg.group.order > 10_000:
            continue
        smallest = min(smallest, float(np.abs(all_char_sums(jg.group, jg.S)).min()))
        tested += 1
    ok = record(9, "double-point character sums nonzero", tested > 0 and smallest > 1e-6,
                f"{tested} graphs, min |sum| {smallest:.4f}")
    assert ok


def test_criterion10_prime_scan_default():
    E = parse_weierstrass("y2+y=x3+x-1")
    rep = prime_scan_trace_stats(E, 50_000)
    small = {r["p"]: r for r in rep.records if r["p"] <= 10_000 and r["good"]}
    oracle = all(r["a"] == p + 1 - count_points_histogram(E, p) for p, r in small.items())
    oracle &= all(count_points_legendre(E, p) == count_points_histogram(E, p) for p in primes_upto(10_000) if p != 307)
    ok = record(10, "x <= 10^4 against the counting oracle", oracle, f"{len(small)} good primes")
    agg = rep.aggregates
    ok &= record(10, "x_max = 50000 scan", agg["bad_primes"] == [307],
                 f"a_E primitive {agg['a_primitive_root']}, 2 primitive {agg['two_primitive_root']}, "
                 f"anomalous {agg['anomalous']}")
    assert ok


@pytest.mark.slow
def test_criterion10_prime_scan_300k():
    t0 = time.perf_counter()
    agg = prime_scan_trace_stats(parse_weierstrass("y2+y=x3+x-1"), 300_000).aggregates
    t = time.perf_counter() - t0
    ok = record(10, "300000: 9607 a_E primitive, 9701 with 2 primitive",
                agg["a_primitive_root"] == 9607 and agg["two_primitive_root"] == 9701 and t <= 3600,
                f"{agg['a_primitive_root']} / {agg['two_primitive_root']} in {t:.0f} s")
    assert ok


def test_criterion11_ramanujan_machinery():
    rep = ramanujan_density_scan(E5, ModulusSpec.split((0, 1), (2, 1)), 100)
    agg = rep.aggregates
    implied = all(r["exact_ramanujan"] for r in rep.records if r["criterion"] and r["exact_ramanujan"] is not None)
    ok = record(11, "criterion => Ramanujan", implied and agg["disagreements"] == 0 and agg["cross_checked"] > 0,
                f"{agg['cross_checked']} cross-checked, {agg['disagreements']} disagreements")
    assert E5.zeta.a % 5 != 0
    ok &= record(11, "positive density, N = 100", agg["density"] > 0, f"density {agg['density']:.2f}")
    assert ok
