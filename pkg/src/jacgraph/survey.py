"""Batch scans: Ramanujan criterion over extensions, prime statistics, curve families."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .abgroup import GroupStructure, group_structure
from .curve import CurveData, count_points_ext, multiplicative_order
from .ff import factorize, is_prime, make_ext_field, poly_deriv, poly_eval, poly_mul, poly_xgcd
from .jac import (
    JacContext,
    ModulusSpec,
    abel_jacobi_image,
    enumerate_jacobian,
    make_context,
    sidon_report,
)
from .spectral import normalize_and_judge, spectrum_char
from .sumgraph import SumGraphData, build_sum_graph, combinatorics_report


@dataclass
class ScanReport:
    kind: str
    params: dict[str, Any]
    records: list[dict[str, Any]] = field(default_factory=list)
    aggregates: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0


# ---------------------------------------------------------------------------
# jacobian graphs end to end


@dataclass
class JacobianGraph:
    ctx: JacContext
    elements: list
    group: GroupStructure
    S: list[int]
    graph: SumGraphData

    @property
    def q_n(self) -> int:
        return self.ctx.K.q


def jacobian_graph(C: CurveData, m: ModulusSpec, n: int = 1, cap: int = 10**6,
                   offset=None, dense_cap: int = 20_000) -> JacobianGraph:
    ctx = make_context(C, m, n)
    J = enumerate_jacobian(ctx, cap)
    G = group_structure(J, ctx.add, ctx.identity)
    S = sorted(G.index[s] for s in abel_jacobi_image(ctx, offset))
    return JacobianGraph(ctx, J, G, S, build_sum_graph(G, S, dense_cap))


def center_in_2J_parity(G: GroupStructure, center_index: int) -> bool:
    """a is a double iff its dlog is even in every even invariant factor."""
    return all(int(e) % 2 == 0 for e, d in zip(G.dlog[center_index], G.invariant_factors) if d % 2 == 0)


def sidon_on_group(G: GroupStructure, S: Sequence[int]):
    """Sidon report over element indices, with 2J enumerated by brute force."""
    doubles = (G.add_idx(b, b) for b in range(G.order))
    return sidon_report(list(S), G.add_idx, doubles)


# ---------------------------------------------------------------------------
# Ramanujan criterion over extensions


def ramanujan_density_scan(C: CurveData, m: ModulusSpec, N: int, cross_check_cap: int = 20_000) -> ScanReport:
    """Criterion d_n >= q^n + 1 for n = 1..N from the zeta data alone.

    Extensions whose group order is at most ``cross_check_cap`` are also
    built and judged from the exact spectrum.
    """
    if N > 200:
        raise ValueError("N must be <= 200")
    t0 = time.perf_counter()
    Z = C.zeta
    rep = ScanReport("ramanujan", {"curve": C.spec(), "modulus": m.spec(), "N": N,
                                   "cross_check_cap": cross_check_cap})
    hits = 0
    disagreements = 0
    checked = 0
    for n in range(1, N + 1):
        c_n, orders = count_points_ext(Z, n)
        q_n = Z.q**n
        d_n = c_n - m.degree
        crit = d_n >= q_n + 1
        hits += crit
        exact = None
        order = orders[m.kind]
        if order <= cross_check_cap:
            jg = jacobian_graph(C, m, n)
            judged = normalize_and_judge(spectrum_char(jg.group, jg.S), q_n)
            exact = judged.ramanujan
            checked += 1
            if crit and not exact:
                disagreements += 1
        rep.records.append({"n": n, "q_n": q_n, "trace": q_n + 1 - c_n, "d_n": d_n,
                            "group_order": order, "criterion": crit, "exact_ramanujan": exact,
                            "running_density": hits / n})
    rep.aggregates = {"density": hits / N, "criterion_hits": hits, "cross_checked": checked,
                      "disagreements": disagreements}
    rep.wall_time = time.perf_counter() - t0
    return rep


def trace_condition_report(C: CurveData, m: ModulusSpec) -> dict[str, Any]:
    """Whether a_C is 0 mod p or has multiplicative order at least 5."""
    if C.genus != 1 or m.kind != "double":
        raise ValueError("needs a genus 1 curve with a double point modulus")
    return trace_condition(C.zeta.a, C.p)


def trace_condition(a: int, p: int) -> dict[str, Any]:
    divisible = a % p == 0
    order = None if divisible else multiplicative_order(a, p)
    return {"a": a, "p": p, "p_divides_a": divisible, "order": order,
            "satisfied": divisible or order >= 5}


# ---------------------------------------------------------------------------
# prime scans for curves over Q


@dataclass(frozen=True)
class Weierstrass:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over Z."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def discriminant(self) -> int:
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def parse_weierstrass(text: str) -> Weierstrass:
    """Parse strings like ``y2+y=x3+x-1`` or ``y2+xy=x3-x2+2x+5``."""
    import re

    s = text.replace(" ", "").replace("^", "")
    if s.count("=") != 1:
        raise ValueError(f"expected one '=' in {text!r}")
    lhs, rhs = s.split("=")

    def terms(side: str) -> dict[str, int]:
        out: dict[str, int] = {}
        for sign, coef, mono in re.findall(r"([+-]?)(\d*)([xy]*\d?|)", side):
            if not (sign or coef or mono):
                continue
            c = int(coef) if coef else 1
            if sign == "-":
                c = -c
            if not mono and not coef:
                raise ValueError(f"cannot parse {side!r}")
            out[mono] = out.get(mono, 0) + c
        return out

    L, R = terms(lhs), terms(rhs)
    if L.pop("y2", 0) != 1 or R.pop("x3", 0) != 1:
        raise ValueError(f"need monic y2 and x3 terms in {text!r}")
    a1, a3 = L.pop("xy", 0), L.pop("y", 0)
    a2, a4, a6 = R.pop("x2", 0), R.pop("x", 0), R.pop("", 0)
    if L or R:
        raise ValueError(f"unsupported terms {sorted(L) + sorted(R)} in {text!r}")
    return Weierstrass(a1, a2, a3, a4, a6)


def primes_upto(x: int) -> list[int]:
    if x < 2:
        return []
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(x) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return [int(p) for p in np.flatnonzero(sieve)]


def count_points_legendre(E: Weierstrass, p: int) -> int:
    """|E(F_p)| via (2y + a1 x + a3)^2 = 4 rhs(x) + (a1 x + a3)^2, p odd."""
    if p == 2:
        return count_points_naive(E, p)
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    x3 = x2 * x % p
    rhs = (x3 + E.a2 * x2 + E.a4 * x + E.a6) % p
    lin = (E.a1 * x + E.a3) % p
    R = (4 * rhs + lin * lin % p) % p
    is_sq = np.zeros(p, dtype=bool)
    is_sq[x2] = True
    chi = np.where(R == 0, 0, np.where(is_sq[R], 1, -1))
    return int(p + 1 + chi.sum())


def count_points_naive(E: Weierstrass, p: int) -> int:
    """|E(F_p)| by a double loop over (x, y)."""
    total = 1
    for x in range(p):
        r = (x**3 + E.a2 * x * x + E.a4 * x + E.a6) % p
        for y in range(p):
            if (y * y + E.a1 * x * y + E.a3 * y - r) % p == 0:
                total += 1
    return total


def count_points_histogram(E: Weierstrass, p: int) -> int:
    """|E(F_p)| by matching the value table of the y side against the x side.

    Needs a1 = 0, so that the y side y^2 + a3 y does not depend on x.
    """
    if E.a1 % p:
        return count_points_naive(E, p)
    y = np.arange(p, dtype=np.int64)
    hist = np.bincount((y * y + E.a3 * y) % p, minlength=p)
    x = np.arange(p, dtype=np.int64)
    rhs = (x * x % p * x + E.a2 * (x * x % p) + E.a4 * x + E.a6) % p
    return int(1 + hist[rhs].sum())


def is_primitive_root(a: int, p: int) -> bool:
    a %= p
    if a == 0:
        return False
    if p == 2:
        return a == 1
    return all(pow(a, (p - 1) // ell, p) != 1 for ell in factorize(p - 1))


def order_mod(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return None
    e = p - 1
    for ell, k in factorize(p - 1).items():
        for _ in range(k):
            if pow(a, e // ell, p) == 1:
                e //= ell
            else:
                break
    return e


def _scan_primes(E: Weierstrass, primes: Sequence[int]) -> list[dict[str, Any]]:
    disc = E.discriminant
    out = []
    for p in primes:
        two_prim = is_primitive_root(2, p)
        if disc % p == 0:
            out.append({"p": p, "good": False, "a": None, "order": None, "a_primitive": False,
                        "two_primitive": two_prim, "anomalous": False})
            continue
        a = p + 1 - (count_points_legendre(E, p) if p > 3 else count_points_naive(E, p))
        o = order_mod(a, p)
        out.append({"p": p, "good": True, "a": a, "order": o, "a_primitive": o == p - 1,
                    "two_primitive": two_prim, "anomalous": (a - 1) % p == 0})
    return out


def prime_scan_trace_stats(E: Weierstrass, x_max: int, threads: int = 1, chunk: int = 2000) -> ScanReport:
    """a_E(F_p) statistics over primes p <= x_max.

    The curve counters run over primes of good reduction; the "2 is a
    primitive root" counter runs over all primes.  Work is split into
    fixed chunks of primes and merged in order, so ``threads`` never
    changes the result.
    """
    if x_max > 10**6:
        raise ValueError("x_max must be <= 10^6")
    t0 = time.perf_counter()
    rep = ScanReport("primes", {"curve": E, "x_max": x_max, "discriminant": E.discriminant})
    primes = primes_upto(x_max)
    chunks = [primes[i : i + chunk] for i in range(0, len(primes), chunk)]
    if threads > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_scan_primes, [E] * len(chunks), chunks))
    else:
        parts = [_scan_primes(E, c) for c in chunks]
    rep.records = [r for part in parts for r in part]
    good = [r for r in rep.records if r["good"]]
    rep.aggregates = {
        "primes": len(rep.records),
        "good_primes": len(good),
        "bad_primes": [r["p"] for r in rep.records if not r["good"]],
        "a_primitive_root": sum(r["a_primitive"] for r in good),
        "two_primitive_root": sum(r["two_primitive"] for r in rep.records),
        "anomalous": sum(r["anomalous"] for r in good),
        "anomalous_primes": [r["p"] for r in good if r["anomalous"]],
        "order_3_or_4": sum(r["order"] in (3, 4) for r in good),
        "order_at_least_5": sum(r["order"] is not None and r["order"] >= 5 for r in good),
        "loglog_x": math.log(math.log(x_max)) if x_max > 2 else None,
    }
    rep.wall_time = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# the family y^2 = f(x)(x - t)

ANALYSES = ("sidon", "k23", "spectrum", "w1", "independence")


def family_sweep(p: int, f_high_to_low: Sequence[int], analyses: Sequence[str] = ANALYSES) -> ScanReport:
    """Genus 2 jacobian graphs of y^2 = f(x)(x - t) over F_p for every t."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    unknown = set(analyses) - set(ANALYSES)
    if unknown:
        raise ValueError(f"unknown analyses {sorted(unknown)}")
    if ("spectrum" in analyses or "w1" in analyses) and p > 100:
        raise ValueError("spectral sweeps need p <= 100")
    F = make_ext_field(p, 1)
    f = tuple(c % p for c in reversed(list(f_high_to_low)))
    while f and f[-1] == 0:
        f = f[:-1]
    if len(f) != 5:
        raise ValueError("f must have degree 4")
    g, _, _ = poly_xgcd(F, f, poly_deriv(F, f))
    if len(g) != 1:
        raise ValueError("f is not squarefree")
    t0 = time.perf_counter()
    rep = ScanReport("family", {"p": p, "f": list(f_high_to_low), "analyses": list(analyses)})
    skipped = []
    for t in range(p):
        if poly_eval(F, f, t) == 0:
            skipped.append(t)
            continue
        ft = poly_mul(F, f, (F.neg(t), 1))
        C = CurveData(2, p, ft)
        jg = jacobian_graph(C, ModulusSpec.empty())
        rec: dict[str, Any] = {"t": t, "vertices": jg.group.order, "degree": jg.graph.degree,
                               "loops": jg.graph.n_loops}
        if "sidon" in analyses:
            sr = sidon_on_group(jg.group, jg.S)
            rec["symmetric_sidon"] = sr.is_sidon and sr.is_symmetric
            rec["center_is_identity"] = sr.center == jg.group.identity_index
        if "k23" in analyses or "independence" in analyses:
            cr = combinatorics_report(jg.graph, exact_independence_cap=0)
            rec["k23_free"] = cr.k23_free
            rec["max_common_neighbors"] = cr.max_common_neighbors
            rec["independence_lower"] = cr.independence_lower
            rec["independence_over_n34"] = cr.independence_lower / jg.group.order**0.75
        if "spectrum" in analyses or "w1" in analyses:
            judged = normalize_and_judge(spectrum_char(jg.group, jg.S), p)
            rec["max_nontrivial_abs"] = judged.max_nontrivial_abs
            rec["c2_bound"] = judged.c2_bound
            rec["ramanujan"] = judged.ramanujan
            rec["w1"] = judged.w1_semicircle
        rep.records.append(rec)
    agg: dict[str, Any] = {"swept": len(rep.records), "skipped_t": skipped}
    if "k23" in analyses:
        agg["all_k23_free"] = all(r["k23_free"] for r in rep.records)
    if "sidon" in analyses:
        agg["all_symmetric_sidon"] = all(r["symmetric_sidon"] for r in rep.records)
    if "w1" in analyses or "spectrum" in analyses:
        w = [r["w1"] for r in rep.records if r["w1"] is not None]
        agg["w1_mean"] = math.fsum(w) / len(w) if w else None
        agg["ramanujan_fraction"] = sum(r["ramanujan"] for r in rep.records) / max(1, len(rep.records))
    rep.aggregates = agg
    rep.wall_time = time.perf_counter() - t0
    return rep

