"""Command line: ``jacgraph build | spectrum | verify | scan``.

Exit codes: 0 success, 2 invalid input, 3 a size cap was hit, 4 an
invariant check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .abgroup import GroupStructure, NotAGroupError, cyclic_product
from .curve import CurveData, CurveSpecError, parse_curve
from .jac import CapExceeded, ModulusSpec, parse_modulus, predicted_center
from .spectral import (
    DENSE_CAP,
    SpectralBoundViolation,
    emit_distribution_data,
    max_discrepancy,
    normalize_and_judge,
    spectrum_char,
    spectrum_dense,
)
from .sumgraph import (
    EXACT_INDEPENDENCE_CAP,
    SumGraphData,
    build_sum_graph,
    combinatorics_report,
    format_edges,
    graph_from_edges,
    parse_edges,
)
from .survey import (
    center_in_2J_parity,
    family_sweep,
    jacobian_graph,
    parse_weierstrass,
    prime_scan_trace_stats,
    ramanujan_density_scan,
    sidon_on_group,
)

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# output helpers


def fmt(x: Any) -> str:
    """JSON text with floats at 17 significant digits."""
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise SpectralBoundViolation(f"non-finite number {x} in a report")
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        items = ",\n".join(f"  {json.dumps(str(k))}: {fmt(v)}" for k, v in x.items())
        return "{\n" + items + "\n}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(fmt(v) for v in x) + "]"
    return json.dumps(str(x))


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return v


def csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def load_graph(path: Path) -> SumGraphData:
    """Re-ingest a graph.edges file."""
    (n, d, loops), edges = parse_edges(Path(path).read_text())
    g = graph_from_edges(n, edges)
    if g.degree != d or g.n_loops != loops:
        raise UsageError(f"{path}: header {n} {d} {loops} does not match the edge list")
    return g


# ---------------------------------------------------------------------------
# job setup


@dataclass
class Job:
    group: GroupStructure
    S: list[int]
    graph: SumGraphData
    q_n: int | None
    describe: dict[str, Any]
    predicted_center: int | None = None


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise UsageError(f"{what}: expected comma separated integers, got {text!r}") from None


def make_job(args) -> Job:
    if args.raw_group:
        dims = _int_list(args.raw_group, "--raw-group")
        if not dims or any(d < 1 for d in dims):
            raise UsageError("--raw-group needs positive integers")
        if args.raw_set is None:
            raise UsageError("--raw-group needs --raw-set")
        G = cyclic_product(dims)
        S = _int_list(args.raw_set, "--raw-set")
        if any(not (0 <= s < G.order) for s in S) or not S:
            raise UsageError("--raw-set entries must be element indices in [0, |G|)")
        if math.prod(dims) > args.enum_cap:
            raise CapExceeded(f"|G| = {math.prod(dims)} exceeds --enum-cap")
        S = sorted(set(S))
        return Job(G, S, build_sum_graph(G, S, args.dense_cap), args.qn,
                   {"raw_group": dims, "raw_set": S})
    if not args.curve or not args.modulus:
        raise UsageError("give --curve and --modulus, or --raw-group and --raw-set")
    C = parse_curve(args.curve)
    m = parse_modulus(args.modulus)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    jg = jacobian_graph(C, m, args.n, cap=args.enum_cap, dense_cap=args.dense_cap)
    try:
        pc = jg.group.index[predicted_center(jg.ctx)]
    except (KeyError, ValueError):
        pc = None
    return Job(jg.group, jg.S, jg.graph, jg.q_n,
               {"curve": C.spec(), "modulus": m.spec(), "n": args.n}, pc)


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> dict[str, Any]:
    job = make_job(args)
    out = Path(args.out)
    write_atomic(out / "graph.edges", format_edges(job.graph))
    lines = [
        f"order {job.group.order}",
        "invariant_factors " + " ".join(map(str, job.group.invariant_factors)),
        "S " + " ".join(map(str, job.S)),
    ]
    write_atomic(out / "group.txt", "\n".join(lines) + "\n")
    return {"vertices": job.graph.n_vertices, "degree": job.graph.degree, "loops": job.graph.n_loops}


def cmd_spectrum(args) -> dict[str, Any]:
    t0 = time.perf_counter()
    job = make_job(args)
    out = Path(args.out)
    report: dict[str, Any] = {}
    if args.method in ("char", "both"):
        rep = spectrum_char(job.group, job.S)
    if args.method in ("dense", "both"):
        if job.graph.n_vertices > args.dense_eigen_cap or job.graph.streaming:
            raise CapExceeded(f"{job.graph.n_vertices} vertices exceed --dense-eigen-cap "
                              f"{args.dense_eigen_cap} (or --dense-cap); use --method char")
        dense = spectrum_dense(job.graph, args.dense_method, cap=args.dense_eigen_cap)
        if args.method == "dense":
            rep = dense
        else:
            gap = max_discrepancy(rep.eigenvalues, dense.eigenvalues)
            report["max_spectrum_discrepancy"] = gap
            if gap > 1e-6:
                raise SpectralBoundViolation(f"spectra disagree by {gap}")
    judged = normalize_and_judge(rep, job.q_n, enforce_bound=job.q_n is not None)
    write_atomic(out / "spectrum.csv", "".join(format(float(v), ".17g") + "\n" for v in judged.eigenvalues))
    cdf, hist = emit_distribution_data(judged.normalized_nontrivial if judged.normalized_nontrivial.size else [0.0],
                                       args.bins)
    write_atomic(out / "cdf.csv", csv_text(["x", "empirical_cdf", "semicircle_cdf"], cdf))
    write_atomic(out / "hist.csv", csv_text(["lo", "hi", "density", "semicircle_density", "count"],
                                            [(a, b, c, d, int(e)) for a, b, c, d, e in hist]))
    base = {
        "vertices": job.graph.n_vertices,
        "degree": job.graph.degree,
        "loops": job.graph.n_loops,
        "connected": judged.connected,
        "trivial_multiplicity": judged.trivial_count,
        "max_nontrivial_abs": judged.max_nontrivial_abs,
        "c2_bound": judged.c2_bound,
        "ramanujan": judged.ramanujan,
        "ramanujan_criterion_dn_ge_qn_plus_1": judged.criterion_dn_ge_qn_plus_1,
        "w1_semicircle": judged.w1_semicircle,
        "method": "both" if args.method == "both" else rep.method,
    }
    base.update(report)
    base["runtime_ms"] = int(round((time.perf_counter() - t0) * 1000))
    write_atomic(out / "report.json", fmt(base) + "\n")
    return base


def cmd_verify(args) -> dict[str, Any]:
    job = make_job(args)
    G = job.group
    if job.graph.streaming:
        raise CapExceeded(f"{G.order} vertices exceed --dense-cap; raise it to run the dense checks")
    sr = sidon_on_group(G, job.S)
    cr = combinatorics_report(job.graph, args.independence_cap)
    center = [int(e) for e in G.dlog[sr.center]] if sr.center is not None else None
    report = {
        "is_sidon": sr.is_sidon,
        "is_symmetric": sr.is_symmetric,
        "center": center,
        "center_in_2J": sr.center_in_2J,
        "center_in_2J_parity": center_in_2J_parity(G, sr.center) if sr.center is not None else None,
        "center_matches_prediction": (sr.center == job.predicted_center) if job.predicted_center is not None else None,
        "witness": [[int(e) for e in G.dlog[w]] for w in sr.witness] if sr.witness else None,
        "k23_free": cr.k23_free,
        "max_common_neighbors": cr.max_common_neighbors,
        "connected": cr.connected,
        "c4_count": cr.c4_count,
        "independence_lower": cr.independence_lower,
        "independence_upper": cr.independence_upper,
        "invariant_factors": G.invariant_factors,
    }
    write_atomic(Path(args.out) / "report.json", fmt(report) + "\n")
    return report


def cmd_scan(args) -> dict[str, Any]:
    t0 = time.perf_counter()
    out = Path(args.out)
    if args.kind == "primes":
        E = parse_weierstrass(args.curve or "y2+y=x3+x-1")
        rep = prime_scan_trace_stats(E, args.xmax, threads=args.threads)
        cols = ["p", "good", "a", "order", "a_primitive", "two_primitive", "anomalous"]
    elif args.kind == "ramanujan":
        C = parse_curve(args.curve or "g1:p=5,a=1,b=1")
        m = parse_modulus(args.modulus or "m=split:(0,1),(2,1)")
        rep = ramanujan_density_scan(C, m, args.N, args.cross_check_cap)
        cols = ["n", "q_n", "trace", "d_n", "group_order", "criterion", "exact_ramanujan", "running_density"]
    else:
        if args.p is None or args.f is None:
            raise UsageError("scan family needs --p and --f")
        analyses = [a for a in args.analyses.split(",") if a]
        rep = family_sweep(args.p, _int_list(args.f, "--f"), analyses)
        cols = list(rep.records[0].keys()) if rep.records else ["t"]
    rows = [[r.get(c) for c in cols] for r in rep.records]
    rows = [["" if v is None else v for v in row] for row in rows]
    write_atomic(out / f"scan_{args.kind}.csv", csv_text(cols, rows))
    summary = {k: v for k, v in rep.aggregates.items()}
    write_atomic(out / f"scan_{args.kind}_summary.json", fmt(summary) + "\n")
    summary["runtime_ms"] = int(round((time.perf_counter() - t0) * 1000))
    return summary


# ---------------------------------------------------------------------------
# argument parsing


def _add_job_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--curve", help="g1:p=<p>,a=<a>,b=<b> or g2:p=<p>,f=<c5,...,c0>")
    p.add_argument("--modulus", help="m=split:(x1,y1),(x2,y2) | m=double:(x0,y0) | m=empty")
    p.add_argument("--n", type=int, default=1, help="extension degree (default 1)")
    p.add_argument("--raw-group", help="testing mode: invariant factors of a product of cyclic groups")
    p.add_argument("--raw-set", help="testing mode: connection set as element indices")
    p.add_argument("--qn", type=int, default=None, help="field size for the spectral bound in raw mode")
    p.add_argument("--enum-cap", type=int, default=10**6)
    p.add_argument("--dense-cap", type=int, default=20_000)
    p.add_argument("--out", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacgraph", description="Sum graphs on jacobians of curves over finite fields.")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0, help="seed for sampled checks (unused by the main path)")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write graph.edges and group.txt")
    _add_job_args(b)

    s = sub.add_parser("spectrum", help="write spectrum.csv, cdf.csv, hist.csv and report.json")
    _add_job_args(s)
    s.add_argument("--method", choices=["char", "dense", "both"], default="char")
    s.add_argument("--dense-method", choices=["auto", "jacobi", "lapack"], default="auto")
    s.add_argument("--dense-eigen-cap", type=int, default=DENSE_CAP)
    s.add_argument("--bins", type=int, default=40)

    v = sub.add_parser("verify", help="Sidon, K_{2,3} and independence checks")
    _add_job_args(v)
    v.add_argument("--independence-cap", type=int, default=EXACT_INDEPENDENCE_CAP)

    sc = sub.add_parser("scan", help="batch scans")
    sc.add_argument("kind", choices=["primes", "ramanujan", "family"])
    sc.add_argument("--curve")
    sc.add_argument("--modulus")
    sc.add_argument("--xmax", type=int, default=50_000)
    sc.add_argument("--N", type=int, default=50)
    sc.add_argument("--cross-check-cap", type=int, default=20_000)
    sc.add_argument("--p", type=int)
    sc.add_argument("--f", help="degree 4 coefficients, high to low")
    sc.add_argument("--analyses", default="sidon,k23,spectrum,w1,independence")
    sc.add_argument("--out", default=".")
    return ap


COMMANDS = {"build": cmd_build, "spectrum": cmd_spectrum, "verify": cmd_verify, "scan": cmd_scan}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "bins", 1) < 1:
        print("error: --bins must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        result = COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SpectralBoundViolation, NotAGroupError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (CurveSpecError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AssertionError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    print(fmt(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
