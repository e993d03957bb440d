from __future__ import annotations

import pytest

from jacgraph.curve import CurveData, parse_curve
from jacgraph.jac import ModulusSpec, parse_modulus
from jacgraph.survey import jacobian_graph

# Acceptance lines collected by tests/test_acceptance.py, printed at the end.
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}

F53_CURVE = "g2:p=53,f=1,-1,2,0,0,2"
SPLIT_F5 = ("g1:p=5,a=1,b=1", "m=split:(0,1),(2,1)")
DOUBLE_F5 = ("g1:p=5,a=1,b=1", "m=double:(0,1)")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        for label, ok, detail in ACCEPTANCE[num]:
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num} {label}: {detail}")


@pytest.fixture(scope="session")
def f53():
    return jacobian_graph(parse_curve(F53_CURVE), ModulusSpec.empty())


@pytest.fixture(scope="session")
def split_f5():
    return jacobian_graph(parse_curve(SPLIT_F5[0]), parse_modulus(SPLIT_F5[1]))


@pytest.fixture(scope="session")
def double_f5():
    return jacobian_graph(parse_curve(DOUBLE_F5[0]), parse_modulus(DOUBLE_F5[1]))


def genus1_examples(primes=(5, 7, 11, 13), per_prime=2):
    """Deterministic (curve, modulus) pairs: split and double moduli over small primes.

    Double-point moduli need a point with y != 0; split moduli take the first
    two affine points with distinct x.
    """
    from jacgraph.curve import enumerate_points

    out = []
    for p in primes:
        found = 0
        for a in range(p):
            for b in range(1, p):
                if (4 * a**3 + 27 * b * b) % p == 0:
                    continue
                C = CurveData.elliptic(p, a, b)
                pts = [P for P in enumerate_points(C) if P is not None]
                if len(pts) < 3:
                    continue
                M = next((P for P in pts if P[1] != 0), None)
                N = next((P for P in pts if P[0] != M[0]), None) if M else None
                if M is None or N is None:
                    continue
                out.append((C, ModulusSpec.split(M, N)))
                out.append((C, ModulusSpec.double(M)))
                found += 1
                if found == per_prime:
                    break
            if found == per_prime:
                break
    return out
