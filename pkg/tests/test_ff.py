import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacgraph.ff import (
    FieldElement,
    factorize,
    field_arith,
    is_irreducible,
    is_prime,
    jacobi_symbol,
    legendre,
    make_ext_field,
    poly_divmod,
    poly_mul,
    poly_xgcd,
    sqrt_in_field,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 3), (2, 4), (11, 1), (7, 2), (5, 3)]


def schoolbook_mul(F, a, b):
    """Independent product: multiply coefficient vectors, reduce by the modulus."""
    p, m, n = F.p, F.modulus, F.n
    ca, cb = F.coeffs(a), F.coeffs(b)
    prod = [0] * (2 * n)
    for i, x in enumerate(ca):
        for j, y in enumerate(cb):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(2 * n - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * m[i]) % p
    return F.from_coeffs(prod[:n])


def test_modulus_choices():
    assert make_ext_field(5, 2).modulus == (2, 0, 1)
    assert make_ext_field(2, 3).modulus == (1, 1, 0, 1)
    assert make_ext_field(5, 1).q == 5


def test_modulus_is_first_irreducible_by_scan():
    # brute force: monic quadratics over F_5 without roots, in encoding order
    for p in (3, 5, 7):
        first = next(
            (c0, c1)
            for c1 in range(p)
            for c0 in range(p)
            if all((x * x + c1 * x + c0) % p for x in range(p))
        )
        assert make_ext_field(p, 2).modulus == (first[0], first[1], 1)


def test_deterministic_modulus():
    make_ext_field.cache_clear()
    a = make_ext_field(3, 3).modulus
    make_ext_field.cache_clear()
    assert make_ext_field(3, 3).modulus == a


def test_small_examples():
    F5 = make_ext_field(5)
    assert field_arith(FieldElement(F5, 3), FieldElement(F5, 4), "mul") == 2
    assert FieldElement(F5, 2).inverse() == 3
    F25 = make_ext_field(5, 2)
    x = FieldElement(F25, 5)  # the class of x
    assert (x * x).coeffs == (3, 0)
    assert legendre(FieldElement(F5, 4)) == 1
    assert legendre(FieldElement(make_ext_field(7), 0)) == 0
    assert legendre(FieldElement(F5, 3)) == -1
    assert sqrt_in_field(FieldElement(F5, 4)) == 2
    assert sqrt_in_field(FieldElement(F5, 3)) is None
    assert sqrt_in_field(FieldElement(make_ext_field(7), 2)) == 3


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, n):
    F = make_ext_field(p, n)
    els = list(F.elements())
    assert len(els) == p**n
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in els:
            assert F.mul(a, b) == schoolbook_mul(F, a, b)
            assert F.add(a, b) == F.add(b, a)
    triples = itertools.product(els, repeat=3) if len(els) <= 27 else (
        (a, b, c) for a in els for b in els[:: max(1, len(els) // 11)] for c in els[:: max(1, len(els) // 13)]
    )
    for a, b, c in triples:
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_multiplicative_group_cyclic(p, n):
    F = make_ext_field(p, n)
    q = F.q
    gens = []
    for g in range(1, q):
        seen, x = set(), 1
        for _ in range(q - 1):
            x = F.mul(x, g)
            seen.add(x)
        if len(seen) == q - 1:
            gens.append(g)
            break
    assert gens


def test_legendre_exhaustive():
    for p in [q for q in range(3, 98) if is_prime(q)]:
        for c in range(p):
            e = pow(c, (p - 1) // 2, p)
            expected = 0 if c == 0 else (1 if e == 1 else -1)
            assert legendre(c, p) == expected


@pytest.mark.parametrize("p,n", [(5, 1), (7, 1), (13, 1), (5, 2), (3, 3), (2, 3), (7, 2)])
def test_sqrt_smallest_root(p, n):
    F = make_ext_field(p, n)
    squares = {}
    for y in F.elements():
        squares.setdefault(F.mul(y, y), []).append(y)
    for a in F.elements():
        r = F.sqrt(a)
        if a not in squares:
            assert r is None and not F.is_square(a)
        else:
            assert r == min(squares[a])
            assert F.is_square(a)


@given(st.integers(min_value=2, max_value=10**6))
def test_factorize_roundtrip(n):
    f = factorize(n)
    prod = 1
    for ell, e in f.items():
        assert is_prime(ell)
        prod *= ell**e
    assert prod == n


@given(st.integers(min_value=1, max_value=10**5), st.sampled_from([3, 5, 7, 11, 101, 997]))
def test_jacobi_symbol_euler(a, p):
    e = pow(a, (p - 1) // 2, p)
    assert jacobi_symbol(a, p) == (0 if a % p == 0 else (1 if e == 1 else -1))


def test_irreducibility_counts():
    # number of monic irreducibles of degree 2 over F_p is (p^2 - p) / 2
    for p in (2, 3, 5, 7):
        count = sum(is_irreducible([c0, c1, 1], p) for c0 in range(p) for c1 in range(p))
        assert count == (p * p - p) // 2


@settings(max_examples=50)
@given(st.lists(st.integers(0, 24), min_size=1, max_size=6), st.lists(st.integers(0, 24), min_size=1, max_size=4))
def test_poly_division_and_gcd(a, b):
    F = make_ext_field(5, 2)
    a, b = tuple(a), tuple(b)
    if not any(b):
        return
    q, r = poly_divmod(F, a, b)
    back = poly_mul(F, q, b)
    la = max(len(back), len(r))
    total = [F.add(back[i] if i < len(back) else 0, r[i] if i < len(r) else 0) for i in range(la)]
    while total and total[-1] == 0:
        total.pop()
    a_trim = list(a)
    while a_trim and a_trim[-1] == 0:
        a_trim.pop()
    assert total == a_trim
    g, s, t = poly_xgcd(F, a, b)
    lhs = poly_mul(F, s, a)
    rhs = poly_mul(F, t, b)
    n = max(len(lhs), len(rhs))
    comb = [F.add(lhs[i] if i < len(lhs) else 0, rhs[i] if i < len(rhs) else 0) for i in range(n)]
    while comb and comb[-1] == 0:
        comb.pop()
    assert tuple(comb) == tuple(g)
