"""Finite fields F_p and F_{p^n}.

Elements are encoded as plain integers: the element c_0 + c_1 x + ... +
c_{n-1} x^{n-1} of F_p[x]/(m) is the integer sum(c_i * p**i).  The prime
subfield is therefore {0, ..., p-1} in every extension, and comparing
encodings compares coefficient vectors from the top degree down.  All the
hot paths (curve enumeration, group laws) work on these integers directly;
:class:`FieldElement` is a thin operator-overloading wrapper for callers
that prefer objects.

Extension fields multiply through discrete-log tables (Zech logarithms for
addition), which keeps every operation O(1) for the desk-scale fields
used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "ExtField",
    "FieldElement",
    "PrimeField",
    "field_arith",
    "is_prime",
    "jacobi_symbol",
    "legendre",
    "make_ext_field",
    "sqrt_in_field",
]

TABLE_CAP = 1 << 24


def is_prime(n: int) -> bool:
    """Trial division; adequate for the moduli used at desk scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer by trial division."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def jacobi_symbol(a: int, n: int) -> int:
    """Binary Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------------------
# polynomials over F_p with small integer coefficients (list, low degree first)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(poly: list[int], p: int) -> bool:
    """Ben-Or test for a monic polynomial over F_p (coefficients low first)."""
    n = len(poly) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(n // 2):
        power = _ppowmod(power, p, poly, p)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(poly, diff, p)) > 1:
            return False
    return True


def _smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    # candidates in increasing integer encoding of the non-leading part
    for k in range(p**n):
        coeffs = []
        for _ in range(n):
            coeffs.append(k % p)
            k //= p
        poly = coeffs + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# fields


class ExtField:
    """F_{p^n} = F_p[x]/(modulus).  Immutable after construction."""

    _tabled = True

    def __init__(self, p: int, n: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.n = n
        self.q = p**n
        if modulus is None:
            modulus = _smallest_irreducible(p, n) if n > 1 else (0, 1)
        self.modulus = tuple(modulus)
        if len(self.modulus) != n + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if self._tabled:
            self._build_tables()

    # -- table construction -------------------------------------------------

    def _poly(self, a: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)[: self.n]):
            v = v * self.p + (c % self.p)
        return v

    def _build_tables(self) -> None:
        q, p, m = self.q, self.p, list(self.modulus)
        if q > TABLE_CAP:
            raise ValueError(f"field of size {q} exceeds table cap {TABLE_CAP}")
        order = q - 1
        primes = list(factorize(order))
        gen = None
        for cand in range(1, q):
            poly = self._poly(cand)
            if all(_ppowmod(poly, order // r, m, p) != [1] for r in primes):
                gen = poly
                break
        assert gen is not None
        exp = [0] * order
        log = [-1] * q
        cur = [1]
        for k in range(order):
            v = self._encode(cur + [0] * (self.n - len(cur)))
            exp[k] = v
            log[v] = k
            cur = _pmulmod(cur, gen, m, p)
        zech = [-1] * order
        for k in range(order):
            v = exp[k]
            c0 = v % p
            w = v - c0 + (c0 + 1) % p
            zech[k] = log[w] if w else -1
        self._exp = exp
        self._log = log
        self._zech = zech
        self._half = order // 2 if p != 2 else 0

    # -- integer-level arithmetic -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        order = self.q - 1
        z = self._zech[(lb - la) % order]
        if z < 0:
            return 0
        return self._exp[(la + z) % order]

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return self._exp[(self._log[a] + self._half) % (self.q - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self._log[a] % 2 == 0

    def sqrt(self, a: int) -> int | None:
        """A square root of a, the smaller encoding of {y, -y}; None if a is not a square."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        la = self._log[a]
        if la % 2:
            return None
        y = self._exp[la // 2]
        return min(y, self.neg(y))

    # -- conveniences --------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(self._poly(a))

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise ValueError("too many coefficients for this field")
        return self._encode(coeffs + [0] * (self.n - len(coeffs)))

    def elements(self) -> range:
        return range(self.q)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, (tuple, list)):
            return FieldElement(self, self.from_coeffs(value))
        return FieldElement(self, self.from_int(int(value)) if self.n > 1 else int(value) % self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtField) and (self.p, self.n, self.modulus) == (
            other.p,
            other.n,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def __repr__(self) -> str:
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={self.modulus})"


class PrimeField(ExtField):
    """F_p with direct modular arithmetic."""

    _tabled = False

    def __init__(self, p: int):
        super().__init__(p, 1)

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, e):
        if a % self.p == 0 and e < 0:
            raise ZeroDivisionError("negative power of zero")
        return pow(a, e, self.p)

    def is_square(self, a):
        return self.p == 2 or a % self.p == 0 or jacobi_symbol(a, self.p) == 1

    def sqrt(self, a):
        p = self.p
        a %= p
        if a == 0 or p == 2:
            return a
        if jacobi_symbol(a, p) != 1:
            return None
        y = _tonelli_shanks(a, p)
        return min(y, p - y)


def _tonelli_shanks(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi_symbol(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@lru_cache(maxsize=None)
def make_ext_field(p: int, n: int = 1) -> ExtField:
    """The field with p**n elements, modulus = first monic irreducible in encoding order.

    Cached, so equal (p, n) always give the same object.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n == 1:
        return PrimeField(p)
    return ExtField(p, n)


# ---------------------------------------------------------------------------
# element wrapper


@dataclass(frozen=True)
class FieldElement:
    field: ExtField
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._coerce(other), self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return isinstance(other, FieldElement) and other.field == self.field and other.value == self.value

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __repr__(self) -> str:
        if self.field.n == 1:
            return f"{self.value} (mod {self.field.p})"
        return f"{self.coeffs} in {self.field!r}"


def field_arith(a: FieldElement, b: FieldElement | int, op: str) -> FieldElement:
    """Apply one of add, sub, mul, div, pow.  For pow, b is an integer exponent."""
    if op == "pow":
        return a ** int(b.value if isinstance(b, FieldElement) else b)
    ops = {
        "add": FieldElement.__add__,
        "sub": FieldElement.__sub__,
        "mul": FieldElement.__mul__,
        "div": FieldElement.__truediv__,
    }
    if op not in ops:
        raise ValueError(f"unknown field operation {op!r}")
    return ops[op](a, b)


def legendre(c: FieldElement | int, p: int | None = None) -> int:
    """Legendre symbol of c in a prime field: 1, 0 or -1."""
    if isinstance(c, FieldElement):
        if c.field.n != 1:
            raise ValueError("legendre symbol needs a prime field")
        c, p = c.value, c.field.p
    if p is None:
        raise ValueError("modulus required for an integer argument")
    if p == 2:
        return c % 2
    return jacobi_symbol(c, p)


def sqrt_in_field(c: FieldElement) -> FieldElement | None:
    y = c.field.sqrt(c.value)
    return None if y is None else FieldElement(c.field, y)


# ---------------------------------------------------------------------------
# polynomials over an arbitrary field (tuples of encoded elements, low first)


def poly_trim(a) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_add(F: ExtField, a, b) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return poly_trim(out)


def poly_neg(F: ExtField, a) -> tuple[int, ...]:
    return tuple(F.neg(c) for c in a)


def poly_sub(F: ExtField, a, b) -> tuple[int, ...]:
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F: ExtField, a, c: int) -> tuple[int, ...]:
    if c == 0:
        return ()
    return tuple(F.mul(x, c) for x in a)


def poly_mul(F: ExtField, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F: ExtField, a, b) -> tuple[tuple[int, ...], tuple[int, ...]]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(poly_trim(a))
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), tuple(r)
    inv = F.inv(b[-1])
    quot = [0] * (len(r) - db)
    while len(r) - 1 >= db and r:
        c = F.mul(r[-1], inv)
        shift = len(r) - 1 - db
        quot[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, bc))
        r = list(poly_trim(r))
    return poly_trim(quot), tuple(r)


def poly_mod(F: ExtField, a, b) -> tuple[int, ...]:
    return poly_divmod(F, a, b)[1]


def poly_monic(F: ExtField, a) -> tuple[int, ...]:
    a = poly_trim(a)
    if not a or a[-1] == 1:
        return a
    return poly_scale(F, a, F.inv(a[-1]))


def poly_xgcd(F: ExtField, a, b):
    """(g, s, t) with g = s*a + t*b monic (or zero)."""
    r0, r1 = poly_trim(a), poly_trim(b)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, q, s1))
        t0, t1 = t1, poly_sub(F, t0, poly_mul(F, q, t1))
    if r0 and r0[-1] != 1:
        c = F.inv(r0[-1])
        r0, s0, t0 = poly_scale(F, r0, c), poly_scale(F, s0, c), poly_scale(F, t0, c)
    return r0, s0, t0


def poly_eval(F: ExtField, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_deriv(F: ExtField, a) -> tuple[int, ...]:
    return poly_trim(F.mul(F.from_int(i), c) for i, c in enumerate(a) if i)
