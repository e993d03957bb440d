"""Genus 1 and genus 2 curve models, point counting and zeta data.

Genus 1 curves are short Weierstrass models y^2 = x^3 + a x + b over F_p,
p >= 5.  Genus 2 curves are y^2 = f(x) with f squarefree of degree 5, so
there is exactly one point at infinity.  Points are ``None`` (infinity) or
``(x, y)`` tuples of encoded field elements of the field they were
enumerated over.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

from .ff import (
    ExtField,
    PrimeField,
    is_prime,
    make_ext_field,
    poly_deriv,
    poly_eval,
    poly_xgcd,
)

Point = tuple[int, int] | None
INF: Point = None


class CurveSpecError(ValueError):
    """Malformed curve or modulus specification string."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at position {pos}: {text!r}" if text else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class CurveData:
    """A curve over F_p.

    ``f`` holds the right-hand side y^2 = f(x) with integer coefficients in
    [0, p), lowest degree first.  For genus 1 this is (b, a, 0, 1).
    """

    genus: int
    p: int
    f: tuple[int, ...]

    def __post_init__(self):
        p = self.p
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "f", tuple(c % p for c in self.f))
        f = list(self.f)
        while f and f[-1] == 0:
            f.pop()
        if self.genus == 1:
            if p < 5:
                raise ValueError("short Weierstrass models need p >= 5")
            if len(f) != 4 or f[3] != 1 or f[2] != 0:
                raise ValueError("genus 1 curves must be y^2 = x^3 + a x + b")
            a, b = f[1], f[0]
            if (4 * a**3 + 27 * b**2) % p == 0:
                raise ValueError("singular curve: 4a^3 + 27b^2 = 0 mod p")
        elif self.genus == 2:
            if p < 3:
                raise ValueError("genus 2 models need odd characteristic")
            if len(f) == 7:
                raise ValueError("degree 6 models are not supported")
            if len(f) != 6:
                raise ValueError("genus 2 curves must have deg f = 5")
            F = self.base
            g, _, _ = poly_xgcd(F, tuple(f), poly_deriv(F, tuple(f)))
            if len(g) != 1:
                raise ValueError("f is not squarefree")
        else:
            raise ValueError("genus must be 1 or 2")

    @classmethod
    def elliptic(cls, p: int, a: int, b: int) -> "CurveData":
        return cls(1, p, (b, a, 0, 1))

    @classmethod
    def hyperelliptic(cls, p: int, f_high_to_low) -> "CurveData":
        return cls(2, p, tuple(reversed(list(f_high_to_low))))

    @property
    def base(self) -> PrimeField:
        return make_ext_field(self.p, 1)

    @property
    def a(self) -> int:
        return self.f[1]

    @property
    def b(self) -> int:
        return self.f[0]

    def rhs(self, F: ExtField, x: int) -> int:
        return poly_eval(F, self.f, x)

    def on_curve(self, F: ExtField, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return F.mul(y, y) == self.rhs(F, x)

    def spec(self) -> str:
        if self.genus == 1:
            return f"g1:p={self.p},a={self.a},b={self.b}"
        return f"g2:p={self.p},f={','.join(str(c) for c in reversed(self.f))}"

    @cached_property
    def zeta(self) -> "ZetaData":
        return zeta_data(self)


def _check_field(C: CurveData, K: ExtField) -> None:
    if K.p != C.p:
        raise ValueError(f"field of characteristic {K.p} does not extend F_{C.p}")


def enumerate_points(C: CurveData, K: ExtField | None = None) -> list[Point]:
    """All points of C(K): infinity first, then affine points sorted by (x, y)."""
    K = K or C.base
    _check_field(C, K)
    pts: list[Point] = [INF]
    for x in K.elements():
        r = C.rhs(K, x)
        if r == 0:
            pts.append((x, 0))
            continue
        y = K.sqrt(r)
        if y is not None:
            pts.append((x, y))
            pts.append((x, K.neg(y)))
    return pts


def count_points(C: CurveData, K: ExtField) -> int:
    """|C(K)| by summing 1 + (f(x)/K) over x."""
    _check_field(C, K)
    total = 1
    for x in K.elements():
        r = C.rhs(K, x)
        total += 1 if r == 0 else (2 if K.is_square(r) else 0)
    return total


@dataclass(frozen=True)
class ZetaData:
    """Frobenius data over the base field F_q.

    Genus 1: trace ``a`` with |C(F_q)| = q + 1 - a.
    Genus 2: L(T) = 1 + a1 T + a2 T^2 + q a1 T^3 + q^2 T^4.
    """

    genus: int
    p: int
    q: int
    a: int | None = None
    a1: int | None = None
    a2: int | None = None

    def power_sums(self, n_max: int) -> list[int]:
        """[s_1, ..., s_{n_max}]: power sums of the Frobenius eigenvalues."""
        q = self.q
        if self.genus == 1:
            s = [2, self.a]
            for _ in range(2, n_max + 1):
                s.append(self.a * s[-1] - q * s[-2])
            return s[1 : n_max + 1]
        # roots of X^4 + a1 X^3 + a2 X^2 + q a1 X + q^2
        c = [self.a1, self.a2, q * self.a1, q * q]
        s = [4]
        for n in range(1, n_max + 1):
            val = -n * c[n - 1] if n <= 4 else 0
            for i in range(1, min(n - 1, 4) + 1):
                val -= c[i - 1] * s[n - i]
            s.append(val)
        return s[1:]

    def curve_count(self, n: int) -> int:
        return self.q**n + 1 - self.power_sums(n)[-1]

    def jacobian_order(self, n: int = 1) -> int:
        """|J(F_{q^n})| for genus 2, i.e. L_n(1)."""
        if self.genus != 2:
            raise ValueError("jacobian order via L(1) is for genus 2")
        s = self.power_sums(2 * n)
        sn, s2n, qn = s[n - 1], s[2 * n - 1], self.q**n
        e2 = (sn * sn - s2n) // 2
        return 1 - sn + e2 - qn * sn + qn * qn


def zeta_data(C: CurveData) -> ZetaData:
    """Zeta data from direct point counts over F_q (and F_{q^2} in genus 2)."""
    q = C.p
    n1 = count_points(C, make_ext_field(C.p, 1))
    if C.genus == 1:
        return ZetaData(1, C.p, q, a=q + 1 - n1)
    n2 = count_points(C, make_ext_field(C.p, 2))
    s1 = q + 1 - n1
    s2 = q * q + 1 - n2
    a1 = -s1
    a2 = (a1 * a1 - s2) // 2
    return ZetaData(2, C.p, q, a1=a1, a2=a2)


def count_points_ext(Z: ZetaData, n: int) -> tuple[int, dict[str, int]]:
    """(|C(k_n)|, group orders over k_n) from the Frobenius recurrences.

    Genus 1 orders are for the split modulus ((q^n - 1)|C|) and the double
    point modulus (q^n |C|); genus 2 gives the jacobian order L_n(1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = Z.curve_count(n)
    qn = Z.q**n
    if Z.genus == 1:
        return c, {"split": (qn - 1) * c, "double": qn * c}
    return c, {"empty": Z.jacobian_order(n)}


def is_ordinary(Z: ZetaData) -> bool:
    middle = Z.a if Z.genus == 1 else Z.a2
    return middle % Z.p != 0


def multiplicative_order(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return None
    e, x = 1, a
    while x != 1:
        x = x * a % p
        e += 1
    return e


def trace_order_mod_p(Z: ZetaData) -> int | None:
    """Multiplicative order of the trace modulo p; None when p divides it."""
    if Z.genus != 1:
        raise ValueError("trace order is defined for genus 1")
    return multiplicative_order(Z.a, Z.p)


def hasse_ok(Z: ZetaData, n_max: int = 12) -> bool:
    bound = 2 * Z.genus
    for n, s in enumerate(Z.power_sums(n_max), start=1):
        # |s| <= 2g q^{n/2}, compared in integers
        if s * s > bound * bound * Z.q**n:
            return False
    return True


# ---------------------------------------------------------------------------
# spec strings

_INT = r"[+-]?\d+"


def parse_curve(text: str) -> CurveData:
    """Parse ``g1:p=<p>,a=<a>,b=<b>`` or ``g2:p=<p>,f=<c5,...,c0>``."""
    m = re.match(r"g([12]):", text)
    if not m:
        raise CurveSpecError("expected 'g1:' or 'g2:'", text, 0)
    genus = int(m.group(1))
    pos = m.end()
    fields: dict[str, str] = {}
    expected = ["p", "a", "b"] if genus == 1 else ["p", "f"]
    for i, key in enumerate(expected):
        pat = rf"{key}=({_INT})" if key != "f" else rf"f=({_INT}(?:,{_INT})*)"
        m = re.compile(pat).match(text, pos)
        if not m:
            raise CurveSpecError(f"expected '{key}=<integer>'", text, pos)
        fields[key] = m.group(1)
        pos = m.end()
        if i < len(expected) - 1:
            if pos >= len(text) or text[pos] != ",":
                raise CurveSpecError("expected ','", text, pos)
            pos += 1
    if pos != len(text):
        raise CurveSpecError("trailing characters", text, pos)
    p = int(fields["p"])
    try:
        if genus == 1:
            return CurveData.elliptic(p, int(fields["a"]), int(fields["b"]))
        coeffs = [int(c) for c in fields["f"].split(",")]
        if len(coeffs) != 6:
            raise CurveSpecError("f needs 6 coefficients c5..c0", text, text.index("f="))
        return CurveData.hyperelliptic(p, coeffs)
    except CurveSpecError:
        raise
    except ValueError as exc:
        raise CurveSpecError(str(exc), text, 0) from exc


def sqrt_bound(q: int, n: int) -> float:
    return math.sqrt(q**n)
