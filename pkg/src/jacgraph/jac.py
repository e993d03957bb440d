"""Generalized jacobians of genus 1 curves and jacobians of genus 2 curves.

Three shapes of element, all plain hashable tuples:

* split modulus m = M + N:   ``(P, s)`` with P a point and s a nonzero scalar,
* double point modulus 2 x0: ``(P, s)`` with s an arbitrary scalar,
* genus 2, empty modulus:    ``(u, v)`` Mumford pair, polynomials as tuples
  of field elements, lowest degree first.

The genus 1 laws are written as (P, s) + (Q, t) = (P + Q, s t c(P, Q)) for
the split case and (P + Q, s + t + c(P, Q)) for the double point case.  The
correction c(P, Q) comes from the function h = l_{P,Q} / l_{P+Q,inf}, whose
divisor is (P) + (Q) - (P+Q) - (inf).  Where h has neither zero nor pole on
the modulus the split correction is h(M) / h(N).  Elsewhere we use the
leading coefficient of h in a fixed local parameter at M and at N; that
coefficient is multiplicative, so the cocycle identity holds for every
pair of points without special cases.  The double point correction is the
logarithmic derivative of the unit part of h at x0 along x - x(x0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .curve import INF, CurveData, CurveSpecError, Point, enumerate_points, count_points_ext
from .ff import (
    ExtField,
    make_ext_field,
    poly_add,
    poly_divmod,
    poly_eval,
    poly_monic,
    poly_mul,
    poly_neg,
    poly_mod,
    poly_sub,
    poly_trim,
    poly_xgcd,
)

JacElement = tuple

SERIES_TERMS = 6
DEFAULT_ENUM_CAP = 10**6


class CapExceeded(RuntimeError):
    """A size cap was hit."""


@dataclass(frozen=True)
class ModulusSpec:
    """The modulus: ``empty``, ``split`` (points M, N) or ``double`` (point x0)."""

    kind: str
    points: tuple[Point, ...] = ()

    @classmethod
    def empty(cls) -> "ModulusSpec":
        return cls("empty")

    @classmethod
    def split(cls, M: Point, N: Point) -> "ModulusSpec":
        return cls("split", (tuple(M), tuple(N)))

    @classmethod
    def double(cls, x0: Point) -> "ModulusSpec":
        return cls("double", (tuple(x0),))

    @property
    def degree(self) -> int:
        return {"empty": 0, "split": 2, "double": 2}[self.kind]

    @property
    def support(self) -> tuple[Point, ...]:
        return self.points

    def spec(self) -> str:
        if self.kind == "empty":
            return "m=empty"
        pts = ",".join(f"({x},{y})" for x, y in self.points)
        return f"m={self.kind}:{pts}"


def parse_modulus(text: str) -> ModulusSpec:
    """Parse ``m=split:(x1,y1),(x2,y2)``, ``m=double:(x0,y0)`` or ``m=empty``."""
    import re

    if text == "m=empty":
        return ModulusSpec.empty()
    m = re.match(r"m=(split|double):", text)
    if not m:
        raise CurveSpecError("expected 'm=split:', 'm=double:' or 'm=empty'", text, 0)
    kind = m.group(1)
    pos = m.end()
    want = 2 if kind == "split" else 1
    pt = re.compile(r"\(([+-]?\d+),([+-]?\d+)\)")
    pts = []
    for i in range(want):
        if i:
            if pos >= len(text) or text[pos] != ",":
                raise CurveSpecError("expected ','", text, pos)
            pos += 1
        mm = pt.match(text, pos)
        if not mm:
            raise CurveSpecError("expected '(x,y)'", text, pos)
        pts.append((int(mm.group(1)), int(mm.group(2))))
        pos = mm.end()
    if pos != len(text):
        raise CurveSpecError("trailing characters", text, pos)
    return ModulusSpec(kind, tuple(pts))


# ---------------------------------------------------------------------------
# elliptic curve helpers over K


def ec_neg(K: ExtField, P: Point) -> Point:
    if P is None:
        return None
    return (P[0], K.neg(P[1]))


def ec_add(K: ExtField, a: int, P: Point, Q: Point) -> Point:
    """Chord-tangent addition on y^2 = x^3 + a x + b."""
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if K.add(y1, y2) == 0:
            return None
        num = K.add(K.mul(K.from_int(3), K.mul(x1, x1)), a)
        lam = K.div(num, K.add(y1, y1))
    else:
        lam = K.div(K.sub(y2, y1), K.sub(x2, x1))
    x3 = K.sub(K.sub(K.mul(lam, lam), x1), x2)
    y3 = K.sub(K.mul(lam, K.sub(x1, x3)), y1)
    return (x3, y3)


def ec_mul(K: ExtField, a: int, n: int, P: Point) -> Point:
    if n < 0:
        n, P = -n, ec_neg(K, P)
    R = None
    while n:
        if n & 1:
            R = ec_add(K, a, R, P)
        P = ec_add(K, a, P, P)
        n >>= 1
    return R


def line_through(K: ExtField, a: int, P: Point, Q: Point) -> tuple[int, int, int]:
    """Coefficients (alpha, beta, gamma) of alpha x + beta y + gamma."""
    if P is None and Q is None:
        return (0, 0, 1)
    if P is None or Q is None:
        R = P if Q is None else Q
        return (1, 0, K.neg(R[0]))
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 != y2 or y1 == 0:
            return (1, 0, K.neg(x1))
        lam = K.div(K.add(K.mul(K.from_int(3), K.mul(x1, x1)), a), K.add(y1, y1))
    else:
        lam = K.div(K.sub(y2, y1), K.sub(x2, x1))
    return (K.neg(lam), 1, K.sub(K.mul(lam, x1), y1))


def line_value(K: ExtField, line, P: tuple[int, int]) -> int:
    al, be, ga = line
    return K.add(K.add(K.mul(al, P[0]), K.mul(be, P[1])), ga)


def local_series(K: ExtField, f: Sequence[int], M: tuple[int, int], terms: int = SERIES_TERMS):
    """Expansions x(t), y(t) at the affine point M of y^2 = f(x).

    The parameter is t = x - x(M) when y(M) != 0 and t = y otherwise.
    """
    xM, yM = M
    # Taylor coefficients of f at xM
    F = list(f)
    taylor = []
    for _ in range(len(F)):
        q, r = poly_divmod(K, F, (K.neg(xM), 1))
        taylor.append(r[0] if r else 0)
        F = list(q)
    taylor += [0] * (terms + 1)
    if yM != 0:
        xs = [xM, 1] + [0] * (terms - 2)
        ys = [yM]
        inv2y = K.inv(K.add(yM, yM))
        for k in range(1, terms):
            acc = taylor[k]
            for i in range(1, k):
                acc = K.sub(acc, K.mul(ys[i], ys[k - i]))
            ys.append(K.mul(acc, inv2y))
        return xs, ys
    # f(xM + u) = F1 u + F2 u^2 + ... = t^2, solve for u(t)
    F1inv = K.inv(taylor[1])
    u = [0] * terms

    def mul(a, b):
        out = [0] * terms
        for i, ai in enumerate(a):
            if ai:
                for j in range(terms - i):
                    if b[j]:
                        out[i + j] = K.add(out[i + j], K.mul(ai, b[j]))
        return out

    for _ in range(terms):
        rhs = [0] * terms
        if terms > 2:
            rhs[2] = 1
        power = mul(u, u)
        k = 2
        while any(power) and k < len(taylor):
            c = taylor[k]
            if c:
                rhs = [K.sub(r, K.mul(c, pw)) for r, pw in zip(rhs, power)]
            power = mul(power, u)
            k += 1
        u = [K.mul(r, F1inv) for r in rhs]
    xs = [K.add(xM, u[0])] + u[1:]
    ys = [0, 1] + [0] * (terms - 2)
    return xs, ys


def _line_expansion(K: ExtField, line, series) -> tuple[int, int, int]:
    """(order, leading coefficient, next coefficient) of a line at a point."""
    al, be, ga = line
    xs, ys = series
    coeffs = [K.add(K.mul(al, xs[k]), K.mul(be, ys[k])) for k in range(len(xs))]
    coeffs[0] = K.add(coeffs[0], ga)
    for k, c in enumerate(coeffs):
        if c:
            nxt = coeffs[k + 1] if k + 1 < len(coeffs) else None
            if nxt is None:
                raise ArithmeticError("local series too short")
            return k, c, nxt
    raise ArithmeticError("line vanishes identically on the curve")


# ---------------------------------------------------------------------------
# contexts


@dataclass
class JacContext:
    """Curve, modulus and field K = k_n; owns the fast group operations."""

    curve: CurveData
    modulus: ModulusSpec
    n: int = 1
    K: ExtField = field(init=False)

    def __post_init__(self):
        C, m = self.curve, self.modulus
        self.K = make_ext_field(C.p, self.n)
        K = self.K
        if C.genus == 2:
            if m.kind != "empty":
                raise ValueError("genus 2 curves only take the empty modulus")
        elif m.kind == "empty":
            raise ValueError("genus 1 curves need a split or double point modulus")
        for P in m.points:
            if any(not (0 <= c < C.p) for c in P):
                raise ValueError(f"modulus point {P} is not reduced mod p")
            if not C.on_curve(K, P):
                raise ValueError(f"modulus point {P} is not on the curve")
        if m.kind == "split" and m.points[0] == m.points[1]:
            raise ValueError("split modulus needs M != N")
        if m.kind == "double":
            if m.points[0][1] == 0:
                raise ValueError("double point modulus needs y(x0) != 0")
        self._series = [local_series(K, C.f, P) for P in m.points]

    @property
    def kind(self) -> str:
        return self.modulus.kind

    @property
    def identity(self) -> JacElement:
        if self.kind == "split":
            return (INF, 1)
        if self.kind == "double":
            return (INF, 0)
        return ((1,), ())

    # -- genus 1 ----------------------------------------------------------

    def _split_cocycle(self, P: Point, Q: Point, R: Point) -> int:
        K, a = self.K, self.curve.a
        l1 = line_through(K, a, P, Q)
        l2 = line_through(K, a, R, None)
        M, N = self.modulus.points
        v1M, v2M = line_value(K, l1, M), line_value(K, l2, M)
        v1N, v2N = line_value(K, l1, N), line_value(K, l2, N)
        if v1M and v2M and v1N and v2N:
            return K.div(K.mul(v1M, v2N), K.mul(v2M, v1N))
        sM, sN = self._series
        c1M = _line_expansion(K, l1, sM)[1]
        c2M = _line_expansion(K, l2, sM)[1]
        c1N = _line_expansion(K, l1, sN)[1]
        c2N = _line_expansion(K, l2, sN)[1]
        return K.div(K.mul(c1M, c2N), K.mul(c2M, c1N))

    def _double_cocycle(self, P: Point, Q: Point, R: Point) -> int:
        K, a = self.K, self.curve.a
        s0 = self._series[0]
        out = 0
        for sign, line in ((1, line_through(K, a, P, Q)), (-1, line_through(K, a, R, None))):
            if line == (0, 0, 1):
                continue
            _, c0, c1 = _line_expansion(K, line, s0)
            d = K.div(c1, c0)
            out = K.add(out, d) if sign > 0 else K.sub(out, d)
        return out

    # -- genus 2 ----------------------------------------------------------

    def _cantor(self, D1, D2):
        K, f = self.K, self.curve.f
        u1, v1 = D1
        u2, v2 = D2
        d1, e1, e2 = poly_xgcd(K, u1, u2)
        d, c1, c2 = poly_xgcd(K, d1, poly_add(K, v1, v2))
        s1, s2, s3 = poly_mul(K, c1, e1), poly_mul(K, c1, e2), c2
        u = poly_mul(K, u1, u2)
        v = poly_add(
            K,
            poly_add(K, poly_mul(K, poly_mul(K, s1, u1), v2), poly_mul(K, poly_mul(K, s2, u2), v1)),
            poly_mul(K, s3, poly_add(K, poly_mul(K, v1, v2), f)),
        )
        if len(d) > 1:
            u = poly_divmod(K, u, poly_mul(K, d, d))[0]
            v = poly_divmod(K, v, d)[0]
        u = poly_monic(K, u)
        v = poly_mod(K, v, u)
        while len(u) > 3:
            u = poly_monic(K, poly_divmod(K, poly_sub(K, f, poly_mul(K, v, v)), u)[0])
            v = poly_mod(K, poly_neg(K, v), u)
        return (u, v)

    # -- public fast paths (no validation) -------------------------------

    def add(self, x: JacElement, y: JacElement) -> JacElement:
        if self.kind == "empty":
            return self._cantor(x, y)
        K = self.K
        (P, s), (Q, t) = x, y
        R = ec_add(K, self.curve.a, P, Q)
        if self.kind == "split":
            return (R, K.mul(K.mul(s, t), self._split_cocycle(P, Q, R)))
        return (R, K.add(K.add(s, t), self._double_cocycle(P, Q, R)))

    def neg(self, x: JacElement) -> JacElement:
        K = self.K
        if self.kind == "empty":
            u, v = x
            return (u, poly_neg(K, v))
        P, s = x
        mP = ec_neg(K, P)
        if self.kind == "split":
            return (mP, K.inv(K.mul(s, self._split_cocycle(P, mP, None))))
        return (mP, K.neg(K.add(s, self._double_cocycle(P, mP, None))))

    def scalar_mul(self, k: int, x: JacElement) -> JacElement:
        if k < 0:
            k, x = -k, self.neg(x)
        R = self.identity
        while k:
            if k & 1:
                R = self.add(R, x)
            x = self.add(x, x)
            k >>= 1
        return R

    # -- validation -------------------------------------------------------

    def is_valid(self, x: JacElement) -> bool:
        K, C = self.K, self.curve
        try:
            if self.kind == "empty":
                u, v = x
                u, v = tuple(u), tuple(v)
                if not u or u[-1] != 1 or len(u) > 3 or len(v) >= len(u):
                    return False
                if poly_trim(u) != u or poly_trim(v) != v:
                    return False
                if any(not (0 <= c < K.q) for c in u + v):
                    return False
                r = poly_mod(K, poly_sub(K, poly_mul(K, v, v), C.f), u)
                return not r
            P, s = x
            if not (0 <= s < K.q):
                return False
            if self.kind == "split" and s == 0:
                return False
            if P is None:
                return True
            if any(not (0 <= c < K.q) for c in P):
                return False
            return C.on_curve(K, tuple(P))
        except (TypeError, ValueError):
            return False

    def order(self) -> int:
        _, orders = count_points_ext(self.curve.zeta, self.n)
        return orders[self.kind]


def make_context(C: CurveData, m: ModulusSpec, n: int = 1) -> JacContext:
    return JacContext(C, m, n)


def _require(ctx: JacContext, *xs: JacElement) -> None:
    for x in xs:
        if not ctx.is_valid(x):
            raise ValueError(f"invalid jacobian element {x!r}")


def jac_add(x: JacElement, y: JacElement, ctx: JacContext) -> JacElement:
    _require(ctx, x, y)
    return ctx.add(x, y)


def jac_neg(x: JacElement, ctx: JacContext) -> JacElement:
    _require(ctx, x)
    return ctx.neg(x)


def jac_identity(ctx: JacContext) -> JacElement:
    return ctx.identity


def jac_scalar_mul(k: int, x: JacElement, ctx: JacContext) -> JacElement:
    _require(ctx, x)
    return ctx.scalar_mul(k, x)


# ---------------------------------------------------------------------------
# enumeration and Abel-Jacobi


def _mumford_elements(ctx: JacContext) -> list[JacElement]:
    K, f = ctx.K, ctx.curve.f
    q = K.q
    out: list[JacElement] = [((1,), ())]
    for a in K.elements():
        r = poly_eval(K, f, a)
        u = (K.neg(a), 1)
        if r == 0:
            out.append((u, ()))
            continue
        y = K.sqrt(r)
        if y is not None:
            for yy in sorted((y, K.neg(y))):
                out.append((u, (yy,)))
    sq = [K.mul(v, v) for v in range(q)]
    two = K.from_int(2)
    for u1 in K.elements():
        for u0 in K.elements():
            u = (u0, u1, 1)
            rem = poly_mod(K, f, u)
            r0 = rem[0] if rem else 0
            r1 = rem[1] if len(rem) > 1 else 0
            # v = v1 x + v0: 2 v0 v1 - u1 v1^2 = r1 and v0^2 - u0 v1^2 = r0
            found = []
            if r1 == 0:
                y = K.sqrt(r0)
                if y == 0:
                    found.append(())
                elif y is not None:
                    found.extend([(y,), (K.neg(y),)])
            for v1 in range(1, q):
                v1sq = sq[v1]
                v0 = K.div(K.add(r1, K.mul(u1, v1sq)), K.mul(two, v1))
                if K.sub(sq[v0], K.mul(u0, v1sq)) == r0:
                    found.append((v0, v1))
            for v in sorted(found, key=lambda t: tuple(reversed(t))):
                out.append((u, v))
    return out


def enumerate_jacobian(ctx: JacContext, cap: int = DEFAULT_ENUM_CAP) -> list[JacElement]:
    """Every element of J_m(k_n); the size must match the zeta prediction."""
    expected = ctx.order()
    if expected > cap:
        raise CapExceeded(f"|J| = {expected} exceeds the enumeration cap {cap}")
    K = ctx.K
    if ctx.kind == "empty":
        out = _mumford_elements(ctx)
    else:
        pts = enumerate_points(ctx.curve, K)
        scalars = range(1, K.q) if ctx.kind == "split" else range(K.q)
        out = [(P, s) for P in pts for s in scalars]
    if len(out) != expected:
        raise AssertionError(f"enumerated {len(out)} elements, expected {expected}")
    return out


def abel_jacobi(P: Point, ctx: JacContext, offset: JacElement | None = None) -> JacElement:
    """Image of P under P -> class of (P) - (base), optionally translated."""
    if P is not None and tuple(P) in ctx.modulus.points:
        raise ValueError(f"{P} lies in the support of the modulus")
    if P is not None and not ctx.curve.on_curve(ctx.K, tuple(P)):
        raise ValueError(f"{P} is not on the curve")
    if ctx.kind == "split":
        x = (P, 1)
    elif ctx.kind == "double":
        x = (P, 0)
    elif P is None:
        x = ((1,), ())
    else:
        x = ((ctx.K.neg(P[0]), 1), poly_trim((P[1],)))
    if offset is not None:
        x = ctx.add(x, offset)
    return x


def abel_jacobi_image(ctx: JacContext, offset: JacElement | None = None) -> list[JacElement]:
    """S = image of (C \\ m)(k_n), in point enumeration order."""
    pts = enumerate_points(ctx.curve, ctx.K)
    bad = set(ctx.modulus.points)
    return [abel_jacobi(P, ctx, offset) for P in pts if P is None or P not in bad]


def predicted_center(ctx: JacContext) -> JacElement:
    """Center of the Abel-Jacobi image predicted by the collinearity argument.

    Two distinct pairs in S with equal sum R force M, N and -R onto one
    line, so R = M + N (the double point case is the limit M = N = x0).
    Genus 2 with base point at infinity gives the identity.
    """
    K, a = ctx.K, ctx.curve.a
    if ctx.kind == "split":
        M, N = ctx.modulus.points
        return (ec_add(K, a, M, N), 1)
    if ctx.kind == "double":
        x0 = ctx.modulus.points[0]
        return (ec_add(K, a, x0, x0), 0)
    return ctx.identity


def literal_split_center(ctx: JacContext) -> JacElement:
    """The point (-(M+N), 1), which is not the center unless 2(M+N) = 0."""
    M, N = ctx.modulus.points
    return (ec_neg(ctx.K, ec_add(ctx.K, ctx.curve.a, M, N)), 1)


# ---------------------------------------------------------------------------
# Sidon sets


@dataclass
class SidonReport:
    is_sidon: bool
    is_symmetric: bool
    center: Hashable | None
    center_in_2J: bool | None
    witness: tuple | None = None
    collisions: int = 0


def sidon_report(
    S: Sequence[Hashable],
    add: Callable[[Hashable, Hashable], Hashable],
    doubles: Iterable[Hashable] | None = None,
) -> SidonReport:
    """Symmetric Sidon test for S inside an abelian group given by ``add``.

    ``doubles`` enumerates 2b over the whole group; when given, the report
    says whether the center is such a double.
    """
    S = list(S)
    if not S:
        raise ValueError("S must be nonempty")
    if len(set(S)) != len(S):
        raise ValueError("S has repeated elements")
    sums: dict[Hashable, list[tuple[int, int]]] = {}
    for i in range(len(S)):
        for j in range(i, len(S)):
            sums.setdefault(add(S[i], S[j]), []).append((i, j))
    colliding = [z for z, pairs in sums.items() if len(pairs) > 1]

    def symmetric_about(a0) -> bool:
        # S = a0 - S  <=>  every s has a partner s' in S with s + s' = a0
        partners = sums.get(a0, [])
        covered = set()
        for i, j in partners:
            covered.add(i)
            covered.add(j)
        return len(covered) == len(S)

    def quad(z):
        (i, j), (k, l) = sums[z][:2]
        return (S[i], S[j], S[k], S[l])

    center = None
    witness = None
    if not colliding:
        is_sidon = True
        for z in sums:
            if symmetric_about(z):
                center = z
                break
    elif len(colliding) == 1 and symmetric_about(colliding[0]):
        is_sidon = True
        center = colliding[0]
    else:
        is_sidon = False
        sym = [z for z in colliding if symmetric_about(z)]
        witness = quad(next(z for z in colliding if not sym or z != sym[0]))
    in_2J = None
    if center is not None and doubles is not None:
        in_2J = any(d == center for d in doubles)
    return SidonReport(
        is_sidon=is_sidon,
        is_symmetric=center is not None and is_sidon,
        center=center,
        center_in_2J=in_2J,
        witness=witness,
        collisions=len(colliding),
    )


def sidon_check(S: Sequence[JacElement], ctx: JacContext, group: Sequence[JacElement] | None = None) -> SidonReport:
    """Symmetric Sidon report for a subset of J_m(k_n).

    The center-in-2J test runs by brute force over ``group`` (enumerated on
    demand when the group is small enough).
    """
    if len(S) > 10**5:
        raise CapExceeded("|S| exceeds 10^5")
    if group is None and ctx.order() <= 10**5:
        group = enumerate_jacobian(ctx)
    doubles = (ctx.add(b, b) for b in group) if group is not None else None
    return sidon_report(S, ctx.add, doubles)
