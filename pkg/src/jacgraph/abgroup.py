"""Finite abelian groups from an element table: invariant factors and dlogs.

The structure is found by growing a polycyclic series.  Take the first
element x outside the current subgroup H, find the least k with k x in H,
and replace H by H + <x>.  Every element then has unique polycyclic
coordinates, and the relative orders with the relations k x = h give a
lower triangular relation matrix.  Its Smith normal form yields the
invariant factors and the change of coordinates to discrete logs.
The group operation is evaluated about |G| times in total.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from .ff import factorize

MAX_ORDER = 10**6


class NotAGroupError(ValueError):
    """The element table is not closed, or the operation is inconsistent."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message}: {witness!r}")


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Diagonal of the Smith form of a square nonsingular A, and V with U A V = D."""
    n = len(A)
    M = [list(map(int, row)) for row in A]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_col(dst, src, k):
        # column dst += k * column src
        for row in M:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(n):
        while True:
            # pivot: smallest nonzero entry of the trailing block
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise ValueError("relation matrix is singular")
            i, j = best
            M[t], M[i] = M[i], M[t]
            swap_cols(t, j)
            p = M[t][t]
            done = True
            for i in range(t + 1, n):
                q = M[i][t] // p
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                if M[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = M[t][j] // p
                if q:
                    addmul_col(j, t, -q)
                if M[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        if M[t][t] < 0:
            M[t] = [-a for a in M[t]]
    return [M[i][i] for i in range(n)], V


@dataclass
class GroupStructure:
    """G = Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... | d_r, all d_j > 1."""

    order: int
    invariant_factors: list[int]
    generators: list[int]
    dlog: np.ndarray  # shape (order, r), entry j in [0, d_j)
    elements: list = field(repr=False)
    index: dict = field(repr=False)
    code_to_index: np.ndarray = field(repr=False)
    identity_index: int = 0

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.invariant_factors) or (1,)

    def codes(self, vecs: np.ndarray) -> np.ndarray:
        """Mixed-radix codes of dlog vectors (rows), C order."""
        if not self.invariant_factors:
            return np.zeros(len(vecs), dtype=np.int64)
        return np.ravel_multi_index(tuple(np.asarray(vecs).T), self.dims)

    def from_dlog(self, vec) -> int:
        vec = np.asarray(vec, dtype=np.int64) % np.array(self.dims[: len(vec)] or [1])
        return int(self.code_to_index[self.codes(vec[None, :])[0]]) if self.rank else 0

    def add_idx(self, i, j):
        """Index of elements[i] + elements[j]; vectorized over arrays."""
        s = (self.dlog[i] + self.dlog[j]) % self.dims if self.rank else self.dlog[i]
        if np.ndim(i) == 0 and np.ndim(j) == 0:
            return int(self.code_to_index[self.codes(s[None, :])[0]]) if self.rank else 0
        return self.code_to_index[self.codes(s)] if self.rank else np.zeros(np.broadcast(i, j).shape, int)

    def neg_idx(self, i):
        s = (-self.dlog[i]) % self.dims if self.rank else self.dlog[i]
        if np.ndim(i) == 0:
            return int(self.code_to_index[self.codes(s[None, :])[0]]) if self.rank else 0
        return self.code_to_index[self.codes(s)] if self.rank else np.zeros(np.shape(i), int)

    def element_order(self, i: int) -> int:
        out = 1
        for e, d in zip(self.dlog[i], self.invariant_factors):
            out = math.lcm(out, d // math.gcd(int(e), d))
        return out

    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def characters(self):
        """All character indices, in the C order of ``dims``."""
        return np.array(np.unravel_index(np.arange(self.order), self.dims)).T


def group_structure(elements: Sequence[Hashable], add: Callable, identity: Hashable) -> GroupStructure:
    """Invariant factors and dlog table of the group on ``elements``."""
    elements = list(elements)
    N = len(elements)
    if N > MAX_ORDER:
        raise ValueError(f"|G| = {N} exceeds {MAX_ORDER}")
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != N:
        raise NotAGroupError("repeated element in the table")
    if identity not in index:
        raise NotAGroupError("identity not in the element table", identity)

    def idx(e, a, b):
        try:
            return index[e]
        except KeyError:
            raise NotAGroupError("not closed under addition", (a, b, e)) from None

    coords: list[tuple[int, ...] | None] = [None] * N
    members = [index[identity]]
    coords[members[0]] = ()
    rel_orders: list[int] = []
    relations: list[tuple[int, ...]] = []
    gens: list[int] = []
    nxt = 0
    while len(members) < N:
        while coords[nxt] is not None:
            nxt += 1
        x = elements[nxt]
        gi = len(gens)
        gens.append(nxt)
        # least k with k x in H
        k, y = 1, x
        while True:
            j = idx(y, y, x)
            if coords[j] is not None:
                break
            y = add(y, x)
            k += 1
            if k > N:
                raise NotAGroupError("element of unbounded order", x)
        rel_orders.append(k)
        relations.append(coords[j])
        # H + <x> as the cosets mult * x + H
        new = []
        for h in members:
            c = coords[h]
            z = elements[h]
            for mult in range(1, k):
                z2 = add(z, x)
                zi = idx(z2, z, x)
                if coords[zi] is not None:
                    raise NotAGroupError("inconsistent operation", (z, x, z2))
                coords[zi] = c + (mult,)
                new.append(zi)
                z = z2
            coords[h] = c + (0,)
        members.extend(new)
        if N % len(members):
            raise NotAGroupError("subgroup order does not divide |G|", len(members))

    r0 = len(gens)
    E = np.zeros((N, max(r0, 1)), dtype=np.int64)
    for i, c in enumerate(coords):
        c = c + (0,) * (r0 - len(c))
        E[i, :r0] = c
    if r0 == 0:
        return GroupStructure(1, [], [], np.zeros((1, 0), dtype=np.int64), elements, index,
                              np.zeros(1, dtype=np.int64), index[identity])
    # relation k_i g_i - sum_{j<i} c_j g_j = 0
    R = [[0] * r0 for _ in range(r0)]
    for i in range(r0):
        R[i][i] = rel_orders[i]
        for j, c in enumerate(relations[i]):
            R[i][j] -= c
    diag, V = smith_normal_form(R)
    keep = [j for j, d in enumerate(diag) if d != 1]
    dims = [diag[j] for j in keep]
    Vk = np.array([[V[i][j] % diag[j] for j in keep] for i in range(r0)], dtype=np.int64)
    dlog = (E[:, :r0] @ Vk) % np.array(dims, dtype=np.int64) if keep else np.zeros((N, 0), dtype=np.int64)
    if math.prod(dims) != N:
        raise NotAGroupError("invariant factors do not multiply to |G|", dims)
    codes = np.ravel_multi_index(tuple(dlog.T), tuple(dims)) if dims else np.zeros(N, dtype=np.int64)
    code_to_index = np.full(N, -1, dtype=np.int64)
    code_to_index[codes] = np.arange(N)
    if (code_to_index < 0).any():
        raise NotAGroupError("dlog map is not injective")
    generators = [int(code_to_index[np.ravel_multi_index(tuple(int(j == t) for j in range(len(dims))), tuple(dims))])
                  for t in range(len(dims))]
    return GroupStructure(N, dims, generators, dlog, elements, index, code_to_index, index[identity])


def cyclic_product(dims: Sequence[int]) -> GroupStructure:
    """Z/d_1 x ... x Z/d_k on tuples (or ints when k = 1), via the generic builder."""
    dims = list(dims)
    if len(dims) == 1:
        n = dims[0]
        return group_structure(range(n), lambda a, b: (a + b) % n, 0)
    import itertools

    els = list(itertools.product(*(range(d) for d in dims)))
    return group_structure(els, lambda a, b: tuple((x + y) % d for x, y, d in zip(a, b, dims)),
                           tuple(0 for _ in dims))


def sylow_ranks(G: GroupStructure) -> dict[int, list[int]]:
    """Elementary divisors grouped by prime (ascending exponents)."""
    out: dict[int, list[int]] = {}
    for d in G.invariant_factors:
        for ell, e in factorize(d).items():
            out.setdefault(ell, []).append(ell**e)
    return out


def _phase_numerators(G: GroupStructure, c, xs) -> np.ndarray:
    # exact phase: sum_j c_j e_j (D / d_j) mod D with D = d_r
    D = G.exponent()
    w = np.array([D // d for d in G.invariant_factors], dtype=np.int64)
    c = np.asarray(c, dtype=np.int64) % np.array(G.dims)
    e = G.dlog[np.asarray(xs, dtype=np.int64)]
    return ((e * (c * w)) % D).sum(axis=-1) % D


def character_eval(G: GroupStructure, c, x: int) -> complex:
    """chi_c(x) = exp(2 pi i sum_j c_j e_j / d_j)."""
    if not G.rank:
        return 1 + 0j
    num = int(_phase_numerators(G, c, [x])[0])
    return cmath.exp(2j * math.pi * num / G.exponent())


def char_sum_over_set(G: GroupStructure, c, S: Sequence[int]) -> complex:
    """sum over x in S of chi_c(x), with correctly rounded summation."""
    if not G.rank:
        return complex(len(S))
    D = G.exponent()
    nums = _phase_numerators(G, c, S)
    ang = 2 * math.pi * nums / D
    return complex(math.fsum(np.cos(ang)), math.fsum(np.sin(ang)))


def all_char_sums(G: GroupStructure, S: Sequence[int]) -> np.ndarray:
    """Array over ``dims`` whose entry c is sum_{x in S} chi_c(x)."""
    ind = np.zeros(G.dims, dtype=np.float64)
    if G.rank:
        np.add.at(ind, tuple(G.dlog[np.asarray(S, dtype=np.int64)].T), 1.0)
    else:
        ind[0] = len(S)
    return np.fft.ifftn(ind) * G.order


def real_character_mask(G: GroupStructure) -> np.ndarray:
    """Boolean array over ``dims``: True where 2c = 0."""
    grids = np.indices(G.dims)
    mask = np.ones(G.dims, dtype=bool)
    for j, d in enumerate(G.invariant_factors):
        mask &= (2 * grids[j]) % d == 0
    return mask


def negate_character_codes(G: GroupStructure) -> np.ndarray:
    """Flat C-order code of -c for every flat code c."""
    if not G.rank:
        return np.zeros(1, dtype=np.int64)
    idx = np.array(np.unravel_index(np.arange(G.order), G.dims))
    neg = (-idx) % np.array(G.dims)[:, None]
    return np.ravel_multi_index(tuple(neg), G.dims)
