"""Spectra of sum graphs: character sums, a Jacobi eigensolver, W1 to the semicircle.

Eigenvalues are those of the Markov operator A / |S|.  For a sum graph the
spectrum is read off the character sums T(c) = sum_{y in S} chi_c(y): a
real character contributes T(c) / |S| and each pair {c, -c} of non-real
characters contributes +|T(c)| / |S| and -|T(c)| / |S|.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .abgroup import GroupStructure, all_char_sums, negate_character_codes
from .sumgraph import SumGraphData

log = logging.getLogger(__name__)

DENSE_CAP = 5_000
JACOBI_MAX = 1_000
BLOCK_FROM = 128
BLOCK_SIZE = 16
TRIVIAL_TOL = 1e-9
BOUND_TOL = 1e-9


class SpectralBoundViolation(AssertionError):
    """A nontrivial eigenvalue exceeds 2 sqrt(q^n) / d."""


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    degree: int
    method: str
    trivial_count: int = 0
    normalized_nontrivial: np.ndarray = field(default_factory=lambda: np.zeros(0))
    w1_semicircle: float | None = None
    max_nontrivial_abs: float | None = None
    c2_bound: float | None = None
    ramanujan: bool | None = None
    criterion_dn_ge_qn_plus_1: bool | None = None
    connected: bool | None = None
    clamped: int = 0

    @property
    def vertices(self) -> int:
        return len(self.eigenvalues)


# ---------------------------------------------------------------------------
# two routes to the spectrum


def spectrum_char(G: GroupStructure, S: Sequence[int], imag_tol: float = 1e-8) -> SpectrumReport:
    """Markov spectrum from the character sums over S."""
    S = list(S)
    d = len(S)
    sums = all_char_sums(G, S).ravel()
    neg = negate_character_codes(G)
    codes = np.arange(G.order)
    real = neg == codes
    worst = float(np.abs(sums[real].imag).max(initial=0.0))
    if worst > imag_tol * max(1, d):
        raise AssertionError(f"real character with imaginary sum {worst}")
    pair = codes < neg
    mags = np.abs(sums[pair]) / d
    vals = np.concatenate([sums[real].real / d, mags, -mags])
    if len(vals) != G.order:
        raise AssertionError("character bookkeeping lost eigenvalues")
    return SpectrumReport(np.sort(vals), d, "char_sum")


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p = np.array([players[i] for i in range(m // 2)])
        q = np.array([players[m - 1 - i] for i in range(m // 2)])
        keep = (p < n) & (q < n)
        lo, hi = np.minimum(p, q)[keep], np.maximum(p, q)[keep]
        rounds.append((lo, hi))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _rotate_batch(X: np.ndarray, V: np.ndarray | None, p: np.ndarray, q: np.ndarray) -> None:
    """One round of rotations on the stack X (k, m, m), in place.

    Rotation (p_i, q_i) zeroes X[:, p_i, q_i]; V accumulates the product.
    """
    apq = X[:, p, q]
    app = X[:, p, p]
    aqq = X[:, q, q]
    live = np.abs(apq) > 1e-300
    safe = np.where(live, apq, 1.0)
    tau = (aqq - app) / (2.0 * safe)
    with np.errstate(over="ignore"):
        t = np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
    t = np.where(tau == 0, 1.0, t)
    t = np.where(live, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # X <- R^T X R with R the product of the disjoint plane rotations
    k = np.arange(X.shape[0])[:, None]
    R = np.broadcast_to(np.eye(X.shape[1]), X.shape).copy()
    R[k, p, p] = c
    R[k, q, q] = c
    R[k, p, q] = s
    R[k, q, p] = -s
    X[...] = np.swapaxes(R, 1, 2) @ X @ R
    X[k, p, q] = 0.0
    X[k, q, p] = 0.0
    if V is not None:
        V[...] = V @ R


def _off_norm(X: np.ndarray) -> np.ndarray:
    """Off-diagonal Frobenius norm of each matrix in the stack."""
    d = np.diagonal(X, axis1=-2, axis2=-1)
    return np.linalg.norm(X - d[..., :, None] * np.eye(X.shape[-1]), axis=(-2, -1))


def _jacobi_stack(X: np.ndarray, tol: float, max_sweeps: int, vectors: bool, strict: bool = True):
    """Cyclic Jacobi on a stack of symmetric matrices, in place."""
    k, m, _ = X.shape
    V = np.broadcast_to(np.eye(m), (k, m, m)).copy() if vectors else None
    rounds = _round_robin(m)
    for _ in range(max_sweeps):
        off = float(_off_norm(X).max())
        if off < tol:
            return V, off
        for p, q in rounds:
            _rotate_batch(X, V, p, q)
    off = float(_off_norm(X).max())
    if off >= tol and strict:
        raise RuntimeError(f"Jacobi iteration did not converge (off-diagonal norm {off:.3e})")
    return V, off


def _jacobi_sweep(X: np.ndarray, rounds) -> np.ndarray:
    """One cyclic sweep on the stack X in place; returns the accumulated rotations."""
    V = np.broadcast_to(np.eye(X.shape[1]), X.shape).copy()
    for p, q in rounds:
        _rotate_batch(X, V, p, q)
    return V


def jacobi_eigenvalues(A: np.ndarray, tol: float | None = None, max_sweeps: int = 60,
                       block: int | None = None) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits all pairs in round-robin order; the rotations inside
    a round act on disjoint index pairs and are applied together.  Above
    ``BLOCK_FROM`` rows the pairs are blocks of ``block`` indices: every
    2b x 2b block pair is diagonalized by the same rotations and the
    accumulated rotation is applied to the full matrix by matrix products.
    """
    A = np.array(A, dtype=np.float64, copy=True)
    n = A.shape[0]
    if n == 1:
        return A.ravel().copy()
    if not np.allclose(A, A.T, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    tol = 1e-12 * n if tol is None else tol
    if block is None:
        block = BLOCK_SIZE if n >= BLOCK_FROM else 0
    if not block:
        _jacobi_stack(A[None], tol, max_sweeps, vectors=False)
        return np.sort(np.diag(A))
    nb = -(-n // block)
    nb += nb % 2
    N = nb * block
    B = np.zeros((N, N))
    B[:n, :n] = A
    # padded indices carry zero rows; rotations with a zero pivot are the identity
    blocks = np.arange(N).reshape(nb, block)
    rounds = _round_robin(nb)
    inner_rounds = _round_robin(2 * block)
    k = nb // 2
    ar = np.arange(k)
    # B is kept in a permuted basis: position i holds original index order[i]
    order = np.arange(N)
    where = np.arange(N)
    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(B - np.diag(np.diag(B))))
        log.debug("block sweep %d off-diagonal norm %.3e", sweep, off)
        if off < tol:
            break
        for bp, bq in rounds:
            # bring the paired blocks of this round next to each other
            new_order = np.concatenate([blocks[bp], blocks[bq]], axis=1).ravel()
            pos = where[new_order]
            B = B[pos[:, None], pos[None, :]]
            order = new_order
            where[order] = np.arange(N)
            B4 = B.reshape(k, 2 * block, k, 2 * block)
            X = B4[ar, :, ar, :]
            Q = _jacobi_sweep(X, inner_rounds)
            B = (np.swapaxes(Q, 1, 2) @ B.reshape(k, 2 * block, N)).reshape(N, N)
            cols = B.reshape(N, k, 2 * block).transpose(1, 0, 2) @ Q
            B = cols.transpose(1, 0, 2).reshape(N, N)
            B.reshape(k, 2 * block, k, 2 * block)[ar, :, ar, :] = X
    else:
        raise RuntimeError("block Jacobi iteration did not converge")
    return np.sort(np.diag(B)[where[:n]])


def spectrum_dense(g: SumGraphData, method: str = "auto", cap: int = DENSE_CAP) -> SpectrumReport:
    """Markov spectrum from the dense adjacency matrix.

    ``method`` is ``jacobi``, ``lapack`` or ``auto`` (Jacobi up to
    ``JACOBI_MAX`` vertices).
    """
    n = g.n_vertices
    if n > cap:
        raise ValueError(f"{n} vertices exceed the dense eigensolver cap {cap}")
    M = g.dense(np.float64) / g.degree
    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX else "lapack"
    if method == "jacobi":
        vals = jacobi_eigenvalues(M)
    elif method == "lapack":
        vals = np.linalg.eigvalsh(M)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectrumReport(np.sort(vals), g.degree, f"dense_{method}")


def max_discrepancy(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.sort(np.asarray(a)), np.sort(np.asarray(b))
    if a.shape != b.shape:
        return math.inf
    return float(np.abs(a - b).max(initial=0.0))


def nonreal_pair_values(G: GroupStructure, S: Sequence[int]) -> np.ndarray:
    """Sorted |T(c)| / |S| over pairs {c, -c} of non-real characters."""
    sums = all_char_sums(G, list(S)).ravel()
    neg = negate_character_codes(G)
    codes = np.arange(G.order)
    return np.sort(np.abs(sums[codes < neg]) / len(S))


# ---------------------------------------------------------------------------
# the semicircle


def semicircle_cdf(x):
    x = np.clip(np.asarray(x, dtype=np.float64), -2.0, 2.0)
    return 0.5 + (x * np.sqrt(4.0 - x * x) + 4.0 * np.arcsin(x / 2.0)) / (4.0 * math.pi)


def semicircle_density(x):
    x = np.asarray(x, dtype=np.float64)
    return np.where(np.abs(x) < 2.0, np.sqrt(np.maximum(4.0 - x * x, 0.0)) / (2.0 * math.pi), 0.0)


def _cdf_antiderivative(x: float) -> float:
    r = math.sqrt(max(4.0 - x * x, 0.0))
    return x / 2.0 + (-(r**3) / 3.0 + 4.0 * x * math.asin(x / 2.0) + 4.0 * r) / (4.0 * math.pi)


def _cdf_scalar(x: float) -> float:
    x = min(2.0, max(-2.0, x))
    return 0.5 + (x * math.sqrt(4.0 - x * x) + 4.0 * math.asin(x / 2.0)) / (4.0 * math.pi)


def _crossing(level: float, a: float, b: float) -> float:
    lo, hi = a, b
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _cdf_scalar(mid) < level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _abs_gap(level: float, a: float, b: float) -> float:
    """Integral of |level - F_sc| over [a, b]."""
    if b <= a:
        return 0.0
    Fa, Fb = _cdf_scalar(a), _cdf_scalar(b)
    Ga, Gb = _cdf_antiderivative(a), _cdf_antiderivative(b)
    if level <= Fa:
        return (Gb - Ga) - level * (b - a)
    if level >= Fb:
        return level * (b - a) - (Gb - Ga)
    x = _crossing(level, a, b)
    Gx = _cdf_antiderivative(x)
    return (level * (x - a) - (Gx - Ga)) + ((Gb - Gx) - level * (b - x))


def clamp_to_support(values) -> tuple[np.ndarray, int]:
    v = np.asarray(values, dtype=np.float64)
    out = (v < -2.0) | (v > 2.0)
    if out.any():
        log.info("clamped %d values into [-2, 2]", int(out.sum()))
    return np.clip(v, -2.0, 2.0), int(out.sum())


def w1_to_semicircle(values) -> float:
    """Exact L1 distance between the empirical CDF and the semicircle CDF."""
    v, _ = clamp_to_support(values)
    if v.size == 0:
        raise ValueError("empty sample")
    v = np.sort(v)
    m = len(v)
    pieces = []
    left = -2.0
    for k, x in enumerate(v):
        pieces.append(_abs_gap(k / m, left, float(x)))
        left = float(x)
    pieces.append(_abs_gap(1.0, left, 2.0))
    return math.fsum(pieces)


def emit_distribution_data(values, bins: int, grid: int = 401):
    """(cdf rows (x, F_emp, F_sc), histogram rows (lo, hi, density, semicircle))."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    v, _ = clamp_to_support(values)
    v = np.sort(v)
    m = len(v)
    xs = np.unique(np.concatenate([v, np.linspace(-2.0, 2.0, grid)]))
    femp = np.searchsorted(v, xs, side="right") / m
    cdf = np.column_stack([xs, femp, semicircle_cdf(xs)])
    counts, edges = np.histogram(v, bins=bins, range=(-2.0, 2.0))
    width = edges[1] - edges[0]
    dens = counts / (m * width)
    sc = (semicircle_cdf(edges[1:]) - semicircle_cdf(edges[:-1])) / width
    hist = np.column_stack([edges[:-1], edges[1:], dens, sc, counts])
    return cdf, hist


def semicircle_sample(n: int, seed: int = 0) -> np.ndarray:
    """n draws from the semicircle law by rejection sampling."""
    rng = np.random.default_rng(seed)
    out = []
    need = n
    while need > 0:
        x = rng.uniform(-2.0, 2.0, 2 * need + 16)
        u = rng.uniform(0.0, 1.0 / math.pi, x.size)
        x = x[u < semicircle_density(x)]
        out.append(x[:need])
        need -= len(out[-1])
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# verdicts


def normalize_and_judge(rep: SpectrumReport, q_n: int | None, enforce_bound: bool = True) -> SpectrumReport:
    """Drop one trivial eigenvalue, normalize the rest and judge them.

    Sets the c = 2 bound 2 sqrt(q_n) / d (raising when violated and
    ``enforce_bound``), the Ramanujan verdict |lambda| <= 2 sqrt(d - 1) / d,
    the sufficient criterion d >= q_n + 1 and the W1 distance.
    """
    vals = np.sort(np.asarray(rep.eigenvalues, dtype=np.float64))
    d = rep.degree
    trivial = int((np.abs(vals - 1.0) < TRIVIAL_TOL).sum())
    if trivial == 0:
        raise ValueError("no trivial eigenvalue")
    rest = vals[:-1]
    if trivial > 1:
        log.warning("trivial eigenvalue has multiplicity %d: graph is disconnected", trivial)
    max_abs = float(np.abs(rest).max(initial=0.0))
    bound = 2.0 * math.sqrt(q_n) / d if q_n is not None else None
    if enforce_bound and bound is not None and max_abs > bound + BOUND_TOL:
        raise SpectralBoundViolation(f"max |lambda| = {max_abs} exceeds 2 sqrt(q^n)/d = {bound}")
    ram = max_abs <= 2.0 * math.sqrt(max(d - 1, 0)) / d + BOUND_TOL if d > 1 else max_abs <= BOUND_TOL
    if d > 1 and rest.size:
        normalized = rest * d / math.sqrt(d - 1)
        clamped = int(((normalized < -2.0) | (normalized > 2.0)).sum())
        w1 = w1_to_semicircle(normalized)
    else:
        normalized, clamped, w1 = np.zeros(0), 0, None
    return replace(
        rep,
        eigenvalues=vals,
        trivial_count=trivial,
        normalized_nontrivial=normalized,
        w1_semicircle=w1,
        max_nontrivial_abs=max_abs,
        c2_bound=bound,
        ramanujan=bool(ram),
        criterion_dn_ge_qn_plus_1=(d >= q_n + 1) if q_n is not None else None,
        connected=trivial == 1,
        clamped=clamped,
    )


def block_matrix(alpha: complex, beta: complex) -> np.ndarray:
    return np.array([[0.0, alpha], [beta, 0.0]], dtype=np.complex128)


def block_eigenvalues(alpha: complex, beta: complex) -> tuple[complex, complex]:
    """The predicted pair +-sqrt(alpha beta)."""
    r = np.sqrt(complex(alpha) * complex(beta))
    return r, -r


def trace_identity_gap(rep: SpectrumReport, n_loops: int) -> float:
    return abs(rep.degree * math.fsum(rep.eigenvalues) - n_loops)
