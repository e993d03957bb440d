"""Cayley sum graphs: x ~ y iff x + y lies in S.

Vertices are element indices of a :class:`GroupStructure`.  Row x of the
adjacency has the |S| distinct neighbours s - x; a loop sits at x when
2x is in S and contributes one diagonal bit.  Dense analyses work on a
packed bit matrix; above ``DENSE_CAP`` vertices only the neighbour table
is kept and edges are streamed.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .abgroup import GroupStructure

DENSE_CAP = 20_000
EXACT_INDEPENDENCE_CAP = 60


@dataclass
class SumGraphData:
    n_vertices: int
    S: list[int]
    nbrs: np.ndarray  # (n, d) sorted neighbour indices per row
    bits: np.ndarray | None  # (n, ceil(n/8)) packed rows, None in streaming mode
    degree: int
    loop_vertices: list[int]
    rows: list[list[int]] | None = None  # only for irregular control graphs

    @property
    def streaming(self) -> bool:
        return self.bits is None

    @property
    def n_loops(self) -> int:
        return len(self.loop_vertices)

    def dense(self, dtype=np.uint8) -> np.ndarray:
        if self.bits is None:
            raise ValueError("graph is in streaming mode")
        return np.unpackbits(self.bits, axis=1, count=self.n_vertices).astype(dtype, copy=False)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.nbrs[u]
        k = np.searchsorted(row, v)
        return bool(k < len(row) and row[k] == v)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Undirected edges (u, v), u <= v, in lexicographic order."""
        for u in range(self.n_vertices):
            for v in self.nbrs[u]:
                if v >= u:
                    yield u, int(v)


def _pack(n: int, nbrs: np.ndarray) -> np.ndarray:
    A = np.zeros((n, n), dtype=np.uint8)
    A[np.repeat(np.arange(n), nbrs.shape[1]), nbrs.ravel()] = 1
    return np.packbits(A, axis=1)


def from_neighbours(nbrs: np.ndarray, S: Sequence[int] = (), dense_cap: int = DENSE_CAP) -> SumGraphData:
    nbrs = np.sort(np.asarray(nbrs, dtype=np.int64), axis=1)
    n, d = nbrs.shape
    if (nbrs[:, 1:] == nbrs[:, :-1]).any():
        raise ValueError("repeated neighbour in a row")
    loops = [u for u in range(n) if (nbrs[u] == u).any()]
    bits = _pack(n, nbrs) if n <= dense_cap else None
    return SumGraphData(n, sorted(int(s) for s in S), nbrs, bits, d, loops)


def build_sum_graph(G: GroupStructure, S: Sequence[int], dense_cap: int = DENSE_CAP) -> SumGraphData:
    """Sum graph of G with connection set S (element indices)."""
    S = sorted(set(int(s) for s in S))
    if not S:
        raise ValueError("S must be nonempty")
    n = G.order
    if G.rank:
        dims = np.array(G.dims, dtype=np.int64)
        diff = (G.dlog[np.array(S)][None, :, :] - G.dlog[:, None, :]) % dims
        nbrs = G.code_to_index[np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), G.dims)]
    else:
        nbrs = np.zeros((1, len(S)), dtype=np.int64)
    return from_neighbours(nbrs, S, dense_cap)


def graph_from_edges(n: int, edges: Sequence[tuple[int, int]]) -> SumGraphData:
    """A graph given by its edge list (for controls); need not be regular."""
    rows: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        rows[u].add(v)
        rows[v].add(u)
    d = max(len(r) for r in rows)
    if all(len(r) == d for r in rows):
        return from_neighbours(np.array([sorted(r) for r in rows]), ())
    A = np.zeros((n, n), dtype=np.uint8)
    for u, r in enumerate(rows):
        A[u, list(r)] = 1
    return SumGraphData(n, [], np.zeros((n, 0), dtype=np.int64), np.packbits(A, axis=1), -1,
                        [u for u in range(n) if u in rows[u]], [sorted(r) for r in rows])


def _rows(g: SumGraphData) -> list[list[int]]:
    if g.rows is not None:
        return g.rows
    return [list(map(int, r)) for r in g.nbrs]


def parse_edges(text: str) -> tuple[tuple[int, int, int], list[tuple[int, int]]]:
    lines = text.strip().splitlines()
    n, d, loops = map(int, lines[0].split())
    return (n, d, loops), [tuple(map(int, ln.split())) for ln in lines[1:]]


def format_edges(g: SumGraphData) -> str:
    out = [f"{g.n_vertices} {g.degree} {g.n_loops}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# analyses


def is_connected(g: SumGraphData) -> bool:
    rows = _rows(g)
    seen = np.zeros(g.n_vertices, dtype=bool)
    seen[0] = True
    dq = deque([0])
    count = 1
    while dq:
        u = dq.popleft()
        for v in rows[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                dq.append(v)
    return count == g.n_vertices


def common_neighbour_stats(g: SumGraphData, chunk: int = 1024) -> tuple[int, int, int]:
    """(max raw common neighbours, max over distinct third vertices, C4 count).

    Raw counts are |N(u) & N(v)| over unordered pairs u != v.  The distinct
    count drops u and v themselves, which is what a K_{2,3} or C_4 copy
    with distinct vertices sees.
    """
    n = g.n_vertices
    if n < 2:
        return 0, 0, 0
    A = g.dense(np.float32)
    diag = np.diag(A).astype(np.int64)
    max_raw = max_dist = 0
    c4_twice = 0
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        P = np.rint(A[lo:hi] @ A.T).astype(np.int64)
        Auv = A[lo:hi].astype(np.int64)
        dist = P - diag[lo:hi, None] * Auv - diag[None, :] * Auv
        rows = np.arange(lo, hi)
        P[rows - lo, rows] = 0
        dist[rows - lo, rows] = 0
        max_raw = max(max_raw, int(P.max()))
        max_dist = max(max_dist, int(dist.max()))
        # pairs (u, v) with u < v only
        upper = np.arange(n)[None, :] > rows[:, None]
        c4_twice += int((dist * (dist - 1) // 2)[upper].sum())
    return max_raw, max_dist, c4_twice // 2


def difference_profile_max(G: GroupStructure, S: Sequence[int]) -> int:
    """max over d != 0 of #{(s, t) in S^2 : s - t = d}.

    In a sum graph N(u) = S - u, so |N(u) & N(v)| only depends on u - v and
    equals this representation count.
    """
    S = list(S)
    counts: dict[int, int] = {}
    negs = [G.neg_idx(t) for t in S]
    for s in S:
        for nt in negs:
            d = G.add_idx(s, nt)
            if d != G.identity_index:
                counts[d] = counts.get(d, 0) + 1
    return max(counts.values(), default=0)


def _adjacency_sets(g: SumGraphData) -> list[set[int]]:
    rows = [set(r) for r in _rows(g)]
    for u in range(g.n_vertices):
        rows[u].discard(u)
    return rows


def greedy_independent_set(g: SumGraphData, loops: str = "ignore") -> list[int]:
    """Repeatedly take a vertex of least current degree (ties by index).

    ``loops="ignore"`` allows looped vertices; ``"exclude"`` forbids them.
    """
    adj = _adjacency_sets(g)
    alive = set(range(g.n_vertices))
    if loops == "exclude":
        alive -= set(g.loop_vertices)
    elif loops != "ignore":
        raise ValueError("loops must be 'ignore' or 'exclude'")
    deg = {u: len(adj[u] & alive) for u in alive}
    chosen = []
    heap = [(deg[u], u) for u in alive]
    heapq.heapify(heap)
    while heap:
        du, u = heapq.heappop(heap)
        if u not in alive or du != deg[u]:
            continue
        chosen.append(u)
        removed = {u} | (adj[u] & alive)
        alive -= removed
        touched = set()
        for w in removed:
            for x in adj[w]:
                if x in alive:
                    deg[x] -= 1
                    touched.add(x)
        for x in touched:
            heapq.heappush(heap, (deg[x], x))
    return sorted(chosen)


def exact_independence_number(g: SumGraphData, loops: str = "ignore") -> int:
    """Maximum independent set size by bitmask branch and bound."""
    n = g.n_vertices
    adj = _adjacency_sets(g)
    masks = [sum(1 << v for v in adj[u]) for u in range(n)]
    start = (1 << n) - 1
    if loops == "exclude":
        for u in g.loop_vertices:
            start &= ~(1 << u)
    best = 0

    def rec(cand: int, size: int):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + bin(cand).count("1") <= best:
            return
        # branch on a vertex of maximum degree inside cand
        v, vdeg = -1, -1
        c = cand
        while c:
            low = c & -c
            u = low.bit_length() - 1
            du = bin(masks[u] & cand).count("1")
            if du > vdeg:
                v, vdeg = u, du
            c ^= low
        if vdeg == 0:
            best = max(best, size + bin(cand).count("1"))
            return
        rec(cand & ~(1 << v) & ~masks[v], size + 1)
        rec(cand & ~(1 << v), size)

    rec(start, 0)
    return best


@dataclass
class CombinatoricsReport:
    connected: bool
    max_common_neighbors: int
    max_common_neighbors_distinct: int
    k23_free: bool
    c4_count: int
    independence_lower: int
    independence_upper: int | None


def combinatorics_report(g: SumGraphData, exact_independence_cap: int = EXACT_INDEPENDENCE_CAP,
                         loops: str = "ignore") -> CombinatoricsReport:
    if g.streaming:
        raise ValueError("dense analyses need a graph below the dense cap")
    raw, dist, c4 = common_neighbour_stats(g)
    lower = len(greedy_independent_set(g, loops))
    upper = exact_independence_number(g, loops) if g.n_vertices <= exact_independence_cap else None
    return CombinatoricsReport(
        connected=is_connected(g),
        max_common_neighbors=raw,
        max_common_neighbors_distinct=dist,
        k23_free=dist <= 2,
        c4_count=c4,
        independence_lower=lower,
        independence_upper=upper,
    )


@dataclass
class DegreeRatio:
    degree: int
    vertices: int
    dimension: int
    ratio: float
    within: bool


def ratio_check_degree(g: SumGraphData, dimension: int = 2) -> DegreeRatio:
    """d / |V|^(1/dim); the shipped jacobian graphs have dim = 2."""
    ratio = g.degree / g.n_vertices ** (1.0 / dimension)
    return DegreeRatio(g.degree, g.n_vertices, dimension, ratio, 0.5 <= ratio <= 2.0)


def independence_scaling(g: SumGraphData) -> float:
    """Greedy independent set size divided by n^(3/4)."""
    return len(greedy_independent_set(g)) / g.n_vertices**0.75


def connectivity_predicted(q_n: int, s_size: int) -> bool:
    """Sufficient condition |S| > 2 sqrt(q^n) for connectivity."""
    return s_size * s_size > 4 * q_n
