"""Exact 2-5-node graphlet and orbit statistics.

Graphlets are the 30 connected isomorphism classes of 2-5-node graphs,
numbered in the conventional order (sizes ascending, edge count ascending
within a size); their 73 automorphism orbits are numbered 0-72 with orbit 0
the plain edge endpoint, so a node's orbit-0 count equals its degree.  The
numbering is a community convention, so the tables below are shipped as
static data; the test suite re-derives every derivable property of them
(orbit partitions, dependency counts, contiguity) from first principles.

Counting is exact: every connected node subset of size 2-5 is enumerated
once (Wernicke's ESU recursion-tree property) and classified through a
precomputed bitmask table, with the inner loop JIT-compiled.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ValidationError
from .graph import Network

N_GRAPHLETS = 30
N_ORBITS = 73

# id -> (node count, canonical edges, orbit id of each vertex)
_SPEC: dict[int, tuple[int, tuple[tuple[int, int], ...], tuple[int, ...]]] = {
    0: (2, ((0, 1),), (0, 0)),
    # --- 3 nodes ---
    1: (3, ((0, 1), (1, 2)), (1, 2, 1)),
    2: (3, ((0, 1), (0, 2), (1, 2)), (3, 3, 3)),
    # --- 4 nodes ---
    3: (4, ((0, 1), (1, 2), (2, 3)), (4, 5, 5, 4)),
    4: (4, ((0, 1), (0, 2), (0, 3)), (7, 6, 6, 6)),
    5: (4, ((0, 1), (1, 2), (2, 3), (0, 3)), (8, 8, 8, 8)),
    6: (4, ((0, 1), (1, 2), (1, 3), (2, 3)), (9, 11, 10, 10)),
    7: (4, ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3)), (12, 13, 13, 12)),
    8: (4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), (14, 14, 14, 14)),
    # --- 5 nodes, 4 edges ---
    9: (5, ((0, 1), (1, 2), (2, 3), (3, 4)), (15, 16, 17, 16, 15)),
    10: (5, ((0, 1), (1, 2), (2, 3), (2, 4)), (18, 20, 21, 19, 19)),
    11: (5, ((0, 1), (0, 2), (0, 3), (0, 4)), (23, 22, 22, 22, 22)),
    # --- 5 nodes, 5 edges ---
    12: (5, ((0, 2), (1, 3), (2, 3), (2, 4), (3, 4)), (24, 24, 26, 26, 25)),
    13: (5, ((0, 1), (1, 2), (2, 3), (2, 4), (3, 4)), (27, 28, 30, 29, 29)),
    14: (5, ((0, 2), (1, 2), (2, 3), (2, 4), (3, 4)), (31, 31, 33, 32, 32)),
    15: (5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)), (34, 34, 34, 34, 34)),
    16: (5, ((0, 1), (1, 2), (2, 3), (3, 4), (1, 4)), (35, 38, 37, 36, 37)),
    # --- 5 nodes, 6 edges ---
    17: (5, ((0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)), (39, 42, 41, 40, 40)),
    18: (5, ((0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)), (44, 43, 43, 43, 43)),
    19: (5, ((0, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)), (45, 48, 47, 47, 46)),
    20: (5, ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)), (50, 50, 49, 49, 49)),
    21: (5, ((0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 4)), (51, 51, 53, 53, 52)),
    # --- 5 nodes, 7 edges ---
    22: (5, ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)),
         (55, 55, 54, 54, 54)),
    23: (5, ((0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)),
         (56, 58, 57, 57, 57)),
    24: (5, ((0, 1), (1, 2), (2, 3), (0, 4), (1, 4), (2, 4), (3, 4)),
         (59, 60, 60, 59, 61)),
    25: (5, ((0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)),
         (62, 63, 63, 64, 64)),
    # --- 5 nodes, 8-10 edges ---
    26: (5, ((0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)),
         (65, 66, 66, 67, 67)),
    27: (5, ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 4), (3, 4)),
         (68, 68, 68, 68, 69)),
    28: (5, ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)),
         (70, 70, 71, 71, 71)),
    29: (5, ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4),
             (3, 4)),
         (72, 72, 72, 72, 72)),
}

GRAPHLET_SIZES: tuple[int, ...] = tuple(_SPEC[g][0] for g in range(N_GRAPHLETS))
GRAPHLET_EDGES: tuple[tuple[tuple[int, int], ...], ...] = tuple(
    _SPEC[g][1] for g in range(N_GRAPHLETS)
)
ORBIT_ASSIGNMENTS: tuple[tuple[int, ...], ...] = tuple(
    _SPEC[g][2] for g in range(N_GRAPHLETS)
)

ORBIT_TO_GRAPHLET: tuple[int, ...] = tuple(
    g for g in range(N_GRAPHLETS) for _ in sorted(set(ORBIT_ASSIGNMENTS[g]))
)

# How many orbits are "touched" by the connected induced subgraphs of each
# graphlet at each orbit's position (the orbit itself included).  Used to
# down-weight redundant orbits: weight_i = 1 - log(dep_i)/log(73).
ORBIT_DEPENDENCY_COUNTS: tuple[int, ...] = (
    1, 2, 2, 2,                      # G0-G2
    3, 4, 3, 3, 4, 3, 4, 4, 4, 4, 3,  # G3-G8
    4, 6, 5,                         # G9
    4, 5, 6, 6,                      # G10
    4, 4,                            # G11
    5, 5, 8,                         # G12
    4, 6, 6, 7,                      # G13
    5, 6, 6,                         # G14
    6,                               # G15
    5, 6, 7, 7,                      # G16
    5, 7, 7, 7,                      # G17
    6, 5,                            # G18
    5, 6, 8, 8,                      # G19
    6, 6,                            # G20
    8, 6, 9,                         # G21
    6, 6,                            # G22
    4, 6, 6,                         # G23
    8, 9, 6,                         # G24
    6, 8, 8,                         # G25
    6, 7, 7,                         # G26
    8, 5,                            # G27
    6, 6,                            # G28
    4,                               # G29
)

GDC_WEIGHTS: np.ndarray = 1.0 - np.log(np.array(ORBIT_DEPENDENCY_COUNTS, dtype=float)) / math.log(N_ORBITS)


def _pair_index(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def _build_lookup(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Map every labeled k-node graph (as an edge bitmask) to its graphlet id
    and the orbit of each labeled position; -1 where disconnected."""
    pairs = _pair_index(k)
    n_masks = 1 << len(pairs)
    gid = np.full(n_masks, -1, dtype=np.int16)
    orb = np.full((n_masks, k), -1, dtype=np.int16)
    candidates: dict[tuple[int, tuple[int, ...]], list[int]] = {}
    cand_adj: dict[int, tuple[frozenset[int], ...]] = {}
    for g in range(N_GRAPHLETS):
        if GRAPHLET_SIZES[g] != k:
            continue
        edges = GRAPHLET_EDGES[g]
        adj: list[set[int]] = [set() for _ in range(k)]
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        degseq = tuple(sorted(len(s) for s in adj))
        candidates.setdefault((len(edges), degseq), []).append(g)
        cand_adj[g] = tuple(frozenset(s) for s in adj)

    for mask in range(n_masks):
        adj_bits = [0] * k
        m = 0
        for p, (i, j) in enumerate(pairs):
            if mask >> p & 1:
                adj_bits[i] |= 1 << j
                adj_bits[j] |= 1 << i
                m += 1
        # connectivity by bitset flood fill from vertex 0
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            v = frontier
            while v:
                low = v & -v
                nxt |= adj_bits[low.bit_length() - 1]
                v ^= low
            frontier = nxt & ~seen
            seen |= nxt
        if seen != (1 << k) - 1:
            continue
        degseq = tuple(sorted(bin(b).count("1") for b in adj_bits))
        for g in candidates.get((m, degseq), ()):
            adj_g = cand_adj[g]
            orbits_g = ORBIT_ASSIGNMENTS[g]
            hit = None
            for perm in itertools.permutations(range(k)):
                ok = True
                for p, (i, j) in enumerate(pairs):
                    if ((mask >> p & 1) == 1) != (perm[j] in adj_g[perm[i]]):
                        ok = False
                        break
                if ok:
                    hit = perm
                    break
            if hit is not None:
                gid[mask] = g
                for pos in range(k):
                    orb[mask, pos] = orbits_g[hit[pos]]
                break
        if gid[mask] < 0:
            raise AssertionError(f"no graphlet matches connected mask {mask} at k={k}")
    return gid, orb


_TABLES: dict[int, tuple[np.ndarray, np.ndarray]] | None = None


def _tables() -> dict[int, tuple[np.ndarray, np.ndarray]]:
    global _TABLES
    if _TABLES is None:
        _TABLES = {k: _build_lookup(k) for k in (3, 4, 5)}
    return _TABLES


@njit(cache=True, nogil=True)
def _count_kernel(n, indptr, indices, bits, gid3, orb3, gid4, orb4, gid5, orb5):
    freq = np.zeros(N_GRAPHLETS, dtype=np.int64)
    orbits = np.zeros((n, N_ORBITS), dtype=np.int64)
    sub = np.empty(5, dtype=np.int64)
    pushed = np.empty(6, dtype=np.int64)
    ext_buf = np.empty(5 * n if n > 0 else 1, dtype=np.int64)
    seg_start = np.empty(6, dtype=np.int64)
    seg_end = np.empty(6, dtype=np.int64)
    mark = np.zeros(n, dtype=np.int8)
    tmp = np.empty(5, dtype=np.int64)

    for root in range(n):
        mark[root] = 1
        cnt = 0
        for e in range(indptr[root], indptr[root + 1]):
            w = indices[e]
            if w > root:
                mark[w] = 1
                ext_buf[cnt] = w
                cnt += 1
        sub[0] = root
        seg_start[1] = 0
        seg_end[1] = cnt
        d = 1
        while d >= 1:
            if seg_end[d] > seg_start[d]:
                seg_end[d] -= 1
                w = ext_buf[seg_end[d]]
                s = d + 1
                # classify the subset sub[0:d] + {w}
                for i in range(d):
                    tmp[i] = sub[i]
                tmp[d] = w
                if s == 2:
                    freq[0] += 1
                    orbits[tmp[0], 0] += 1
                    orbits[tmp[1], 0] += 1
                else:
                    msk = 0
                    p = 0
                    for i in range(s):
                        vi = tmp[i]
                        for j in range(i + 1, s):
                            vj = tmp[j]
                            if bits[vi, vj >> 6] >> np.uint64(vj & 63) & np.uint64(1):
                                msk |= 1 << p
                            p += 1
                    if s == 3:
                        freq[gid3[msk]] += 1
                        for i in range(3):
                            orbits[tmp[i], orb3[msk, i]] += 1
                    elif s == 4:
                        freq[gid4[msk]] += 1
                        for i in range(4):
                            orbits[tmp[i], orb4[msk, i]] += 1
                    else:
                        freq[gid5[msk]] += 1
                        for i in range(5):
                            orbits[tmp[i], orb5[msk, i]] += 1
                if s < 5:
                    # push: child candidates = remaining ext + exclusive nbrs of w
                    base = d * n
                    mcnt = 0
                    for t in range(seg_start[d], seg_end[d]):
                        ext_buf[base + mcnt] = ext_buf[t]
                        mcnt += 1
                    for e in range(indptr[w], indptr[w + 1]):
                        u = indices[e]
                        if u > root and mark[u] == 0:
                            mark[u] = d + 1
                            ext_buf[base + mcnt] = u
                            mcnt += 1
                    sub[d] = w
                    pushed[d + 1] = w
                    seg_start[d + 1] = base
                    seg_end[d + 1] = base + mcnt
                    d += 1
            else:
                if d >= 2:
                    w = pushed[d]
                    for e in range(indptr[w], indptr[w + 1]):
                        u = indices[e]
                        if mark[u] == d:
                            mark[u] = 0
                d -= 1
        # clear root-level marks
        mark[root] = 0
        for e in range(indptr[root], indptr[root + 1]):
            w = indices[e]
            if w > root and mark[w] == 1:
                mark[w] = 0
    return freq, orbits


@dataclass(frozen=True)
class OrbitCounts:
    """Per-node counts of each of the 73 orbits, rows aligned with ``nodes``."""

    nodes: tuple[str, ...]
    counts: np.ndarray  # (n, 73) int64

    def row(self, node: str) -> np.ndarray:
        try:
            i = self.nodes.index(node)
        except ValueError:
            raise ValidationError(f"unknown node {node!r}") from None
        return self.counts[i]


def count_graphlets(net: Network) -> tuple[np.ndarray, OrbitCounts]:
    """Graphlet frequencies (30-vector) and per-node orbit counts, one pass."""
    n = net.n_nodes
    nodes = net.sorted_nodes
    if n == 0:
        return (
            np.zeros(N_GRAPHLETS, dtype=np.int64),
            OrbitCounts(nodes=nodes, counts=np.zeros((0, N_ORBITS), dtype=np.int64)),
        )
    indptr, indices = net.csr()
    words = (n + 63) // 64
    bits = np.zeros((n, words), dtype=np.uint64)
    idx = net.node_index
    for u, v in net.edges:
        iu, iv = idx[u], idx[v]
        bits[iu, iv >> 6] |= np.uint64(1) << np.uint64(iv & 63)
        bits[iv, iu >> 6] |= np.uint64(1) << np.uint64(iu & 63)
    tabs = _tables()
    freq, orbits = _count_kernel(
        n, indptr, indices, bits,
        tabs[3][0], tabs[3][1], tabs[4][0], tabs[4][1], tabs[5][0], tabs[5][1],
    )
    return freq, OrbitCounts(nodes=nodes, counts=orbits)


def graphlet_frequencies(net: Network) -> np.ndarray:
    return count_graphlets(net)[0]


def count_orbits(net: Network) -> OrbitCounts:
    return count_graphlets(net)[1]


def _orbit_distribution(column: np.ndarray) -> dict[int, float]:
    """Scaled, normalized distribution of nonzero orbit counts: N(k) ~ d(k)/k."""
    ks, d = np.unique(column[column > 0], return_counts=True)
    if len(ks) == 0:
        return {}
    s = d / ks
    total = s.sum()
    return {int(k): float(v / total) for k, v in zip(ks, s)}


def gdd_agreement_from_counts(
    counts_a: np.ndarray, counts_b: np.ndarray, mean: str = "arithmetic"
) -> float:
    """Orbit-wise agreement between two networks' orbit-count spectra.

    For each orbit the per-k node counts are scaled by 1/k, normalized, and
    compared by scaled Euclidean distance; agreement is one minus that
    distance, averaged over the 73 orbits.  Orbits empty in both networks
    agree perfectly by convention.
    """
    if mean not in ("arithmetic", "geometric"):
        raise ValidationError(f"unknown mean mode {mean!r}")
    per_orbit = np.empty(N_ORBITS)
    for j in range(N_ORBITS):
        na = _orbit_distribution(counts_a[:, j])
        nb = _orbit_distribution(counts_b[:, j])
        if not na and not nb:
            per_orbit[j] = 1.0
            continue
        sq = 0.0
        for k in sorted(set(na) | set(nb)):
            diff = na.get(k, 0.0) - nb.get(k, 0.0)
            sq += diff * diff
        per_orbit[j] = 1.0 - math.sqrt(sq / 2.0)
    if mean == "arithmetic":
        return float(np.mean(per_orbit))
    if np.any(per_orbit <= 0.0):
        return 0.0
    return float(np.exp(np.mean(np.log(per_orbit))))


def gdd_agreement(a: Network, b: Network, mean: str = "arithmetic") -> float:
    return gdd_agreement_from_counts(
        count_orbits(a).counts, count_orbits(b).counts, mean=mean
    )
