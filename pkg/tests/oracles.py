"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive: exhaustive subset enumeration,
explicit path listing, exact rational arithmetic.  None of it shares code
with the package beyond the frozen graphlet/orbit numbering tables, which
are conventional data, not algorithm.  Slow is fine; wrong is not.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from dynanet.graph import Network
from dynanet.graphlets import (
    GRAPHLET_EDGES,
    GRAPHLET_SIZES,
    N_GRAPHLETS,
    N_ORBITS,
    ORBIT_ASSIGNMENTS,
)

# ---------------------------------------------------------------------------
# random graphs


def random_edge_pairs(rng: np.random.Generator, n: int, density: float) -> list[tuple[int, int]]:
    """Each of the C(n,2) pairs kept independently with probability density."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = rng.random(len(pairs)) < density
    return [p for p, keep in zip(pairs, mask) if keep]


def int_network(n: int, pairs: list[tuple[int, int]]) -> Network:
    names = [f"n{i:03d}" for i in range(n)]
    return Network.build(names, [(names[i], names[j]) for i, j in pairs])


def adjacency_sets(net: Network) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {v: set() for v in net.nodes}
    for u, v in net.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


# ---------------------------------------------------------------------------
# graphlet oracle: classify every induced connected 2-5 node subgraph by
# trying vertex permutations against the canonical edge tables


def _pack(k: int, edges: set[tuple[int, int]]) -> int:
    """Bitmask over the C(k,2) vertex pairs in lexicographic order."""
    mask = 0
    pos = 0
    for a in range(k):
        for b in range(a + 1, k):
            if (a, b) in edges or (b, a) in edges:
                mask |= 1 << pos
            pos += 1
    return mask


def _unpack(k: int, mask: int) -> set[tuple[int, int]]:
    edges = set()
    pos = 0
    for a in range(k):
        for b in range(a + 1, k):
            if mask >> pos & 1:
                edges.add((a, b))
            pos += 1
    return edges


def _connected(k: int, edges: set[tuple[int, int]]) -> bool:
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for a, b in edges:
            for u, v in ((a, b), (b, a)):
                if u == x and v not in seen:
                    seen.add(v)
                    frontier.append(v)
    return len(seen) == k


def automorphism_orbits(k: int, edges: set[tuple[int, int]]) -> list[int]:
    """Orbit label per vertex: smallest vertex reachable via an automorphism."""
    label = list(range(k))
    for perm in itertools.permutations(range(k)):
        mapped = {tuple(sorted((perm[a], perm[b]))) for a, b in edges}
        if mapped == {tuple(sorted(e)) for e in edges}:
            for v in range(k):
                label[v] = min(label[v], label[perm[v]])
    # canonicalize labels to 0..(n_orbits-1) in vertex order
    remap: dict[int, int] = {}
    return [remap.setdefault(l, len(remap)) for l in label]


class GraphletLookup:
    """For every labeled graph on k vertices: graphlet id + orbit per vertex.

    Built once by permutation matching against the canonical tables; the
    per-subset classification is then a dict hit on the packed bitmask.
    """

    def __init__(self):
        self.tables: dict[int, dict[int, tuple[int, tuple[int, ...]]]] = {}
        canon = {}  # (k, packed canonical mask) -> graphlet id
        for g in range(N_GRAPHLETS):
            k = GRAPHLET_SIZES[g]
            canon[(k, _pack(k, set(GRAPHLET_EDGES[g])))] = g
        for k in (2, 3, 4, 5):
            table: dict[int, tuple[int, tuple[int, ...]]] = {}
            n_pairs = k * (k - 1) // 2
            for mask in range(1 << n_pairs):
                edges = _unpack(k, mask)
                if not _connected(k, edges):
                    continue
                hit = None
                for perm in itertools.permutations(range(k)):
                    mapped = {tuple(sorted((perm[a], perm[b]))) for a, b in edges}
                    key = (k, _pack(k, mapped))
                    if key in canon:
                        g = canon[key]
                        # vertex v plays the role perm[v] in the canonical copy
                        orbits = tuple(
                            ORBIT_ASSIGNMENTS[g][perm[v]] for v in range(k)
                        )
                        hit = (g, orbits)
                        break
                assert hit is not None, f"unclassified connected graph k={k} mask={mask}"
                table[mask] = hit
            self.tables[k] = table

    def n_connected_labeled(self, k: int) -> int:
        return len(self.tables[k])


_LOOKUP: GraphletLookup | None = None


def graphlet_lookup() -> GraphletLookup:
    global _LOOKUP
    if _LOOKUP is None:
        _LOOKUP = GraphletLookup()
    return _LOOKUP


def brute_force_graphlets(net: Network) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """(30-vector of graphlet frequencies, per-node 73-orbit counts)."""
    lookup = graphlet_lookup()
    nodes = sorted(net.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    bits = [0] * len(nodes)
    for u, v in net.edges:
        bits[index[u]] |= 1 << index[v]
        bits[index[v]] |= 1 << index[u]
    freq = np.zeros(N_GRAPHLETS, dtype=np.int64)
    orbits = np.zeros((len(nodes), N_ORBITS), dtype=np.int64)
    for k in (2, 3, 4, 5):
        if len(nodes) < k:
            continue
        table = lookup.tables[k]
        for combo in itertools.combinations(range(len(nodes)), k):
            mask = 0
            pos = 0
            for a in range(k):
                row = bits[combo[a]]
                for b in range(a + 1, k):
                    if row >> combo[b] & 1:
                        mask |= 1 << pos
                    pos += 1
            hit = table.get(mask)
            if hit is None:
                continue
            g, orbs = hit
            freq[g] += 1
            for v in range(k):
                orbits[combo[v], orbs[v]] += 1
    return freq, {v: orbits[index[v]] for v in nodes}


def gdd_agreement_reference(
    counts_a: dict[str, np.ndarray] | np.ndarray,
    counts_b: dict[str, np.ndarray] | np.ndarray,
    mean: str = "arithmetic",
) -> float:
    """Straight-line recomputation of the scaled-distribution agreement."""

    def matrix(counts):
        if isinstance(counts, dict):
            return np.array([np.asarray(row) for row in counts.values()])
        return np.asarray(counts)

    ca, cb = matrix(counts_a), matrix(counts_b)
    per_orbit = []
    for j in range(N_ORBITS):
        dists = []
        for col in (ca[:, j], cb[:, j]):
            d: dict[int, float] = {}
            for k in col:
                k = int(k)
                if k >= 1:
                    d[k] = d.get(k, 0) + 1
            scaled = {k: cnt / k for k, cnt in d.items()}
            total = sum(scaled.values())
            dists.append({k: s / total for k, s in scaled.items()} if total else {})
        da, db = dists
        if not da and not db:
            per_orbit.append(1.0)
            continue
        support = set(da) | set(db)
        sq = sum((da.get(k, 0.0) - db.get(k, 0.0)) ** 2 for k in support)
        per_orbit.append(1.0 - math.sqrt(sq / 2.0))
    if mean == "arithmetic":
        return float(np.mean(per_orbit))
    if any(a <= 0.0 for a in per_orbit):
        return 0.0
    return float(math.exp(np.mean([math.log(a) for a in per_orbit])))


# ---------------------------------------------------------------------------
# path-based centrality oracles


def bfs_dist(adj: dict[str, set[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def enumerate_shortest_paths(
    adj: dict[str, set[str]], s: str, t: str
) -> list[tuple[str, ...]]:
    """All shortest s-t paths, by walking the BFS distance field backward."""
    dist = bfs_dist(adj, s)
    if t not in dist:
        return []
    paths = []

    def back(v, suffix):
        if v == s:
            paths.append((s,) + suffix)
            return
        for u in adj[v]:
            if dist.get(u, -1) == dist[v] - 1:
                back(u, (v,) + suffix)

    back(t, ())
    return paths


def betweenness_oracle(net: Network) -> dict[str, float]:
    adj = adjacency_sets(net)
    nodes = sorted(net.nodes)
    out = {v: 0.0 for v in nodes}
    for s, t in itertools.combinations(nodes, 2):
        paths = enumerate_shortest_paths(adj, s, t)
        if not paths:
            continue
        for path in paths:
            for v in path[1:-1]:
                out[v] += 1.0 / len(paths)
    return out


def closeness_oracle(net: Network) -> dict[str, float]:
    adj = adjacency_sets(net)
    out = {}
    for v in net.nodes:
        total = sum(d for u, d in bfs_dist(adj, v).items() if u != v)
        out[v] = 1.0 / total if total > 0 else 0.0
    return out


def eccentricity_oracle(net: Network) -> dict[str, float]:
    adj = adjacency_sets(net)
    out = {}
    for v in net.nodes:
        far = max(bfs_dist(adj, v).values())
        out[v] = 1.0 / far if far > 0 else 0.0
    return out


def kcore_oracle(net: Network) -> dict[str, int]:
    """Coreness by running the naive peel for every candidate k."""
    out = {v: 0 for v in net.nodes}
    for k in range(1, net.n_nodes + 1):
        adj = adjacency_sets(net)
        changed = True
        while changed:
            doomed = [v for v, nb in adj.items() if len(nb) < k]
            changed = bool(doomed)
            for v in doomed:
                for u in adj[v]:
                    adj[u].discard(v)
                del adj[v]
        if not adj:
            break
        for v in adj:
            out[v] = k
    return out


def clustering_oracle(net: Network) -> dict[str, float]:
    adj = adjacency_sets(net)
    out = {}
    for v, nb in adj.items():
        deg = len(nb)
        if deg < 2:
            out[v] = 0.0
            continue
        links = sum(1 for a, b in itertools.combinations(sorted(nb), 2) if b in adj[a])
        out[v] = links / (deg * (deg - 1) / 2)
    return out


def apl_oracle(net: Network) -> float:
    """Mean hop distance over ordered reachable pairs, via repeated BFS."""
    adj = adjacency_sets(net)
    total = 0
    pairs = 0
    for v in net.nodes:
        for u, d in bfs_dist(adj, v).items():
            if u != v:
                total += d
                pairs += 1
    return total / pairs if pairs else math.nan


# ---------------------------------------------------------------------------
# correlation / permutation oracles


def pearson_oracle(x, y) -> float | None:
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        return None
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return sxy / math.sqrt(sxx * syy)


def average_ranks(x) -> list[float]:
    order = sorted(range(len(x)), key=lambda i: x[i])
    ranks = [0.0] * len(x)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and x[order[j + 1]] == x[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for idx in order[i : j + 1]:
            ranks[idx] = avg
        i = j + 1
    return ranks


def spearman_oracle(x, y) -> float | None:
    return pearson_oracle(average_ranks(list(x)), average_ranks(list(y)))


def exact_permutation_p(values, ages, method: str = "pearson") -> tuple[float, float]:
    """Exact p over all |values|! reshuffles; only sane for short vectors."""
    corr = pearson_oracle if method == "pearson" else spearman_oracle
    r_obs = corr(values, ages)
    assert r_obs is not None
    better = 0
    total = 0
    for perm in itertools.permutations(values):
        r = corr(perm, ages)
        total += 1
        if r is None:
            continue
        if r_obs >= 0.0:
            better += r >= r_obs - 1e-12
        else:
            better += r <= r_obs + 1e-12
    return r_obs, better / total


def ks_statistic_uniform(samples) -> float:
    """Kolmogorov-Smirnov distance from U(0,1)."""
    xs = sorted(samples)
    n = len(xs)
    d = 0.0
    for i, x in enumerate(xs):
        d = max(d, abs((i + 1) / n - x), abs(x - i / n))
    return d


# ---------------------------------------------------------------------------
# exact hypergeometric tail


def hypergeom_tail_exact(e: int, a: int, g: int, o: int) -> Fraction:
    """P(X >= o) as an exact rational, straight from the counting definition."""
    if o == 0:
        return Fraction(1)
    denom = math.comb(e, g)
    total = Fraction(0)
    for i in range(o, min(a, g) + 1):
        total += Fraction(math.comb(a, i) * math.comb(e - a, g - i), denom)
    return total
