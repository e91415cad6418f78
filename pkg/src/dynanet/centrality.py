"""Seven node-centrality measures used for trajectory analysis.

Conventions (identical for every measure): isolated or degree-deficient
nodes get well-defined values rather than errors -- clustering is 0 below
degree 2, closeness and eccentricity are 0 for isolated nodes -- and path
based measures are computed within connected components (unreachable pairs
simply do not contribute).  Betweenness sums over unordered pairs s < t
with s != v != t, unnormalized.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import ValidationError
from .graph import Network
from .graphlets import GDC_WEIGHTS, OrbitCounts, count_orbits

KINDS: tuple[str, ...] = ("degc", "clusc", "kc", "gdc", "betwc", "closec", "ecc")

KIND_NAMES: dict[str, str] = {
    "degc": "degree",
    "clusc": "clustering coefficient",
    "kc": "k-core number",
    "gdc": "graphlet degree",
    "betwc": "betweenness",
    "closec": "closeness",
    "ecc": "eccentricity",
}


def degree_centrality(net: Network) -> dict[str, float]:
    return {u: float(len(net.adjacency[u])) for u in net.nodes}


def clustering_coefficient(net: Network) -> dict[str, float]:
    """Fraction of neighbor pairs that are themselves linked; 0 below degree 2."""
    adj = net.adjacency
    out: dict[str, float] = {}
    for u in net.nodes:
        nbrs = adj[u]
        d = len(nbrs)
        if d < 2:
            out[u] = 0.0
            continue
        links = sum(len(nbrs & adj[v]) for v in nbrs) // 2
        out[u] = links / (d * (d - 1) / 2)
    return out


def kcore_number(net: Network) -> dict[str, float]:
    """Largest k such that the node survives iterative pruning to min degree k."""
    deg = {u: len(net.adjacency[u]) for u in net.nodes}
    # peel in nondecreasing order of current degree (bucket queue)
    order = sorted(net.nodes, key=lambda u: deg[u])
    pos = {u: i for i, u in enumerate(order)}
    bucket_start: dict[int, int] = {}
    for i, u in enumerate(order):
        bucket_start.setdefault(deg[u], i)
    core: dict[str, float] = {}
    cur = dict(deg)
    removed: set[str] = set()
    k = 0
    for i in range(len(order)):
        u = order[i]
        k = max(k, cur[u])
        core[u] = float(k)
        removed.add(u)
        for v in net.adjacency[u]:
            if v in removed or cur[v] <= cur[u]:
                continue
            # move v one bucket down: swap it with the first element of its bucket
            dv = cur[v]
            start = bucket_start[dv]
            w = order[start]
            if w != v:
                order[start], order[pos[v]] = v, w
                pos[w], pos[v] = pos[v], start
            bucket_start[dv] = start + 1
            bucket_start.setdefault(dv - 1, pos[v])
            cur[v] = dv - 1
    return core


def graphlet_degree_centrality(
    net: Network, orbit_counts: OrbitCounts | None = None
) -> dict[str, float]:
    """Weighted log-scale summary of a node's 73 orbit counts."""
    if orbit_counts is None:
        orbit_counts = count_orbits(net)
    if orbit_counts.nodes != net.sorted_nodes:
        raise ValidationError("orbit counts were computed on a different network")
    vals = np.log1p(orbit_counts.counts.astype(float)) @ GDC_WEIGHTS
    return {u: float(vals[i]) for i, u in enumerate(orbit_counts.nodes)}


@njit(cache=True, nogil=True)
def _paths_kernel(n, indptr, indices):
    """Per-node betweenness (unordered pairs), distance sums, eccentricity,
    and reachable-node counts, by one BFS + dependency accumulation per source."""
    betw = np.zeros(n, dtype=np.float64)
    dist_sum = np.zeros(n, dtype=np.int64)
    ecc = np.zeros(n, dtype=np.int64)
    nreach = np.zeros(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        total = 0
        far = 0
        while head < tail:
            u = order[head]
            head += 1
            du = dist[u]
            if du > far:
                far = du
            total += du
            su = sigma[u]
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if dist[w] < 0:
                    dist[w] = du + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == du + 1:
                    sigma[w] += su
        dist_sum[s] = total
        ecc[s] = far
        nreach[s] = tail - 1
        for i in range(tail - 1, 0, -1):
            w = order[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for e in range(indptr[w], indptr[w + 1]):
                v = indices[e]
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                betw[w] += delta[w]
    return betw / 2.0, dist_sum, ecc, nreach


def shortest_path_stats(net: Network) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(betweenness, distance sums, eccentricities, reachable counts) over
    ``net.sorted_nodes``; shared by the three path-based centralities and the
    global summary statistics."""
    n = net.n_nodes
    if n == 0:
        z = np.zeros(0)
        return z, z.astype(np.int64), z.astype(np.int64), z.astype(np.int64)
    indptr, indices = net.csr()
    return _paths_kernel(n, indptr, indices)


def betweenness_centrality(net: Network) -> dict[str, float]:
    betw, _, _, _ = shortest_path_stats(net)
    return {u: float(betw[i]) for i, u in enumerate(net.sorted_nodes)}


def closeness_centrality(net: Network) -> dict[str, float]:
    """Reciprocal of the summed distances to reachable nodes; 0 if none."""
    _, dist_sum, _, nreach = shortest_path_stats(net)
    return {
        u: (1.0 / dist_sum[i] if nreach[i] > 0 else 0.0)
        for i, u in enumerate(net.sorted_nodes)
    }


def eccentricity_centrality(net: Network) -> dict[str, float]:
    """Reciprocal of the farthest reachable distance; 0 for isolated nodes."""
    _, _, ecc, nreach = shortest_path_stats(net)
    return {
        u: (1.0 / ecc[i] if nreach[i] > 0 else 0.0)
        for i, u in enumerate(net.sorted_nodes)
    }


def compute_centralities(
    net: Network, kinds: tuple[str, ...] = KINDS
) -> dict[str, dict[str, float]]:
    """Evaluate the requested centralities, sharing BFS and orbit passes."""
    unknown = [k for k in kinds if k not in KINDS]
    if unknown:
        raise ValidationError(f"unknown centrality kinds: {unknown}")
    out: dict[str, dict[str, float]] = {}
    path_based = [k for k in kinds if k in ("betwc", "closec", "ecc")]
    if path_based:
        betw, dist_sum, ecc, nreach = shortest_path_stats(net)
        nodes = net.sorted_nodes
        if "betwc" in path_based:
            out["betwc"] = {u: float(betw[i]) for i, u in enumerate(nodes)}
        if "closec" in path_based:
            out["closec"] = {
                u: (1.0 / dist_sum[i] if nreach[i] > 0 else 0.0)
                for i, u in enumerate(nodes)
            }
        if "ecc" in path_based:
            out["ecc"] = {
                u: (1.0 / ecc[i] if nreach[i] > 0 else 0.0)
                for i, u in enumerate(nodes)
            }
    if "degc" in kinds:
        out["degc"] = degree_centrality(net)
    if "clusc" in kinds:
        out["clusc"] = clustering_coefficient(net)
    if "kc" in kinds:
        out["kc"] = kcore_number(net)
    if "gdc" in kinds:
        out["gdc"] = graphlet_degree_centrality(net)
    return {k: out[k] for k in kinds}
