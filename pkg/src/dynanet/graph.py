"""Undirected simple graphs with string node identifiers.

The edge-list file format accepted by :func:`load_edge_list` is one edge per
line, two identifiers separated by tabs or arbitrary whitespace.  Blank lines
and lines starting with ``#`` are ignored.  Self-loops are always dropped;
duplicate records (in either orientation) are collapsed when ``dedup`` is on
and rejected otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)


def _canon(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Network:
    """Immutable undirected simple graph.

    Edges are stored canonically as ``(u, v)`` with ``u <= v``; isolated
    nodes are allowed.  Construct via :meth:`build` (which normalizes edge
    orientation and checks endpoints) rather than the raw constructor.
    """

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]

    @classmethod
    def build(cls, nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> "Network":
        node_set = frozenset(nodes)
        canon = set()
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop on node {u!r}")
            if u not in node_set or v not in node_set:
                raise ValidationError(f"edge ({u!r}, {v!r}) references unknown node")
            canon.add(_canon(u, v))
        return cls(nodes=node_set, edges=frozenset(canon))

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {u: set() for u in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {u: frozenset(nbrs) for u, nbrs in adj.items()}

    @cached_property
    def sorted_nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.nodes))

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.sorted_nodes)}

    def neighbors(self, u: str) -> frozenset[str]:
        try:
            return self.adjacency[u]
        except KeyError:
            raise ValidationError(f"unknown node {u!r}") from None

    def degree(self, u: str) -> int:
        return len(self.neighbors(u))

    def has_edge(self, u: str, v: str) -> bool:
        return _canon(u, v) in self.edges

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form over :attr:`sorted_nodes` order."""
        n = self.n_nodes
        idx = self.node_index
        deg = np.zeros(n + 1, dtype=np.int64)
        for u, v in self.edges:
            deg[idx[u] + 1] += 1
            deg[idx[v] + 1] += 1
        indptr = np.cumsum(deg)
        indices = np.empty(indptr[-1], dtype=np.int32)
        fill = indptr[:-1].copy()
        for u, v in self.edges:
            iu, iv = idx[u], idx[v]
            indices[fill[iu]] = iv
            fill[iu] += 1
            indices[fill[iv]] = iu
            fill[iv] += 1
        # sort each row for reproducible iteration order in kernels
        for i in range(n):
            indices[indptr[i]:indptr[i + 1]].sort()
        return indptr, indices


@dataclass(frozen=True)
class EdgeListStats:
    """Bookkeeping from :func:`load_edge_list`."""

    n_records: int
    n_self_loops: int
    n_duplicates: int


@dataclass(frozen=True)
class ShortestPathSummary:
    """BFS result from one source: hop distances and exact path counts.

    Both maps cover exactly the nodes reachable from ``source`` (including
    the source itself, at distance 0 with one path).  Path counts are exact
    integers; they can be astronomically large on dense graphs.
    """

    source: str
    dist: dict[str, int]
    sigma: dict[str, int]


def load_edge_list_with_stats(path, dedup: bool = True) -> tuple[Network, EdgeListStats]:
    """Parse an edge-list file; see module docstring for the format."""
    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()
    n_records = n_loops = n_dups = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 2:
                raise ParseError(
                    f"{path}:{lineno}: expected 2 fields, got {len(fields)}"
                )
            n_records += 1
            u, v = fields
            nodes.add(u)
            nodes.add(v)
            if u == v:
                n_loops += 1
                continue
            pair = _canon(u, v)
            if pair in edges:
                if not dedup:
                    raise ParseError(f"{path}:{lineno}: duplicate edge {u} -- {v}")
                n_dups += 1
                continue
            edges.add(pair)
    if n_records == 0:
        raise ParseError(f"{path}: no edge records found")
    stats = EdgeListStats(n_records=n_records, n_self_loops=n_loops, n_duplicates=n_dups)
    if n_loops or n_dups:
        logger.info(
            "%s: dropped %d self-loops and %d duplicate records",
            path, n_loops, n_dups,
        )
    return Network(nodes=frozenset(nodes), edges=frozenset(edges)), stats


def load_edge_list(path, dedup: bool = True) -> Network:
    net, _ = load_edge_list_with_stats(path, dedup=dedup)
    return net


def induced_subgraph(net: Network, keep: Iterable[str]) -> Network:
    """Subgraph on ``net.nodes & keep`` with every surviving edge."""
    keep_set = frozenset(keep) & net.nodes
    edges = frozenset(e for e in net.edges if e[0] in keep_set and e[1] in keep_set)
    return Network(nodes=keep_set, edges=edges)


def bfs_paths(net: Network, source: str) -> ShortestPathSummary:
    """Hop distances and exact shortest-path counts from ``source``.

    Unreachable nodes are absent from both maps.
    """
    if source not in net.nodes:
        raise ValidationError(f"unknown source node {source!r}")
    adj = net.adjacency
    dist = {source: 0}
    sigma = {source: 1}
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt: list[str] = []
        for u in frontier:
            su = sigma[u]
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d
                    sigma[w] = 0
                    nxt.append(w)
                if dist[w] == d:
                    sigma[w] += su
        frontier = nxt
    return ShortestPathSummary(source=source, dist=dist, sigma=sigma)


def connected_components(net: Network) -> list[frozenset[str]]:
    """Connected components, largest-first (ties by smallest member)."""
    seen: set[str] = set()
    comps: list[frozenset[str]] = []
    adj = net.adjacency
    for start in net.sorted_nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps
