"""Age-specific snapshot series of a static interaction network.

Each age yields the subgraph of the static network induced on the genes
called active at that age.  Genes never measured in the expression data are
absent from every snapshot; active genes with no active neighbor appear as
isolated nodes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .expression import ActivityProfile
from .graph import Network, induced_subgraph

MANIFEST_NAME = "series.json"


@dataclass(frozen=True)
class SnapshotSeries:
    ages: tuple[float, ...]
    age_labels: tuple[str, ...]
    snapshots: tuple[Network, ...]
    universe: frozenset[str]

    @property
    def n_ages(self) -> int:
        return len(self.ages)

    def membership(self, gene: str) -> np.ndarray:
        """Boolean per-age presence of ``gene`` across snapshots."""
        if gene not in self.universe:
            raise ValidationError(f"gene {gene!r} not in series universe")
        return np.array([gene in s.nodes for s in self.snapshots], dtype=bool)

    def n_active(self, gene: str) -> int:
        return int(self.membership(gene).sum())


@dataclass(frozen=True)
class OverlapMatrices:
    """Pairwise snapshot overlap; entry (i, j) is |X_i & X_j| / min(|X_i|, |X_j|).

    Pairs involving an empty snapshot are undefined and stored as NaN.
    """

    nodes: np.ndarray
    edges: np.ndarray


def build_series(static: Network, profile: ActivityProfile) -> SnapshotSeries:
    """One induced snapshot per age; universe = network nodes with expression rows."""
    universe = static.nodes & frozenset(profile.genes)
    if not universe:
        raise ValidationError(
            "static network and expression matrix share no gene identifiers"
        )
    snapshots = []
    for t in range(len(profile.ages)):
        active = profile.active_genes(t) & universe
        snapshots.append(induced_subgraph(static, active))
    return SnapshotSeries(
        ages=tuple(profile.ages),
        age_labels=tuple(profile.age_labels),
        snapshots=tuple(snapshots),
        universe=universe,
    )


def _overlap(a: set, b: set) -> float:
    m = min(len(a), len(b))
    if m == 0:
        return float("nan")
    return len(a & b) / m


def pairwise_overlap(series: SnapshotSeries) -> OverlapMatrices:
    t = series.n_ages
    node_sets = [set(s.nodes) for s in series.snapshots]
    edge_sets = [set(s.edges) for s in series.snapshots]
    nodes = np.full((t, t), np.nan)
    edges = np.full((t, t), np.nan)
    for i in range(t):
        for j in range(i, t):
            nodes[i, j] = nodes[j, i] = _overlap(node_sets[i], node_sets[j])
            edges[i, j] = edges[j, i] = _overlap(edge_sets[i], edge_sets[j])
    return OverlapMatrices(nodes=nodes, edges=edges)


def _safe_name(label: str) -> str:
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in label)


def write_series_dir(series: SnapshotSeries, outdir) -> None:
    """Materialize a series as per-age edge/node lists plus a JSON manifest."""
    os.makedirs(outdir, exist_ok=True)
    entries = []
    for i, (age, label, snap) in enumerate(
        zip(series.ages, series.age_labels, series.snapshots)
    ):
        stem = f"{i:03d}_{_safe_name(label)}"
        edges_name = f"{stem}.edges.tsv"
        nodes_name = f"{stem}.nodes.txt"
        with open(os.path.join(outdir, edges_name), "w", encoding="utf-8") as fh:
            for u, v in sorted(snap.edges):
                fh.write(f"{u}\t{v}\n")
        with open(os.path.join(outdir, nodes_name), "w", encoding="utf-8") as fh:
            for u in snap.sorted_nodes:
                fh.write(u + "\n")
        entries.append(
            {
                "age": age,
                "label": label,
                "edges": edges_name,
                "nodes": nodes_name,
                "n_nodes": snap.n_nodes,
                "n_edges": snap.n_edges,
            }
        )
    with open(os.path.join(outdir, "universe.txt"), "w", encoding="utf-8") as fh:
        for g in sorted(series.universe):
            fh.write(g + "\n")
    manifest = {"snapshots": entries, "universe": "universe.txt"}
    with open(os.path.join(outdir, MANIFEST_NAME), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_series_dir(path) -> SnapshotSeries:
    manifest_path = os.path.join(path, MANIFEST_NAME)
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"{path}: not a series directory (missing {MANIFEST_NAME})")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{manifest_path}: invalid JSON ({exc})") from None
    with open(os.path.join(path, manifest["universe"]), "r", encoding="utf-8") as fh:
        universe = frozenset(line.strip() for line in fh if line.strip())
    ages, labels, snaps = [], [], []
    for entry in manifest["snapshots"]:
        with open(os.path.join(path, entry["nodes"]), "r", encoding="utf-8") as fh:
            nodes = [line.strip() for line in fh if line.strip()]
        edges = []
        with open(os.path.join(path, entry["edges"]), "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    u, v = line.split("\t")
                    edges.append((u, v))
        snap = Network.build(nodes, edges)
        if snap.n_nodes != entry["n_nodes"] or snap.n_edges != entry["n_edges"]:
            raise ValidationError(
                f"{path}: snapshot {entry['label']} does not match manifest counts"
            )
        ages.append(float(entry["age"]))
        labels.append(str(entry["label"]))
        snaps.append(snap)
    return SnapshotSeries(
        ages=tuple(ages),
        age_labels=tuple(labels),
        snapshots=tuple(snaps),
        universe=universe,
    )
