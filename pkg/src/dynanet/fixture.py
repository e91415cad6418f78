"""Deterministic synthetic benchmark with a planted aging signal.

Layout (200 genes, 10 ages):

* 20 planted genes in four blocks of five.  Each block owns eight private
  "context" genes wired to all five planted genes of the block: two carry
  early-loaded activity windows ({0,1,4} and {0,2,3}) and six carry
  balanced windows that jointly cover every age exactly twice.  A planted
  gene's degree is therefore 2 + e(t) with e = 2,1,1,1,1,0,0,0,0,0 --
  strongly decreasing (permutation p ~ 1e-3) even though each individual
  window is unremarkable (p > 0.03).
* 8 "riser" genes mirror the early windows (late-loaded), wired only to
  each other in pairs, so relabeling rows cannot manufacture global
  drift; together with 40 "noise" genes below, the number of active
  genes is identical at every age.
* 90 background genes forming 15 disjoint six-cliques, active at every
  age.
* 40 noise genes wired to three members of one clique each, carrying
  age-symmetric two/three-age windows (r with age exactly ~0).  They
  keep background trajectories jittering: after a row shuffle, any two
  early- or late-loaded windows that happen to land in one gene's
  neighborhood are almost always accompanied by symmetric-window noise
  that dilutes their combined trend below significance.
* 10 distractor genes, each wired to four members of one clique and
  silent at two age-symmetric ages -- eligible for prediction but
  trend-free by construction.

Design rules keeping the randomized control honest: per-age active
totals are exactly constant; every individual window is age-scattered
enough to be non-extreme on its own; components are small (a block, a
clique plus attachments, a riser pair) so no relocated row can perturb
more than a handful of genes.

Everything is derived from one seed, so the fixture is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .expression import ExpressionMatrix
from .graph import Network

DEFAULT_SEED = 20240915

N_BLOCKS = 4
PLANTED_PER_BLOCK = 5
N_PLANTED = N_BLOCKS * PLANTED_PER_BLOCK
CLIQUE_SIZE = 6
N_CLIQUES = 15
N_BACKGROUND = N_CLIQUES * CLIQUE_SIZE
N_NOISE = 40
N_DISTRACTORS = 10
N_AGES = 10

AGES = tuple(float(a) for a in range(25, 75, 5))

# the two early-loaded windows whose sum is the planted degree signal
EARLY_SCHEDULES = ((0, 1, 4), (0, 2, 3))
# six balanced windows covering every age exactly twice
BALANCED_SCHEDULES = (
    (0, 3, 6, 9),
    (1, 4, 7),
    (2, 5, 8),
    (0, 4, 9),
    (1, 5, 8),
    (2, 3, 6, 7),
)
CONTEXT_SCHEDULES = EARLY_SCHEDULES + BALANCED_SCHEDULES
CONTEXTS_PER_BLOCK = len(CONTEXT_SCHEDULES)
N_CONTEXT = N_BLOCKS * CONTEXTS_PER_BLOCK
RISER_SCHEDULES = tuple(
    tuple(sorted(9 - t for t in sched)) for sched in EARLY_SCHEDULES
)
N_RISERS = N_BLOCKS * len(RISER_SCHEDULES)

# age-symmetric windows (r with age ~ 0); column sums 5,9,9,9,9,9,9,9,9,5,
# which makes the grand per-age totals constant against the early/riser load
NOISE_SCHEDULES = (
    ((0, 9),) * 5
    + ((1, 8),) * 8
    + ((2, 7),) * 8
    + ((3, 6),) * 9
    + ((4, 5),) * 8
    + ((1, 5, 8), (2, 4, 7))
)
NOISE_ATTACH = 3

DISTRACTOR_DEGREE = 4

ACTIVE_P_MAX = 0.035  # safely below the 0.04 detection threshold
INACTIVE_P_MIN = 0.06
MISSING_RATE = 0.02  # fraction of inactive cells reported as missing


@dataclass(frozen=True)
class Fixture:
    network: Network
    expression: ExpressionMatrix
    planted: tuple[str, ...]


def _names(prefix: str, count: int, width: int) -> list[str]:
    return [f"{prefix}{i + 1:0{width}d}" for i in range(count)]


def make_fixture(seed: int = DEFAULT_SEED) -> Fixture:
    assert len(NOISE_SCHEDULES) == N_NOISE
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    planted = _names("P", N_PLANTED, 2)
    contexts = _names("E", N_CONTEXT, 2)
    risers = _names("R", N_RISERS, 2)
    background = _names("B", N_BACKGROUND, 3)
    noise = _names("N", N_NOISE, 2)
    distractors = _names("D", N_DISTRACTORS, 2)
    genes = planted + contexts + risers + background + noise + distractors

    cliques = [
        background[c * CLIQUE_SIZE:(c + 1) * CLIQUE_SIZE]
        for c in range(N_CLIQUES)
    ]
    edges: list[tuple[str, str]] = []
    for b in range(N_BLOCKS):
        block_p = planted[b * PLANTED_PER_BLOCK:(b + 1) * PLANTED_PER_BLOCK]
        block_e = contexts[b * CONTEXTS_PER_BLOCK:(b + 1) * CONTEXTS_PER_BLOCK]
        edges.extend((p, e) for p in block_p for e in block_e)
    for i in range(0, N_RISERS, 2):
        edges.append((risers[i], risers[i + 1]))
    for clique in cliques:
        edges.extend(
            (clique[i], clique[j])
            for i in range(CLIQUE_SIZE)
            for j in range(i + 1, CLIQUE_SIZE)
        )
    for i, g in enumerate(noise):
        clique = cliques[i % N_CLIQUES]
        picks = rng.choice(CLIQUE_SIZE, size=NOISE_ATTACH, replace=False)
        edges.extend((g, clique[j]) for j in picks)
    for i, d in enumerate(distractors):
        picks = rng.choice(CLIQUE_SIZE, size=DISTRACTOR_DEGREE, replace=False)
        edges.extend((d, cliques[i][j]) for j in picks)
    network = Network.build(genes, edges)

    active = np.zeros((len(genes), N_AGES), dtype=bool)
    gi = {g: i for i, g in enumerate(genes)}
    for g in planted + background:
        active[gi[g]] = True
    for b in range(N_BLOCKS):
        for e, sched in zip(
            contexts[b * CONTEXTS_PER_BLOCK:(b + 1) * CONTEXTS_PER_BLOCK],
            CONTEXT_SCHEDULES,
        ):
            active[gi[e], list(sched)] = True
    for i, r in enumerate(risers):
        active[gi[r], list(RISER_SCHEDULES[i % len(RISER_SCHEDULES)])] = True
    for g, sched in zip(noise, NOISE_SCHEDULES):
        active[gi[g], list(sched)] = True
    for i, d in enumerate(distractors):
        active[gi[d]] = True
        active[gi[d], [i, 9 - i]] = False  # symmetric off-ages: no age trend

    values = np.where(
        active,
        rng.uniform(0.0, ACTIVE_P_MAX, size=active.shape),
        rng.uniform(INACTIVE_P_MIN, 1.0, size=active.shape),
    )
    missing = (~active) & (rng.random(active.shape) < MISSING_RATE)
    values[missing] = np.nan

    order = np.argsort(genes)
    expression = ExpressionMatrix(
        genes=tuple(sorted(genes)),
        ages=AGES,
        age_labels=tuple(f"{a:g}" for a in AGES),
        values=values[order],
    )
    return Fixture(network=network, expression=expression, planted=tuple(planted))


def write_fixture(out_dir: str | Path, fixture: Fixture) -> dict[str, Path]:
    """Write network.tsv, expression.tsv, and planted.txt; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "network": out / "network.tsv",
        "expression": out / "expression.tsv",
        "planted": out / "planted.txt",
    }
    with open(paths["network"], "w") as fh:
        fh.write("# synthetic benchmark interaction network\n")
        for u, v in sorted(fixture.network.edges):
            fh.write(f"{u}\t{v}\n")
    expr = fixture.expression
    with open(paths["expression"], "w") as fh:
        fh.write("gene\t" + "\t".join(expr.age_labels) + "\n")
        for i, g in enumerate(expr.genes):
            cells = [
                "NA" if np.isnan(x) else f"{x:.6f}" for x in expr.values[i]
            ]
            fh.write(g + "\t" + "\t".join(cells) + "\n")
    with open(paths["planted"], "w") as fh:
        for g in fixture.planted:
            fh.write(g + "\n")
    return paths
