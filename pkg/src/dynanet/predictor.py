"""Age-trajectory correlation, permutation significance, and gene ranking.

Each gene's centrality trajectory across the age snapshots (0 where the
gene is inactive) is correlated with age; significance comes from
reshuffling the trajectory n_perm times and counting reshuffles that do at
least as well.  Genes active in fewer than ``min_active`` ages are skipped.
A gene is predicted age-associated when any centrality kind is significant,
and predictions are ranked by a support-weighted score.  A label-shuffling
control quantifies how many predictions chance alone would produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import rankdata

from .centrality import KINDS, compute_centralities
from .errors import ValidationError
from .expression import ActivityProfile
from .graph import Network
from .snapshots import SnapshotSeries, build_series

METHODS = ("pearson", "spearman")

_TIE_EPS = 1e-12  # float slack when counting reshuffles tied with the observed r


@dataclass(frozen=True)
class TrajectorySet:
    genes: tuple[str, ...]  # universe, sorted
    ages: tuple[float, ...]
    kinds: tuple[str, ...]
    values: np.ndarray  # (kind, gene, age) float64
    n_active: np.ndarray  # (gene,) ages at which the gene is in the snapshot


def compute_trajectories(
    series: SnapshotSeries, kinds: tuple[str, ...] = KINDS
) -> TrajectorySet:
    genes = tuple(sorted(series.universe))
    gi = {g: i for i, g in enumerate(genes)}
    n_ages = len(series.ages)
    values = np.zeros((len(kinds), len(genes), n_ages))
    n_active = np.zeros(len(genes), dtype=np.int64)
    for t, net in enumerate(series.snapshots):
        cent = compute_centralities(net, kinds)
        for k, kind in enumerate(kinds):
            for gene, val in cent[kind].items():
                values[k, gi[gene], t] = val
        for gene in net.nodes:
            n_active[gi[gene]] += 1
    return TrajectorySet(
        genes=genes,
        ages=tuple(series.ages),
        kinds=tuple(kinds),
        values=values,
        n_active=n_active,
    )


def _checked_pair(values, ages) -> tuple[np.ndarray, np.ndarray]:
    values = np.asarray(values, dtype=float)
    ages = np.asarray(ages, dtype=float)
    if values.shape != ages.shape:
        raise ValidationError(
            f"trajectory length {values.shape} does not match ages {ages.shape}"
        )
    if values.size < 3:
        raise ValidationError("need at least 3 ages to correlate")
    return values, ages


def _prepared(vec: np.ndarray, method: str) -> np.ndarray | None:
    """Centered comparison vector (ranks for spearman); None when constant."""
    if method == "spearman":
        vec = rankdata(vec)
    if np.all(vec == vec[0]):
        # checked before centering: the mean of n identical floats need not
        # round back to that float, which would leave uniform nonzero dust
        return None
    centered = vec - vec.mean()
    norm = float(np.linalg.norm(centered))
    if norm == 0.0:
        return None
    return centered / norm


def correlate(values: np.ndarray, ages: np.ndarray, method: str = "pearson") -> float | None:
    """Correlation of a trajectory with age; None when either side is constant."""
    if method not in METHODS:
        raise ValidationError(f"unknown correlation method {method!r}")
    values, ages = _checked_pair(values, ages)
    v = _prepared(values, method)
    a = _prepared(ages, method)
    if v is None or a is None:
        return None
    return float(np.clip(v @ a, -1.0, 1.0))


def permutation_pvalue(
    values: np.ndarray,
    ages: np.ndarray,
    method: str = "pearson",
    n_perm: int = 1000,
    rng: np.random.Generator | None = None,
    pseudo_count: bool = False,
) -> tuple[float | None, float | None]:
    """(r, p) where p is the fraction of trajectory reshuffles whose
    correlation is at least as extreme (same sign direction, ties count)."""
    if method not in METHODS:
        raise ValidationError(f"unknown correlation method {method!r}")
    if n_perm < 1:
        raise ValidationError("n_perm must be >= 1")
    values, ages = _checked_pair(values, ages)
    v = _prepared(values, method)
    a = _prepared(ages, method)
    if v is None or a is None:
        return None, None
    r = float(np.clip(v @ a, -1.0, 1.0))
    if rng is None:
        rng = np.random.default_rng()
    # shuffling a trajectory preserves its mean and norm, so each reshuffled
    # correlation is just a permuted dot product with the fixed age vector
    perms = rng.permuted(np.broadcast_to(v, (n_perm, v.size)), axis=1)
    r_perm = perms @ a
    if r >= 0.0:
        better = int(np.count_nonzero(r_perm >= r - _TIE_EPS))
    else:
        better = int(np.count_nonzero(r_perm <= r + _TIE_EPS))
    if pseudo_count:
        return r, (better + 1) / (n_perm + 1)
    return r, better / n_perm


@dataclass(frozen=True)
class PredictParams:
    method: str = "pearson"
    p_threshold: float = 0.01
    min_active: int = 5
    n_perm: int = 1000
    seed: int | np.random.SeedSequence | None = None
    pseudo_count: bool = False
    kinds: tuple[str, ...] = KINDS

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown correlation method {self.method!r}")
        if not 0.0 < self.p_threshold <= 1.0:
            raise ValidationError("p_threshold must be in (0, 1]")


@dataclass(frozen=True)
class KindResult:
    r: float | None
    p: float | None


@dataclass(frozen=True)
class PredictionRecord:
    gene: str
    n_active: int
    per_kind: dict[str, KindResult]
    supporting: tuple[str, ...]  # kinds with p below threshold
    direction: str | None  # positive | negative | mixed
    score: float = 0.0
    rank: int | None = None

    @property
    def predicted(self) -> bool:
        return len(self.supporting) > 0

    def mean_abs_r(self) -> float:
        rs = [abs(self.per_kind[k].r) for k in self.supporting]
        return float(np.mean(rs)) if rs else 0.0


def _spawned_rng(base: np.random.SeedSequence, *key: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=base.entropy, spawn_key=base.spawn_key + key)
    )


def predict(trajs: TrajectorySet, params: PredictParams | None = None) -> list[PredictionRecord]:
    """Per-kind correlation results for every eligible gene, unranked.

    Eligibility is activity in at least ``min_active`` ages; a record's gene
    is predicted when any kind's permutation p falls below the threshold.
    """
    params = params or PredictParams()
    base = (
        params.seed
        if isinstance(params.seed, np.random.SeedSequence)
        else np.random.SeedSequence(params.seed if params.seed is not None else 0)
    )
    kinds = params.kinds
    kind_pos = {k: KINDS.index(k) for k in kinds}
    ages = np.array(trajs.ages, dtype=float)
    records: list[PredictionRecord] = []
    for gi, gene in enumerate(trajs.genes):
        if trajs.n_active[gi] < params.min_active:
            continue
        per_kind: dict[str, KindResult] = {}
        for kind in kinds:
            ki = trajs.kinds.index(kind)
            rng = _spawned_rng(base, gi, kind_pos[kind])
            r, p = permutation_pvalue(
                trajs.values[ki, gi],
                ages,
                method=params.method,
                n_perm=params.n_perm,
                rng=rng,
                pseudo_count=params.pseudo_count,
            )
            per_kind[kind] = KindResult(r=r, p=p)
        supporting = tuple(
            k for k in kinds
            if per_kind[k].p is not None and per_kind[k].p < params.p_threshold
        )
        signs = {1 if per_kind[k].r > 0 else -1 for k in supporting}
        if not supporting:
            direction = None
        elif signs == {1}:
            direction = "positive"
        elif signs == {-1}:
            direction = "negative"
        else:
            direction = "mixed"
        records.append(
            PredictionRecord(
                gene=gene,
                n_active=int(trajs.n_active[gi]),
                per_kind=per_kind,
                supporting=supporting,
                direction=direction,
            )
        )
    return records


def score_and_rank(records: list[PredictionRecord]) -> list[PredictionRecord]:
    """Score = sum of (1 - p) over supporting kinds; rank 1 is the best.

    Ties break by mean |r| over supporting kinds, then by gene identifier.
    """
    scored = [
        replace(r, score=float(sum(1.0 - r.per_kind[k].p for k in r.supporting)))
        for r in records
    ]
    scored.sort(key=lambda r: (-r.score, -r.mean_abs_r(), r.gene))
    return [replace(r, rank=i + 1) for i, r in enumerate(scored)]


@dataclass(frozen=True)
class ControlReport:
    n_real: int
    counts: tuple[int, ...]  # predictions per shuffled repeat
    mean: float
    sd: float  # NaN when undefined (single repeat)
    z: float | None  # None when sd is 0 or undefined
    empirical_p: float  # fraction of repeats with count >= n_real


def _count_predictions(
    static: Network, profile: ActivityProfile, params: PredictParams
) -> tuple[int, list[PredictionRecord]]:
    series = build_series(static, profile)
    trajs = compute_trajectories(series, params.kinds)
    records = predict(trajs, params)
    return sum(1 for r in records if r.predicted), records


def randomized_control(
    static: Network,
    profile: ActivityProfile,
    params: PredictParams | None = None,
    n_repeats: int = 100,
    seed: int | None = None,
) -> ControlReport:
    """Compare the real prediction count against gene-label-shuffled data.

    Each repeat permutes which gene gets which activity row (per-age active
    counts are preserved), rebuilds the snapshots, and reruns prediction.
    """
    if n_repeats < 1:
        raise ValidationError("n_repeats must be >= 1")
    params = params or PredictParams()
    n_real, _ = _count_predictions(static, profile, params)
    base = np.random.SeedSequence(seed if seed is not None else 0)
    counts: list[int] = []
    for rep in range(n_repeats):
        shuffle_rng = _spawned_rng(base, rep, 0)
        perm = shuffle_rng.permutation(len(profile.genes))
        shuffled = ActivityProfile(
            genes=profile.genes,
            ages=profile.ages,
            age_labels=profile.age_labels,
            active=profile.active[perm],
            threshold=profile.threshold,
        )
        rep_params = replace(
            params,
            seed=np.random.SeedSequence(
                entropy=base.entropy, spawn_key=base.spawn_key + (rep, 1)
            ),
        )
        n_shuf, _ = _count_predictions(static, shuffled, rep_params)
        counts.append(n_shuf)
    arr = np.array(counts, dtype=float)
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1)) if n_repeats > 1 else math.nan
    z = None if (math.isnan(sd) or sd == 0.0) else (n_real - mean) / sd
    return ControlReport(
        n_real=n_real,
        counts=tuple(counts),
        mean=mean,
        sd=sd,
        z=z,
        empirical_p=float(np.mean(arr >= n_real)),
    )
