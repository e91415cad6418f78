"""End-to-end acceptance checks.

Every test prints exactly one summary line

    [criterion N] PASS|FAIL (elapsed): detail

before asserting, so the verdicts survive in the captured output of failing
runs; use ``pytest tests/test_acceptance.py -v -s`` to see the lines for
passing criteria too.  Criterion 8 needs externally supplied full-scale data
and reports SKIP when the environment variables naming it are unset.
"""

import math
import os
import time

import numpy as np
import pytest

import oracles
from dynanet.centrality import (
    betweenness_centrality,
    closeness_centrality,
    clustering_coefficient,
    eccentricity_centrality,
    kcore_number,
)
from dynanet.enrichment import hypergeom_tail
from dynanet.expression import ExpressionMatrix, activity, load_expression
from dynanet.fixture import make_fixture
from dynanet.graph import load_edge_list
from dynanet.graphlets import count_graphlets, gdd_agreement
from dynanet.models import FAMILIES, ModelSpec, evaluate_fit, generate
from dynanet.predictor import (
    PredictParams,
    compute_trajectories,
    permutation_pvalue,
    predict,
    randomized_control,
)
from dynanet.snapshots import build_series, pairwise_overlap


def report(num: int, ok: bool, elapsed: float, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num}] {status} ({elapsed:.1f}s): {detail}", flush=True)


def random_net(rng, lo=5, hi=30, dmin=0.05, dmax=0.5):
    n = int(rng.integers(lo, hi + 1))
    density = float(rng.uniform(dmin, dmax))
    return oracles.int_network(n, oracles.random_edge_pairs(rng, n, density))


def test_criterion_1_graphlet_counts_exact():
    budget = 120.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240801)
    mismatches = 0
    for _ in range(200):
        net = random_net(rng)
        freq, orbits = count_graphlets(net)
        freq_want, orbits_want = oracles.brute_force_graphlets(net)
        exact = np.array_equal(freq, freq_want) and all(
            np.array_equal(orbits.row(v), orbits_want[v]) for v in net.sorted_nodes
        )
        mismatches += 0 if exact else 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < budget
    report(
        1, ok, elapsed,
        f"{200 - mismatches}/200 graphs with integer-exact 30-graphlet "
        f"frequencies and 73-orbit counts (budget {budget:.0f}s)",
    )
    assert mismatches == 0
    assert elapsed < budget


def test_criterion_2_centrality_oracles():
    budget = 60.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240802)
    mismatches = 0
    for _ in range(100):
        net = random_net(rng)
        betw, betw_o = betweenness_centrality(net), oracles.betweenness_oracle(net)
        clos, clos_o = closeness_centrality(net), oracles.closeness_oracle(net)
        ecc, ecc_o = eccentricity_centrality(net), oracles.eccentricity_oracle(net)
        kc, kc_o = kcore_number(net), oracles.kcore_oracle(net)
        cl, cl_o = clustering_coefficient(net), oracles.clustering_oracle(net)
        good = all(
            abs(betw[v] - betw_o[v]) <= 1e-9
            and abs(clos[v] - clos_o[v]) <= 1e-9
            and abs(ecc[v] - ecc_o[v]) <= 1e-9
            and kc[v] == kc_o[v]
            and cl[v] == cl_o[v]
            for v in net.sorted_nodes
        )
        mismatches += 0 if good else 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < budget
    report(
        2, ok, elapsed,
        f"{100 - mismatches}/100 graphs within 1e-9 of path-enumeration "
        f"betweenness/closeness/eccentricity, exact coreness and clustering "
        f"(budget {budget:.0f}s)",
    )
    assert mismatches == 0
    assert elapsed < budget


def test_criterion_3_gdd_identity_and_symmetry():
    budget = 60.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240803)
    worst_identity = 0.0
    worst_symmetry = 0.0
    for _ in range(50):
        a = random_net(rng, lo=8, hi=35, dmax=0.4)
        b = random_net(rng, lo=8, hi=35, dmax=0.4)
        for mode in ("arithmetic", "geometric"):
            worst_identity = max(worst_identity, abs(gdd_agreement(a, a, mode) - 1.0))
            worst_symmetry = max(
                worst_symmetry,
                abs(gdd_agreement(a, b, mode) - gdd_agreement(b, a, mode)),
            )
    elapsed = time.perf_counter() - t0
    ok = worst_identity <= 1e-12 and worst_symmetry <= 1e-12 and elapsed < budget
    report(
        3, ok, elapsed,
        f"50 pairs, both mean modes: max |agreement(G,G)-1| = {worst_identity:.2e}, "
        f"max symmetry gap = {worst_symmetry:.2e} (tol 1e-12, budget {budget:.0f}s)",
    )
    assert worst_identity <= 1e-12
    assert worst_symmetry <= 1e-12
    assert elapsed < budget


def test_criterion_4_hypergeometric_exactness():
    budget = 30.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240804)
    worst_rel = 0.0
    for _ in range(500):
        e = int(rng.integers(1, 201))
        a = int(rng.integers(0, e + 1))
        g = int(rng.integers(0, e + 1))
        lo = max(0, a + g - e)
        hi = min(a, g)
        o = int(rng.integers(lo, hi + 1))
        got = hypergeom_tail(e, a, g, o)
        exact = float(oracles.hypergeom_tail_exact(e, a, g, o))
        worst_rel = max(worst_rel, abs(got - exact) / exact)
    big = hypergeom_tail(6397, 515, 1259, 120)
    big_exact = float(oracles.hypergeom_tail_exact(6397, 515, 1259, 120))
    big_rel = abs(big - big_exact) / big_exact
    elapsed = time.perf_counter() - t0
    ok = (
        worst_rel <= 1e-10
        and math.isfinite(big)
        and 0.0 < big <= 1.0
        and big_rel <= 1e-10
        and elapsed < budget
    )
    report(
        4, ok, elapsed,
        f"500 configurations with |E|<=200: max relative error {worst_rel:.2e} "
        f"(tol 1e-10); |E|=6397 tail = {big:.6g}, relative error {big_rel:.2e}, "
        f"finite (budget {budget:.0f}s)",
    )
    assert worst_rel <= 1e-10
    assert math.isfinite(big) and 0.0 < big <= 1.0
    assert big_rel <= 1e-10
    assert elapsed < budget


def test_criterion_5_permutation_calibration():
    budget = 120.0
    t0 = time.perf_counter()
    ages5 = np.array([10.0, 20.0, 30.0, 40.0, 50.0])
    tol = 3.0 / math.sqrt(1000.0)
    data_rng = np.random.default_rng(20240805)
    worst = 0.0
    for i in range(50):
        vals = data_rng.normal(size=5)
        _, p_exact = oracles.exact_permutation_p(vals, ages5)
        _, p = permutation_pvalue(
            vals, ages5, n_perm=1000, rng=np.random.default_rng(1000 + i)
        )
        worst = max(worst, abs(p - p_exact))

    # Null uniformity.  The tail is sign-adaptive (upper tail for r >= 0,
    # lower for r < 0), so under a continuous null the p-value is uniform on
    # (0, 1/2); 2p is the quantity that is uniform on (0, 1).
    ages10 = np.arange(25.0, 75.0, 5.0)
    null_rng = np.random.default_rng(20240806)
    ps = np.empty(2000)
    for gi in range(2000):
        vals = null_rng.normal(size=10)
        _, p = permutation_pvalue(
            vals, ages10, n_perm=1000, rng=np.random.default_rng(5_000_000 + gi)
        )
        ps[gi] = p
    ks = oracles.ks_statistic_uniform(np.minimum(2.0 * ps, 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst <= tol and ks < 0.05 and elapsed < budget
    report(
        5, ok, elapsed,
        f"50 length-5 trajectories: max |sampled p - exact p| = {worst:.4f} "
        f"(tol {tol:.4f}); 2000 null genes: KS(2p vs U(0,1)) = {ks:.4f} "
        f"(tol 0.05, budget {budget:.0f}s)",
    )
    assert worst <= tol
    assert ks < 0.05
    assert elapsed < budget


def test_criterion_6_planted_signal_recovery():
    budget = 300.0
    t0 = time.perf_counter()
    fx = make_fixture()
    profile = activity(fx.expression)
    series = build_series(fx.network, profile)
    params = PredictParams(seed=11)  # pearson, p < 0.01, min_active 5, 1000 perms

    records = predict(compute_trajectories(series), params)
    hits = {r.gene for r in records if r.predicted}
    planted = set(fx.planted)
    recovered = len(hits & planted)
    false_pos = len(hits - planted)
    n_decoys = len(series.universe) - len(planted)

    ctrl_planted = randomized_control(fx.network, profile, params, n_repeats=100, seed=21)

    shuffle_rng = np.random.default_rng(31)
    perm = shuffle_rng.permutation(len(fx.expression.genes))
    shuffled = ExpressionMatrix(
        genes=fx.expression.genes,
        ages=fx.expression.ages,
        age_labels=fx.expression.age_labels,
        values=fx.expression.values[perm],
    )
    ctrl_null = randomized_control(
        fx.network, activity(shuffled), params, n_repeats=100, seed=41
    )

    elapsed = time.perf_counter() - t0
    z_planted = ctrl_planted.z
    z_null = ctrl_null.z
    ok = (
        recovered >= math.ceil(0.9 * len(planted))
        and false_pos <= math.floor(0.05 * n_decoys)
        and z_planted is not None
        and z_planted > 3.0
        and z_null is not None
        and abs(z_null) < 2.0
        and elapsed < budget
    )
    report(
        6, ok, elapsed,
        f"recovered {recovered}/{len(planted)} planted (need >= 18), "
        f"{false_pos}/{n_decoys} false positives (allow <= {math.floor(0.05 * n_decoys)}); "
        f"Z = {z_planted:.2f} planted (need > 3), Z = {z_null:.2f} shuffled "
        f"(need |Z| < 2) over 100 repeats (budget {budget:.0f}s)",
    )
    assert recovered >= math.ceil(0.9 * len(planted))
    assert false_pos <= math.floor(0.05 * n_decoys)
    assert z_planted is not None and z_planted > 3.0
    assert z_null is not None and abs(z_null) < 2.0
    assert elapsed < budget


def _family_sample(family: str, n: int, m: int, entropy: int):
    seed = np.random.SeedSequence(entropy)
    if family == "ERDD":
        source = generate(ModelSpec("ER", n, m, seed=np.random.SeedSequence(entropy + 1)))
        return generate(ModelSpec("ERDD", n, m, seed=seed), source=source)
    return generate(ModelSpec(family, n, m, seed=seed))


def test_criterion_7_model_self_consistency():
    budget = 600.0
    t0 = time.perf_counter()
    n, m = 100, 300
    geometric = {"GEO", "GEOGD"}
    wins: dict[str, int] = {}
    for fam in FAMILIES:
        w = 0
        for trial in range(10):
            entropy = 424200 + 100 * FAMILIES.index(fam) + trial
            sample = _family_sample(fam, n, m, entropy)
            fit = evaluate_fit(sample, instances_per_family=10, seed=entropy + 50)
            best = fit.best_family
            if fam in geometric:
                w += 1 if best in geometric else 0
            else:
                w += 1 if best == fam else 0
        wins[fam] = w
    elapsed = time.perf_counter() - t0
    ok = all(w >= 8 for w in wins.values()) and elapsed < budget
    detail = ", ".join(f"{f} {w}/10" for f, w in wins.items())
    report(
        7, ok, elapsed,
        f"generating family ranked best (>= 8/10 needed; GEO/GEOGD "
        f"interchangeable): {detail} (budget {budget:.0f}s)",
    )
    assert all(w >= 8 for w in wins.values()), wins
    assert elapsed < budget


NETWORK_ENV = "DYNANET_FULLSCALE_NETWORK"
EXPRESSION_ENV = "DYNANET_FULLSCALE_EXPRESSION"


def test_criterion_8_full_scale_conditional():
    net_path = os.environ.get(NETWORK_ENV)
    expr_path = os.environ.get(EXPRESSION_ENV)
    if not net_path or not expr_path:
        print(
            f"[criterion 8] SKIP: set {NETWORK_ENV} and {EXPRESSION_ENV} to "
            f"run the full-scale reproduction",
            flush=True,
        )
        pytest.skip("full-scale input data not supplied")
    t0 = time.perf_counter()
    static = load_edge_list(net_path)
    expr = load_expression(expr_path)
    series = build_series(static, activity(expr))
    n_universe = len(series.universe)
    overlaps = pairwise_overlap(series)
    iu = np.triu_indices(len(series.ages), k=1)
    node_overlap = overlaps.nodes[iu]
    records = predict(compute_trajectories(series), PredictParams(seed=42))
    n_pred = sum(1 for r in records if r.predicted)
    elapsed = time.perf_counter() - t0
    mean_ov = float(np.mean(node_overlap))
    min_ov = float(np.min(node_overlap))
    ok = (
        n_universe == 6397
        and 464 <= n_pred <= 566
        and mean_ov >= 0.90
        and min_ov >= 0.86
    )
    report(
        8, ok, elapsed,
        f"universe {n_universe} (need 6397); predictions {n_pred} "
        f"(need 464..566); node overlap mean {mean_ov:.3f} (>= 0.90) "
        f"min {min_ov:.3f} (>= 0.86)",
    )
    assert n_universe == 6397
    assert 464 <= n_pred <= 566
    assert mean_ov >= 0.90
    assert min_ov >= 0.86
