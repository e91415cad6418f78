import math

import numpy as np
import pytest

import oracles
from dynanet.expression import ExpressionMatrix, activity
from dynanet.globalstats import global_stats, series_report
from dynanet.graph import Network
from dynanet.graphlets import graphlet_frequencies
from dynanet.snapshots import build_series


class TestGlobalStats:
    def test_triangle(self, triangle):
        gs = global_stats(triangle)
        assert gs.avg_clustering == pytest.approx(1.0)
        assert gs.avg_path_length == pytest.approx(1.0)
        assert gs.max_eccentricity == 1
        assert gs.n_nodes == 3
        assert gs.n_edges == 3

    def test_path3(self, path3):
        gs = global_stats(path3)
        assert gs.avg_clustering == 0.0
        assert gs.avg_path_length == pytest.approx(4 / 3)
        assert gs.max_eccentricity == 2

    def test_tree_clustering_zero(self):
        net = Network.build(
            "abcdef", [("a", "b"), ("a", "c"), ("b", "d"), ("b", "e"), ("c", "f")]
        )
        assert global_stats(net).avg_clustering == 0.0

    def test_complete_clustering_one(self, k4):
        assert global_stats(k4).avg_clustering == pytest.approx(1.0)

    def test_matches_all_pairs_oracle(self, rng):
        net = oracles.int_network(40, oracles.random_edge_pairs(rng, 40, 0.08))
        gs = global_stats(net)
        clus = oracles.clustering_oracle(net)
        assert gs.avg_clustering == pytest.approx(
            sum(clus.values()) / net.n_nodes, abs=1e-12
        )
        assert gs.avg_path_length == pytest.approx(oracles.apl_oracle(net), abs=1e-12)

    def test_no_edges_apl_nan(self):
        gs = global_stats(Network.build("abc", []))
        assert math.isnan(gs.avg_path_length)
        assert gs.avg_clustering == 0.0

    def test_relabeling_invariance(self, rng):
        pairs = oracles.random_edge_pairs(rng, 15, 0.2)
        net = oracles.int_network(15, pairs)
        twin = Network.build(
            [f"z{v}" for v in net.nodes],
            [(f"z{u}", f"z{v}") for u, v in net.edges],
        )
        a, b = global_stats(net), global_stats(twin)
        assert a.avg_path_length == pytest.approx(b.avg_path_length, abs=1e-12)
        assert a.avg_clustering == pytest.approx(b.avg_clustering, abs=1e-12)
        assert a.max_eccentricity == b.max_eccentricity

    def test_exclude_low_degree(self):
        # triangle with a pendant: the pendant's zero drags the default mean
        # down, and dropping degree<2 nodes removes it from the denominator
        plus = Network.build(
            "abcd", [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]
        )
        full = global_stats(plus)
        trimmed = global_stats(plus, exclude_low_degree=True)
        assert full.avg_clustering == pytest.approx((1 + 1 + 1 / 3 + 0) / 4)
        assert trimmed.avg_clustering == pytest.approx((1 + 1 + 1 / 3) / 3)

    def test_graphlet_freq_included(self, k4):
        gs = global_stats(k4)
        assert np.array_equal(gs.graphlet_freq, graphlet_frequencies(k4))

    def test_age_carried(self, triangle):
        assert global_stats(triangle, age=42.0).age == 42.0


def series_of(masks, static, ages):
    genes = sorted(static.nodes)
    values = np.where(np.asarray(masks, dtype=bool), 0.01, 0.5)
    mat = ExpressionMatrix(
        genes=tuple(genes),
        ages=tuple(float(a) for a in ages),
        age_labels=tuple(str(a) for a in ages),
        values=values.astype(float),
    )
    return build_series(static, activity(mat))


class TestSeriesReport:
    def test_one_row_per_age(self, rng):
        static = oracles.int_network(12, oracles.random_edge_pairs(rng, 12, 0.3))
        masks = rng.random((12, 4)) < 0.8
        report = series_report(series_of(masks, static, range(30, 34)))
        assert len(report) == 4
        assert [gs.age for gs in report] == [30.0, 31.0, 32.0, 33.0]

    def test_identical_snapshots_constant_columns(self, rng):
        static = oracles.int_network(10, oracles.random_edge_pairs(rng, 10, 0.4))
        masks = np.ones((10, 3), dtype=bool)
        report = series_report(series_of(masks, static, range(50, 53)))
        assert len({gs.n_nodes for gs in report}) == 1
        assert len({gs.avg_path_length for gs in report}) == 1
        assert len({gs.avg_clustering for gs in report}) == 1

    def test_order_equivariance(self, rng):
        static = oracles.int_network(14, oracles.random_edge_pairs(rng, 14, 0.3))
        masks = rng.random((14, 5)) < 0.7
        fwd = series_report(series_of(masks, static, [10, 20, 30, 40, 50]))
        rev = series_report(series_of(masks[:, ::-1], static, [10, 20, 30, 40, 50]))
        for t in range(5):
            assert fwd[t].n_nodes == rev[4 - t].n_nodes
            assert fwd[t].n_edges == rev[4 - t].n_edges
            assert fwd[t].avg_clustering == rev[4 - t].avg_clustering

    def test_row_matches_single_call(self, rng):
        static = oracles.int_network(12, oracles.random_edge_pairs(rng, 12, 0.35))
        masks = rng.random((12, 3)) < 0.75
        series = series_of(masks, static, [60, 61, 62])
        report = series_report(series)
        for t, gs in enumerate(report):
            solo = global_stats(series.snapshots[t], age=series.ages[t])
            assert gs.n_nodes == solo.n_nodes
            assert gs.avg_path_length == pytest.approx(
                solo.avg_path_length, abs=1e-15, nan_ok=True
            )
            assert np.array_equal(gs.graphlet_freq, solo.graphlet_freq)
