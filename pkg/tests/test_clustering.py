import numpy as np
import pytest

from inspiremine.analysis.clustering import kmeans, select_k_elbow

from oracles import best_two_cluster_inertia, partition_inertia


def blobs(centers, per_cluster, spread, seed):
    rng = np.random.default_rng(seed)
    points = []
    for center in centers:
        points.append(rng.normal(center, spread, size=(per_cluster, len(center))))
    return np.vstack(points)


class TestKmeans:
    def test_recovers_well_separated_blobs(self):
        points = blobs([(0, 0), (10, 10), (-10, 10)], 30, 0.5, seed=1)
        result = kmeans(points, 3, seed=0, restarts=4)
        groups = [frozenset(np.flatnonzero(result.assignments == c)) for c in range(3)]
        expected = [
            frozenset(range(0, 30)),
            frozenset(range(30, 60)),
            frozenset(range(60, 90)),
        ]
        assert sorted(groups, key=min) == expected

    def test_inertia_history_never_increases(self):
        points = blobs([(0, 0), (4, 4)], 25, 1.5, seed=2)
        for seed in range(5):
            result = kmeans(points, 3, seed=seed)
            history = result.inertia_history
            for previous, current in zip(history, history[1:]):
                assert current <= previous + 1e-9
            assert result.inertia == history[-1]

    def test_inertia_matches_partition_definition(self):
        points = blobs([(0, 0), (6, 0)], 20, 1.0, seed=3)
        result = kmeans(points, 2, seed=0, restarts=3)
        assert result.inertia == pytest.approx(
            partition_inertia(points, result.assignments), rel=1e-9
        )

    def test_six_points_k2_reaches_exhaustive_optimum(self):
        points = np.array(
            [[0.0, 0.0], [1.0, 0.2], [0.4, 0.9], [7.0, 7.0], [7.5, 6.4], [6.8, 7.7]]
        )
        result = kmeans(points, 2, seed=0, restarts=10)
        assert result.inertia == pytest.approx(best_two_cluster_inertia(points), rel=1e-12)

    def test_deterministic_for_fixed_seed(self):
        points = blobs([(0, 0), (5, 5)], 15, 1.0, seed=4)
        first = kmeans(points, 4, seed=9, restarts=3)
        second = kmeans(points, 4, seed=9, restarts=3)
        assert np.array_equal(first.assignments, second.assignments)
        assert first.inertia == second.inertia
        assert np.array_equal(first.centroids, second.centroids)

    def test_k_equals_n_gives_zero_inertia(self):
        points = np.array([[0.0, 0], [1, 0], [2, 0], [3, 0]])
        result = kmeans(points, 4, seed=0, restarts=5)
        assert result.inertia == pytest.approx(0.0, abs=1e-18)
        assert len(set(result.assignments.tolist())) == 4

    def test_duplicate_points_do_not_crash(self):
        points = np.zeros((6, 2))
        points[5] = (1.0, 1.0)
        result = kmeans(points, 2, seed=0, restarts=2)
        assert result.k == 2
        assert np.isfinite(result.inertia)

    def test_every_cluster_nonempty(self):
        points = blobs([(0, 0)], 12, 0.3, seed=5)
        result = kmeans(points, 5, seed=1)
        assert set(result.assignments.tolist()) == set(range(5))

    def test_validation(self):
        points = np.zeros((3, 2))
        with pytest.raises(ValueError):
            kmeans(points, 0)
        with pytest.raises(ValueError):
            kmeans(points, 4)
        with pytest.raises(ValueError):
            kmeans(points, 2, restarts=0)
        with pytest.raises(ValueError):
            kmeans(np.zeros((0, 2)), 1)


class TestElbow:
    def test_finds_three_blobs(self):
        points = blobs([(0, 0), (12, 0), (0, 12)], 40, 0.6, seed=6)
        result = select_k_elbow(points, (2, 8), seed=0)
        assert result.k == 3
        assert result.warning == ""
        assert result.ks == list(range(2, 9))
        assert len(result.inertias) == 7

    def test_inertia_curve_decreases_overall(self):
        points = blobs([(0, 0), (8, 8)], 30, 1.0, seed=7)
        result = select_k_elbow(points, (2, 6), seed=0)
        assert result.inertias[0] > result.inertias[-1]

    def test_constant_curve_warns_and_falls_back(self):
        points = np.zeros((10, 2))
        result = select_k_elbow(points, (2, 5), seed=0)
        assert result.k == 2
        assert "constant" in result.warning

    def test_range_must_span_three_values(self):
        points = blobs([(0, 0)], 10, 1.0, seed=8)
        with pytest.raises(ValueError):
            select_k_elbow(points, (2, 3), seed=0)
