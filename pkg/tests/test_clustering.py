import numpy as np
import pytest

from altclust import Labeling, SubspaceSet, generate_clusterings, kmeans
from altclust.clustering import wcss
from altclust.errors import InfeasibleError, ShapeError

from oracles import best_two_partition_wcss, wcss_loop


class TestLabeling:
    def test_bounds_checked(self):
        with pytest.raises(ShapeError):
            Labeling(np.array([0, 1, 2]), 2)

    def test_basic(self):
        lab = Labeling(np.array([0, 1, 0]), 2)
        assert lab.n_instances == 3


class TestKmeans:
    def test_well_separated_pairs(self):
        pts = np.array([[0.0, 0.0, 10.0, 10.0], [0.0, 1.0, 10.0, 11.0]])
        lab = kmeans(pts, 2, restarts=5, seed=0)
        assert lab.labels[0] == lab.labels[1]
        assert lab.labels[2] == lab.labels[3]
        assert lab.labels[0] != lab.labels[2]

    def test_k_equals_n(self):
        pts = np.random.default_rng(1).standard_normal((2, 5))
        lab = kmeans(pts, 5, restarts=5, seed=0)
        assert sorted(lab.labels.tolist()) == [0, 1, 2, 3, 4]
        assert wcss(pts, lab.labels, 5) == pytest.approx(0.0, abs=1e-20)

    def test_k_too_large(self):
        with pytest.raises(InfeasibleError):
            kmeans(np.zeros((2, 3)), 4)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_exhaustive_optimum(self, seed):
        rng = np.random.default_rng(500 + seed)
        pts = rng.standard_normal((2, 8))
        lab = kmeans(pts, 2, restarts=20, seed=seed)
        got = wcss(pts, lab.labels, 2)
        best = best_two_partition_wcss(pts)
        assert got == pytest.approx(best, rel=1e-10)

    def test_deterministic(self):
        pts = np.random.default_rng(2).standard_normal((3, 12))
        a = kmeans(pts, 3, restarts=7, seed=9)
        b = kmeans(pts, 3, restarts=7, seed=9)
        assert np.array_equal(a.labels, b.labels)

    def test_translation_invariant(self):
        rng = np.random.default_rng(3)
        pts = rng.standard_normal((2, 10))
        shift = rng.standard_normal((2, 1))
        a = kmeans(pts, 3, restarts=8, seed=4)
        b = kmeans(pts + shift, 3, restarts=8, seed=4)
        assert np.array_equal(a.labels, b.labels)

    def test_no_empty_clusters(self):
        # duplicated points force empty-cluster repair
        pts = np.array([[0.0] * 6 + [5.0] * 2])
        lab = kmeans(pts, 3, restarts=10, seed=1)
        assert len(set(lab.labels.tolist())) == 3

    def test_wcss_matches_loop(self):
        rng = np.random.default_rng(4)
        pts = rng.standard_normal((3, 9))
        labels = rng.integers(0, 3, size=9)
        assert wcss(pts, labels, 3) == pytest.approx(wcss_loop(pts, labels), abs=1e-10)


class TestGenerateClusterings:
    def test_single_subspace_matches_direct_call(self):
        rng = np.random.default_rng(5)
        sub = SubspaceSet((rng.standard_normal((2, 10)),))
        got = generate_clusterings(sub, 3, seed=42, restarts=6)
        direct = kmeans(sub.subspaces[0], 3, restarts=6, seed=42)
        assert len(got) == 1
        assert np.array_equal(got[0].labels, direct.labels)

    def test_duplicated_subspaces_same_seed_agree(self):
        rng = np.random.default_rng(6)
        h = rng.standard_normal((2, 12))
        a = kmeans(h, 3, restarts=5, seed=8)
        b = kmeans(h.copy(), 3, restarts=5, seed=8)
        assert np.array_equal(a.labels, b.labels)

    def test_one_labeling_per_subspace(self):
        rng = np.random.default_rng(7)
        sub = SubspaceSet(tuple(rng.standard_normal((2, 9)) for _ in range(3)))
        labs = generate_clusterings(sub, 2, seed=0)
        assert len(labs) == 3
        for lab in labs:
            assert lab.n_instances == 9
