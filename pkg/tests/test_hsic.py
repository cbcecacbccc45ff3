import numpy as np
import pytest

from altclust import SubspaceSet, centering_matrix, gram_inner, hsic, hsic_gradient
from altclust.errors import DegenerateInputError, ShapeError

from oracles import central_difference, gram_loop, hsic_loop


class TestGram:
    def test_identity_columns(self):
        assert np.array_equal(gram_inner(np.eye(2)), np.eye(2))

    def test_single_column(self):
        h = np.array([[1.0], [2.0]])
        assert np.allclose(gram_inner(h), [[5.0]])

    def test_matches_double_loop(self):
        H = np.random.default_rng(5).standard_normal((3, 4))
        assert np.allclose(gram_inner(H), gram_loop(H), atol=1e-12)

    def test_psd(self):
        H = np.random.default_rng(6).standard_normal((2, 5))
        eig = np.linalg.eigvalsh(gram_inner(H))
        assert eig.min() > -1e-10


class TestCentering:
    def test_n2_exact(self):
        assert np.allclose(centering_matrix(2), [[0.5, -0.5], [-0.5, 0.5]])

    def test_rows_sum_to_zero(self):
        for n in (2, 3, 7):
            assert np.allclose(centering_matrix(n) @ np.ones(n), 0.0, atol=1e-12)

    def test_idempotent(self):
        A = centering_matrix(5)
        assert np.allclose(A @ A, A, atol=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateInputError):
            centering_matrix(1)


class TestHsic:
    def test_constant_columns_give_zero(self):
        H = np.random.default_rng(0).standard_normal((2, 5))
        Hp = np.tile(np.array([[3.0], [1.0]]), (1, 5))
        assert hsic(H, Hp) == pytest.approx(0.0, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(1)
        H = rng.standard_normal((2, 6))
        Hp = rng.standard_normal((3, 6))
        assert hsic(H, Hp) == pytest.approx(hsic(Hp, H), abs=1e-14)

    def test_hand_case_two_points(self):
        # K=[[1,-1],[-1,1]], K'=[[4,0],[0,0]], tr(KAK'A)=4, (N-1)^2=1
        H = np.array([[1.0, -1.0]])
        Hp = np.array([[2.0, 0.0]])
        assert hsic(H, Hp) == pytest.approx(4.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_trace_oracle(self, seed):
        rng = np.random.default_rng(200 + seed)
        d = int(rng.integers(1, 5))
        dp = int(rng.integers(1, 5))
        n = int(rng.integers(2, 9))
        H = rng.standard_normal((d, n))
        Hp = rng.standard_normal((dp, n))
        assert hsic(H, Hp) == pytest.approx(hsic_loop(H, Hp), abs=1e-10)

    def test_nonnegative(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            H = rng.standard_normal((2, 6))
            Hp = rng.standard_normal((2, 6))
            assert hsic(H, Hp) >= -1e-12

    def test_translation_invariance(self):
        rng = np.random.default_rng(3)
        H = rng.standard_normal((3, 8))
        Hp = rng.standard_normal((2, 8))
        shifted = H + rng.standard_normal((3, 1))
        assert hsic(shifted, Hp) == pytest.approx(hsic(H, Hp), abs=1e-9)

    def test_self_zero_iff_constant(self):
        H = np.tile(np.array([[2.0], [-1.0]]), (1, 4))
        assert hsic(H, H) == pytest.approx(0.0, abs=1e-12)
        H2 = H.copy()
        H2[0, 0] += 1.0
        assert hsic(H2, H2) > 1e-6

    def test_mismatched_n(self):
        with pytest.raises(ShapeError):
            hsic(np.zeros((2, 3)), np.zeros((2, 4)))

    def test_too_few_instances(self):
        with pytest.raises(DegenerateInputError):
            hsic(np.zeros((2, 1)), np.zeros((2, 1)))


class TestHsicGradient:
    def test_constant_other_gives_zero(self):
        H = np.random.default_rng(4).standard_normal((2, 5))
        Hp = np.ones((3, 5)) * 2.5
        assert np.allclose(hsic_gradient(H, Hp), 0.0, atol=1e-14)

    def test_quadratic_scaling_in_other(self):
        rng = np.random.default_rng(5)
        H = rng.standard_normal((2, 6))
        Hp = rng.standard_normal((2, 6))
        g1 = hsic_gradient(H, Hp)
        g2 = hsic_gradient(H, 3.0 * Hp)
        assert np.allclose(g2, 9.0 * g1, atol=1e-10)

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_finite_differences(self, seed):
        rng = np.random.default_rng(300 + seed)
        d = int(rng.integers(1, 4))
        n = int(rng.integers(3, 9))
        H = rng.standard_normal((d, n))
        Hp = rng.standard_normal((int(rng.integers(1, 4)), n))
        analytic = hsic_gradient(H, Hp).ravel()

        def f(x):
            return hsic_loop(x.reshape(H.shape), Hp)

        numeric = central_difference(f, H.ravel().copy(), step=1e-5)
        rel = np.abs(analytic - numeric) / np.maximum(np.abs(numeric), 1e-8)
        assert rel.max() < 1e-4


class TestSubspaceSet:
    def test_valid(self):
        rng = np.random.default_rng(6)
        s = SubspaceSet(tuple(rng.standard_normal((3, 5)) for _ in range(2)))
        assert s.count == 2 and s.dim == 3 and s.n_instances == 5

    def test_mismatched_shapes(self):
        with pytest.raises(ShapeError):
            SubspaceSet((np.zeros((3, 5)), np.zeros((3, 6))))
