import numpy as np
import pytest

from altclust import DecoderNet, backward, forward, init_decoder
from altclust.decoder import default_hidden_dim, masked_error
from altclust.errors import InvariantError, ShapeError

from oracles import central_difference, forward_loop, masked_error_loop


def random_net(rng, in_dim=3, hidden=4, out_dim=5):
    return init_decoder(in_dim, hidden, out_dim, rng)


class TestForward:
    def test_zero_net_outputs_bias(self):
        net = DecoderNet(np.zeros((4, 3)), np.zeros(4), np.zeros((5, 4)), np.zeros(5))
        H = np.random.default_rng(0).standard_normal((3, 6))
        assert np.array_equal(forward(net, H), np.zeros((5, 6)))

    def test_identity_padding_passes_nonnegatives(self):
        # relu is identity on nonnegative inputs
        W1 = np.vstack([np.eye(3), np.zeros((1, 3))])
        W2 = np.hstack([np.eye(3), np.zeros((3, 1))])
        net = DecoderNet(W1, np.zeros(4), W2, np.zeros(3))
        H = np.abs(np.random.default_rng(1).standard_normal((3, 5)))
        assert np.allclose(forward(net, H), H, atol=1e-15)

    def test_matches_scalar_loop(self):
        rng = np.random.default_rng(3)
        net = random_net(rng, in_dim=4, hidden=6, out_dim=5)
        H = rng.standard_normal((4, 5))
        expected = forward_loop(net.W1, net.b1, net.W2, net.b2, H)
        assert np.allclose(forward(net, H), expected, atol=1e-10)

    def test_output_layer_homogeneous(self):
        rng = np.random.default_rng(4)
        net = random_net(rng)
        doubled = DecoderNet(net.W1, net.b1, 2.0 * net.W2, 2.0 * net.b2)
        H = rng.standard_normal((3, 7))
        assert np.allclose(forward(doubled, H), 2.0 * forward(net, H), atol=1e-12)

    def test_shape_mismatch(self):
        net = random_net(np.random.default_rng(5))
        with pytest.raises(ShapeError):
            forward(net, np.zeros((4, 2)))


class TestBackward:
    def test_fully_masked_gives_zero(self):
        rng = np.random.default_rng(6)
        net = random_net(rng)
        H = rng.standard_normal((3, 6))
        X = rng.standard_normal((5, 6))
        grads, gh = backward(net, H, X, np.zeros(6), scale=1.0)
        for name in ("W1", "b1", "W2", "b2"):
            assert np.array_equal(getattr(grads, name), np.zeros_like(getattr(net, name)))
        assert np.array_equal(gh, np.zeros_like(H))

    def test_zero_residual_gives_zero(self):
        rng = np.random.default_rng(7)
        net = random_net(rng)
        H = rng.standard_normal((3, 6))
        X = forward(net, H)
        grads, gh = backward(net, H, X, np.ones(6), scale=0.5)
        assert np.allclose(gh, 0.0, atol=1e-15)
        assert np.allclose(grads.W2, 0.0, atol=1e-15)

    def test_masked_column_gets_no_h_gradient(self):
        rng = np.random.default_rng(8)
        net = random_net(rng)
        H = rng.standard_normal((3, 6))
        X = rng.standard_normal((5, 6))
        mask = np.array([1, 1, 0, 1, 0, 1])
        _, gh = backward(net, H, X, mask, scale=1.0)
        assert np.array_equal(gh[:, 2], np.zeros(3))
        assert np.array_equal(gh[:, 4], np.zeros(3))

    @pytest.mark.parametrize("seed", range(20))
    def test_gradient_matches_finite_differences(self, seed):
        rng = np.random.default_rng(100 + seed)
        d, h, dv, B = 3, 4, 5, 6
        net = random_net(rng, d, h, dv)
        H = rng.standard_normal((d, B))
        X = rng.standard_normal((dv, B))
        mask = rng.integers(0, 2, size=B)
        mask[0] = 1
        scale = float(rng.uniform(0.5, 2.0))

        grads, gh = backward(net, H, X, mask, scale)
        analytic = np.concatenate([
            grads.W1.ravel(), grads.b1.ravel(), grads.W2.ravel(),
            grads.b2.ravel(), gh.ravel(),
        ])

        shapes = [net.W1.shape, net.b1.shape, net.W2.shape, net.b2.shape, H.shape]
        x0 = np.concatenate([net.W1.ravel(), net.b1.ravel(), net.W2.ravel(),
                             net.b2.ravel(), H.ravel()])

        def unpack(x):
            parts, i = [], 0
            for shp in shapes:
                size = int(np.prod(shp))
                parts.append(x[i:i + size].reshape(shp))
                i += size
            return parts

        def f(x):
            W1, b1, W2, b2, Hx = unpack(x)
            return masked_error_loop(W1, b1, W2, b2, Hx, X, mask, scale)

        numeric = central_difference(f, x0, step=1e-5)
        rel = np.abs(analytic - numeric) / np.maximum(np.abs(numeric), 1e-8)
        assert rel.max() < 1e-4

    def test_masked_error_matches_loop(self):
        rng = np.random.default_rng(9)
        net = random_net(rng)
        H = rng.standard_normal((3, 6))
        X = rng.standard_normal((5, 6))
        mask = np.array([1, 0, 1, 1, 0, 1])
        assert masked_error(net, H, X, mask, 0.7) == pytest.approx(
            masked_error_loop(net.W1, net.b1, net.W2, net.b2, H, X, mask, 0.7),
            abs=1e-12,
        )


class TestConstruction:
    def test_shape_validation(self):
        with pytest.raises(ShapeError):
            DecoderNet(np.zeros((4, 3)), np.zeros(5), np.zeros((5, 4)), np.zeros(5))

    def test_finite_validation(self):
        W1 = np.zeros((2, 2))
        W1[0, 0] = np.inf
        with pytest.raises(InvariantError):
            DecoderNet(W1, np.zeros(2), np.zeros((3, 2)), np.zeros(3))

    def test_default_hidden_dim(self):
        assert default_hidden_dim(3, 5) == 3
        assert default_hidden_dim(3, 8) == 4
        assert default_hidden_dim(10, 4) == 10

    def test_init_bounds_and_determinism(self):
        a = init_decoder(3, 4, 5, np.random.default_rng(1))
        b = init_decoder(3, 4, 5, np.random.default_rng(1))
        assert np.array_equal(a.W1, b.W1) and np.array_equal(a.W2, b.W2)
        s1 = np.sqrt(6.0 / (3 + 4))
        assert np.abs(a.W1).max() <= s1
        assert np.array_equal(a.b1, np.zeros(4))
