"""Two-layer decoder from a subspace to one view, with exact gradients.

Each (subspace, view) pair owns one of these nets. The map is

    x_hat = W2 @ relu(W1 @ h + b1) + b2

applied column-wise: a rectified hidden layer and a linear output layer.
``backward`` differentiates the column-masked squared reconstruction error,
so unobserved instances contribute exactly zero gradient everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError, ShapeError


@dataclass(frozen=True, eq=False)
class DecoderNet:
    """Parameters of one two-layer decoder.

    Shapes: ``W1`` (hidden x in), ``b1`` (hidden,), ``W2`` (out x hidden),
    ``b2`` (out,). The hidden nonlinearity is the rectifier, the output
    layer is linear.
    """

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        W1 = np.array(self.W1, dtype=np.float64)
        b1 = np.array(self.b1, dtype=np.float64)
        W2 = np.array(self.W2, dtype=np.float64)
        b2 = np.array(self.b2, dtype=np.float64)
        if W1.ndim != 2 or W2.ndim != 2 or b1.ndim != 1 or b2.ndim != 1:
            raise ShapeError("W1/W2 must be matrices, b1/b2 vectors")
        h = W1.shape[0]
        if b1.shape != (h,) or W2.shape[1] != h or b2.shape != (W2.shape[0],):
            raise ShapeError(
                f"inconsistent decoder shapes: W1 {W1.shape}, b1 {b1.shape}, "
                f"W2 {W2.shape}, b2 {b2.shape}"
            )
        for name, a in (("W1", W1), ("b1", b1), ("W2", W2), ("b2", b2)):
            if not np.all(np.isfinite(a)):
                raise InvariantError(f"{name} contains non-finite entries")
            a.flags.writeable = False
        object.__setattr__(self, "W1", W1)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "W2", W2)
        object.__setattr__(self, "b2", b2)

    @property
    def in_dim(self) -> int:
        return self.W1.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.W1.shape[0]

    @property
    def out_dim(self) -> int:
        return self.W2.shape[0]


@dataclass(frozen=True, eq=False)
class DecoderGrads:
    """Gradient holder matching :class:`DecoderNet` parameter shapes."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray


def default_hidden_dim(in_dim: int, out_dim: int) -> int:
    """Default hidden width: max(in_dim, ceil(out_dim / 2))."""
    return max(in_dim, -(-out_dim // 2))


def init_decoder(
    in_dim: int, hidden_dim: int, out_dim: int, rng: np.random.Generator
) -> DecoderNet:
    """Uniform weight init on [-s, s] with s = sqrt(6/(fan_in+fan_out)); zero biases."""
    s1 = math.sqrt(6.0 / (in_dim + hidden_dim))
    s2 = math.sqrt(6.0 / (hidden_dim + out_dim))
    return DecoderNet(
        W1=rng.uniform(-s1, s1, size=(hidden_dim, in_dim)),
        b1=np.zeros(hidden_dim),
        W2=rng.uniform(-s2, s2, size=(out_dim, hidden_dim)),
        b2=np.zeros(out_dim),
    )


def forward(net: DecoderNet, H: np.ndarray) -> np.ndarray:
    """Evaluate the decoder on a d x B block of subspace columns."""
    H = np.asarray(H, dtype=np.float64)
    if H.ndim != 2 or H.shape[0] != net.in_dim:
        raise ShapeError(f"H must be {net.in_dim} x B, got {H.shape}")
    hidden = np.maximum(net.W1 @ H + net.b1[:, None], 0.0)
    return net.W2 @ hidden + net.b2[:, None]


def backward(
    net: DecoderNet,
    H: np.ndarray,
    X: np.ndarray,
    colmask: np.ndarray,
    scale: float,
) -> tuple[DecoderGrads, np.ndarray]:
    """Gradients of scale * sum_i colmask_i * ||x_i - f(h_i)||^2.

    Returns parameter gradients plus the gradient with respect to ``H``.
    Columns with ``colmask == 0`` are zeroed out of the residual before any
    accumulation, so their contents never reach a gradient, not even at the
    bit level.
    """
    H = np.asarray(H, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    keep = np.asarray(colmask).astype(bool)
    if H.ndim != 2 or H.shape[0] != net.in_dim:
        raise ShapeError(f"H must be {net.in_dim} x B, got {H.shape}")
    if X.shape != (net.out_dim, H.shape[1]):
        raise ShapeError(f"X must be {net.out_dim} x {H.shape[1]}, got {X.shape}")
    if keep.shape != (H.shape[1],):
        raise ShapeError(f"colmask must have length {H.shape[1]}")

    Z1 = net.W1 @ H + net.b1[:, None]
    A1 = np.maximum(Z1, 0.0)
    Y = net.W2 @ A1 + net.b2[:, None]
    G = (2.0 * scale) * np.where(keep[None, :], Y - X, 0.0)

    gW2 = G @ A1.T
    gb2 = G.sum(axis=1)
    dZ1 = np.where(Z1 > 0.0, net.W2.T @ G, 0.0)
    gW1 = dZ1 @ H.T
    gb1 = dZ1.sum(axis=1)
    gH = net.W1.T @ dZ1
    return DecoderGrads(W1=gW1, b1=gb1, W2=gW2, b2=gb2), gH


def masked_error(
    net: DecoderNet,
    H: np.ndarray,
    X: np.ndarray,
    colmask: np.ndarray,
    scale: float,
) -> float:
    """The loss that :func:`backward` differentiates."""
    keep = np.asarray(colmask).astype(bool)
    r = np.where(keep[None, :], forward(net, H) - X, 0.0)
    return float(scale * np.sum(r * r))
