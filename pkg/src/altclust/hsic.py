"""Dependence between two subspaces: tr(K A K' A) / (N-1)^2.

K and K' are inner-product Gram matrices of the d x N subspace columns and
A is the centering projector. The value is zero iff the centered Gram
structures are uncorrelated; it is the redundancy penalty that keeps the
learned subspaces (and the clusterings found in them) apart.

Both the value and its gradient are evaluated through the centered factor
form ||Hc Hc'^T||_F^2 (Hc = column-centered H), which is algebraically
identical to the trace form but costs O(N d d') instead of O(N^3).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvariantError, ShapeError


@dataclass(frozen=True, eq=False)
class SubspaceSet:
    """M shared representation matrices, each d x N (columns are instances)."""

    subspaces: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.subspaces) == 0:
            raise ShapeError("need at least one subspace")
        mats = tuple(np.array(h, dtype=np.float64) for h in self.subspaces)
        shape = mats[0].shape
        for m, h in enumerate(mats):
            if h.ndim != 2:
                raise ShapeError(f"subspace {m}: expected a 2-d matrix")
            if h.shape != shape:
                raise ShapeError(
                    f"subspace {m} has shape {h.shape}, subspace 0 has {shape}"
                )
            if not np.all(np.isfinite(h)):
                raise InvariantError(f"subspace {m} contains non-finite entries")
            h.flags.writeable = False
        object.__setattr__(self, "subspaces", mats)

    @property
    def count(self) -> int:
        return len(self.subspaces)

    @property
    def dim(self) -> int:
        return self.subspaces[0].shape[0]

    @property
    def n_instances(self) -> int:
        return self.subspaces[0].shape[1]


def gram_inner(H: np.ndarray) -> np.ndarray:
    """Inner-product Gram matrix H^T H (N x N, symmetric PSD)."""
    H = np.asarray(H, dtype=np.float64)
    return H.T @ H


def centering_matrix(n: int) -> np.ndarray:
    """The projector A with A_ij = delta_ij - 1/n; symmetric, idempotent."""
    if n < 2:
        raise DegenerateInputError(f"centering needs at least 2 instances, got {n}")
    return np.eye(n) - 1.0 / n


def _check_pair(H: np.ndarray, Hp: np.ndarray) -> int:
    if H.ndim != 2 or Hp.ndim != 2:
        raise ShapeError("subspaces must be 2-d matrices")
    if H.shape[1] != Hp.shape[1]:
        raise ShapeError(
            f"instance counts differ: {H.shape[1]} vs {Hp.shape[1]}"
        )
    n = H.shape[1]
    if n < 2:
        raise DegenerateInputError(f"dependence needs at least 2 instances, got {n}")
    return n


def hsic(H: np.ndarray, Hp: np.ndarray) -> float:
    """tr(K A K' A) / (N-1)^2 with inner-product kernels; >= 0, symmetric."""
    H = np.asarray(H, dtype=np.float64)
    Hp = np.asarray(Hp, dtype=np.float64)
    n = _check_pair(H, Hp)
    Hc = H - H.mean(axis=1, keepdims=True)
    Hpc = Hp - Hp.mean(axis=1, keepdims=True)
    c = Hc @ Hpc.T
    return float(np.sum(c * c)) / (n - 1) ** 2


def hsic_gradient(H: np.ndarray, Hp: np.ndarray) -> np.ndarray:
    """d hsic / d H = 2 H A K' A / (N-1)^2, evaluated as 2 (Hc Hc'^T) Hc'."""
    H = np.asarray(H, dtype=np.float64)
    Hp = np.asarray(Hp, dtype=np.float64)
    n = _check_pair(H, Hp)
    Hc = H - H.mean(axis=1, keepdims=True)
    Hpc = Hp - Hp.mean(axis=1, keepdims=True)
    return 2.0 * (Hc @ Hpc.T) @ Hpc / (n - 1) ** 2
