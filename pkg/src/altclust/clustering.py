"""Lloyd k-means with k-means++ seeding, restarts and empty-cluster repair.

Determinism rules: nearest-centroid ties break toward the lowest centroid
index, the best restart is the first one attaining the minimal
within-cluster sum of squares, and all randomness flows from the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InfeasibleError, ShapeError

_MAX_LLOYD_ITER = 300


@dataclass(frozen=True, eq=False)
class Labeling:
    """Cluster ids for N instances, each in [0, n_clusters)."""

    labels: np.ndarray
    n_clusters: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise ShapeError("labels must be a nonempty vector")
        if self.n_clusters < 1:
            raise ShapeError("n_clusters must be >= 1")
        if labels.min() < 0 or labels.max() >= self.n_clusters:
            raise ShapeError(
                f"labels must lie in [0, {self.n_clusters}), got "
                f"[{labels.min()}, {labels.max()}]"
            )
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @property
    def n_instances(self) -> int:
        return self.labels.size


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # (N, K) squared Euclidean distances, clipped against tiny negatives.
    d2 = (
        (points * points).sum(axis=1)[:, None]
        - 2.0 * points @ centers.T
        + (centers * centers).sum(axis=1)[None, :]
    )
    return np.maximum(d2, 0.0)


def _kmeanspp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = _sq_dists(points, centers[:1]).ravel()
    for j in range(1, k):
        total = d2.sum()
        if total > 0.0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[j] = points[idx]
        d2 = np.minimum(d2, _sq_dists(points, centers[j : j + 1]).ravel())
    return centers


def _repair_empty(labels: np.ndarray, d2: np.ndarray, k: int) -> np.ndarray:
    # Give each empty cluster the point farthest from its current centroid,
    # taken from clusters that can spare one.
    labels = labels.copy()
    counts = np.bincount(labels, minlength=k)
    for empty in np.flatnonzero(counts == 0):
        own = d2[np.arange(labels.size), labels]
        eligible = counts[labels] >= 2
        own = np.where(eligible, own, -np.inf)
        moved = int(np.argmax(own))
        counts[labels[moved]] -= 1
        labels[moved] = empty
        counts[empty] += 1
    return labels


def wcss(points: np.ndarray, labels: np.ndarray, k: int) -> float:
    """Within-cluster sum of squares about cluster means (points are columns)."""
    pts = np.asarray(points, dtype=np.float64).T
    total = 0.0
    for c in range(k):
        member = pts[labels == c]
        if member.size:
            total += float(((member - member.mean(axis=0)) ** 2).sum())
    return total


def kmeans(points: np.ndarray, n_clusters: int, restarts: int = 10, seed: int = 0) -> Labeling:
    """Cluster the columns of ``points`` into ``n_clusters`` groups.

    Runs Lloyd iterations from k-means++ seeds ``restarts`` times and keeps
    the labeling with minimal within-cluster sum of squares. Empty clusters
    are repaired, so every returned cluster is nonempty.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ShapeError("points must be a d x N matrix")
    n = pts.shape[1]
    if n_clusters > n:
        raise InfeasibleError(f"cannot form {n_clusters} clusters from {n} points")
    if n_clusters < 1:
        raise ConfigError("n_clusters must be >= 1")
    if restarts < 1:
        raise ConfigError("restarts must be >= 1")

    x = pts.T
    rng = np.random.default_rng(seed)
    best_labels = None
    best_cost = np.inf
    for _ in range(restarts):
        centers = _kmeanspp(x, n_clusters, rng)
        labels = None
        for _ in range(_MAX_LLOYD_ITER):
            d2 = _sq_dists(x, centers)
            new_labels = np.argmin(d2, axis=1)
            new_labels = _repair_empty(new_labels, d2, n_clusters)
            if labels is not None and np.array_equal(new_labels, labels):
                break
            labels = new_labels
            centers = np.stack(
                [x[labels == c].mean(axis=0) for c in range(n_clusters)]
            )
        cost = wcss(pts, labels, n_clusters)
        if cost < best_cost:
            best_cost = cost
            best_labels = labels
    return Labeling(best_labels, n_clusters)


def generate_clusterings(
    subspaces, n_clusters: int, seed: int, restarts: int = 10
) -> list[Labeling]:
    """k-means on every subspace (columns as points), one derived seed per subspace.

    Subspace m uses seed ``seed + m``, so the first labeling coincides with a
    direct ``kmeans`` call at the base seed.
    """
    return [
        kmeans(h, n_clusters, restarts=restarts, seed=seed + m)
        for m, h in enumerate(subspaces.subspaces)
    ]
