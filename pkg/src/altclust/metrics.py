"""Clustering validity and redundancy measures.

Quality of a single clustering: silhouette coefficient and Dunn index,
both Euclidean, computed in whatever space the points are given (here the
learned subspace the clustering was found in). Similarity between two
clusterings: normalized mutual information (natural log, geometric-mean
normalization) and the pairwise Jaccard coefficient. For alternative
clusterings, lower NMI/JC means more diversity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clustering import Labeling
from .errors import DegenerateInputError, MetricUndefinedError, ShapeError
from .hsic import SubspaceSet


def _distance_matrix(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64).T
    sq = (pts * pts).sum(axis=1)
    d2 = sq[:, None] - 2.0 * pts @ pts.T + sq[None, :]
    return np.sqrt(np.maximum(d2, 0.0))


def _cluster_members(labeling: Labeling) -> list[np.ndarray]:
    members = [
        np.flatnonzero(labeling.labels == c) for c in range(labeling.n_clusters)
    ]
    return [m for m in members if m.size]


def silhouette(points: np.ndarray, labeling: Labeling) -> float:
    """Mean silhouette value (b - a) / max(a, b) over all points.

    a is the mean distance to the point's own cluster (excluding itself),
    b the smallest mean distance to another cluster. Points in singleton
    clusters contribute 0.
    """
    if np.asarray(points).shape[1] != labeling.n_instances:
        raise ShapeError("points and labeling disagree on N")
    members = _cluster_members(labeling)
    if len(members) < 2:
        raise MetricUndefinedError("silhouette needs at least 2 nonempty clusters")
    dist = _distance_matrix(points)
    n = labeling.n_instances
    scores = np.zeros(n)
    sums = np.stack([dist[:, m].sum(axis=1) for m in members], axis=1)
    sizes = np.array([m.size for m in members])
    owner = np.empty(n, dtype=np.int64)
    for c, m in enumerate(members):
        owner[m] = c
    for i in range(n):
        c = owner[i]
        if sizes[c] == 1:
            continue
        a = sums[i, c] / (sizes[c] - 1)
        other = [sums[i, cc] / sizes[cc] for cc in range(len(members)) if cc != c]
        b = min(other)
        denom = max(a, b)
        scores[i] = (b - a) / denom if denom > 0.0 else 0.0
    return float(scores.mean())


def dunn_index(points: np.ndarray, labeling: Labeling) -> float:
    """Smallest between-cluster distance over largest cluster diameter."""
    if np.asarray(points).shape[1] != labeling.n_instances:
        raise ShapeError("points and labeling disagree on N")
    members = _cluster_members(labeling)
    if len(members) < 2:
        raise MetricUndefinedError("Dunn index needs at least 2 nonempty clusters")
    dist = _distance_matrix(points)
    max_diam = 0.0
    for m in members:
        if m.size > 1:
            max_diam = max(max_diam, float(dist[np.ix_(m, m)].max()))
    if max_diam == 0.0:
        raise DegenerateInputError("all clusters have zero diameter")
    min_inter = np.inf
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            min_inter = min(
                min_inter, float(dist[np.ix_(members[a], members[b])].min())
            )
    return min_inter / max_diam


def _contingency(a: Labeling, b: Labeling) -> np.ndarray:
    if a.n_instances != b.n_instances:
        raise ShapeError("labelings have different lengths")
    table = np.zeros((a.n_clusters, b.n_clusters), dtype=np.int64)
    np.add.at(table, (a.labels, b.labels), 1)
    return table


def nmi(a: Labeling, b: Labeling) -> float:
    """Mutual information over the geometric mean of the two entropies.

    Natural-log entropies of the empirical contingency table; 0 whenever
    either labeling carries no information.
    """
    table = _contingency(a, b)
    n = a.n_instances
    p = table / n
    pa = p.sum(axis=1)
    pb = p.sum(axis=0)
    ha = float(-np.sum(pa[pa > 0] * np.log(pa[pa > 0])))
    hb = float(-np.sum(pb[pb > 0] * np.log(pb[pb > 0])))
    if ha == 0.0 or hb == 0.0:
        return 0.0
    nz = p > 0
    info = float(np.sum(p[nz] * np.log(p[nz] / np.outer(pa, pb)[nz])))
    return min(1.0, max(0.0, info / np.sqrt(ha * hb)))


def jaccard(a: Labeling, b: Labeling) -> float:
    """Pair-counting Jaccard: co-clustered-in-both / co-clustered-in-either."""
    table = _contingency(a, b)

    def pairs(counts: np.ndarray) -> float:
        return float((counts * (counts - 1)).sum()) / 2.0

    both = pairs(table)
    in_a = pairs(table.sum(axis=1))
    in_b = pairs(table.sum(axis=0))
    denom = in_a + in_b - both
    if denom == 0.0:
        return 1.0
    return both / denom


@dataclass(frozen=True, eq=False)
class MetricsReport:
    """Quality and diversity summary for M alternative clusterings.

    ``nmi_matrix``/``jc_matrix`` are symmetric M x M with unit diagonal;
    the pairwise averages run over unordered pairs and are None when M == 1.
    ``diversity`` is 1 - avg_nmi. ``space`` records where quality was
    measured (the learned subspaces, not the raw features).
    """

    sc: tuple[float, ...]
    di: tuple[float, ...]
    nmi_matrix: np.ndarray
    jc_matrix: np.ndarray
    avg_sc: float
    avg_di: float
    avg_nmi: float | None
    avg_jc: float | None
    diversity: float | None
    space: str = field(default="subspace")

    def to_dict(self) -> dict:
        return {
            "sc": list(self.sc),
            "di": list(self.di),
            "nmi_matrix": self.nmi_matrix.tolist(),
            "jc_matrix": self.jc_matrix.tolist(),
            "avg_sc": self.avg_sc,
            "avg_di": self.avg_di,
            "avg_nmi": self.avg_nmi,
            "avg_jc": self.avg_jc,
            "diversity": self.diversity,
            "space": self.space,
        }


def evaluate(subspaces: SubspaceSet, clusterings: list[Labeling]) -> MetricsReport:
    """Score each clustering in its own subspace and all pairs against each other."""
    m = subspaces.count
    if len(clusterings) != m:
        raise ShapeError(f"{len(clusterings)} clusterings for {m} subspaces")
    sc = tuple(silhouette(subspaces.subspaces[i], clusterings[i]) for i in range(m))
    di = tuple(dunn_index(subspaces.subspaces[i], clusterings[i]) for i in range(m))
    nmi_mat = np.eye(m)
    jc_mat = np.eye(m)
    pair_nmi = []
    pair_jc = []
    for i in range(m):
        for j in range(i + 1, m):
            nij = nmi(clusterings[i], clusterings[j])
            jij = jaccard(clusterings[i], clusterings[j])
            nmi_mat[i, j] = nmi_mat[j, i] = nij
            jc_mat[i, j] = jc_mat[j, i] = jij
            pair_nmi.append(nij)
            pair_jc.append(jij)
    avg_nmi = float(np.mean(pair_nmi)) if pair_nmi else None
    avg_jc = float(np.mean(pair_jc)) if pair_jc else None
    return MetricsReport(
        sc=sc,
        di=di,
        nmi_matrix=nmi_mat,
        jc_matrix=jc_mat,
        avg_sc=float(np.mean(sc)),
        avg_di=float(np.mean(di)),
        avg_nmi=avg_nmi,
        avg_jc=avg_jc,
        diversity=(1.0 - avg_nmi) if avg_nmi is not None else None,
    )
