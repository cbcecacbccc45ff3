"""Training configuration and the combined loss.

The total loss is

    recon_scale(D) * sum_{m,v,i} mask_vi * ||x_i^v - f_m^v(h_i^m)||^2
    + diversity_weight * sum_{m < m'} hsic(H^m, H^m')
    [+ sparsity_weight * sum_m ||H^m||_1]

where recon_scale = 1/(N^2 * d_ave^2) normalizes the reconstruction sum by
problem size (d_ave is the mean view dimension). Diversity pairs are counted
once each; the dependence measure is symmetric, so an ordered double sum
would only rescale the weight. Gradients are exact; the l1 subgradient at
zero is taken as 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import MultiViewDataset
from .decoder import DecoderGrads, DecoderNet, backward, masked_error
from .errors import ConfigError, ShapeError
from .hsic import SubspaceSet, hsic, hsic_gradient

NetGrid = Sequence[Sequence[DecoderNet]]


@dataclass(frozen=True)
class TrainConfig:
    """Hyper-parameters for one training run.

    ``diversity_weight`` and ``sparsity_weight`` are the CLI's ``--lambda``
    and ``--alpha``; ``n_subspaces`` (``--subspaces``) is the number of
    alternative clusterings produced, each from a ``subspace_dim``-dimensional
    shared representation. ``hidden_dim`` overrides the per-decoder default
    width; ``n_clusters`` is used by the final k-means step.
    """

    diversity_weight: float = 1.0
    sparsity_weight: float = 0.0
    n_subspaces: int = 2
    subspace_dim: int = 10
    lr: float = 0.01
    max_epochs: int = 200
    tol: float = 1e-5
    seed: int = 0
    hidden_dim: int | None = None
    n_clusters: int = 2

    def __post_init__(self):
        checks = [
            (self.diversity_weight >= 0, "diversity_weight must be >= 0"),
            (self.sparsity_weight >= 0, "sparsity_weight must be >= 0"),
            (self.n_subspaces >= 1, "n_subspaces must be >= 1"),
            (self.subspace_dim >= 1, "subspace_dim must be >= 1"),
            (self.lr > 0, "lr must be > 0"),
            (self.max_epochs >= 0, "max_epochs must be >= 0"),
            (self.tol > 0, "tol must be > 0"),
            (self.hidden_dim is None or self.hidden_dim >= 1, "hidden_dim must be >= 1"),
            (self.n_clusters >= 2, "n_clusters must be >= 2"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)


def recon_scale(dataset: MultiViewDataset) -> float:
    """Reconstruction normalizer 1 / (N^2 * d_ave^2)."""
    d_ave = float(np.mean(dataset.view_dims))
    return 1.0 / (dataset.n_instances**2 * d_ave**2)


def _check_grid(nets: NetGrid, subspaces: SubspaceSet, dataset: MultiViewDataset):
    if len(nets) != subspaces.count:
        raise ShapeError(
            f"{len(nets)} decoder rows for {subspaces.count} subspaces"
        )
    for m, row in enumerate(nets):
        if len(row) != dataset.n_views:
            raise ShapeError(
                f"decoder row {m} has {len(row)} nets for {dataset.n_views} views"
            )


def reconstruction_term(
    nets: NetGrid, subspaces: SubspaceSet, dataset: MultiViewDataset
) -> float:
    """Size-normalized masked squared reconstruction error over all (m, v) pairs."""
    _check_grid(nets, subspaces, dataset)
    scale = recon_scale(dataset)
    total = 0.0
    for m, row in enumerate(nets):
        h = subspaces.subspaces[m]
        for v, net in enumerate(row):
            total += masked_error(net, h, dataset.views[v], dataset.mask[v], scale)
    return total


def diversity_term(subspaces: SubspaceSet) -> float:
    """Sum of pairwise dependence over unordered subspace pairs."""
    mats = subspaces.subspaces
    total = 0.0
    for m in range(len(mats)):
        for mp in range(m + 1, len(mats)):
            total += hsic(mats[m], mats[mp])
    return total


def total_loss(
    nets: NetGrid,
    subspaces: SubspaceSet,
    dataset: MultiViewDataset,
    config: TrainConfig,
) -> float:
    """Reconstruction plus weighted pairwise diversity penalty."""
    value = reconstruction_term(nets, subspaces, dataset)
    if config.diversity_weight != 0.0 and subspaces.count > 1:
        value += config.diversity_weight * diversity_term(subspaces)
    return value


def total_loss_sparse(
    nets: NetGrid,
    subspaces: SubspaceSet,
    dataset: MultiViewDataset,
    config: TrainConfig,
) -> float:
    """:func:`total_loss` plus the entry-wise l1 penalty on the subspaces.

    With ``sparsity_weight == 0`` this is exactly :func:`total_loss`.
    """
    value = total_loss(nets, subspaces, dataset, config)
    if config.sparsity_weight != 0.0:
        l1 = sum(float(np.abs(h).sum()) for h in subspaces.subspaces)
        value += config.sparsity_weight * l1
    return value


def loss_gradients(
    nets: NetGrid,
    subspaces: SubspaceSet,
    dataset: MultiViewDataset,
    config: TrainConfig,
) -> tuple[list[list[DecoderGrads]], list[np.ndarray]]:
    """Exact gradients of the (possibly sparse) loss at the current point.

    Returns per-net parameter gradients in the same M x V layout plus one
    d x N gradient per subspace. The subspace gradient collects the masked
    reconstruction backprop from every view, the weighted dependence
    gradients against all other subspaces, and the l1 subgradient
    (sign, with sign(0) = 0) when sparsity is on.
    """
    _check_grid(nets, subspaces, dataset)
    scale = recon_scale(dataset)
    mats = subspaces.subspaces
    net_grads: list[list[DecoderGrads]] = []
    h_grads = [np.zeros_like(h) for h in mats]
    for m, row in enumerate(nets):
        per_view = []
        for v, net in enumerate(row):
            g, gh = backward(net, mats[m], dataset.views[v], dataset.mask[v], scale)
            per_view.append(g)
            h_grads[m] += gh
        net_grads.append(per_view)
    lam = config.diversity_weight
    if lam != 0.0:
        for m in range(len(mats)):
            for mp in range(len(mats)):
                if mp != m:
                    h_grads[m] += lam * hsic_gradient(mats[m], mats[mp])
    alpha = config.sparsity_weight
    if alpha != 0.0:
        for m in range(len(mats)):
            h_grads[m] += alpha * np.sign(mats[m])
    return net_grads, h_grads
