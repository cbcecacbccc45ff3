"""Diverse multiple clusterings of incomplete multi-view data.

Learns M shared subspace representations from multi-view data with missing
views by alternating gradient descent over per-view decoder networks and the
subspaces, under a pairwise dependence penalty that keeps the subspaces (and
the clusterings found in them) apart. k-means on each trained subspace then
yields M alternative clusterings, scored for quality (silhouette, Dunn) and
diversity (NMI, Jaccard).
"""

from .clustering import Labeling, generate_clusterings, kmeans
from .dataset import (
    MultiViewDataset,
    erase_views,
    load_dataset,
    load_truths,
    mean_fill,
    missing_rate,
    save_dataset,
    standardize_views,
)
from .decoder import DecoderGrads, DecoderNet, backward, forward, init_decoder
from .hsic import SubspaceSet, centering_matrix, gram_inner, hsic, hsic_gradient
from .metrics import MetricsReport, dunn_index, evaluate, jaccard, nmi, silhouette
from .objective import (
    TrainConfig,
    loss_gradients,
    recon_scale,
    reconstruction_term,
    total_loss,
    total_loss_sparse,
)
from .runner import RunSpec, SynthSpec, report_plot_data, run, run_single
from .synth import PlantedDataset, make_dual_structure, save_planted
from .trainer import (
    TrainState,
    complete_missing,
    fit,
    init_state,
    load_state,
    save_state,
    train_epoch,
)

__version__ = "0.1.0"

__all__ = [
    "DecoderGrads",
    "DecoderNet",
    "Labeling",
    "MetricsReport",
    "MultiViewDataset",
    "PlantedDataset",
    "RunSpec",
    "SubspaceSet",
    "SynthSpec",
    "TrainConfig",
    "TrainState",
    "backward",
    "centering_matrix",
    "complete_missing",
    "dunn_index",
    "erase_views",
    "evaluate",
    "fit",
    "forward",
    "generate_clusterings",
    "gram_inner",
    "hsic",
    "hsic_gradient",
    "init_decoder",
    "init_state",
    "jaccard",
    "kmeans",
    "load_dataset",
    "load_state",
    "load_truths",
    "loss_gradients",
    "make_dual_structure",
    "mean_fill",
    "missing_rate",
    "nmi",
    "recon_scale",
    "reconstruction_term",
    "report_plot_data",
    "run",
    "run_single",
    "save_dataset",
    "save_planted",
    "save_state",
    "silhouette",
    "standardize_views",
    "total_loss",
    "total_loss_sparse",
    "train_epoch",
]
