"""Alternating gradient descent over decoder parameters and subspaces.

One epoch performs the full alternation: every decoder takes one gradient
step against the pre-epoch subspaces (the decoder blocks are independent of
each other, so their order is immaterial), then the subspaces are updated
one after another against the fresh decoders, each step seeing the
already-updated earlier subspaces. The post-update loss is appended to the
history; training stops when its relative change drops below ``tol`` or the
epoch budget runs out.

Plain full-batch descent with a fixed step size, on purpose: no momentum,
no schedules, no silent clipping. If the loss leaves the reals the trainer
raises instead of papering over a bad learning rate. Note that the
reconstruction normalizer shrinks gradients as 1/(N^2 * d_ave^2), so useful
step sizes grow with problem size; pick ``lr`` per problem.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .dataset import MultiViewDataset
from .decoder import DecoderNet, backward, default_hidden_dim, forward, init_decoder
from .errors import DivergenceError, InvariantError
from .hsic import SubspaceSet, hsic_gradient
from .objective import TrainConfig, recon_scale, total_loss_sparse

_INIT_SUBSPACE_SCALE = 0.1


@dataclass(frozen=True, eq=False)
class TrainState:
    """Snapshot of an optimization run.

    ``nets[m][v]`` decodes subspace m into view v. ``loss_history[0]`` is the
    loss at initialization; one entry is appended per completed epoch.
    """

    nets: tuple[tuple[DecoderNet, ...], ...]
    subspaces: SubspaceSet
    epoch: int
    loss_history: tuple[float, ...]
    converged: bool


def init_state(dataset: MultiViewDataset, config: TrainConfig) -> TrainState:
    """Random starting point: N(0, 0.1^2) subspace entries, uniform decoder weights.

    All randomness comes from ``config.seed``; the same dataset and config
    always produce the bit-identical state.
    """
    rng = np.random.default_rng(config.seed)
    d = config.subspace_dim
    n = dataset.n_instances
    mats = tuple(
        _INIT_SUBSPACE_SCALE * rng.standard_normal((d, n))
        for _ in range(config.n_subspaces)
    )
    nets = []
    for _ in range(config.n_subspaces):
        row = []
        for dv in dataset.view_dims:
            hidden = config.hidden_dim or default_hidden_dim(d, dv)
            row.append(init_decoder(d, hidden, dv, rng))
        nets.append(tuple(row))
    subspaces = SubspaceSet(mats)
    loss0 = total_loss_sparse(nets, subspaces, dataset, config)
    return TrainState(
        nets=tuple(nets),
        subspaces=subspaces,
        epoch=0,
        loss_history=(loss0,),
        converged=False,
    )


def train_epoch(
    state: TrainState, dataset: MultiViewDataset, config: TrainConfig
) -> TrainState:
    """One full alternation: all decoder steps, then all subspace steps."""
    lr = config.lr
    scale = recon_scale(dataset)
    mats = list(state.subspaces.subspaces)
    try:
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            new_nets = []
            for m, row in enumerate(state.nets):
                new_row = []
                for v, net in enumerate(row):
                    g, _ = backward(
                        net, mats[m], dataset.views[v], dataset.mask[v], scale
                    )
                    new_row.append(
                        DecoderNet(
                            W1=net.W1 - lr * g.W1,
                            b1=net.b1 - lr * g.b1,
                            W2=net.W2 - lr * g.W2,
                            b2=net.b2 - lr * g.b2,
                        )
                    )
                new_nets.append(tuple(new_row))

            lam = config.diversity_weight
            alpha = config.sparsity_weight
            for m in range(len(mats)):
                gh = np.zeros_like(mats[m])
                for v in range(dataset.n_views):
                    _, g = backward(
                        new_nets[m][v], mats[m], dataset.views[v], dataset.mask[v], scale
                    )
                    gh += g
                if lam != 0.0:
                    for mp in range(len(mats)):
                        if mp != m:
                            gh += lam * hsic_gradient(mats[m], mats[mp])
                if alpha != 0.0:
                    gh += alpha * np.sign(mats[m])
                mats[m] = mats[m] - lr * gh

            subspaces = SubspaceSet(tuple(mats))
            loss = total_loss_sparse(new_nets, subspaces, dataset, config)
    except InvariantError as err:
        raise DivergenceError(state.epoch + 1, f"parameters left the reals: {err}") from err
    if not np.isfinite(loss):
        raise DivergenceError(state.epoch + 1)
    return TrainState(
        nets=tuple(new_nets),
        subspaces=subspaces,
        epoch=state.epoch + 1,
        loss_history=state.loss_history + (loss,),
        converged=False,
    )


def fit(dataset: MultiViewDataset, config: TrainConfig) -> TrainState:
    """Run epochs until the relative loss change drops below ``config.tol``.

    Returns the final state; ``converged`` is True only when the tolerance
    fired inside the epoch budget.
    """
    state = init_state(dataset, config)
    for _ in range(config.max_epochs):
        state = train_epoch(state, dataset, config)
        prev, cur = state.loss_history[-2], state.loss_history[-1]
        if abs(cur - prev) / max(abs(prev), 1e-12) < config.tol:
            state = replace(state, converged=True)
            break
    return state


def complete_missing(state: TrainState, dataset: MultiViewDataset) -> list[np.ndarray]:
    """Fill unobserved cells with the mean decoder reconstruction.

    Each missing column of view v becomes the average over subspaces of
    f_m^v(h_i^m); observed columns pass through untouched.
    """
    m_count = len(state.nets)
    out = []
    for v in range(dataset.n_views):
        recon = np.zeros_like(dataset.views[v])
        for m in range(m_count):
            recon += forward(state.nets[m][v], state.subspaces.subspaces[m])
        recon /= m_count
        obs = dataset.view_mask(v)
        out.append(np.where(obs[None, :], dataset.views[v], recon))
    return out


def save_state(state: TrainState, path) -> Path:
    """Checkpoint to a single npz archive; float64 payloads round-trip bit-exactly."""
    path = Path(path)
    arrays: dict[str, np.ndarray] = {}
    for m, row in enumerate(state.nets):
        for v, net in enumerate(row):
            for name in ("W1", "b1", "W2", "b2"):
                arrays[f"theta_m{m}_v{v}_{name}"] = getattr(net, name)
    for m, h in enumerate(state.subspaces.subspaces):
        arrays[f"subspace_m{m}"] = h
    arrays["loss_history"] = np.asarray(state.loss_history, dtype=np.float64)
    arrays["epoch"] = np.asarray(state.epoch, dtype=np.int64)
    arrays["converged"] = np.asarray(state.converged, dtype=np.bool_)
    np.savez(path, **arrays)
    return path


def load_state(path) -> TrainState:
    """Inverse of :func:`save_state`."""
    with np.load(path) as archive:
        m_count = 1 + max(
            int(k.split("_")[1][1:]) for k in archive.files if k.startswith("subspace_m")
        )
        v_count = 1 + max(
            int(k.split("_")[2][1:]) for k in archive.files if k.startswith("theta_m0_")
        )
        nets = tuple(
            tuple(
                DecoderNet(
                    W1=archive[f"theta_m{m}_v{v}_W1"],
                    b1=archive[f"theta_m{m}_v{v}_b1"],
                    W2=archive[f"theta_m{m}_v{v}_W2"],
                    b2=archive[f"theta_m{m}_v{v}_b2"],
                )
                for v in range(v_count)
            )
            for m in range(m_count)
        )
        subspaces = SubspaceSet(
            tuple(archive[f"subspace_m{m}"] for m in range(m_count))
        )
        return TrainState(
            nets=nets,
            subspaces=subspaces,
            epoch=int(archive["epoch"]),
            loss_history=tuple(float(x) for x in archive["loss_history"]),
            converged=bool(archive["converged"]),
        )
