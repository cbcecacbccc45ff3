"""Multi-view data with missing views.

Instances are columns. A dataset holds one feature matrix per view plus a
binary presence mask; a zero in the mask marks a (view, instance) cell whose
feature column is dead weight, and every computation in this package has to
skip such cells through the mask rather than trust their contents. Loading,
saving, random erasure, missing-rate accounting and the mean-fill baseline
all live here.

On-disk layout (one directory per dataset):

    view_0.csv ... view_{V-1}.csv   d_v x N matrices, comma separated
    mask.csv                        V x N matrix of 0/1
    meta.json                       {"n_views", "n_instances", "view_dims",
                                     optional "truths": {name: label list}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DataFormatError,
    DegenerateInputError,
    InfeasibleError,
    InvariantError,
    MaskInvariantError,
    ShapeError,
)


@dataclass(frozen=True, eq=False)
class MultiViewDataset:
    """V feature matrices (columns are instances) plus a V x N presence mask.

    ``views[v]`` has shape ``(view_dims[v], n_instances)``. ``mask[v, n] == 1``
    marks instance ``n`` as observed in view ``v``; every instance must be
    observed in at least one view. Arrays are copied and frozen at
    construction, so datasets are safe to share across workers.
    """

    views: tuple[np.ndarray, ...]
    mask: np.ndarray

    def __post_init__(self):
        if len(self.views) == 0:
            raise ShapeError("a dataset needs at least one view")
        views = tuple(np.array(v, dtype=np.float64) for v in self.views)
        n = views[0].shape[1] if views[0].ndim == 2 else -1
        for v, x in enumerate(views):
            if x.ndim != 2:
                raise ShapeError(f"view {v}: expected a 2-d matrix, got ndim={x.ndim}")
            if x.shape[1] != n:
                raise ShapeError(
                    f"view {v} has {x.shape[1]} instances, view 0 has {n}"
                )
            if not np.all(np.isfinite(x)):
                raise InvariantError(f"view {v} contains non-finite entries")
        mask = np.array(self.mask)
        if mask.shape != (len(views), n):
            raise ShapeError(
                f"mask shape {mask.shape} does not match {len(views)} views x {n} instances"
            )
        if not np.isin(mask, (0, 1)).all():
            raise MaskInvariantError("mask entries must be 0 or 1")
        mask = mask.astype(np.int8)
        empty = np.flatnonzero(mask.sum(axis=0) == 0)
        if empty.size:
            raise MaskInvariantError(
                f"instances observed in no view: {empty[:8].tolist()}"
            )
        for x in views:
            x.flags.writeable = False
        mask.flags.writeable = False
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "mask", mask)

    @property
    def n_views(self) -> int:
        return len(self.views)

    @property
    def n_instances(self) -> int:
        return self.views[0].shape[1]

    @property
    def view_dims(self) -> tuple[int, ...]:
        return tuple(x.shape[0] for x in self.views)

    def view_mask(self, v: int) -> np.ndarray:
        """Boolean observation row for view ``v``."""
        return self.mask[v].astype(bool)


def missing_rate(mask: np.ndarray) -> float:
    """Fraction of unobserved (view, instance) cells: 1 - sum(mask)/(V*N)."""
    mask = np.asarray(mask)
    return float(1.0 - mask.sum() / mask.size)


def _load_matrix(path: Path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as err:
        raise DataFormatError(f"{path.name}: {err}") from err


def load_dataset(path, standardize: bool = True) -> MultiViewDataset:
    """Read a dataset directory.

    Feature rows are z-scored over their observed columns by default
    (``standardize=False`` keeps the raw values). Rejects directories whose
    matrices disagree with ``meta.json`` or whose mask leaves an instance
    unobserved everywhere.
    """
    path = Path(path)
    try:
        meta = json.loads((path / "meta.json").read_text())
    except json.JSONDecodeError as err:
        raise DataFormatError(f"meta.json: {err}") from err
    try:
        n_views = int(meta["n_views"])
        n_instances = int(meta["n_instances"])
        view_dims = [int(d) for d in meta["view_dims"]]
    except (KeyError, TypeError, ValueError) as err:
        raise DataFormatError(f"meta.json: missing or invalid field ({err})") from err
    if len(view_dims) != n_views:
        raise DataFormatError("meta.json: view_dims length disagrees with n_views")

    views = []
    for v in range(n_views):
        x = _load_matrix(path / f"view_{v}.csv")
        if x.shape != (view_dims[v], n_instances):
            raise ShapeError(
                f"view_{v}.csv: expected {view_dims[v]}x{n_instances}, got {x.shape[0]}x{x.shape[1]}"
            )
        views.append(x)
    mask = _load_matrix(path / "mask.csv")
    dataset = MultiViewDataset(tuple(views), mask)
    if standardize:
        dataset = standardize_views(dataset)
    return dataset


def load_truths(path) -> dict[str, np.ndarray]:
    """Ground-truth label vectors stored in ``meta.json``, if any."""
    meta = json.loads((Path(path) / "meta.json").read_text())
    return {
        name: np.asarray(labels, dtype=np.int64)
        for name, labels in meta.get("truths", {}).items()
    }


def save_dataset(
    dataset: MultiViewDataset,
    path,
    truths: Mapping[str, Sequence[int]] | None = None,
) -> Path:
    """Write a dataset directory in the same layout :func:`load_dataset` reads."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    for v, x in enumerate(dataset.views):
        np.savetxt(path / f"view_{v}.csv", x, delimiter=",", fmt="%.17g")
    np.savetxt(path / "mask.csv", dataset.mask, delimiter=",", fmt="%d")
    meta = {
        "n_views": dataset.n_views,
        "n_instances": dataset.n_instances,
        "view_dims": list(dataset.view_dims),
    }
    if truths:
        meta["truths"] = {name: [int(x) for x in v] for name, v in truths.items()}
    (path / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=1))
    return path


def standardize_views(dataset: MultiViewDataset) -> MultiViewDataset:
    """z-score each feature row over its observed columns; masked cells stay 0.

    Rows with (near-)zero spread are centered only. Views with no observed
    instance are left untouched, there is nothing to estimate from.
    """
    views = []
    for v, x in enumerate(dataset.views):
        obs = dataset.view_mask(v)
        if not obs.any():
            views.append(np.zeros_like(x))
            continue
        mu = x[:, obs].mean(axis=1)
        sd = x[:, obs].std(axis=1)
        sd = np.where(sd > 1e-12, sd, 1.0)
        z = (x - mu[:, None]) / sd[:, None]
        views.append(np.where(obs[None, :], z, 0.0))
    return MultiViewDataset(tuple(views), dataset.mask)


def erase_views(
    dataset: MultiViewDataset, target_rate: float, seed: int
) -> MultiViewDataset:
    """Randomly erase (view, instance) cells until the missing rate hits target.

    Instances are picked uniformly among those that can still lose a view;
    for each pick a uniformly random nonempty proper subset of its observed
    views is erased (so at least one view always survives), and the last
    pick is truncated to land exactly on the target cell count. Erased
    feature columns are zeroed. Deterministic for a fixed seed.
    """
    n_views, n = dataset.n_views, dataset.n_instances
    max_rate = 1.0 - 1.0 / n_views
    if not 0.0 <= target_rate <= max_rate + 1e-12:
        raise InfeasibleError(
            f"target rate {target_rate} outside [0, {max_rate:.6g}]; "
            f"each instance must keep one of {n_views} views"
        )
    total = n_views * n
    target_missing = int(round(target_rate * total))
    mask = np.array(dataset.mask)
    current_missing = int(total - mask.sum())
    if target_missing < current_missing:
        raise InfeasibleError(
            f"dataset already has {current_missing} missing cells, "
            f"cannot reach the lower target of {target_missing}"
        )
    views = [np.array(x) for x in dataset.views]
    rng = np.random.default_rng(seed)
    needed = target_missing - current_missing
    while needed > 0:
        eligible = np.flatnonzero(mask.sum(axis=0) >= 2)
        i = int(eligible[rng.integers(eligible.size)])
        observed = np.flatnonzero(mask[:, i] == 1)
        k = observed.size
        while True:
            bits = rng.integers(0, 2, size=k)
            if 0 < bits.sum() < k:
                break
        chosen = observed[bits == 1]
        if chosen.size > needed:
            chosen = chosen[:needed]
        for v in chosen:
            mask[v, i] = 0
            views[v][:, i] = 0.0
        needed -= chosen.size
    return MultiViewDataset(tuple(views), mask)


def mean_fill(dataset: MultiViewDataset) -> list[np.ndarray]:
    """Replace each missing column by its view's per-feature observed mean.

    Observed columns are returned unchanged. The standard completion
    baseline for methods that cannot handle missing views natively.
    """
    filled = []
    for v, x in enumerate(dataset.views):
        obs = dataset.view_mask(v)
        if not obs.any():
            raise DegenerateInputError(f"view {v} has no observed instances")
        mu = x[:, obs].mean(axis=1)
        filled.append(np.where(obs[None, :], x, mu[:, None]))
    return filled
