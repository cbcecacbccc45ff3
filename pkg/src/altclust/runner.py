"""Experiment runner: load or generate data, erase, fit, cluster, evaluate.

A run specification names one data source, an optional erasure target, a
training configuration, and at most one sweep axis (diversity weight,
subspace count, or missing rate) with a list of grid values. Every grid
point is repeated ``repeats`` times with derived seeds; the per-run records
land under ``<out>/runs/`` as JSON (config, loss history, metrics,
labelings) next to the run's presence mask, and ``aggregate.csv`` collects
mean and standard deviation of the quality/diversity measures per point.

Seed policy, so identical specs replay byte-identically: repeat r trains
with ``seed + r`` (shared across sweep points, which makes points directly
comparable) and erases with ``seed + 100000 + r``; the synthetic dataset
itself is drawn once from ``seed``.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .clustering import generate_clusterings
from .dataset import MultiViewDataset, erase_views, load_dataset, missing_rate
from .errors import ConfigError, DataFormatError
from .metrics import evaluate
from .objective import TrainConfig
from .synth import make_dual_structure
from .trainer import fit

SWEEP_AXES = ("lambda", "subspaces", "missing-rate")

_ERASE_SEED_OFFSET = 100000


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a generated dual-structure dataset."""

    n_instances: int
    k_a: int
    k_b: int
    view_dims: tuple[int, ...]
    sigma: float = 0.05


@dataclass(frozen=True)
class RunSpec:
    """Everything one experiment needs; exactly one data source, at most one sweep."""

    out_dir: str
    train: TrainConfig
    data_path: str | None = None
    synth: SynthSpec | None = None
    missing_rate: float = 0.0
    sweep_axis: str | None = None
    sweep_values: tuple[float, ...] = ()
    repeats: int = 1
    standardize: bool = True
    restarts: int = 10

    def __post_init__(self):
        if (self.data_path is None) == (self.synth is None):
            raise ConfigError("specify exactly one of data_path or synth")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        if self.sweep_axis is not None and self.sweep_axis not in SWEEP_AXES:
            raise ConfigError(
                f"unknown sweep axis {self.sweep_axis!r}; choose from {SWEEP_AXES}"
            )
        if (self.sweep_axis is None) != (len(self.sweep_values) == 0):
            raise ConfigError("sweep_values must be given iff a sweep axis is set")
        if not 0.0 <= self.missing_rate < 1.0:
            raise ConfigError("missing_rate must lie in [0, 1)")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")


def _base_dataset(spec: RunSpec) -> MultiViewDataset:
    if spec.data_path is not None:
        return load_dataset(spec.data_path, standardize=spec.standardize)
    s = spec.synth
    return make_dual_structure(
        s.n_instances, s.k_a, s.k_b, s.view_dims, s.sigma, seed=spec.train.seed
    ).dataset


def _point_settings(spec: RunSpec, value: float) -> tuple[TrainConfig, float]:
    """Training config and erasure target for one sweep point."""
    config, target = spec.train, spec.missing_rate
    if spec.sweep_axis == "lambda":
        config = replace(config, diversity_weight=float(value))
    elif spec.sweep_axis == "subspaces":
        if float(value) != int(value):
            raise ConfigError(f"subspace counts must be integers, got {value}")
        config = replace(config, n_subspaces=int(value))
    elif spec.sweep_axis == "missing-rate":
        target = float(value)
    return config, target


def _atomic_write(path: Path, text: str):
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def run_single(
    dataset: MultiViewDataset, config: TrainConfig, restarts: int
) -> dict:
    """Fit, cluster each subspace, evaluate; returns the per-run record body."""
    state = fit(dataset, config)
    clusterings = generate_clusterings(
        state.subspaces, config.n_clusters, seed=config.seed, restarts=restarts
    )
    report = evaluate(state.subspaces, clusterings)
    return {
        "config": asdict(config),
        "loss_history": list(state.loss_history),
        "epochs": state.epoch,
        "converged": state.converged,
        "metrics": report.to_dict(),
        "labelings": [lab.labels.tolist() for lab in clusterings],
    }


def run(spec: RunSpec) -> Path:
    """Execute the experiment; returns the output directory.

    Writes ``runs/p<point>_r<repeat>/report.json`` and ``mask.csv`` per run
    (atomically, so completed runs survive a later failure) plus the
    aggregate CSV. Fully deterministic given the spec.
    """
    out = Path(spec.out_dir)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    _atomic_write(out / "run_spec.json", json.dumps(_spec_dict(spec), sort_keys=True, indent=1))

    base = _base_dataset(spec)
    points = list(spec.sweep_values) if spec.sweep_axis else [None]
    rows = []
    for p, value in enumerate(points):
        config, target = _point_settings(spec, value if value is not None else 0.0)
        records = []
        for r in range(spec.repeats):
            train_seed = spec.train.seed + r
            erase_seed = spec.train.seed + _ERASE_SEED_OFFSET + r
            data = base
            if target > 0.0:
                data = erase_views(base, target, seed=erase_seed)
            record = run_single(
                data, replace(config, seed=train_seed), spec.restarts
            )
            record.update(
                {
                    "sweep_axis": spec.sweep_axis,
                    "sweep_value": value,
                    "repeat": r,
                    "train_seed": train_seed,
                    "erase_seed": erase_seed if target > 0.0 else None,
                    "target_missing_rate": target,
                    "achieved_missing_rate": missing_rate(data.mask),
                }
            )
            run_dir = out / "runs" / f"p{p:02d}_r{r:02d}"
            run_dir.mkdir(parents=True, exist_ok=True)
            _atomic_write(
                run_dir / "report.json", json.dumps(record, sort_keys=True, indent=1)
            )
            mask_text = "\n".join(
                ",".join(str(int(x)) for x in row) for row in data.mask
            )
            _atomic_write(run_dir / "mask.csv", mask_text + "\n")
            records.append(record)
        rows.append(_aggregate_point(spec, value, records))

    _atomic_write(out / "aggregate.csv", _aggregate_csv(rows))
    return out


def _spec_dict(spec: RunSpec) -> dict:
    d = asdict(spec)
    d["train"] = asdict(spec.train)
    return d


_AGG_FIELDS = ("sc", "di", "nmi", "jc")


def _aggregate_point(spec: RunSpec, value, records: list[dict]) -> dict:
    series = {
        "sc": [r["metrics"]["avg_sc"] for r in records],
        "di": [r["metrics"]["avg_di"] for r in records],
        "nmi": [r["metrics"]["avg_nmi"] for r in records],
        "jc": [r["metrics"]["avg_jc"] for r in records],
    }
    row = {
        "sweep_axis": spec.sweep_axis or "none",
        "sweep_value": 0.0 if value is None else float(value),
        "repeats": len(records),
        "achieved_missing_rate_mean": float(
            np.mean([r["achieved_missing_rate"] for r in records])
        ),
    }
    for name, vals in series.items():
        if any(v is None for v in vals):
            row[f"{name}_mean"] = None
            row[f"{name}_std"] = None
        else:
            row[f"{name}_mean"] = float(np.mean(vals))
            row[f"{name}_std"] = float(np.std(vals))
    return row


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _aggregate_csv(rows: list[dict]) -> str:
    header = ["sweep_axis", "sweep_value", "repeats", "achieved_missing_rate_mean"]
    for name in _AGG_FIELDS:
        header += [f"{name}_mean", f"{name}_std"]
    lines = [",".join(header)]
    for row in sorted(rows, key=lambda r: r["sweep_value"]):
        lines.append(",".join(_fmt(row[h]) for h in header))
    return "\n".join(lines) + "\n"


def load_run_reports(run_dir) -> list[dict]:
    """All per-run records under ``<run_dir>/runs``, in directory order."""
    root = Path(run_dir) / "runs"
    if not root.is_dir():
        raise FileNotFoundError(f"no runs directory under {run_dir}")
    reports = []
    for path in sorted(root.glob("*/report.json")):
        try:
            reports.append(json.loads(path.read_text()))
        except json.JSONDecodeError as err:
            raise DataFormatError(f"{path}: {err}") from err
    if not reports:
        raise FileNotFoundError(f"no run reports under {root}")
    return reports


def report_plot_data(run_dir, out_csv=None) -> Path:
    """Re-aggregate the per-run records into (sweep value, mean SC, mean 1-NMI).

    Rows come out ordered by sweep value. Emits the plot-ready series only;
    rendering is a separate step.
    """
    reports = load_run_reports(run_dir)
    by_value: dict[float, list[dict]] = {}
    for rec in reports:
        value = rec["sweep_value"]
        by_value.setdefault(0.0 if value is None else float(value), []).append(rec)
    lines = ["sweep_value,sc_mean,one_minus_nmi_mean"]
    for value in sorted(by_value):
        recs = by_value[value]
        sc = float(np.mean([r["metrics"]["avg_sc"] for r in recs]))
        nmis = [r["metrics"]["avg_nmi"] for r in recs]
        if any(v is None for v in nmis):
            lines.append(f"{_fmt(value)},{_fmt(sc)},")
        else:
            lines.append(f"{_fmt(value)},{_fmt(sc)},{_fmt(1.0 - float(np.mean(nmis)))}")
    out = Path(out_csv) if out_csv else Path(run_dir) / "plot_data.csv"
    _atomic_write(out, "\n".join(lines) + "\n")
    return out
