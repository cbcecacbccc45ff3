"""Command line interface.

Subcommands:
    run     execute an experiment (optionally a sweep), write reports
    report  re-aggregate a finished run into plot data and figures
    synth   generate and save a dual-structure dataset directory

Exit codes: 0 success, 2 configuration error, 3 numerical divergence, 4 IO.
Flag values override the optional JSON config file (same keys as the flags,
without the leading dashes).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    ConfigError,
    DataFormatError,
    DivergenceError,
    InfeasibleError,
    InvariantError,
    ShapeError,
)
from .objective import TrainConfig
from .runner import SWEEP_AXES, RunSpec, SynthSpec, report_plot_data, run
from .synth import make_dual_structure, save_planted

_RUN_DEFAULTS = {
    "data": None,
    "synth": None,
    "missing-rate": 0.0,
    "lambda": 1.0,
    "alpha": 0.0,
    "subspaces": 2,
    "dim": 10,
    "clusters": 2,
    "lr": 0.01,
    "epochs": 200,
    "tol": 1e-5,
    "seed": 0,
    "repeats": 1,
    "sweep": None,
    "out": "runs/out",
    "restarts": 10,
    "hidden-dim": None,
    "standardize": True,
}


def _parse_synth(text: str) -> SynthSpec:
    """``N,Ka,Kb,dims,sigma`` with dims like ``8x6`` (one entry per view)."""
    parts = text.split(",")
    if len(parts) != 5:
        raise ConfigError(f"--synth expects N,Ka,Kb,dims,sigma, got {text!r}")
    try:
        dims = tuple(int(d) for d in parts[3].split("x"))
        return SynthSpec(
            n_instances=int(parts[0]),
            k_a=int(parts[1]),
            k_b=int(parts[2]),
            view_dims=dims,
            sigma=float(parts[4]),
        )
    except ValueError as err:
        raise ConfigError(f"bad --synth value {text!r}: {err}") from err


def _parse_sweep(text: str) -> tuple[str, tuple[float, ...]]:
    """``axis=v1,v2,...`` with axis one of lambda | subspaces | missing-rate."""
    if "=" not in text:
        raise ConfigError(f"--sweep expects axis=v1,v2,..., got {text!r}")
    axis, _, values = text.partition("=")
    axis = axis.strip()
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")
    try:
        grid = tuple(float(v) for v in values.split(",") if v.strip() != "")
    except ValueError as err:
        raise ConfigError(f"bad sweep values in {text!r}: {err}") from err
    if not grid:
        raise ConfigError(f"sweep {text!r} lists no values")
    return axis, grid


def _merged(args: argparse.Namespace) -> dict:
    """Defaults, overridden by the config file, overridden by explicit flags."""
    merged = dict(_RUN_DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as err:
            raise ConfigError(f"config file {args.config}: {err}") from err
        unknown = set(loaded) - set(_RUN_DEFAULTS)
        if unknown:
            raise ConfigError(f"config file has unknown keys: {sorted(unknown)}")
        merged.update(loaded)
    for key in _RUN_DEFAULTS:
        flag_value = getattr(args, key.replace("-", "_"), None)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


def _build_spec(merged: dict) -> RunSpec:
    synth = merged["synth"]
    if isinstance(synth, str):
        synth = _parse_synth(synth)
    elif isinstance(synth, (list, tuple)):
        synth = SynthSpec(
            n_instances=int(synth[0]),
            k_a=int(synth[1]),
            k_b=int(synth[2]),
            view_dims=tuple(int(d) for d in synth[3]),
            sigma=float(synth[4]),
        )
    sweep_axis, sweep_values = None, ()
    if merged["sweep"]:
        sweep_axis, sweep_values = _parse_sweep(merged["sweep"])
    train = TrainConfig(
        diversity_weight=float(merged["lambda"]),
        sparsity_weight=float(merged["alpha"]),
        n_subspaces=int(merged["subspaces"]),
        subspace_dim=int(merged["dim"]),
        lr=float(merged["lr"]),
        max_epochs=int(merged["epochs"]),
        tol=float(merged["tol"]),
        seed=int(merged["seed"]),
        hidden_dim=None if merged["hidden-dim"] is None else int(merged["hidden-dim"]),
        n_clusters=int(merged["clusters"]),
    )
    return RunSpec(
        out_dir=str(merged["out"]),
        train=train,
        data_path=merged["data"],
        synth=synth,
        missing_rate=float(merged["missing-rate"]),
        sweep_axis=sweep_axis,
        sweep_values=sweep_values,
        repeats=int(merged["repeats"]),
        standardize=bool(merged["standardize"]),
        restarts=int(merged["restarts"]),
    )


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with the same keys as the flags")
    p.add_argument("--data", help="dataset directory to load")
    p.add_argument("--synth", help="generate data: N,Ka,Kb,dims,sigma (dims like 8x6)")
    p.add_argument("--missing-rate", type=float, help="erasure target in [0, 1-1/V)")
    p.add_argument("--lambda", dest="lambda_", type=float, help="diversity weight")
    p.add_argument("--alpha", type=float, help="subspace sparsity weight")
    p.add_argument("--subspaces", type=int, help="number of alternative clusterings")
    p.add_argument("--dim", type=int, help="subspace dimension")
    p.add_argument("--clusters", type=int, help="k for the final k-means")
    p.add_argument("--lr", type=float, help="gradient step size")
    p.add_argument("--epochs", type=int, help="epoch budget")
    p.add_argument("--tol", type=float, help="relative loss-change stop threshold")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--repeats", type=int, help="runs per sweep point")
    p.add_argument("--sweep", help="axis=v1,v2,... (lambda | subspaces | missing-rate)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--restarts", type=int, help="k-means restarts")
    p.add_argument("--hidden-dim", type=int, help="decoder hidden width override")
    p.add_argument(
        "--no-standardize",
        action="store_const",
        const=False,
        dest="standardize",
        help="skip per-view z-scoring at load time",
    )
    p.add_argument(
        "--no-figures", action="store_true", help="skip figure rendering"
    )


def _cmd_run(args: argparse.Namespace) -> int:
    merged = _merged(args)
    # argparse stores --lambda under lambda_; fold it back in.
    if args.lambda_ is not None:
        merged["lambda"] = args.lambda_
    spec = _build_spec(merged)
    out = run(spec)
    csv_path = report_plot_data(out)
    written = [out / "aggregate.csv", csv_path]
    if not args.no_figures:
        from .figures import render_run_figures

        written += render_run_figures(out)
    for path in written:
        print(path)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    csv_path = report_plot_data(args.run_dir, out_csv=args.out)
    print(csv_path)
    if not args.no_figures:
        from .figures import render_run_figures

        for path in render_run_figures(Path(csv_path).parent):
            print(path)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = _parse_synth(args.synth)
    planted = make_dual_structure(
        spec.n_instances,
        spec.k_a,
        spec.k_b,
        spec.view_dims,
        spec.sigma,
        seed=args.seed,
    )
    print(save_planted(planted, args.out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altclust",
        description="Diverse multiple clusterings of incomplete multi-view data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment")
    _add_run_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_report = sub.add_parser("report", help="plot data and figures for a run dir")
    p_report.add_argument("run_dir")
    p_report.add_argument("--out", help="plot-data CSV path")
    p_report.add_argument("--no-figures", action="store_true")
    p_report.set_defaults(func=_cmd_report)

    p_synth = sub.add_parser("synth", help="write a generated dataset directory")
    p_synth.add_argument("--synth", required=True, help="N,Ka,Kb,dims,sigma")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True, help="dataset directory to create")
    p_synth.set_defaults(func=_cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InfeasibleError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except DivergenceError as err:
        print(f"divergence: {err}", file=sys.stderr)
        return 3
    except (OSError, DataFormatError, ShapeError, InvariantError) as err:
        print(f"io error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
