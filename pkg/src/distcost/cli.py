"""Command-line front end: experiment runs as CSV/JSON data files.

Five subcommands: ``stabilize`` (closed-loop trajectories per disturbance
class), ``bound-accuracy`` (energy-ratio table over horizons),
``metrics-sweep`` (bounds plus sampled evidence over an (R, t_f) grid),
``energy`` (one-shot report), ``model`` (inspect/validate a model file).

Configuration comes from flags plus an optional JSON config file; flags
win. Exit codes: 0 success, 2 invalid configuration, 3 parse failure
(model or config JSON), 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .energy import disturbed_energy_bound, disturbed_signal_energy, nominal_energy
from .errors import (ConfigError, DimensionError, DomainError, ModelParseError,
                     NumericalError, ValidationError)
from .gramian import build_bundle
from .models import builtin_models, load_model
from .settings import DEFAULT_SETTINGS, settings_from_dict
from .signals import derive_seed, make_disturbance
from .simulate import simulate_closed_loop, trajectory_to_csv
from .sweeps import (DEFAULT_ACCURACY_TF_GRID, DEFAULT_R_GRID, DEFAULT_TF_GRID,
                     EVIDENCE_CELLS, bound_accuracy_rows, metrics_sweep_rows,
                     worst_constant_sign)
from .synthesis import disturbed_control, nominal_control
from .systems import LtiSystem, StabilizationTask

EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_NUMERIC = 4

_CONFIG_KEYS = {"model", "x0", "tf", "wbar", "R_grid", "tf_grid", "steps",
                "seed", "out", "workers", "samples", "cells", "settings",
                "disturbances"}

_DISTURBANCE_KEYS = {"name", "kind", "wbar", "sign_vector", "amplitudes",
                     "frequencies", "phases", "cells", "seed"}

_DEFAULT_DISTURBANCES = ({"name": "constant", "kind": "constant_sign"},
                         {"name": "sinusoid", "kind": "sinusoid"},
                         {"name": "piecewise", "kind": "piecewise_uniform"})


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_json(path: str, obj) -> None:
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _csv_text(header, rows) -> str:
    # repr() of a float is the shortest decimal that round-trips (<= 17
    # significant digits), which is the CSV number contract
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(row[k])) for k in header))
    return "\n".join(lines) + "\n"


def _parse_float_list(text: str) -> tuple:
    try:
        vals = tuple(float(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated number list, got {text!r}") from exc
    if not vals:
        raise ConfigError(f"expected a nonempty number list, got {text!r}")
    return vals


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ModelParseError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _pick(flag_value, cfg: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    if key in cfg:
        return cfg[key]
    return default


class RunConfig:
    """Merged flag/file configuration for one command invocation."""

    def __init__(self, args):
        cfg = _load_config(args.config) if args.config else {}
        self.model_src = _pick(args.model, cfg, "model", "admire")
        x0 = _pick(args.x0, cfg, "x0", "5,-1,3")
        if isinstance(x0, str):
            x0 = _parse_float_list(x0)
        self.x0 = np.asarray(x0, dtype=np.float64)
        self.t_f = float(_pick(args.tf, cfg, "tf", 5.0))
        self.w_bar = float(_pick(args.wbar, cfg, "wbar", 1.0))
        R_grid = _pick(getattr(args, "R_grid", None), cfg, "R_grid", DEFAULT_R_GRID)
        if isinstance(R_grid, str):
            R_grid = _parse_float_list(R_grid)
        self.R_grid = tuple(float(v) for v in R_grid)
        default_tf_grid = (DEFAULT_ACCURACY_TF_GRID if args.command == "bound-accuracy"
                           else DEFAULT_TF_GRID)
        tf_grid = _pick(getattr(args, "tf_grid", None), cfg, "tf_grid", default_tf_grid)
        if isinstance(tf_grid, str):
            tf_grid = _parse_float_list(tf_grid)
        self.tf_grid = tuple(float(v) for v in tf_grid)
        self.steps = int(_pick(args.steps, cfg, "steps", 5000))
        self.seed = int(_pick(args.seed, cfg, "seed", 0))
        self.out = str(_pick(args.out, cfg, "out", "."))
        self.workers = int(_pick(args.workers, cfg, "workers", 1))
        self.samples = int(cfg.get("samples", 500))
        self.cells = int(cfg.get("cells", EVIDENCE_CELLS))
        self.disturbances = cfg.get("disturbances", list(_DEFAULT_DISTURBANCES))
        try:
            self.settings = settings_from_dict(cfg.get("settings", {}), DEFAULT_SETTINGS)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad numeric settings: {exc}") from exc
        if any(v <= 0.0 for v in self.tf_grid):
            raise ConfigError("tf_grid entries must be positive")
        if any(v <= 0.0 for v in self.R_grid):
            raise ConfigError("R_grid entries must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")

    def load_system(self) -> LtiSystem:
        builtins = builtin_models()
        if self.model_src in builtins:
            return builtins[self.model_src]()
        return load_model(self.model_src)

    def outdir(self) -> str:
        os.makedirs(self.out, exist_ok=True)
        return self.out

    def echo(self) -> dict:
        return {"model": self.model_src, "x0": [float(v) for v in self.x0],
                "tf": self.t_f, "wbar": self.w_bar, "steps": self.steps,
                "seed": self.seed}


def _signal_from_spec(spec: dict, sys_: LtiSystem, task: StabilizationTask,
                      bundle, default_cells: int, master_seed: int, index: int):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"disturbance spec must be an object with a 'kind': {spec!r}")
    unknown = set(spec) - _DISTURBANCE_KEYS
    if unknown:
        raise ConfigError(f"unknown disturbance keys: {sorted(unknown)}")
    kind = spec["kind"]
    w_bar = float(spec.get("wbar", task.w_bar))
    kwargs = {}
    if kind == "constant_sign":
        sign = spec.get("sign_vector")
        if sign is None:
            sign = worst_constant_sign(sys_, task, bundle)
        kwargs["sign_vector"] = np.asarray(sign, dtype=np.float64)
    elif kind == "sinusoid":
        for key in ("amplitudes", "frequencies", "phases"):
            if key in spec:
                kwargs[key] = np.asarray(spec[key], dtype=np.float64)
    elif kind == "piecewise_uniform":
        kwargs["cells"] = int(spec.get("cells", default_cells))
        kwargs["seed"] = int(spec.get("seed", derive_seed(master_seed, 5, index)))
        kwargs["horizon"] = task.t_f
    elif kind != "zero":
        raise ConfigError(f"unknown disturbance kind {kind!r}")
    return make_disturbance(kind, w_bar, sys_.n, **kwargs)


def _run_name(spec: dict, index: int) -> str:
    name = str(spec.get("name", spec.get("kind", f"run{index}")))
    if not name or not all(ch.isalnum() or ch in "_-" for ch in name):
        raise ConfigError(f"disturbance name {name!r} is not filename-safe")
    return name


def cmd_stabilize(cfg: RunConfig) -> int:
    sys_ = cfg.load_system()
    task = StabilizationTask(x0=cfg.x0, t_f=cfg.t_f, w_bar=cfg.w_bar)
    bundle = build_bundle(sys_, cfg.t_f, cfg.settings)
    bound = disturbed_energy_bound(sys_, task, bundle)
    outdir = cfg.outdir()
    # piecewise cells default to an even divisor of the step count so the
    # integrator sees cell-constant stage values
    default_cells = 1000 if cfg.steps % 1000 == 0 else cfg.steps

    runs = []
    u_n = nominal_control(sys_, task, bundle)
    traj = simulate_closed_loop(sys_, task, u_n, None, cfg.steps)
    _atomic_write(os.path.join(outdir, "traj_nominal.csv"), trajectory_to_csv(traj))
    runs.append({"name": "nominal", "kind": "zero",
                 "terminal_residual": traj.terminal_residual,
                 "energy_quadrature": traj.energy,
                 "energy_closed_form": bound.E_N})

    for i, spec in enumerate(cfg.disturbances):
        name = _run_name(spec, i)
        w = _signal_from_spec(spec, sys_, task, bundle, default_cells, cfg.seed, i)
        u_d = disturbed_control(sys_, task, bundle, w, cfg.settings)
        traj = simulate_closed_loop(sys_, task, u_d, w, cfg.steps)
        _atomic_write(os.path.join(outdir, f"traj_{name}.csv"), trajectory_to_csv(traj))
        e_d = disturbed_signal_energy(sys_, task, bundle, w, cfg.settings)
        runs.append({"name": name, "kind": w.kind,
                     "terminal_residual": traj.terminal_residual,
                     "energy_quadrature": traj.energy,
                     "energy_closed_form": e_d,
                     "bound_ratio": e_d / bound.E_D_bound})

    summary = {"command": "stabilize", "config": cfg.echo(),
               "E_N": bound.E_N, "E_D_bound": bound.E_D_bound, "runs": runs}
    _write_json(os.path.join(outdir, "summary.json"), summary)
    return 0


def cmd_bound_accuracy(cfg: RunConfig) -> int:
    sys_ = cfg.load_system()
    rows = bound_accuracy_rows(sys_, cfg.x0, cfg.w_bar, cfg.tf_grid,
                               seed=cfg.seed, cells=cfg.cells,
                               settings=cfg.settings)
    outdir = cfg.outdir()
    header = ["t_f", "ratio_constant", "ratio_sinusoid", "ratio_piecewise"]
    _atomic_write(os.path.join(outdir, "bound_accuracy.csv"), _csv_text(header, rows))
    summary = {"command": "bound-accuracy", "config": cfg.echo(),
               "tf_grid": list(cfg.tf_grid), "rows": len(rows)}
    _write_json(os.path.join(outdir, "summary.json"), summary)
    return 0


def cmd_metrics_sweep(cfg: RunConfig) -> int:
    sys_ = cfg.load_system()
    rows = metrics_sweep_rows(sys_, cfg.x0, cfg.w_bar, cfg.R_grid, cfg.tf_grid,
                              samples=cfg.samples, seed=cfg.seed,
                              cells=cfg.cells, workers=cfg.workers,
                              settings=cfg.settings)
    outdir = cfg.outdir()
    header = ["R", "t_f", "H", "r_A_bound", "r_M_bound", "E_N", "E_D_bound",
              "diff_min", "diff_max", "ratio_min", "ratio_max"]
    _atomic_write(os.path.join(outdir, "metrics.csv"), _csv_text(header, rows))
    summary = {"command": "metrics-sweep", "config": cfg.echo(),
               "R_grid": list(cfg.R_grid), "tf_grid": list(cfg.tf_grid),
               "samples": cfg.samples, "rows": len(rows),
               "containment": {"diff_le_r_A": all(r["diff_max"] <= r["r_A_bound"] for r in rows),
                               "ratio_ge_r_M": all(r["ratio_min"] >= r["r_M_bound"] for r in rows)}}
    _write_json(os.path.join(outdir, "summary.json"), summary)
    return 0


def cmd_energy(cfg: RunConfig) -> int:
    sys_ = cfg.load_system()
    task = StabilizationTask(x0=cfg.x0, t_f=cfg.t_f, w_bar=cfg.w_bar)
    bundle = build_bundle(sys_, cfg.t_f, cfg.settings)
    report = disturbed_energy_bound(sys_, task, bundle)
    payload = {"command": "energy", "config": cfg.echo(),
               "E_N": report.E_N, "E_D_bound": report.E_D_bound,
               "q_bar": report.q_bar, "cross_term": report.cross_term,
               "c_term": report.c_term,
               "witness_q": [float(v) for v in report.witness_q]}
    _write_json(os.path.join(cfg.outdir(), "energy.json"), payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_model(cfg: RunConfig) -> int:
    sys_ = cfg.load_system()
    payload = {"name": sys_.name, "n": sys_.n, "p": sys_.p,
               "A": [[float(v) for v in row] for row in sys_.A],
               "B": [[float(v) for v in row] for row in sys_.B]}
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="builtin model name or model JSON path")
    common.add_argument("--x0", help="initial state, comma-separated")
    common.add_argument("--tf", type=float, help="final time")
    common.add_argument("--wbar", type=float, help="disturbance amplitude bound")
    common.add_argument("--R-grid", dest="R_grid", help="initial-radius grid, comma-separated")
    common.add_argument("--tf-grid", dest="tf_grid", help="final-time grid, comma-separated")
    common.add_argument("--steps", type=int, help="integrator step count")
    common.add_argument("--seed", type=int, help="master seed for all draws")
    common.add_argument("--out", help="output directory")
    common.add_argument("--workers", type=int, help="concurrent sweep workers")
    common.add_argument("--config", help="JSON config file (flags win)")

    parser = argparse.ArgumentParser(
        prog="distcost",
        description="Minimum-energy stabilization under bounded disturbances: "
                    "controls, energy bounds, cost-of-disturbance metrics.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("stabilize", parents=[common],
                   help="synthesize controls and write closed-loop trajectories")
    sub.add_parser("bound-accuracy", parents=[common],
                   help="energy-ratio table over a final-time grid")
    sub.add_parser("metrics-sweep", parents=[common],
                   help="metric bounds plus sampled evidence over an (R, t_f) grid")
    sub.add_parser("energy", parents=[common],
                   help="one-shot energy report for (model, x0, t_f, w_bar)")
    sub.add_parser("model", parents=[common],
                   help="validate a model and print its normalized JSON")
    return parser


_COMMANDS = {"stabilize": cmd_stabilize, "bound-accuracy": cmd_bound_accuracy,
             "metrics-sweep": cmd_metrics_sweep, "energy": cmd_energy,
             "model": cmd_model}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args)
    return _COMMANDS[args.command](cfg)


def entry(argv=None) -> int:
    try:
        return main(argv)
    except (ConfigError, ValidationError, DomainError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(entry())
