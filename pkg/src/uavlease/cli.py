"""Command line front end: training runs and the exhaustive-search oracle."""

import argparse
import json
import re
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from .environment import RewardParams, Task
from .experiment import (
    ExperimentConfig,
    config_to_dict,
    run_experiment,
    substream,
    write_manifest,
    write_metrics_csv,
)
from .geometry import NetworkLayout, Position, PowerConfig, random_layout
from .learner import save_q_table
from .oracle import exhaustive_optimum
from .validation import check_grid

_POWER_UNITS = {"": 1.0, "w": 1.0, "mw": 1e-3, "uw": 1e-6, "nw": 1e-9}

# Defaults for `run`; config-file keys use these same names.
_RUN_DEFAULTS = {
    "grid": (6, 6),
    "uavs": 2,
    "episodes": 200,
    "steps": None,
    "iterations": 10,
    "seed": 0,
    "alpha": 0.1,
    "gamma": 0.3,
    "epsilon": 0.1,
    "beta1": 1.0,
    "beta2": 1.0,
    "p_pt": 0.01,
    "p_s": 0.02,
    "p_u": 0.02,
    "sigma2": 1e-9,
    "layout": "random",
    "out": "results",
    "save_qtable": False,
}


def parse_grid(text):
    """'L1xL2', e.g. '6x6'."""
    match = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", str(text))
    if match is None:
        raise argparse.ArgumentTypeError(f"expected L1xL2, e.g. 6x6, got {text!r}")
    return int(match.group(1)), int(match.group(2))


def parse_power(value):
    """Power with optional unit suffix: '10mW', '1nW', '0.02'. Bare numbers are Watts."""
    if isinstance(value, (int, float)):
        return float(value)
    match = re.fullmatch(
        r"\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([a-zA-Z]*)\s*", str(value)
    )
    if match is None or match.group(2).lower() not in _POWER_UNITS:
        raise argparse.ArgumentTypeError(f"expected NUMBER[W|mW|uW|nW], got {value!r}")
    return float(match.group(1)) * _POWER_UNITS[match.group(2).lower()]


def load_layout(text):
    """'random' stays symbolic; anything else names a JSON file with the four
    endpoint cells, e.g. {"pt": [0, 0], "pr": [0, 5], "src": [5, 0], "ec": [5, 5]}."""
    if text == "random":
        return "random"
    doc = json.loads(Path(text).read_text())
    missing = [key for key in ("pt", "pr", "src", "ec") if key not in doc]
    if missing:
        raise ValueError(f"layout: file {text} is missing keys {missing}")
    return NetworkLayout(**{key: Position(int(doc[key][0]), int(doc[key][1])) for key in ("pt", "pr", "src", "ec")})


def _utc_now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _add_common_flags(parser):
    parser.add_argument("--grid", type=parse_grid, help="grid size as L1xL2 (default 6x6)")
    parser.add_argument("--uavs", type=int, help="number of UAVs (default 2)")
    parser.add_argument("--seed", type=int, help="experiment seed (default 0)")
    parser.add_argument("--layout", help="layout JSON file or 'random' (default random)")
    parser.add_argument("--beta1", type=float, help="primary-rate reward weight (default 1)")
    parser.add_argument("--beta2", type=float, help="sensing-rate reward weight (default 1)")
    parser.add_argument("--p-pt", type=parse_power, dest="p_pt", help="primary TX power, e.g. 10mW")
    parser.add_argument("--p-s", type=parse_power, dest="p_s", help="source TX power, e.g. 20mW")
    parser.add_argument("--p-u", type=parse_power, dest="p_u", help="per-UAV TX power, e.g. 20mW")
    parser.add_argument("--sigma2", type=parse_power, help="noise power, e.g. 1nW")


def build_parser():
    parser = argparse.ArgumentParser(prog="uavlease", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train and write metrics.csv, manifest.json, and optionally qtable.bin")
    _add_common_flags(run)
    run.add_argument("--episodes", type=int, help="episodes per iteration (default 200)")
    run.add_argument("--steps", type=int, help="steps per episode (default from grid size)")
    run.add_argument("--iterations", type=int, help="independent iterations to average (default 10)")
    run.add_argument("--alpha", type=float, help="learning rate (default 0.1)")
    run.add_argument("--gamma", type=float, help="discount factor (default 0.3)")
    run.add_argument("--epsilon", type=float, help="exploration probability (default 0.1)")
    run.add_argument("--out", help="output directory (default results)")
    run.add_argument("--save-qtable", dest="save_qtable", action="store_const", const=True,
                     help="also write the final Q-table snapshot")
    run.add_argument("--config", help="JSON config file; explicit flags override its values")
    run.set_defaults(func=cmd_run)

    oracle = sub.add_parser("oracle", help="print the exhaustive-search optimal configuration as JSON")
    _add_common_flags(oracle)
    oracle.set_defaults(func=cmd_oracle)
    return parser


def _settings_from(args):
    """defaults <- config file <- explicit flags."""
    settings = dict(_RUN_DEFAULTS)
    if getattr(args, "config", None):
        doc = json.loads(Path(args.config).read_text())
        unknown = sorted(set(doc) - set(settings))
        if unknown:
            raise ValueError(f"config: unknown keys {unknown}")
        for key, value in doc.items():
            if key == "grid" and isinstance(value, str):
                value = parse_grid(value)
            elif key == "grid":
                value = check_grid(value)
            elif key in ("p_pt", "p_s", "p_u", "sigma2"):
                value = parse_power(value)
            settings[key] = value
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _experiment_config(settings):
    return ExperimentConfig(
        grid=settings["grid"],
        n_uavs=settings["uavs"],
        episodes=settings["episodes"],
        steps_per_episode=settings["steps"],
        iterations=settings["iterations"],
        seed=settings["seed"],
        alpha=settings["alpha"],
        gamma=settings["gamma"],
        epsilon=settings["epsilon"],
        powers=PowerConfig(p_pt=settings["p_pt"], p_s=settings["p_s"],
                           p_u=settings["p_u"], sigma2=settings["sigma2"]),
        reward=RewardParams(beta1=settings["beta1"], beta2=settings["beta2"]),
        layout=load_layout(settings["layout"]) if isinstance(settings["layout"], str) else settings["layout"],
    )


def cmd_run(args):
    settings = _settings_from(args)
    cfg = _experiment_config(settings)
    out_dir = Path(settings["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    started = _utc_now()
    t0 = time.monotonic()
    result = run_experiment(cfg)
    elapsed = time.monotonic() - t0
    csv_path = out_dir / "metrics.csv"
    write_metrics_csv(csv_path, result.metrics)
    qtable_path = None
    if settings["save_qtable"]:
        qtable_path = out_dir / "qtable.bin"
        save_q_table(qtable_path, result.q_table, result.config.grid, result.config.n_uavs)
    manifest_path = out_dir / "manifest.json"
    write_manifest(manifest_path, {
        "config": config_to_dict(result.config),
        "seed": result.config.seed,
        "started_at": started,
        "finished_at": _utc_now(),
        "elapsed_seconds": elapsed,
        "outputs": {
            "metrics_csv": str(csv_path),
            "manifest": str(manifest_path),
            "qtable": str(qtable_path) if qtable_path is not None else None,
        },
        "q_table_checksums": list(result.q_checksums),
    })
    print(f"wrote {csv_path} ({result.config.episodes} episodes averaged over "
          f"{result.config.iterations} iterations, {elapsed:.1f}s)")
    return 0


def cmd_oracle(args):
    grid = args.grid if args.grid is not None else _RUN_DEFAULTS["grid"]
    n_uavs = args.uavs if args.uavs is not None else _RUN_DEFAULTS["uavs"]
    seed = args.seed if args.seed is not None else _RUN_DEFAULTS["seed"]
    layout = load_layout(args.layout) if args.layout is not None else "random"
    if layout == "random":
        layout = random_layout(check_grid(grid), substream(seed, 0))
    layout.validate_in_grid(grid)
    powers = PowerConfig(
        p_pt=args.p_pt if args.p_pt is not None else _RUN_DEFAULTS["p_pt"],
        p_s=args.p_s if args.p_s is not None else _RUN_DEFAULTS["p_s"],
        p_u=args.p_u if args.p_u is not None else _RUN_DEFAULTS["p_u"],
        sigma2=args.sigma2 if args.sigma2 is not None else _RUN_DEFAULTS["sigma2"],
    )
    weights = RewardParams(
        beta1=args.beta1 if args.beta1 is not None else 1.0,
        beta2=args.beta2 if args.beta2 is not None else 1.0,
    )
    best = exhaustive_optimum(grid, n_uavs, layout, powers, weights)
    print(json.dumps({
        "grid": list(check_grid(grid)),
        "n_uavs": n_uavs,
        "layout": layout.as_dict(),
        "positions": [list(pos) for pos in best.positions],
        "tasks": ["relaying" if task == Task.RELAYING else "sensing" for task in best.tasks],
        "r_pu": best.r_pu,
        "r_se": best.r_se,
        "objective": best.objective,
    }, indent=2))
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
