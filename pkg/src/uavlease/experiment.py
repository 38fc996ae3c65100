"""Experiment orchestration: seeded iterations, averaged per-episode metrics,
CSV and manifest output."""

import csv
import json
import os
from dataclasses import dataclass, replace

import numpy as np

from .environment import RewardParams, SpectrumLeasingEnv
from .geometry import NetworkLayout, PowerConfig, random_layout
from .learner import TeamQLearner, default_steps_per_episode, q_table_checksum
from .validation import (
    check_count,
    check_discount,
    check_grid,
    check_learning_rate,
    check_probability,
)

METRIC_FIELDS = ("sum_r_pu", "sum_r_se", "sum_total", "task_switches", "movements", "steps_to_90")
CSV_HEADER = ("episode",) + METRIC_FIELDS


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment; layout may stay symbolic ("random")
    until resolve_config draws concrete endpoints from the seed."""

    grid: tuple = (6, 6)
    n_uavs: int = 2
    episodes: int = 200
    steps_per_episode: int | None = None
    iterations: int = 10
    seed: int = 0
    alpha: float = 0.1
    gamma: float = 0.3
    epsilon: float = 0.1
    powers: PowerConfig = PowerConfig()
    reward: RewardParams = RewardParams()
    layout: NetworkLayout | str = "random"


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig          # resolved: concrete layout and steps
    metrics: dict                     # field -> ndarray over episodes, mean over iterations
    q_checksums: tuple                # one snapshot digest per iteration
    q_table: np.ndarray               # final iteration's table


def substream(seed, index):
    """Independent deterministic rng stream for (seed, index).

    Index 0 is reserved for experiment setup (the random layout); iteration k
    uses index k + 1. Streams depend only on (seed, index), never on execution
    order, so iterations can run in any order or in parallel.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def resolve_config(cfg):
    """Validate a config and fill derived defaults: the per-grid step count and
    a concrete layout. Returns a new, fully concrete ExperimentConfig."""
    grid = check_grid(cfg.grid)
    n_uavs = check_count("n_uavs", cfg.n_uavs)
    episodes = check_count("episodes", cfg.episodes)
    iterations = check_count("iterations", cfg.iterations)
    seed = int(cfg.seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed: must be an unsigned 64-bit integer, got {seed}")
    check_learning_rate(cfg.alpha)
    check_discount(cfg.gamma)
    check_probability("epsilon", cfg.epsilon)
    if cfg.steps_per_episode is None:
        steps = default_steps_per_episode(grid[0] * grid[1])
    else:
        steps = check_count("steps_per_episode", cfg.steps_per_episode)
    layout = cfg.layout
    if isinstance(layout, str):
        if layout != "random":
            raise ValueError(f"layout: expected a NetworkLayout or 'random', got {layout!r}")
        layout = random_layout(grid, substream(seed, 0))
    layout.validate_in_grid(grid)
    return replace(
        cfg,
        grid=grid,
        n_uavs=n_uavs,
        episodes=episodes,
        steps_per_episode=steps,
        iterations=iterations,
        seed=seed,
        layout=layout,
    )


def make_env(cfg):
    """Environment for a resolved config."""
    return SpectrumLeasingEnv(cfg.grid, cfg.n_uavs, cfg.layout, cfg.powers, cfg.reward)


def run_iteration(cfg, env, iteration):
    """One independent training iteration, reproducible from (seed, iteration)
    alone; returns the fitted learner."""
    learner = TeamQLearner(
        alpha=cfg.alpha,
        gamma=cfg.gamma,
        epsilon=cfg.epsilon,
        episodes=cfg.episodes,
        steps_per_episode=cfg.steps_per_episode,
        random_state=substream(cfg.seed, iteration + 1),
    )
    return learner.fit(env)


def average_histories(histories):
    """Per-episode mean over iterations of every EpisodeMetrics field."""
    out = {}
    for name in METRIC_FIELDS:
        stack = np.array([[getattr(m, name) for m in history] for history in histories], dtype=float)
        out[name] = stack.mean(axis=0)
    return out


def run_experiment(cfg):
    """Run every iteration from a fresh zero table and average the histories."""
    cfg = resolve_config(cfg)
    env = make_env(cfg)
    histories = []
    checksums = []
    q_table = None
    for k in range(cfg.iterations):
        learner = run_iteration(cfg, env, k)
        histories.append(learner.history_)
        checksums.append(q_table_checksum(learner.q_, cfg.grid, cfg.n_uavs))
        q_table = learner.q_
    return ExperimentResult(
        config=cfg,
        metrics=average_histories(histories),
        q_checksums=tuple(checksums),
        q_table=q_table,
    )


def write_metrics_csv(path, metrics):
    """One row per episode. Floats are written with repr, so identical runs
    produce byte-identical files."""
    episodes = len(next(iter(metrics.values())))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for ep in range(episodes):
            writer.writerow([ep + 1] + [repr(float(metrics[name][ep])) for name in METRIC_FIELDS])


def config_to_dict(cfg):
    """JSON-ready view of a resolved config; power values are Watts."""
    return {
        "grid": [cfg.grid[0], cfg.grid[1]],
        "n_uavs": cfg.n_uavs,
        "episodes": cfg.episodes,
        "steps_per_episode": cfg.steps_per_episode,
        "iterations": cfg.iterations,
        "seed": cfg.seed,
        "alpha": cfg.alpha,
        "gamma": cfg.gamma,
        "epsilon": cfg.epsilon,
        "beta1": cfg.reward.beta1,
        "beta2": cfg.reward.beta2,
        "p_pt": cfg.powers.p_pt,
        "p_s": cfg.powers.p_s,
        "p_u": cfg.powers.p_u,
        "sigma2": cfg.powers.sigma2,
        "layout": cfg.layout.as_dict() if isinstance(cfg.layout, NetworkLayout) else cfg.layout,
    }


def write_manifest(path, manifest):
    """Atomic JSON write: a crash never leaves a truncated manifest behind."""
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)
