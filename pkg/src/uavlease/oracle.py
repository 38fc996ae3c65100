"""Exhaustive ground-truth search over joint positions and task assignments."""

import itertools
import math
from dataclasses import dataclass

from .environment import RewardParams, Task
from .geometry import Position, PowerConfig, per_cell_relay_terms
from .validation import check_count, check_grid

MAX_CONFIGURATIONS = 10_000_000


class InstanceTooLargeError(ValueError):
    """Enumerating the instance would exceed MAX_CONFIGURATIONS."""


@dataclass(frozen=True)
class OptimalConfig:
    positions: tuple
    tasks: tuple
    r_pu: float
    r_se: float
    objective: float


def count_configurations(grid, n_uavs):
    """cells^N position tuples times 2^N task assignments."""
    l1, l2 = check_grid(grid)
    n_uavs = check_count("n_uavs", n_uavs)
    return (l1 * l2) ** n_uavs * 2 ** n_uavs


def check_instance_size(grid, n_uavs):
    total = count_configurations(grid, n_uavs)
    if total > MAX_CONFIGURATIONS:
        raise InstanceTooLargeError(
            f"{grid[0]}x{grid[1]} grid with {n_uavs} UAVs enumerates {total} "
            f"configurations, over the {MAX_CONFIGURATIONS} limit"
        )
    return total


def enumerate_configurations(grid, n_uavs):
    """Yield every (cells, tasks) pair in ascending encoded order: joint cell
    index major, task index (base 2, UAV 0 most significant) minor."""
    l1, l2 = check_grid(grid)
    for cells in itertools.product(range(l1 * l2), repeat=n_uavs):
        for tasks in itertools.product((Task.SENSING, Task.RELAYING), repeat=n_uavs):
            yield cells, tasks


def exhaustive_optimum(grid, n_uavs, layout, powers=None, reward_params=None):
    """Best static configuration by brute force.

    Scores beta1 * r_pu + beta2 * r_se for every configuration; ties keep the
    first (lowest encoded index) maximizer, so the result is deterministic.
    Deliberately scan-everything with no pruning, so it can serve as ground
    truth for the learner. The layout is taken as given; grid-membership is
    enforced where layouts are constructed.
    """
    grid = check_grid(grid)
    n_uavs = check_count("n_uavs", n_uavs)
    check_instance_size(grid, n_uavs)
    powers = powers if powers is not None else PowerConfig()
    weights = reward_params if reward_params is not None else RewardParams()
    term_pu = per_cell_relay_terms(grid, layout.pt, layout.pr, powers.p_pt, powers.p_u, powers.sigma2)
    term_se = per_cell_relay_terms(grid, layout.src, layout.ec, powers.p_s, powers.p_u, powers.sigma2)
    best = None
    best_objective = -math.inf
    for cells, tasks in enumerate_configurations(grid, n_uavs):
        total_pu = 0.0
        total_se = 0.0
        for cell, task in zip(cells, tasks):
            if task:
                total_pu += term_pu[cell]
            else:
                total_se += term_se[cell]
        r_pu = 0.5 * math.log2(1.0 + total_pu)
        r_se = 0.5 * math.log2(1.0 + total_se)
        objective = weights.beta1 * r_pu + weights.beta2 * r_se
        if objective > best_objective:
            best_objective = objective
            best = (cells, tasks, r_pu, r_se)
    cells, tasks, r_pu, r_se = best
    l2 = grid[1]
    return OptimalConfig(
        positions=tuple(Position(*divmod(cell, l2)) for cell in cells),
        tasks=tuple(tasks),
        r_pu=r_pu,
        r_se=r_se,
        objective=best_objective,
    )
