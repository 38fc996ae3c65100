"""Per-episode metric records and small series statistics."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EpisodeMetrics:
    """Totals accumulated over one episode's steps."""

    sum_r_pu: float
    sum_r_se: float
    sum_total: float
    task_switches: int
    movements: int
    steps_to_90: int


def steps_to_reach_fraction(step_totals, fraction=0.9):
    """1-based index of the first step whose running total reaches
    fraction * sum(step_totals). Totals must be nonnegative."""
    totals = np.asarray(step_totals, dtype=float)
    if totals.size == 0:
        raise ValueError("step_totals: need at least one step")
    cum = np.cumsum(totals)
    return int(np.searchsorted(cum, fraction * cum[-1], side="left")) + 1


def trend_stats(values, window=20):
    """(head mean, tail mean) over the first and last `window` entries."""
    values = np.asarray(values, dtype=float)
    if values.size < 2 * window:
        raise ValueError(f"series too short: need >= {2 * window} entries, got {values.size}")
    return float(values[:window].mean()), float(values[-window:].mean())
