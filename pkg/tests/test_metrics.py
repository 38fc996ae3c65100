import numpy as np
import pytest

from uavlease import EpisodeMetrics, steps_to_reach_fraction, trend_stats


def test_steps_to_reach_fraction_hand_traces():
    assert steps_to_reach_fraction([1.0, 1.0, 8.0], 0.9) == 3  # cumulative 10 * 0.9 hit at step 3
    assert steps_to_reach_fraction([9.0, 1.0, 0.0], 0.9) == 1
    assert steps_to_reach_fraction([5.0], 0.9) == 1


def test_steps_to_reach_fraction_constant_series():
    # constant rates put the crossing at ceil(0.9 * n)
    assert steps_to_reach_fraction([2.0] * 10, 0.9) == 9
    assert steps_to_reach_fraction([2.0] * 100, 0.9) == 90


def test_steps_to_reach_fraction_validation():
    with pytest.raises(ValueError, match="step_totals"):
        steps_to_reach_fraction([], 0.9)


def test_trend_stats_constant_series():
    head, tail = trend_stats(np.full(80, 3.5))
    assert head == tail == 3.5


def test_trend_stats_increasing_series():
    head, tail = trend_stats(np.arange(50, dtype=float))
    assert tail > head


def test_trend_stats_one_to_two_hundred():
    head, tail = trend_stats(np.arange(1, 201, dtype=float))
    assert head == 10.5
    assert tail == 190.5


def test_trend_stats_too_short():
    with pytest.raises(ValueError, match="short"):
        trend_stats(np.arange(39))


def test_episode_metrics_fields():
    m = EpisodeMetrics(1.0, 2.0, 3.0, 4, 5, 6)
    assert m.sum_total == m.sum_r_pu + m.sum_r_se
    assert (m.task_switches, m.movements, m.steps_to_90) == (4, 5, 6)
