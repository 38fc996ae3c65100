"""Cooperative UAV spectrum leasing simulator with a centralized team
Q-learning planner.

A network of sensing UAVs leases time on a terrestrial primary pair's channel
by relaying its traffic. The planner jointly learns UAV positions and
sensing/relaying task assignments that maximize the combined throughput of
both networks.
"""

__version__ = "0.1.0"

from .environment import (
    Action,
    RewardParams,
    SpectrumLeasingEnv,
    StepOutcome,
    Task,
    UavState,
)
from .experiment import (
    CSV_HEADER,
    METRIC_FIELDS,
    ExperimentConfig,
    ExperimentResult,
    average_histories,
    make_env,
    resolve_config,
    run_experiment,
    run_iteration,
    substream,
    write_metrics_csv,
)
from .geometry import (
    MIN_DISTANCE,
    NetworkLayout,
    Position,
    PowerConfig,
    af_relay_term,
    af_sum_rate,
    distance,
    gain,
    per_cell_relay_terms,
    random_layout,
)
from .learner import (
    STEPS_PER_EPISODE_BY_CELLS,
    TeamQLearner,
    default_steps_per_episode,
    export_q_table_json,
    greedy_rollout,
    load_q_table,
    q_table_checksum,
    run_episode,
    save_q_table,
    select_joint_action,
    update_q,
)
from .metrics import EpisodeMetrics, steps_to_reach_fraction, trend_stats
from .oracle import (
    MAX_CONFIGURATIONS,
    InstanceTooLargeError,
    OptimalConfig,
    count_configurations,
    enumerate_configurations,
    exhaustive_optimum,
)
