"""Centralized team Q-learning over the joint state and joint action space.

A single learner (the emergency-center HAP) holds one dense Q-table indexed by
the joint position state and the joint action of all UAVs; there are no
per-agent tables.
"""

import hashlib
import json
import struct
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .environment import N_ACTIONS
from .metrics import EpisodeMetrics, steps_to_reach_fraction
from .validation import (
    check_count,
    check_discount,
    check_learning_rate,
    check_probability,
    check_rng,
)

# Steps per episode that empirically cover the joint state space, keyed by grid
# cell count. Grids without an entry need an explicit steps_per_episode.
STEPS_PER_EPISODE_BY_CELLS = {
    4: 120,
    9: 800,
    16: 2000,
    25: 5000,
    36: 12000,
    64: 20000,
    100: 30000,
}


def default_steps_per_episode(n_cells):
    try:
        return STEPS_PER_EPISODE_BY_CELLS[n_cells]
    except KeyError:
        raise ValueError(
            f"steps_per_episode: no default for a {n_cells}-cell grid, pass it explicitly"
        ) from None


def select_joint_action(q, state, epsilon, rng):
    """Epsilon-greedy pick from one Q row.

    With probability epsilon returns a uniformly random joint action; otherwise
    the row argmax, breaking ties uniformly at random from the same rng.
    """
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(q.shape[1]))
    row = q[state]
    ties = np.flatnonzero(row == row.max())
    if ties.size == 1:
        return int(ties[0])
    return int(ties[rng.integers(ties.size)])


def update_q(q, state, action, reward, next_state, alpha, gamma):
    """One team Q-value update in place; only the (state, action) entry changes.

        Q(s, A) <- (1 - alpha) * Q(s, A) + alpha * (r + gamma * max_A' Q(s', A'))
    """
    q[state, action] = (1.0 - alpha) * q[state, action] + alpha * (
        reward + gamma * q[next_state].max()
    )
    return q


def run_episode(env, q, steps, rng, alpha=0.1, gamma=0.3, epsilon=0.1):
    """Train in place for one episode and return its metrics.

    Resets the environment, takes the initial throughput pair as the reward
    baseline, then loops: select joint action, apply, score the throughput
    difference, update the table. Task switches and movements count realized
    changes per UAV per step; steps_to_90 is the first step whose cumulative
    throughput reaches 90% of the episode total.
    """
    if q.shape != (env.n_states, env.n_joint_actions):
        raise ValueError(
            f"q: table shape {q.shape} does not match the environment "
            f"({env.n_states} states x {env.n_joint_actions} joint actions)"
        )
    action_table = env.joint_action_table
    state = env.reset(rng)
    state_idx = env.encode_state(state)
    prev_rates = env.throughputs(state)
    totals = np.empty(steps)
    sum_pu = 0.0
    sum_se = 0.0
    switches = 0
    moves = 0
    for t in range(steps):
        action_idx = select_joint_action(q, state_idx, epsilon, rng)
        nxt = env.apply_joint_action(state, action_table[action_idx])
        rates = env.throughputs(nxt)
        next_idx = env.encode_state(nxt)
        update_q(q, state_idx, action_idx, env.reward(prev_rates, rates), next_idx, alpha, gamma)
        sum_pu += rates[0]
        sum_se += rates[1]
        totals[t] = rates[0] + rates[1]
        for old, new in zip(state, nxt):
            if old.task != new.task:
                switches += 1
            if old.pos != new.pos:
                moves += 1
        state, state_idx, prev_rates = nxt, next_idx, rates
    return EpisodeMetrics(
        sum_r_pu=sum_pu,
        sum_r_se=sum_se,
        sum_total=sum_pu + sum_se,
        task_switches=switches,
        movements=moves,
        steps_to_90=steps_to_reach_fraction(totals, 0.9),
    )


def greedy_rollout(q, env, start, steps, rng=None):
    """Roll the greedy policy (epsilon = 0) out from `start` for `steps` steps.

    The rng is consumed only to break argmax ties, so the trajectory is
    deterministic given the seed. Returns (trajectory, final_state) where each
    trajectory entry is (state, joint_action_index, reward).
    """
    steps = check_count("steps", steps)
    rng = check_rng(rng)
    state = start
    prev_rates = env.throughputs(state)
    trajectory = []
    for _ in range(steps):
        action_idx = select_joint_action(q, env.encode_state(state), 0.0, rng)
        outcome = env.step(state, env.decode_actions(action_idx), prev_rates)
        trajectory.append((state, action_idx, outcome.reward))
        state = outcome.next_state
        prev_rates = (outcome.r_pu, outcome.r_se)
    return trajectory, state


class TeamQLearner(BaseEstimator):
    """Team Q-learning planner with a dense joint-state x joint-action table.

    Parameters
    ----------
    alpha : float, learning rate in (0, 1].
    gamma : float, discount factor in [0, 1).
    epsilon : float, exploration probability in [0, 1], held constant.
    episodes : int, training episodes per fit; the table carries over from one
        episode to the next.
    steps_per_episode : int or None. None picks the grid's default from
        STEPS_PER_EPISODE_BY_CELLS.
    random_state : None, int seed, SeedSequence, or Generator. Drives episode
        resets, exploration, and argmax tie-breaks.

    Attributes after fit
    --------------------
    q_ : ndarray of shape (n_states, n_joint_actions), float64.
    history_ : list of EpisodeMetrics, one entry per episode.
    """

    def __init__(self, alpha=0.1, gamma=0.3, epsilon=0.1, episodes=200,
                 steps_per_episode=None, random_state=None):
        self.alpha = alpha
        self.gamma = gamma
        self.epsilon = epsilon
        self.episodes = episodes
        self.steps_per_episode = steps_per_episode
        self.random_state = random_state

    def fit(self, env, y=None):
        """Train on a SpectrumLeasingEnv from a zero-initialized table."""
        alpha = check_learning_rate(self.alpha)
        gamma = check_discount(self.gamma)
        epsilon = check_probability("epsilon", self.epsilon)
        episodes = check_count("episodes", self.episodes)
        if self.steps_per_episode is None:
            steps = default_steps_per_episode(env.n_cells)
        else:
            steps = check_count("steps_per_episode", self.steps_per_episode)
        rng = check_rng(self.random_state)
        q = np.zeros((env.n_states, env.n_joint_actions))
        history = []
        for _ in range(episodes):
            history.append(run_episode(env, q, steps, rng, alpha=alpha, gamma=gamma, epsilon=epsilon))
        self.q_ = q
        self.history_ = history
        self.grid_ = env.grid
        self.n_uavs_ = env.n_uavs
        self.n_states_ = env.n_states
        self.n_joint_actions_ = env.n_joint_actions
        return self

    def predict(self, states):
        """Greedy joint-action index per state index (first argmax on ties)."""
        self._require_fitted()
        states = np.asarray(states, dtype=np.int64)
        if states.size and (states.min() < 0 or states.max() >= self.n_states_):
            raise ValueError(f"states: indices must be in [0, {self.n_states_})")
        return self.q_[states].argmax(axis=-1)

    def rollout(self, env, start=None, steps=50, rng=None):
        """Greedy rollout with the fitted table; see greedy_rollout."""
        self._require_fitted()
        rng = check_rng(rng)
        if start is None:
            start = env.reset(rng)
        return greedy_rollout(self.q_, env, start, steps, rng)

    def _require_fitted(self):
        if not hasattr(self, "q_"):
            raise NotFittedError("this TeamQLearner is not fitted yet; call fit first")


# -- Q-table snapshots --------------------------------------------------------

Q_TABLE_MAGIC = b"UQTB"
Q_TABLE_VERSION = 1
_HEADER = struct.Struct("<4sIIII")  # magic, version, L1, L2, N


def q_table_bytes(q, grid, n_uavs):
    """Serialize a table: little-endian header then row-major float64 payload."""
    l1, l2 = grid
    expected = ((l1 * l2) ** n_uavs, N_ACTIONS ** n_uavs)
    if q.shape != expected:
        raise ValueError(f"q: shape {q.shape} does not match grid {l1}x{l2} with {n_uavs} UAVs")
    header = _HEADER.pack(Q_TABLE_MAGIC, Q_TABLE_VERSION, l1, l2, n_uavs)
    return header + np.ascontiguousarray(q, dtype="<f8").tobytes()


def save_q_table(path, q, grid, n_uavs):
    Path(path).write_bytes(q_table_bytes(q, grid, n_uavs))


def load_q_table(path):
    """Read a snapshot; returns (q, grid, n_uavs)."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated Q-table snapshot")
    magic, version, l1, l2, n_uavs = _HEADER.unpack_from(data)
    if magic != Q_TABLE_MAGIC:
        raise ValueError(f"{path}: not a Q-table snapshot")
    if version != Q_TABLE_VERSION:
        raise ValueError(f"{path}: unsupported snapshot version {version}")
    n_states = (l1 * l2) ** n_uavs
    n_actions = N_ACTIONS ** n_uavs
    payload = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if payload.size != n_states * n_actions:
        raise ValueError(f"{path}: expected {n_states * n_actions} entries, got {payload.size}")
    return payload.reshape(n_states, n_actions).copy(), (l1, l2), n_uavs


def q_table_checksum(q, grid, n_uavs):
    """SHA-256 hex digest over the serialized snapshot bytes."""
    return hashlib.sha256(q_table_bytes(q, grid, n_uavs)).hexdigest()


def export_q_table_json(path, q, grid, n_uavs):
    """Human-readable export for debugging; the binary snapshot is canonical."""
    doc = {"grid": [int(grid[0]), int(grid[1])], "n_uavs": int(n_uavs), "q": q.tolist()}
    Path(path).write_text(json.dumps(doc))
