"""Joint UAV grid world: action semantics, per-slot throughputs, difference reward."""

import itertools
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

from .geometry import Position, PowerConfig, per_cell_relay_terms
from .validation import check_count, check_grid


class Action(IntEnum):
    """Per-UAV actions; the integer codes are part of the joint-action encoding."""

    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3
    SENSE_TASK = 4
    RELAY_TASK = 5


class Task(IntEnum):
    SENSING = 0
    RELAYING = 1


N_ACTIONS = 6

_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))  # Up, Down, Left, Right


class UavState(NamedTuple):
    pos: Position
    task: Task


class StepOutcome(NamedTuple):
    next_state: tuple
    reward: float
    r_pu: float
    r_se: float


@dataclass(frozen=True)
class RewardParams:
    """Weights of the primary and sensing throughput differences in the reward."""

    beta1: float = 1.0
    beta2: float = 1.0

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name}: weight must be finite, got {value!r}")


class SpectrumLeasingEnv:
    """N UAVs on an L1 x L2 grid, each either relaying the primary pair's
    traffic (pt -> pr) or forwarding sensed data to the emergency center
    (src -> ec). A joint state is a tuple of N UavState values; multiple UAVs
    may share a cell.

    The environment is a value: methods never mutate it and stepping returns
    fresh states, so one instance can be shared by any number of callers.
    """

    def __init__(self, grid=(6, 6), n_uavs=2, layout=None, powers=None, reward_params=None):
        self.grid = check_grid(grid)
        self.n_uavs = check_count("n_uavs", n_uavs)
        if layout is None:
            raise ValueError("layout: a NetworkLayout is required")
        layout.validate_in_grid(self.grid)
        self.layout = layout
        self.powers = powers if powers is not None else PowerConfig()
        self.reward_params = reward_params if reward_params is not None else RewardParams()
        self.n_cells = self.grid[0] * self.grid[1]
        self.n_states = self.n_cells ** self.n_uavs
        self.n_joint_actions = N_ACTIONS ** self.n_uavs
        p = self.powers
        self._term_pu = per_cell_relay_terms(self.grid, layout.pt, layout.pr, p.p_pt, p.p_u, p.sigma2)
        self._term_se = per_cell_relay_terms(self.grid, layout.src, layout.ec, p.p_s, p.p_u, p.sigma2)
        self._joint_actions = None

    # -- state and action codecs -------------------------------------------

    def cell_of(self, pos):
        return pos[0] * self.grid[1] + pos[1]

    def position_of(self, cell):
        return Position(*divmod(cell, self.grid[1]))

    def encode_state(self, state):
        """Base-(n_cells) positional index of the joint positions, UAV 0 most
        significant. Tasks are deliberately not part of the encoding."""
        index = 0
        n_cells = self.n_cells
        l2 = self.grid[1]
        for pos, _ in state:
            index = index * n_cells + pos[0] * l2 + pos[1]
        return index

    def decode_state(self, index):
        """Joint positions for a state index (inverse of encode_state)."""
        cells = []
        for _ in range(self.n_uavs):
            index, cell = divmod(index, self.n_cells)
            cells.append(cell)
        return tuple(self.position_of(cell) for cell in reversed(cells))

    def encode_actions(self, actions):
        index = 0
        for action in actions:
            index = index * N_ACTIONS + action
        return index

    def decode_actions(self, index):
        return self.joint_action_table[index]

    @property
    def joint_action_table(self):
        """All joint actions as tuples of per-UAV codes, indexed by joint-action index."""
        if self._joint_actions is None:
            self._joint_actions = tuple(itertools.product(range(N_ACTIONS), repeat=self.n_uavs))
        return self._joint_actions

    # -- dynamics ------------------------------------------------------------

    def reset(self, rng):
        """Initial joint state: uniform random positions, every UAV sensing."""
        cells = rng.integers(self.n_cells, size=self.n_uavs)
        return tuple(UavState(self.position_of(int(cell)), Task.SENSING) for cell in cells)

    def apply_joint_action(self, state, actions):
        """Step every UAV independently: movement actions translate one cell and
        keep the task (moves off the grid clamp to no-ops); task actions keep
        the position and set the task."""
        if len(actions) != self.n_uavs:
            raise ValueError(f"actions: expected {self.n_uavs} entries, got {len(actions)}")
        l1, l2 = self.grid
        out = []
        for uav, action in zip(state, actions):
            if action >= Action.SENSE_TASK:
                task = Task(action - Action.SENSE_TASK)
                out.append(uav if uav.task == task else UavState(uav.pos, task))
            else:
                dr, dc = _MOVES[action]
                row, col = uav.pos.row + dr, uav.pos.col + dc
                if 0 <= row < l1 and 0 <= col < l2:
                    out.append(UavState(Position(row, col), uav.task))
                else:
                    out.append(uav)
        return tuple(out)

    def throughputs(self, state):
        """Per-slot AF rates (r_pu, r_se): relaying UAVs serve pt -> pr, sensing
        UAVs serve src -> ec; an empty subset yields rate 0."""
        total_pu = 0.0
        total_se = 0.0
        term_pu = self._term_pu
        term_se = self._term_se
        l2 = self.grid[1]
        for pos, task in state:
            cell = pos[0] * l2 + pos[1]
            if task:
                total_pu += term_pu[cell]
            else:
                total_se += term_se[cell]
        return 0.5 * math.log2(1.0 + total_pu), 0.5 * math.log2(1.0 + total_se)

    def reward(self, prev_rates, curr_rates):
        """Weighted throughput difference between consecutive slots."""
        w = self.reward_params
        return w.beta1 * (curr_rates[0] - prev_rates[0]) + w.beta2 * (curr_rates[1] - prev_rates[1])

    def step(self, state, actions, prev_rates):
        """Apply a joint action and score it against the previous slot's rates."""
        nxt = self.apply_joint_action(state, actions)
        r_pu, r_se = self.throughputs(nxt)
        return StepOutcome(nxt, self.reward(prev_rates, (r_pu, r_se)), r_pu, r_se)
