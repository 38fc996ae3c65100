"""Grid geometry, distance-based channel gains, and amplify-and-forward rates."""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .validation import check_grid

# Nodes hover at altitude, so planar coincidence never means zero propagation
# distance; clamping also keeps every gain finite.
MIN_DISTANCE = 1.0


class Position(NamedTuple):
    """Grid cell in row-major coordinates: row in [0, L1), col in [0, L2)."""

    row: int
    col: int


@dataclass(frozen=True)
class PowerConfig:
    """Transmit and noise powers, all in Watts."""

    p_pt: float = 0.01   # primary transmitter
    p_s: float = 0.02    # sensing data source
    p_u: float = 0.02    # per-UAV relay power
    sigma2: float = 1e-9  # receiver noise power

    def __post_init__(self):
        for name in ("p_pt", "p_s", "p_u", "sigma2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name}: power must be finite and strictly positive, got {value!r}")


@dataclass(frozen=True)
class NetworkLayout:
    """Fixed endpoints: the primary pair (pt -> pr) and the sensing pair (src -> ec)."""

    pt: Position
    pr: Position
    src: Position
    ec: Position

    def __post_init__(self):
        for name in ("pt", "pr", "src", "ec"):
            value = getattr(self, name)
            if not isinstance(value, Position):
                object.__setattr__(self, name, Position(int(value[0]), int(value[1])))
        if self.pt == self.pr:
            raise ValueError("layout: pt and pr must be distinct cells")
        if self.src == self.ec:
            raise ValueError("layout: src and ec must be distinct cells")

    def validate_in_grid(self, grid):
        l1, l2 = check_grid(grid)
        for name in ("pt", "pr", "src", "ec"):
            pos = getattr(self, name)
            if not (0 <= pos.row < l1 and 0 <= pos.col < l2):
                raise ValueError(f"layout: {name}={tuple(pos)} is outside the {l1}x{l2} grid")

    def as_dict(self):
        return {name: list(getattr(self, name)) for name in ("pt", "pr", "src", "ec")}


def distance(a, b):
    """Euclidean distance in cell units, clamped below at MIN_DISTANCE."""
    return max(math.hypot(a[0] - b[0], a[1] - b[1]), MIN_DISTANCE)


def gain(d):
    """Squared channel magnitude |h|^2 = d^-2 for a link of length d >= MIN_DISTANCE."""
    return 1.0 / (d * d)


def af_relay_term(p_src, g_src_relay, p_relay, g_relay_dst, sigma2):
    """SNR contribution of a single amplify-and-forward relay path."""
    a = p_src * g_src_relay
    b = p_relay * g_relay_dst
    return (a * b) / (sigma2 + a + b)


def af_sum_rate(p_src, src_pos, dst_pos, relays, sigma2):
    """Half-slot AF sum rate in bits/s/Hz over a set of relays.

        rate = 1/2 * log2(1 + sum_j a_j * b_j / (sigma2 + a_j + b_j))

    with a_j = p_src * |h(src, relay_j)|^2 and b_j = p_j * |h(relay_j, dst)|^2.
    The direct src -> dst link is treated as negligible and omitted, so an
    empty relay set yields rate 0. `relays` is an iterable of (Position, power).
    """
    total = 0.0
    for pos, p_relay in relays:
        total += af_relay_term(
            p_src, gain(distance(src_pos, pos)), p_relay, gain(distance(pos, dst_pos)), sigma2
        )
    return 0.5 * math.log2(1.0 + total)


def per_cell_relay_terms(grid, src_pos, dst_pos, p_src, p_relay, sigma2):
    """AF contribution of a relay parked in each grid cell, row-major order."""
    l1, l2 = check_grid(grid)
    terms = []
    for cell in range(l1 * l2):
        pos = Position(*divmod(cell, l2))
        terms.append(
            af_relay_term(
                p_src, gain(distance(src_pos, pos)), p_relay, gain(distance(pos, dst_pos)), sigma2
            )
        )
    return terms


def random_layout(grid, rng):
    """Draw endpoint cells uniformly at random, keeping pt != pr and src != ec."""
    l1, l2 = check_grid(grid)
    n_cells = l1 * l2
    if n_cells < 2:
        raise ValueError(f"grid: need at least 2 cells to place distinct endpoints, got {l1}x{l2}")

    def draw():
        return Position(*divmod(int(rng.integers(n_cells)), l2))

    pt = draw()
    pr = draw()
    while pr == pt:
        pr = draw()
    src = draw()
    ec = draw()
    while ec == src:
        ec = draw()
    return NetworkLayout(pt, pr, src, ec)
