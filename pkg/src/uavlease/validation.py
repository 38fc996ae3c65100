"""Argument checking helpers shared across the package."""

import numpy as np


def check_grid(grid):
    """Coerce to an (l1, l2) pair of ints, both >= 1."""
    try:
        l1, l2 = grid
    except (TypeError, ValueError):
        raise ValueError(f"grid: expected an (L1, L2) pair, got {grid!r}") from None
    l1, l2 = int(l1), int(l2)
    if l1 < 1 or l2 < 1:
        raise ValueError(f"grid: dimensions must be >= 1, got {l1}x{l2}")
    return l1, l2


def check_count(name, value, minimum=1):
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name}: must be >= {minimum}, got {value}")
    return value


def check_learning_rate(alpha):
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha: learning rate must be in (0, 1], got {alpha!r}")
    return float(alpha)


def check_discount(gamma):
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma: discount must be in [0, 1), got {gamma!r}")
    return float(gamma)


def check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}: probability must be in [0, 1], got {value!r}")
    return float(value)


def check_rng(random_state):
    """Accept None, an int seed, a SeedSequence, or a Generator; return a Generator."""
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)
