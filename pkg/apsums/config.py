"""Defaults and environment settings"""
import os

from apsums.errors import ConfigError

# Remainder-shape constants; c only has to be positive.
DEFAULT_C = 1.0
DEFAULT_THETA = 0.6

# Quadrature
DEFAULT_TOL = 1e-10
DEFAULT_RTOL = 1e-12
MAX_DEPTH = 60

# Sieve
SEGMENT_ODD_COUNT = 2**20
DEFAULT_MAX_X = 2**40

# exprdsl
MONOTONE_SAMPLES = 64
DEFAULT_SAMPLE_HI = 1e6

# Convergence tables
DEFAULT_X_MIN = 1e3
DEFAULT_X_MAX = 1e6
DEFAULT_X_POINTS = 16

# Condition checks
N_GRID_LO = 1e2
N_GRID_HI = 1e8
N_GRID_POINTS = 12
P_GRID_EXPONENTS = (2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0)
TAIL_POINTS = 5
SMALL_LIMIT = 1e-3
STABLE_BAND = 1.5
RATIO_MARGIN = 0.05
SPREAD_BOUNDED = 1e-2
DENOMINATOR_CONVERGED = 1e-3
DECAY_SLOPE = -0.5
FLAT_SLOPE = -0.1


def max_x() -> int:
    """Hard cap on sieve bounds, overridable with APSUMS_MAX_X.

    Read on every call so a long-lived process picks up changes.
    """
    raw = os.getenv("APSUMS_MAX_X")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_X
    try:
        value = int(float(raw))
    except ValueError:
        raise ConfigError(f"APSUMS_MAX_X must be a number, got {raw!r}") from None
    if value < 2:
        raise ConfigError(f"APSUMS_MAX_X must be at least 2, got {value}")
    return value
