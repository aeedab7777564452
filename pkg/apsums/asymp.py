"""Exact prime sums, the Abel-summation oracle, closed-form main terms and convergence tables"""
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from apsums import config
from apsums.apsieve import APSpec, PrimeList, sieve_range
from apsums.errors import UnknownKind
from apsums.exprdsl import Canonical, FuncProfile
from apsums.quad import ModelTag, envelopes, li_offset, main_terms

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Prediction:
    model: ModelTag
    main: float
    envelope: float
    c: float
    theta: float

    def __post_init__(self):
        if self.envelope < 0:
            raise ValueError(f"envelope must be non-negative, got {self.envelope!r}")


@dataclass(frozen=True, slots=True)
class ConvergenceRow:
    x: float
    exact: float
    main: float
    ratio: float
    normalized_remainder: float


def _primes_upto(x: float, ap: APSpec, primes: PrimeList | None, workers: int) -> np.ndarray:
    if primes is None:
        return sieve_range(x, ap, workers=workers).primes
    return primes.prefix(x).primes


def exact_sum(
    f: FuncProfile,
    x: float,
    ap: APSpec,
    *,
    primes: PrimeList | None = None,
    workers: int = 1,
) -> float:
    """Sum of f(p) over primes p <= x in the progression, ascending, compensated"""
    p = _primes_upto(x, ap, primes, workers)
    if p.size == 0:
        return 0.0
    return math.fsum(f.value(p.astype(np.float64)).tolist())


def abel_sum(
    f: FuncProfile,
    x: float,
    ap: APSpec,
    *,
    primes: PrimeList | None = None,
    workers: int = 1,
) -> float:
    """pi_l(k,x) f(x) - int_2^x pi_l(k,t) f'(t) dt, the integral taken exactly.

    pi_l(k, t) is the step function j on [p_j, p_{j+1}), so the integral is
    sum_j j * (f(p_{j+1}) - f(p_j)) with p_{n+1} = x.
    """
    p = _primes_upto(x, ap, primes, workers)
    n = int(p.size)
    if n == 0:
        return 0.0
    fx = f.value(float(x))
    nodes = np.append(f.value(p.astype(np.float64)), fx)
    steps = np.arange(1, n + 1, dtype=np.float64) * np.diff(nodes)
    return n * fx - math.fsum(steps.tolist())


def _kind_name(kind: Canonical | str) -> str:
    return kind.name if isinstance(kind, Canonical) else str(kind)


def canonical_main(kind: Canonical | str, x: float, ap: APSpec) -> float:
    """Closed-form main terms of the worked examples (sharp models)"""
    match _kind_name(kind):
        case "one":
            return li_offset(x) / ap.phi_k
        case "log":
            return x / ap.phi_k
        case "inv":
            return math.log(math.log(x)) / ap.phi_k
        case "log_over_t":
            return math.log(x) / ap.phi_k
    raise UnknownKind(kind)


def canonical_coarse(kind: Canonical | str, x: float, ap: APSpec) -> float:
    """Closed forms the coarse model gives for the same examples"""
    match _kind_name(kind):
        case "one":
            return x / (ap.phi_k * math.log(x))
        case "log":
            return x / ap.phi_k
        case "inv":
            return math.log(math.log(x)) / ap.phi_k
    raise UnknownKind(kind)


def predict(
    f: FuncProfile,
    x: float,
    ap: APSpec,
    model: ModelTag,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
) -> Prediction:
    model = ModelTag(model)
    main = main_terms(f, [x], ap, model, tol)[0]
    bound = envelopes(f, [x], ap, model, c, theta, tol)[0]
    return Prediction(model=model, main=main, envelope=bound, c=c, theta=theta)


def geometric_grid(
    lo: float = config.DEFAULT_X_MIN,
    hi: float = config.DEFAULT_X_MAX,
    n: int = config.DEFAULT_X_POINTS,
) -> list[float]:
    if n < 1:
        raise ValueError(f"grid needs at least one point, got {n}")
    if n == 1:
        return [float(lo)]
    return np.geomspace(lo, hi, n).tolist()


def _safe_ratio(num: float, den: float) -> float:
    if den != 0:
        return num / den
    return 0.0 if num == 0 else math.copysign(math.inf, num)


def convergence_table(
    f: FuncProfile,
    ap: APSpec,
    xs: Sequence[float],
    model: ModelTag,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
    *,
    workers: int = 1,
) -> list[ConvergenceRow]:
    """Exact sum against the model prediction at every grid point.

    One sieve pass up to max(xs); rows reuse prefixes of the same prime list.
    The ratio is infinite only when the main term vanishes (x = 2).
    """
    grid = [float(x) for x in xs]
    if not grid or grid[0] < 2 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("x grid must be non-empty, strictly increasing and >= 2")
    model = ModelTag(model)
    primes = sieve_range(grid[-1], ap, workers=workers)
    values = f.value(primes.primes.astype(np.float64)).tolist() if len(primes) else []
    mains = main_terms(f, grid, ap, model, tol)
    bounds = envelopes(f, grid, ap, model, c, theta, tol)

    rows = []
    for x, main, bound in zip(grid, mains, bounds):
        exact = math.fsum(values[: primes.count_upto(x)])
        rows.append(
            ConvergenceRow(
                x=x,
                exact=exact,
                main=main,
                ratio=_safe_ratio(exact, main),
                normalized_remainder=_safe_ratio(exact - main, bound),
            )
        )
    logger.info("[ASYMP] %s over %s: %d rows, model=%s", f.text, ap, len(rows), model)
    return rows


def fit_constant(rows: Sequence[ConvergenceRow], split: float = 0.5, slack: float = 1.5) -> tuple[float, bool]:
    """Fit the O-constant on the smaller-x part of a table and test it on the rest.

    Returns (C, holds) with C = max |normalized_remainder| over the first
    `split` fraction of rows, and holds true when every later row stays
    within slack * C.
    """
    if len(rows) < 2:
        raise ValueError("need at least two rows to fit and check a constant")
    cut = min(max(1, int(len(rows) * split)), len(rows) - 1)
    constant = max(abs(row.normalized_remainder) for row in rows[:cut])
    holds = all(abs(row.normalized_remainder) <= slack * constant for row in rows[cut:])
    return constant, holds
