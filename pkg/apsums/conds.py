"""Numerical checks of the sufficient and necessary conditions for the prime-sum asymptotics.

Limits cannot be decided from finitely many samples. Every verdict here is a
heuristic read of the tail of a trajectory, and the trajectory is always
returned alongside it.

Notation: b_1 = 0, b_m = 1/(phi(k) ln m), B(n) = sum_{m=2}^n b_m f(m);
a_m = 1 iff m is a prime with m = l (mod k).
"""
import enum
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from apsums import config
from apsums.apsieve import APSpec, PrimeList, sieve_range
from apsums.asymp import geometric_grid
from apsums.errors import ApsumsError, EvalError, ZeroDenominator
from apsums.exprdsl import FuncProfile, Monotonicity, evaluate_signed_log
from apsums.quad import LOWER, cumulative_integrate

logger = logging.getLogger(__name__)


class RatioVerdict(enum.StrEnum):
    AWAY_FROM_1 = "away_from_1"
    APPROACHES_1 = "approaches_1"
    INCONCLUSIVE = "inconclusive"


class DivergenceVerdict(enum.StrEnum):
    DIVERGES = "diverges"
    BOUNDED = "bounded"
    INCONCLUSIVE = "inconclusive"


class A33Verdict(enum.StrEnum):
    NONZERO_LIMIT = "nonzero_limit"
    ZERO_LIMIT = "zero_limit"
    INCONCLUSIVE = "inconclusive"


class NecessaryVerdict(enum.StrEnum):
    TENDS_TO_ZERO = "tends_to_zero"
    BOUNDED_AWAY = "bounded_away"
    INCONCLUSIVE = "inconclusive"


Trajectory = tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Check:
    """One condition: its sampled trajectory, a verdict and any diagnostics"""
    trajectory: Trajectory
    verdict: enum.StrEnum
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"trajectory": [[n, value] for n, value in self.trajectory], "verdict": str(self.verdict)}


@dataclass(frozen=True)
class ConditionReport:
    f_text: str
    ap: APSpec
    sufficient_ratio: Check
    divergence: Check
    a33: Check
    necessary: Check
    ratio: Check | None = None

    def to_json(self) -> dict:
        report = {
            "f": self.f_text,
            "k": self.ap.k,
            "l": self.ap.l,
            "sufficient_ratio": self.sufficient_ratio.to_json(),
            "divergence": self.divergence.to_json(),
            "a33": self.a33.to_json(),
            "necessary": self.necessary.to_json(),
        }
        if self.ratio is not None:
            report["ratio"] = self.ratio.to_json()
        return report


def _tail(values: Sequence[float]) -> list[float]:
    return list(values[-config.TAIL_POINTS:])


def _strictly_decreasing(values: Sequence[float]) -> bool:
    return len(values) >= 2 and all(b < a for a, b in zip(values, values[1:]))


def _strictly_increasing(values: Sequence[float]) -> bool:
    return len(values) >= 2 and all(b > a for a, b in zip(values, values[1:]))


def _note(notes: list[str], message: str) -> None:
    logger.warning("[CONDS] %s", message)
    notes.append(message)


def default_n_grid() -> list[float]:
    return geometric_grid(config.N_GRID_LO, config.N_GRID_HI, config.N_GRID_POINTS)


def _n_grid(n_grid: Sequence[float] | None) -> list[float]:
    if n_grid is None:
        return default_n_grid()
    grid = [float(n) for n in n_grid]
    if not grid:
        raise ValueError("n grid must not be empty")
    return grid


def _b_prefix_sums(f: FuncProfile, ns: Sequence[int], ap: APSpec) -> list[float]:
    """B(n) for every n in an increasing sequence, each by compensated direct summation"""
    top = int(ns[-1])
    m = np.arange(2, top + 1, dtype=np.float64)
    terms = (f.value(m) / np.log(m)).tolist()
    # terms[i] belongs to m = i + 2
    pieces: list[float] = []
    sums = []
    start = 0
    for n in ns:
        stop = int(n) - 1
        pieces.append(math.fsum(terms[start:stop]))
        sums.append(math.fsum(pieces) / ap.phi_k)
        start = stop
    return sums


def b_partial_sum(f: FuncProfile, n: int, ap: APSpec) -> float:
    """B(n) = sum_{m=2}^n f(m) / (phi(k) ln m)"""
    if n < 2:
        raise ValueError(f"B(n) needs n >= 2, got {n}")
    return _b_prefix_sums(f, [n], ap)[0]


def check_sufficient(
    f: FuncProfile,
    ap: APSpec,
    n_grid: Sequence[float] | None = None,
    tol: float = config.DEFAULT_TOL,
) -> tuple[Check, Check]:
    """Conditions 1 and 3 in their integral form, plus the condition-2 advisory.

    R(n) = [int_2^n t f'(t)/log t dt] / [n f(n)/log n]; I(n) is the numerator.
    Returns (ratio check, divergence check).
    """
    grid = _n_grid(n_grid)
    notes: list[str] = []
    if f.constant:
        _note(notes, "condition 2 violated: f' = 0")
    elif f.monotone is Monotonicity.NON_MONOTONE:
        _note(notes, "condition 2 violated: f is not monotone on the sample")

    if f.constant:
        integrals = [0.0] * len(grid)
    else:
        pieces = cumulative_integrate(
            lambda t: t * f.slope(t) / math.log(t), LOWER, grid, tol, rtol=config.DEFAULT_RTOL
        )
        integrals = [piece.value for piece in pieces]

    ratios = []
    for n, integral in zip(grid, integrals):
        scale = n * f.value(n) / math.log(n)
        if scale == 0.0:
            _note(notes, f"n f(n)/log n vanishes at n={n:g}; point dropped")
            continue
        ratios.append((n, integral / scale))

    ratio_verdict = _ratio_verdict([r for _, r in ratios], config.RATIO_MARGIN)
    divergence_verdict = _divergence_verdict(integrals)
    logger.info("[CONDS] sufficient %s: ratio=%s divergence=%s", f.text, ratio_verdict, divergence_verdict)
    return (
        Check(tuple(ratios), ratio_verdict, tuple(notes)),
        Check(tuple(zip(grid, integrals)), divergence_verdict, tuple(notes)),
    )


def _ratio_verdict(values: Sequence[float], margin: float) -> RatioVerdict:
    if not values:
        return RatioVerdict.INCONCLUSIVE
    if all(v == 0.0 for v in values):
        return RatioVerdict.AWAY_FROM_1
    gaps = [abs(v - 1.0) for v in _tail(values)]
    if _strictly_decreasing(gaps) and gaps[-1] < margin:
        return RatioVerdict.APPROACHES_1
    if min(gaps) >= margin:
        return RatioVerdict.AWAY_FROM_1
    return RatioVerdict.INCONCLUSIVE


def _divergence_verdict(integrals: Sequence[float]) -> DivergenceVerdict:
    if all(v == 0.0 for v in integrals):
        return DivergenceVerdict.BOUNDED
    tail = [abs(v) for v in _tail(integrals)]
    if _strictly_increasing(tail) and tail[-1] > config.STABLE_BAND * tail[0]:
        return DivergenceVerdict.DIVERGES
    if (max(tail) - min(tail)) < config.SPREAD_BOUNDED * max(tail):
        return DivergenceVerdict.BOUNDED
    return DivergenceVerdict.INCONCLUSIVE


def check_a33(f: FuncProfile, n_grid: Sequence[float] | None = None) -> Check:
    """L(n) = f(n) / (log n f'(n)) along the grid.

    Evaluated in the log domain so fast-growing f (c^t) does not overflow.
    The decay test compares log|L| against log log n over the tail.
    """
    grid = _n_grid(n_grid)
    notes: list[str] = []
    if f.monotone is not Monotonicity.INCREASING:
        _note(notes, f"f is {f.monotone}, not increasing; the criterion does not apply")
        return Check((), A33Verdict.INCONCLUSIVE, tuple(notes))

    trajectory = []
    log_values = []
    for n in grid:
        f_sign, f_log = evaluate_signed_log(f.expr, n)
        d_sign, d_log = evaluate_signed_log(f.deriv, n)
        if d_sign == 0:
            _note(notes, f"f'({n:g}) = 0")
            return Check(tuple(trajectory), A33Verdict.INCONCLUSIVE, tuple(notes))
        log_l = (f_log - d_log) - math.log(math.log(n))
        if log_l > 709.0:
            raise EvalError(n, "f/(log n f') overflows a double")
        trajectory.append((n, f_sign * d_sign * math.exp(log_l) if f_sign else 0.0))
        log_values.append(log_l)

    verdict = _a33_verdict(grid, log_values)
    logger.info("[CONDS] a33 %s: %s", f.text, verdict)
    return Check(tuple(trajectory), verdict, tuple(notes))


def _a33_verdict(grid: Sequence[float], log_values: Sequence[float]) -> A33Verdict:
    tail = _tail(log_values)
    if all(v == -math.inf for v in tail):
        return A33Verdict.ZERO_LIMIT
    if len(tail) < 2 or any(v == -math.inf for v in tail):
        return A33Verdict.INCONCLUSIVE
    ns = _tail(grid)
    slope = (tail[-1] - tail[0]) / (math.log(math.log(ns[-1])) - math.log(math.log(ns[0])))
    decreasing = _strictly_decreasing(tail)
    if decreasing and (tail[-1] < math.log(config.SMALL_LIMIT) or slope <= config.DECAY_SLOPE):
        return A33Verdict.ZERO_LIMIT
    if slope >= config.FLAT_SLOPE:
        return A33Verdict.NONZERO_LIMIT
    return A33Verdict.INCONCLUSIVE


def default_p_grid(primes: PrimeList) -> list[int]:
    """Largest progression prime at or below 10^j for each configured exponent"""
    grid: list[int] = []
    for exponent in config.P_GRID_EXPONENTS:
        count = primes.count_upto(10.0**exponent)
        if count and (not grid or int(primes.primes[count - 1]) > grid[-1]):
            grid.append(int(primes.primes[count - 1]))
    return grid


def _grid_primes(ap: APSpec, workers: int) -> PrimeList:
    return sieve_range(10.0 ** max(config.P_GRID_EXPONENTS), ap, workers=workers)


def check_necessary(
    f: FuncProfile,
    ap: APSpec,
    p_grid: Sequence[int] | None = None,
    *,
    workers: int = 1,
) -> Check:
    """r(p) = |f(p)| / |B(p)| along primes of the progression.

    A converged B(p) makes r(p) -> 0 say nothing beyond f(p) -> 0; that case
    is reported as bounded_away.
    """
    grid = list(p_grid) if p_grid is not None else default_p_grid(_grid_primes(ap, workers))
    notes: list[str] = []
    if not grid:
        _note(notes, "no progression primes on the grid")
        return Check((), NecessaryVerdict.INCONCLUSIVE, tuple(notes))

    partials = _b_prefix_sums(f, grid, ap)
    trajectory = []
    try:
        for p, partial in zip(grid, partials):
            if partial == 0.0:
                raise ZeroDenominator(p)
            trajectory.append((p, abs(f.value(float(p))) / abs(partial)))
    except ZeroDenominator as exc:
        _note(notes, str(exc))
        return Check(tuple(trajectory), NecessaryVerdict.INCONCLUSIVE, tuple(notes))

    verdict = _necessary_verdict(partials, [r for _, r in trajectory], notes)
    logger.info("[CONDS] necessary %s: %s", f.text, verdict)
    return Check(tuple(trajectory), verdict, tuple(notes))


def _necessary_verdict(partials: Sequence[float], ratios: Sequence[float], notes: list[str]) -> NecessaryVerdict:
    b_tail = _tail(partials)
    tail = _tail(ratios)
    if len(tail) < 2:
        return NecessaryVerdict.INCONCLUSIVE
    if abs(b_tail[-1] - b_tail[0]) < config.DENOMINATOR_CONVERGED * abs(b_tail[-1]):
        _note(notes, "B(p) has converged; r(p) -> 0 only through f(p) -> 0")
        return NecessaryVerdict.BOUNDED_AWAY
    if _strictly_decreasing(tail) and tail[-1] < config.SMALL_LIMIT:
        return NecessaryVerdict.TENDS_TO_ZERO
    if min(tail) > config.SMALL_LIMIT and max(tail) <= config.STABLE_BAND * min(tail):
        return NecessaryVerdict.BOUNDED_AWAY
    return NecessaryVerdict.INCONCLUSIVE


def check_ratio(
    f: FuncProfile,
    ap: APSpec,
    p_grid: Sequence[int] | None = None,
    *,
    primes: PrimeList | None = None,
    workers: int = 1,
) -> Check:
    """A(n)/B(n) itself: sum of f(p) over progression primes p <= n against B(n)"""
    if primes is None:
        primes = _grid_primes(ap, workers) if p_grid is None else sieve_range(max(p_grid), ap, workers=workers)
    grid = list(p_grid) if p_grid is not None else default_p_grid(primes)
    if not grid:
        return Check((), RatioVerdict.INCONCLUSIVE, ("no progression primes on the grid",))
    values = f.value(primes.primes.astype(np.float64)).tolist()
    partials = _b_prefix_sums(f, grid, ap)
    trajectory = []
    for p, partial in zip(grid, partials):
        exact = math.fsum(values[: primes.count_upto(p)])
        if partial == 0.0:
            return Check(tuple(trajectory), RatioVerdict.INCONCLUSIVE, (str(ZeroDenominator(p)),))
        trajectory.append((p, exact / partial))
    gaps = [abs(r - 1.0) for _, r in trajectory]
    tail = _tail(gaps)
    if _strictly_decreasing(tail) and tail[-1] < 0.1:
        verdict = RatioVerdict.APPROACHES_1
    elif tail[-1] >= 0.1 and not _strictly_decreasing(tail):
        verdict = RatioVerdict.AWAY_FROM_1
    else:
        verdict = RatioVerdict.INCONCLUSIVE
    return Check(tuple(trajectory), verdict)


def _guarded(name: str, verdict: enum.StrEnum, compute) -> Check:
    try:
        return compute()
    except ApsumsError as exc:
        logger.warning("[CONDS] %s check failed: %s", name, exc)
        return Check((), verdict, (str(exc),))


def evaluate_conditions(
    f: FuncProfile,
    ap: APSpec,
    *,
    n_grid: Sequence[float] | None = None,
    p_grid: Sequence[int] | None = None,
    with_ratio: bool = False,
    tol: float = config.DEFAULT_TOL,
    workers: int = 1,
) -> ConditionReport:
    """Full report; a check that cannot be computed is reported inconclusive"""
    sufficient = _guarded(
        "sufficient",
        RatioVerdict.INCONCLUSIVE,
        lambda: check_sufficient(f, ap, n_grid, tol),
    )
    if isinstance(sufficient, Check):
        ratio_check = sufficient
        divergence = Check((), DivergenceVerdict.INCONCLUSIVE, sufficient.notes)
    else:
        ratio_check, divergence = sufficient
    a33 = _guarded("a33", A33Verdict.INCONCLUSIVE, lambda: check_a33(f, n_grid))

    primes = None
    if p_grid is None:
        primes = _grid_primes(ap, workers)
        p_grid = default_p_grid(primes)
    necessary = _guarded("necessary", NecessaryVerdict.INCONCLUSIVE, lambda: check_necessary(f, ap, p_grid))
    ratio = None
    if with_ratio:
        ratio = _guarded(
            "ratio",
            RatioVerdict.INCONCLUSIVE,
            lambda: check_ratio(f, ap, p_grid, primes=primes, workers=workers),
        )
    return ConditionReport(
        f_text=f.text,
        ap=ap,
        sufficient_ratio=ratio_check,
        divergence=divergence,
        a33=a33,
        necessary=necessary,
        ratio=ratio,
    )
