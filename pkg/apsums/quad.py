"""Adaptive Simpson quadrature and the model main terms / remainder envelopes"""
import enum
import logging
import math
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from apsums import config
from apsums.apsieve import APSpec
from apsums.errors import MaxDepthExceeded, NonFiniteIntegrand
from apsums.exprdsl import FuncProfile

logger = logging.getLogger(__name__)

_EPS = sys.float_info.epsilon

# Lower limit of every integral in the formulas
LOWER = 2.0


class ModelTag(enum.StrEnum):
    COARSE = "coarse"
    PNT = "pnt"
    VINOGRADOV = "vinogradov"
    GRH = "grh"


@dataclass(frozen=True, slots=True)
class Integral:
    value: float
    abs_error_estimate: float
    evaluations: int


def integrate(
    g: Callable[[float], float],
    a: float,
    b: float,
    tol: float = config.DEFAULT_TOL,
    *,
    rtol: float = 0.0,
    max_depth: int = config.MAX_DEPTH,
) -> Integral:
    """Adaptive Simpson with bisection.

    An interval [lo, hi] is accepted once its error estimate |S2 - S1|/15 is
    below tol * (hi - lo)/(b - a), below rtol * |S2|, or at the rounding floor.
    Accepted pieces are summed left to right with Richardson correction.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if not a <= b:
        raise ValueError(f"integration bounds out of order: [{a!r}, {b!r}]")
    if a == b:
        return Integral(0.0, 0.0, 0)

    evaluations = 0

    def sample(t: float) -> float:
        nonlocal evaluations
        evaluations += 1
        value = float(g(t))
        if not math.isfinite(value):
            raise NonFiniteIntegrand(t)
        return value

    width = b - a
    fa, fm, fb = sample(a), sample((a + b) / 2), sample(b)
    stack = [(a, b, fa, fm, fb, width / 6 * (fa + 4 * fm + fb), 0)]
    values: list[float] = []
    errors: list[float] = []
    while stack:
        lo, hi, flo, fmid, fhi, whole, depth = stack.pop()
        mid = (lo + hi) / 2
        h = hi - lo
        flm = sample((lo + mid) / 2)
        frm = sample((mid + hi) / 2)
        left = h / 12 * (flo + 4 * flm + fmid)
        right = h / 12 * (fmid + 4 * frm + fhi)
        delta = left + right - whole
        error = abs(delta) / 15
        allowed = max(tol * h / width, rtol * abs(left + right), 50 * _EPS * (abs(left) + abs(right)))
        if error <= allowed or not lo < (lo + mid) / 2 < mid < (mid + hi) / 2 < hi:
            values.append(left + right + delta / 15)
            errors.append(error)
            continue
        if depth + 1 >= max_depth:
            raise MaxDepthExceeded(lo, hi, max_depth)
        # right half first so the left half is popped next
        stack.append((mid, hi, fmid, frm, fhi, right, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, depth + 1))

    result = Integral(math.fsum(values), math.fsum(errors), evaluations)
    logger.debug("[QUAD] [%g, %g] -> %r (+-%.3g, %d evals)", a, b, result.value, result.abs_error_estimate, evaluations)
    return result


def cumulative_integrate(
    g: Callable[[float], float],
    a: float,
    xs: Sequence[float],
    tol: float = config.DEFAULT_TOL,
    *,
    rtol: float = 0.0,
) -> list[Integral]:
    """Integral from a to every point of an increasing grid, one pass over the segments"""
    if not xs:
        return []
    width = xs[-1] - a
    results: list[Integral] = []
    values: list[float] = []
    error = 0.0
    evaluations = 0
    previous = a
    for x in xs:
        if x < previous:
            raise ValueError(f"grid must be increasing and start at or above {a!r}")
        share = tol * (x - previous) / width if width > 0 else tol
        piece = integrate(g, previous, x, max(share, _EPS), rtol=rtol)
        values.append(piece.value)
        error += piece.abs_error_estimate
        evaluations += piece.evaluations
        results.append(Integral(math.fsum(values), error, evaluations))
        previous = x
    return results


def _inv_log(t: float) -> float:
    return 1.0 / math.log(t)


def li_offset(x: float, tol: float = config.DEFAULT_TOL) -> float:
    """Integral of dt/log t from 2 to x"""
    if x < LOWER:
        raise ValueError(f"li_offset needs x >= 2, got {x!r}")
    return integrate(_inv_log, LOWER, x, tol).value


def _check_grid(xs: Sequence[float]) -> list[float]:
    grid = [float(x) for x in xs]
    if not grid or grid[0] < LOWER or any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("x grid must be non-empty, increasing and >= 2")
    return grid


def main_terms(
    f: FuncProfile,
    xs: Sequence[float],
    ap: APSpec,
    model: ModelTag,
    tol: float = config.DEFAULT_TOL,
) -> list[float]:
    """Main term of `model` at every grid point.

    pnt, vinogradov and grh share (1/phi(k)) * int_2^x f(t)/log t dt;
    coarse is x f(x)/(phi(k) log x) - (1/phi(k)) * int_2^x t f'(t)/log t dt.
    """
    grid = _check_grid(xs)
    model = ModelTag(model)
    if model is ModelTag.COARSE:
        if f.constant:
            integrals = [0.0] * len(grid)
        else:
            pieces = cumulative_integrate(
                lambda t: t * f.slope(t) / math.log(t), LOWER, grid, tol, rtol=config.DEFAULT_RTOL
            )
            integrals = [piece.value for piece in pieces]
        return [
            (x * f.value(x) / math.log(x) - integral) / ap.phi_k
            for x, integral in zip(grid, integrals)
        ]
    pieces = cumulative_integrate(lambda t: f.value(t) / math.log(t), LOWER, grid, tol, rtol=config.DEFAULT_RTOL)
    return [piece.value / ap.phi_k for piece in pieces]


def main_term(f: FuncProfile, x: float, ap: APSpec, model: ModelTag, tol: float = config.DEFAULT_TOL) -> float:
    return main_terms(f, [x], ap, model, tol)[0]


def envelope_shape(model: ModelTag, c: float = config.DEFAULT_C, theta: float = config.DEFAULT_THETA) -> Callable[[float], float]:
    """s(t) such that envelope = |f(x)| s(x) + int_2^x |f'(t)| s(t) dt"""
    if not c > 0:
        raise ValueError(f"c must be positive, got {c!r}")
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta!r}")
    match ModelTag(model):
        case ModelTag.COARSE:
            return lambda t: t / math.log(t) ** 2
        case ModelTag.PNT:
            return lambda t: t * math.exp(-c * math.sqrt(math.log(t)))
        case ModelTag.VINOGRADOV:
            return lambda t: t * math.exp(-c * math.log(t) ** theta)
        case ModelTag.GRH:
            return lambda t: math.sqrt(t) * math.log(t)


def envelopes(
    f: FuncProfile,
    xs: Sequence[float],
    ap: APSpec,
    model: ModelTag,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
) -> list[float]:
    """Remainder envelopes without the O-constant.

    No phi(k) factor appears in the O-terms; the fitted constant absorbs it,
    so `ap` only fixes the progression the envelope is reported for.
    """
    grid = _check_grid(xs)
    shape = envelope_shape(model, c, theta)
    if f.constant:
        integrals = [0.0] * len(grid)
    else:
        pieces = cumulative_integrate(lambda t: abs(f.slope(t)) * shape(t), LOWER, grid, tol, rtol=config.DEFAULT_RTOL)
        integrals = [piece.value for piece in pieces]
    logger.debug("[QUAD] envelopes model=%s ap=%s points=%d", model, ap, len(grid))
    return [abs(f.value(x)) * shape(x) + integral for x, integral in zip(grid, integrals)]


def envelope(
    f: FuncProfile,
    x: float,
    ap: APSpec,
    model: ModelTag,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
) -> float:
    return envelopes(f, [x], ap, model, c, theta, tol)[0]
