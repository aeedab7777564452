"""Sync entry points shared by the CLI and the HTTP handlers.

Each function validates its knobs, runs one library operation and returns
plain Python data (dicts, lists, floats) ready for CSV or JSON.
"""
import logging
import math

from apsums import config
from apsums.apsieve import make_ap, sieve_range
from apsums.asymp import abel_sum, convergence_table, exact_sum, geometric_grid, predict
from apsums.conds import evaluate_conditions
from apsums.errors import InvalidArgument
from apsums.exprdsl import FuncProfile, check_domain, profile_text
from apsums.quad import ModelTag

logger = logging.getLogger(__name__)

COMPARE_COLUMNS = ("x", "exact", "main", "ratio", "normalized_remainder")
SUM_COLUMNS = ("x", "exact", "abel", "abs_diff")
PREDICT_COLUMNS = ("model", "main", "envelope")
ALL_MODELS = "all"


def validate_bound(x: float, name: str = "x") -> float:
    if not math.isfinite(x) or x < 2:
        raise InvalidArgument(f"{name} must be a finite number >= 2, got {x!r}")
    return float(x)


def validate_knobs(c: float, theta: float, tol: float) -> None:
    if not c > 0:
        raise InvalidArgument(f"c must be positive, got {c!r}")
    if not 0 < theta < 1:
        raise InvalidArgument(f"theta must lie in (0, 1), got {theta!r}")
    if not tol > 0:
        raise InvalidArgument(f"tol must be positive, got {tol!r}")


def validate_grid(x_min: float, x_max: float, x_points: int) -> None:
    validate_bound(x_min, "x-min")
    validate_bound(x_max, "x-max")
    if x_points < 1:
        raise InvalidArgument(f"x-points must be >= 1, got {x_points}")
    if x_points > 1 and not x_max > x_min:
        raise InvalidArgument(f"x-max must exceed x-min, got [{x_min!r}, {x_max!r}]")


def parse_model(model: str, *, allow_all: bool = False) -> list[ModelTag]:
    if allow_all and model == ALL_MODELS:
        return list(ModelTag)
    try:
        return [ModelTag(model)]
    except ValueError:
        choices = [str(tag) for tag in ModelTag] + ([ALL_MODELS] if allow_all else [])
        raise InvalidArgument(f"unknown model {model!r}, expected one of {', '.join(choices)}") from None


def _profile(f_text: str, x: float) -> FuncProfile:
    f = profile_text(f_text, sample_hi=x)
    check_domain(f.expr, 2.0, x)
    return f


def primes_record(k: int, l: int, x: float, *, workers: int = 1) -> dict:
    ap = make_ap(k, l)
    primes = sieve_range(validate_bound(x), ap, workers=workers)
    return {"k": ap.k, "l": ap.l, "x": x, "count": len(primes), "primes": [int(p) for p in primes]}


def sum_record(f_text: str, k: int, l: int, x: float, *, workers: int = 1) -> dict:
    """Exact sum and its Abel-summation form over one sieve pass"""
    ap = make_ap(k, l)
    f = _profile(f_text, validate_bound(x))
    primes = sieve_range(x, ap, workers=workers)
    exact = exact_sum(f, x, ap, primes=primes)
    abel = abel_sum(f, x, ap, primes=primes)
    logger.info("[SUM] %s over %s up to %g: exact=%r abel=%r", f.text, ap, x, exact, abel)
    return {"x": x, "exact": exact, "abel": abel, "abs_diff": abs(exact - abel)}


def predict_records(
    f_text: str,
    k: int,
    l: int,
    x: float,
    model: str,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
) -> list[dict]:
    validate_knobs(c, theta, tol)
    models = parse_model(model, allow_all=True)
    ap = make_ap(k, l)
    f = _profile(f_text, validate_bound(x))
    records = []
    for tag in models:
        prediction = predict(f, x, ap, tag, c, theta, tol)
        records.append(
            {
                "model": str(prediction.model),
                "main": prediction.main,
                "envelope": prediction.envelope,
                "c": prediction.c,
                "theta": prediction.theta,
            }
        )
    return records


def compare_table(
    f_text: str,
    k: int,
    l: int,
    model: str,
    x_min: float = config.DEFAULT_X_MIN,
    x_max: float = config.DEFAULT_X_MAX,
    x_points: int = config.DEFAULT_X_POINTS,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
    *,
    workers: int = 1,
) -> list[list[float]]:
    """Convergence table rows in COMPARE_COLUMNS order"""
    validate_knobs(c, theta, tol)
    validate_grid(x_min, x_max, x_points)
    (tag,) = parse_model(model)
    ap = make_ap(k, l)
    f = _profile(f_text, x_max)
    rows = convergence_table(f, ap, geometric_grid(x_min, x_max, x_points), tag, c, theta, tol, workers=workers)
    return [[getattr(row, column) for column in COMPARE_COLUMNS] for row in rows]


def conditions_report(
    f_text: str,
    k: int,
    l: int,
    *,
    with_ratio: bool = False,
    tol: float = config.DEFAULT_TOL,
    workers: int = 1,
) -> dict:
    validate_knobs(config.DEFAULT_C, config.DEFAULT_THETA, tol)
    ap = make_ap(k, l)
    f = profile_text(f_text, sample_hi=config.N_GRID_HI)
    report = evaluate_conditions(f, ap, with_ratio=with_ratio, tol=tol, workers=workers)
    return report.to_json()
