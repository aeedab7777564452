"""Exact sums, model predictions and convergence tables over a progression"""
from api.runner import run_sync
from apsums import config
from apsums.commands import COMPARE_COLUMNS, compare_table, predict_records, sum_record


async def get_sum(f: str, k: int, l: int, x: float):
    """Exact sum of f over the progression primes and its Abel-summation form"""
    return await run_sync(sum_record, f, k, l, x)


async def get_prediction(
    f: str,
    model: str,
    k: int,
    l: int,
    x: float,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
):
    """Main term and remainder envelope of one model at x"""
    body, status = await run_sync(predict_records, f, k, l, x, model, c, theta, tol)
    if status != 200:
        return body, status
    return body[0], status


async def get_comparison(
    f: str,
    model: str,
    k: int,
    l: int,
    x_min: float = config.DEFAULT_X_MIN,
    x_max: float = config.DEFAULT_X_MAX,
    x_points: int = config.DEFAULT_X_POINTS,
    c: float = config.DEFAULT_C,
    theta: float = config.DEFAULT_THETA,
    tol: float = config.DEFAULT_TOL,
):
    """Convergence table, with the same column order as the CSV the CLI writes

    The ratio at x = 2 is infinite; it is sent as null.
    """
    body, status = await run_sync(
        compare_table, f, k, l, model, x_min, x_max, x_points, c, theta, tol
    )
    if status != 200:
        return body, status
    rows = [[value if abs(value) != float("inf") else None for value in row] for row in body]
    return {"columns": list(COMPARE_COLUMNS), "rows": rows}, status
