"""Numerical checks of the asymptotic conditions"""
from api.runner import run_sync
from apsums import config
from apsums.commands import conditions_report


async def get_conditions(f: str, k: int, l: int, with_ratio: bool = False, tol: float = config.DEFAULT_TOL):
    """Condition report for f over the progression l mod k"""
    return await run_sync(conditions_report, f, k, l, with_ratio=with_ratio, tol=tol)
