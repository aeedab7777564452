"""Primes in a residue class"""
from api.runner import run_sync
from apsums.commands import primes_record


async def get_primes(k: int, l: int, x: float):
    """List primes p <= x with p = l (mod k)

    Returns:
        Tuple of (response data, status code)
    """
    return await run_sync(primes_record, k, l, x)
