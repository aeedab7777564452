"""Sums of functions over primes in arithmetic progressions, their main terms and remainder envelopes"""
from apsums.apsieve import APSpec, PrimeList, euler_phi, make_ap, prime_count_ap, sieve_range
from apsums.asymp import abel_sum, convergence_table, exact_sum, predict
from apsums.conds import evaluate_conditions
from apsums.errors import ApsumsError, UsageError
from apsums.exprdsl import parse, profile, profile_text
from apsums.quad import ModelTag, integrate, li_offset

__version__ = "0.1.0"

__all__ = [
    "APSpec",
    "ApsumsError",
    "ModelTag",
    "PrimeList",
    "UsageError",
    "abel_sum",
    "convergence_table",
    "euler_phi",
    "evaluate_conditions",
    "exact_sum",
    "integrate",
    "li_offset",
    "make_ap",
    "parse",
    "predict",
    "prime_count_ap",
    "profile",
    "profile_text",
    "sieve_range",
]
