"""Primes in a residue class l mod k, plus the gcd/totient arithmetic the formulas need"""
import logging
import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from apsums import config
from apsums.errors import BoundTooLarge, CoprimalityError, InvalidArgument

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class APSpec:
    """Reduced residue class l mod k together with phi(k).

    Build instances with make_ap(); k = 1 stands for all primes.
    """
    k: int
    l: int
    phi_k: int

    def __str__(self) -> str:
        return f"{self.l} mod {self.k}"


def euler_phi(k: int) -> int:
    """Euler totient by trial-division factorisation"""
    if k < 1:
        raise ValueError(f"totient needs k >= 1, got {k}")
    result = k
    n = k
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if n > 1:
        result -= result // n
    return result


def make_ap(k: int, l: int) -> APSpec:
    """Validate (k, l) and return the reduced progression"""
    if k < 1:
        raise InvalidArgument(f"modulus must be >= 1, got {k}")
    residue = l % k
    # gcd(1, 0) == 1, so k = 1 always passes
    if math.gcd(k, residue) != 1:
        raise CoprimalityError(k, l)
    return APSpec(k=k, l=residue, phi_k=euler_phi(k))


@dataclass(frozen=True, eq=False)
class PrimeList:
    """Ascending primes p <= bound with p = l (mod k)"""
    bound: float
    ap: APSpec
    primes: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.primes)

    def count_upto(self, x: float) -> int:
        """pi_l(k, x) for x <= bound, from the stored list"""
        return int(np.searchsorted(self.primes, math.floor(x), side="right"))

    def prefix(self, x: float) -> "PrimeList":
        if x > self.bound:
            raise ValueError(f"prefix bound {x:g} exceeds list bound {self.bound:g}")
        return PrimeList(bound=x, ap=self.ap, primes=self.primes[: self.count_upto(x)])


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit, plain Eratosthenes"""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p : limit + 1 : p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _segment_primes(low: int, high: int, base: np.ndarray, ap: APSpec) -> np.ndarray:
    """Odd primes in [low, high) that lie in the progression; low is odd"""
    count = (high - low + 1) // 2
    mask = np.ones(count, dtype=bool)
    for p in base:
        p = int(p)
        if p == 2:
            continue
        p2 = p * p
        if p2 >= high:
            break
        start = max(p2, ((low + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= high:
            continue
        mask[(start - low) // 2 :: p] = False
    values = low + 2 * np.flatnonzero(mask).astype(np.int64)
    if ap.k > 1:
        values = values[values % ap.k == ap.l]
    return values


def sieve_range(
    x: float,
    ap: APSpec,
    *,
    workers: int = 1,
    segment_odd_count: int = config.SEGMENT_ODD_COUNT,
) -> PrimeList:
    """Segmented, odd-only sieve of Eratosthenes filtered to the residue class.

    Segments may be sieved on a thread pool; executor.map keeps them in order,
    so the result does not depend on `workers`.
    """
    if x < 2:
        raise ValueError(f"sieve bound must be >= 2, got {x!r}")
    cap = config.max_x()
    if x > cap:
        raise BoundTooLarge(x, cap)
    n = math.floor(x)
    base = simple_sieve(math.isqrt(n))

    span = 2 * segment_odd_count
    lows = range(3, n + 1, span)
    logger.debug("[SIEVE] x=%d ap=%s segments=%d workers=%d", n, ap, len(lows), workers)

    def run(low: int) -> np.ndarray:
        return _segment_primes(low, min(low + span, n + 1), base, ap)

    if workers > 1 and len(lows) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(run, lows))
    else:
        parts = [run(low) for low in lows]

    # 2 is the only even prime; it belongs to the class only when 2 = l (mod k)
    head = [np.array([2], dtype=np.int64)] if 2 % ap.k == ap.l else []
    primes = np.concatenate(head + parts) if head or parts else np.array([], dtype=np.int64)
    primes.flags.writeable = False
    logger.debug("[SIEVE] found %d primes", primes.size)
    return PrimeList(bound=float(x), ap=ap, primes=primes)


def prime_count_ap(x: float, ap: APSpec, *, workers: int = 1) -> int:
    """pi_l(k, x)"""
    return len(sieve_range(x, ap, workers=workers))
