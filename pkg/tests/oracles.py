"""Brute-force references the library is checked against"""
import math

import numpy as np


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def trial_division_primes(x, k=1, l=0):
    """Primes p <= x with p = l (mod k), one trial division at a time"""
    return [n for n in range(2, math.floor(x) + 1) if n % k == l % k and is_prime(n)]


def midpoint(g, a, b, panels=10**6):
    """Fixed-panel midpoint rule; g must accept numpy arrays"""
    h = (b - a) / panels
    t = a + h * (np.arange(panels) + 0.5)
    return math.fsum((g(t) * h).tolist())


def coprime_residues(k):
    return [l for l in range(k) if math.gcd(k, l) == 1]
