"""A fixed computable bijection between the naturals and the rationals.

rho(0) = 0; positive reduced fractions p/q are enumerated by increasing
p+q, then by increasing p, and interleaved with their negatives:
rho(2k+1) = f_k, rho(2k+2) = -f_k.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = ["rho", "rho_inv", "positive_fraction", "is_dyadic"]


_FRACTIONS: list[Fraction] = []
_NEXT_TOTAL = 2  # next p+q band to expand


def positive_fraction(k: int) -> Fraction:
    """k-th positive reduced fraction in the zig-zag order (k >= 0)."""
    global _NEXT_TOTAL
    while len(_FRACTIONS) <= k:
        total = _NEXT_TOTAL
        for p in range(1, total):
            if gcd(p, total - p) == 1:
                _FRACTIONS.append(Fraction(p, total - p))
        _NEXT_TOTAL += 1
    return _FRACTIONS[k]


def _positive_index(frac: Fraction) -> int:
    p, q = frac.numerator, frac.denominator
    index = 0
    for total in range(2, p + q):
        for a in range(1, total):
            if gcd(a, total - a) == 1:
                index += 1
    for a in range(1, p):
        if gcd(a, p + q - a) == 1:
            index += 1
    return index


@lru_cache(maxsize=200_000)
def rho(n: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    k, sign = divmod(n - 1, 2)
    frac = positive_fraction(k)
    return frac if sign == 0 else -frac


def rho_inv(value: Fraction | int) -> int:
    value = Fraction(value)
    if value == 0:
        return 0
    k = _positive_index(abs(value))
    return 2 * k + 1 if value > 0 else 2 * k + 2


def is_dyadic(value: Fraction) -> bool:
    den = value.denominator
    return den & (den - 1) == 0
