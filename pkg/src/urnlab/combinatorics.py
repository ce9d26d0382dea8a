"""Exact special sequences: Stirling numbers, falling factorials, binomials.

Everything here works on ``int`` and :class:`fractions.Fraction`; no floats.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial


@lru_cache(maxsize=None)
def _first_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _first_row(n - 1) + (0,)
    # s(n, k) = s(n-1, k-1) + (n-1) s(n-1, k)
    return tuple((prev[k - 1] if k else 0) + (n - 1) * prev[k] for k in range(n + 1))


@lru_cache(maxsize=None)
def _second_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _second_row(n - 1) + (0,)
    # S(n, k) = k S(n-1, k) + S(n-1, k-1)
    return tuple(k * prev[k] + (prev[k - 1] if k else 0) for k in range(n + 1))


def stirling_first(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind (permutations of n with k cycles)."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        return 0
    return _first_row(n)[k]


def stirling_second(n: int, k: int) -> int:
    """Stirling number of the second kind (partitions of n items into k blocks)."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        return 0
    return _second_row(n)[k]


class StirlingCache:
    """Immutable tables of both Stirling kinds for ``0 <= n <= max_n``.

    Lookups beyond ``max_n`` fall back to the memoized row recurrences.
    """

    def __init__(self, max_n: int):
        self.max_n = max_n
        self.first_kind = tuple(_first_row(n) for n in range(max_n + 1))
        self.second_kind = tuple(_second_row(n) for n in range(max_n + 1))

    def first(self, n: int, k: int) -> int:
        if n <= self.max_n and 0 <= k <= n:
            return self.first_kind[n][k]
        return stirling_first(n, k)

    def second(self, n: int, k: int) -> int:
        if n <= self.max_n and 0 <= k <= n:
            return self.second_kind[n][k]
        return stirling_second(n, k)


def falling_factorial(x, ell: int) -> Fraction:
    """x (x-1) ... (x-ell+1); the empty product for ell = 0 is 1."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    x = Fraction(x)
    out = Fraction(1)
    for i in range(ell):
        out *= x - i
    return out


def generalized_binomial(x, k: int) -> Fraction:
    """Binomial coefficient with a rational upper argument."""
    return falling_factorial(x, k) / factorial(k)


def falling_ratio(m: int, t: int, j: int) -> Fraction:
    """(m)_j / (t)_j, i.e. binom(m, j) / binom(t, j), taken as 0 when j > m.

    Requires ``t >= m`` so the denominator never vanishes on the support.
    """
    if j > m:
        return Fraction(0)
    num = den = 1
    for i in range(j):
        num *= m - i
        den *= t - i
    return Fraction(num, den)
