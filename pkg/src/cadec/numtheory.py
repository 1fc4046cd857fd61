"""Exact integer number theory: divisors, Mobius, totient, aperiodic word counts."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

# count_aperiodic is exact in Python ints, but downstream arrays index words
# with int64 codes, so n**sigma must stay below this bound.
INT64_LIMIT = 2**63


def _check_positive(m: int, name: str = "m") -> None:
    if int(m) != m or m < 1:
        raise ValueError(f"{name} must be a positive integer, got {m!r}")


@dataclass(frozen=True)
class DivisorList:
    value: int
    divisors: tuple[int, ...]

    def __iter__(self):
        return iter(self.divisors)

    def __len__(self):
        return len(self.divisors)


@lru_cache(maxsize=None)
def divisors(m: int) -> DivisorList:
    """All positive divisors of m in ascending order (trial division)."""
    _check_positive(m)
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return DivisorList(m, tuple(small + large[::-1]))


def _factorize(m: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


def mobius(m: int) -> int:
    _check_positive(m)
    factors = _factorize(m)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def totient(m: int) -> int:
    _check_positive(m)
    result = m
    for p in _factorize(m):
        result -= result // p
    return result


def count_aperiodic(sigma: int, n: int) -> int:
    """Number of length-``sigma`` words over ``n`` letters with minimal period ``sigma``.

    Computed as ``sum_{d | sigma} n**d * mobius(sigma // d)``. Raises
    ``OverflowError`` when ``n**sigma >= 2**63``: beyond that the word codes
    used by the enumeration code no longer fit in int64.
    """
    _check_positive(sigma, "sigma")
    _check_positive(n, "n")
    if n**sigma >= INT64_LIMIT:
        raise OverflowError(f"n**sigma = {n}**{sigma} exceeds the int64 envelope")
    return sum(n**d * mobius(sigma // d) for d in divisors(sigma))
