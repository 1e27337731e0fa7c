"""Exact smooth-number counts and the scale parameters u0(x), z(x)."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .arith import DomainError, largest_prime_factor_table, primes_up_to


@dataclass(frozen=True)
class ScaleParams:
    x: float
    log_x: float
    u0: float
    z: float

    @property
    def log_z(self) -> float:
        return math.log(self.z)


@dataclass(frozen=True)
class SmoothCount:
    x: int
    y: int
    count: int


class SmoothCounter:
    """Memoized Psi(x, y) over a fixed prime list.

    ``psi_index(x, k)`` counts n <= x whose prime factors are all among the
    first ``k + 1`` primes. Below ``direct_below`` the count is read off a
    largest-prime-factor table instead of recursing. The memo stops growing
    once it holds ``max_memo`` entries; results are unaffected.
    """

    def __init__(self, prime_bound: int, direct_below: int = 512, max_memo: int = 2_000_000):
        self.prime_bound = max(prime_bound, 2)
        self.primes = primes_up_to(self.prime_bound).tolist()
        self.direct_below = direct_below
        self.max_memo = max_memo
        self._lpf = largest_prime_factor_table(direct_below)
        self._memo: dict[tuple[int, int], int] = {}

    def index_of(self, y: int) -> int:
        """Index of the largest listed prime ``<= y`` (-1 if none)."""
        return bisect_right(self.primes, y) - 1

    def psi_index(self, x: int, k: int) -> int:
        if x < 1:
            return 0
        if k < 0 or x == 1:
            return 1
        if k == 0:
            return x.bit_length()
        p_k = self.primes[k]
        if p_k >= x:
            return x
        if x <= self.direct_below:
            return int(np.count_nonzero(self._lpf[1 : x + 1] <= p_k))
        key = (x, k)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        total = 1
        for i in range(k + 1):
            p = self.primes[i]
            if p > x:
                break
            total += self.psi_index(x // p, i)
        if len(self._memo) < self.max_memo:
            self._memo[key] = total
        return total

    def psi(self, x: int, y: int) -> int:
        if x < 1 or y < 1:
            return 0
        if y > self.prime_bound and y < x:
            raise DomainError(f"counter only knows primes up to {self.prime_bound}")
        if y >= x:
            return x
        return self.psi_index(x, self.index_of(y))


def psi(x: int, y: int) -> int:
    """Number of n <= x all of whose prime factors are at most y."""
    x, y = int(x), int(y)
    if x < 1:
        return 0
    if y >= x:
        return x
    return SmoothCounter(y).psi(x, y)


def psi_direct(x: int, y: int) -> int:
    """Psi(x, y) by scanning a largest-prime-factor table (oracle, x <= ~1e7)."""
    if x < 1:
        return 0
    lpf = largest_prime_factor_table(x)
    return int(np.count_nonzero(lpf[1:] <= y))


def scale_params(x: float | None = None, *, log_x: float | None = None) -> ScaleParams:
    """u0 = sqrt(2 log x / log log x) and z = exp(sqrt(log x log log x / 2)).

    Pass ``log_x`` to work at scales where x itself overflows a float.
    """
    if log_x is None:
        if x is None or x <= 0:
            raise DomainError("x must be positive")
        log_x = math.log(x)
    if log_x <= 1.0:
        raise DomainError(f"log log x must be positive (log x = {log_x})")
    ll = math.log(log_x)
    u0 = math.sqrt(2.0) * math.sqrt(log_x) / math.sqrt(ll)
    log_z = math.sqrt(log_x * ll / 2.0)
    return ScaleParams(x=x if x is not None else _exp_or_inf(log_x), log_x=log_x, u0=u0, z=_exp_or_inf(log_z))


def _exp_or_inf(t: float) -> float:
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


def b1_count_exact(x: int, counter: SmoothCounter | None = None) -> int:
    """#{n <= x : the largest prime factor of n divides n twice}, via sum_p Psi(x/p^2, p).

    The integer 1 is not counted.
    """
    if x < 4:
        return 0
    r = isqrt(x)
    if counter is None or counter.prime_bound < r:
        counter = SmoothCounter(r)
    total = 0
    for k, p in enumerate(counter.primes):
        if p > r:
            break
        total += counter.psi_index(x // (p * p), k)
    return total
