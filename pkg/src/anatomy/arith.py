"""Prime tables, factorizations, squarefree kernels and the basic predicates.

Everything here is sieve or trial-division based; there is no attempt at
factoring large integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, prod
from typing import Iterable, Iterator

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


@dataclass(frozen=True)
class Factorization:
    """Prime-exponent decomposition; ``factors`` is sorted by prime."""

    factors: tuple[tuple[int, int], ...]
    value: int | None = None

    def __post_init__(self):
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors!r}")
            last = p
        if self.value is not None and self.value != self.reconstruct():
            raise ValueError(f"factors do not multiply to {self.value}")

    def reconstruct(self) -> int:
        return prod(p**e for p, e in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __mul__(self, other: "Factorization") -> "Factorization":
        return merge_factorizations([self, other])

    @classmethod
    def from_dict(cls, exps: dict[int, int], value: int | None = None) -> "Factorization":
        return cls(tuple(sorted((p, e) for p, e in exps.items() if e)), value)


def merge_factorizations(fs: Iterable[Factorization]) -> Factorization:
    """Factorization of a product, given the factorizations of the factors."""
    total: dict[int, int] = {}
    for f in fs:
        for p, e in f.factors:
            total[p] = total.get(p, 0) + e
    return Factorization.from_dict(total)


@dataclass(frozen=True)
class ParitySet:
    """The primes occurring to an odd power; stands for the squarefree kernel.

    Kernels are always compared as sets of primes, so nothing here ever
    multiplies them out unless :meth:`kernel` is asked for explicitly.
    """

    primes: tuple[int, ...] = ()

    @classmethod
    def of(cls, primes: Iterable[int]) -> "ParitySet":
        return cls(tuple(sorted(set(primes))))

    def __xor__(self, other: "ParitySet") -> "ParitySet":
        return ParitySet(tuple(sorted(set(self.primes).symmetric_difference(other.primes))))

    def __contains__(self, p: int) -> bool:
        return p in set(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes)

    def kernel(self) -> int:
        return prod(self.primes)

    def max_prime(self) -> int:
        return self.primes[-1] if self.primes else 1


@dataclass(frozen=True, eq=False)
class SpfTable:
    """Smallest prime factor of every index in ``2..limit`` (entries 0, 1 are 0)."""

    limit: int
    spf: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.spf[n])

    def is_prime(self, n: int) -> bool:
        return n >= 2 and int(self.spf[n]) == n


def primes_up_to(n: int) -> np.ndarray:
    """All primes ``<= n`` as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes ``p`` with ``lo <= p < hi`` (segmented sieve)."""
    lo = max(lo, 2)
    if hi <= lo:
        return []
    seg = np.ones(hi - lo, dtype=bool)
    for p in primes_up_to(isqrt(hi - 1)).tolist():
        start = max(p * p, -(-lo // p) * p)
        seg[start - lo :: p] = False
    return (np.flatnonzero(seg) + lo).tolist()


def build_spf(limit: int) -> SpfTable:
    if limit < 2:
        raise DomainError(f"build_spf needs limit >= 2, got {limit}")
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, isqrt(limit) + 1):
        if spf[p]:
            continue
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    return SpfTable(limit, spf)


def largest_prime_factor_table(limit: int) -> np.ndarray:
    """``lpf[n]`` = largest prime factor of n for ``2 <= n <= limit``; ``lpf[1] = 1``."""
    lpf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        lpf[1] = 1
    for p in primes_up_to(limit).tolist():
        lpf[p::p] = p
    return lpf


def _trial_divide(n: int) -> list[tuple[int, int]]:
    out = []
    for d in (2, 3):
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
    d, step = 5, 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def factorize(n: int, table: SpfTable | None = None) -> Factorization:
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    n = int(n)
    if table is None or n > table.limit:
        return Factorization(tuple(_trial_divide(n)), n)
    out: list[tuple[int, int]] = []
    m = n
    spf = table.spf
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return Factorization(tuple(out), n)


def factorize_interval(N: int, H: int, primes_to: int | None = None) -> list[Factorization]:
    """Factorizations of ``N+1, ..., N+H`` by sieving the window.

    Primes up to ``primes_to`` are sieved out; whatever cofactor remains is
    1 or a single prime, because ``primes_to**2 >= N+H``.
    """
    if H < 1:
        raise DomainError(f"interval length must be >= 1, got {H}")
    if primes_to is None:
        primes_to = isqrt(N + H - 1) + 1
    if primes_to * primes_to < N + H:
        raise PreconditionError(f"primes_to={primes_to} is below sqrt({N + H})")
    residual = list(range(N + 1, N + H + 1))
    found: list[list[tuple[int, int]]] = [[] for _ in range(H)]
    for p in primes_up_to(primes_to).tolist():
        for i in range((-(N + 1)) % p, H, p):
            r = residual[i]
            e = 0
            while r % p == 0:
                r //= p
                e += 1
            residual[i] = r
            found[i].append((p, e))
    out = []
    for i, fl in enumerate(found):
        if residual[i] > 1:
            fl.append((residual[i], 1))
        out.append(Factorization(tuple(fl), N + 1 + i))
    return out


def largest_prime_factor(f: Factorization) -> tuple[int, int]:
    if not f.factors:
        raise DomainError("1 has no largest prime factor")
    return f.factors[-1]


def squarefree_part(f: Factorization) -> ParitySet:
    return ParitySet(tuple(p for p, e in f.factors if e % 2))


def is_powerful(f: Factorization) -> bool:
    return all(e >= 2 for _, e in f.factors)


def is_smooth(f: Factorization, y: int) -> bool:
    return not f.factors or f.factors[-1][0] <= y


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_flags(limit: int) -> np.ndarray:
    """Boolean array, true at squarefree ``n`` in ``0..limit`` (index 0 false)."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for p in primes_up_to(isqrt(limit)).tolist():
        flags[p * p :: p * p] = False
    return flags
