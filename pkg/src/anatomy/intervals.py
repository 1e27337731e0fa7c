"""Interval products (N+1)...(N+H) and their bad / very bad / F3 classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import (
    DomainError,
    Factorization,
    ParitySet,
    PreconditionError,
    SpfTable,
    build_spf,
    factorize,
    factorize_interval,
    primes_up_to,
    squarefree_part,
)


@dataclass
class IntervalProduct:
    """Merged factorization of ``(N+1)...(N+H)``; grows one element at a time."""

    N: int
    H: int = 0
    merged: dict[int, int] = field(default_factory=dict)
    largest: tuple[int, int] | None = None

    def absorb(self, f: Factorization) -> None:
        for p, e in f.factors:
            self.merged[p] = self.merged.get(p, 0) + e
        if f.factors:
            p = f.factors[-1][0]
            if self.largest is None or p >= self.largest[0]:
                self.largest = (p, self.merged[p])
        self.H += 1

    def extend(self, table: SpfTable | None = None) -> "IntervalProduct":
        self.absorb(factorize(self.N + self.H + 1, table))
        return self

    @property
    def elements(self) -> range:
        return range(self.N + 1, self.N + self.H + 1)

    def factorization(self) -> Factorization:
        return Factorization.from_dict(self.merged)

    def parity(self) -> ParitySet:
        return ParitySet(tuple(sorted(p for p, e in self.merged.items() if e % 2)))

    def product(self) -> int:
        return math.prod(self.elements)


def interval_product(N: int, H: int) -> IntervalProduct:
    if H < 1:
        raise DomainError(f"interval length must be >= 1, got {H}")
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    ip = IntervalProduct(N)
    for f in factorize_interval(N, H):
        ip.absorb(f)
    return ip


def is_bad(ip: IntervalProduct) -> bool:
    # a product of 1 has no largest prime factor, so it is never bad
    return ip.largest is not None and ip.largest[1] >= 2


def is_very_bad(ip: IntervalProduct) -> bool:
    if ip.largest is None:
        return False
    return all(e >= 2 for e in ip.merged.values())


@dataclass(frozen=True, eq=False)
class FactorialKernelTable:
    """``kernels[a]`` is the ParitySet of a! for ``0 <= a <= amax``."""

    amax: int
    kernels: tuple[ParitySet, ...]

    def __getitem__(self, a: int) -> ParitySet:
        return self.kernels[a]

    def kernel_value(self, a: int) -> int:
        return self.kernels[a].kernel()


def build_factorial_kernels(amax: int) -> FactorialKernelTable:
    if amax < 1:
        raise DomainError(f"amax must be >= 1, got {amax}")
    table = build_spf(max(amax, 2))
    current: set[int] = set()
    out = [ParitySet()]
    for a in range(1, amax + 1):
        current.symmetric_difference_update(squarefree_part(factorize(a, table)).primes)
        out.append(ParitySet(tuple(sorted(current))))
    return FactorialKernelTable(amax, tuple(out))


def factorial_parity_legendre(a: int) -> ParitySet:
    """ParitySet of a! from Legendre's formula (independent of the incremental table)."""
    odd = []
    for p in primes_up_to(a).tolist():
        e, q = 0, p
        while q <= a:
            e += a // q
            q *= p
        if e % 2:
            odd.append(p)
    return ParitySet(tuple(odd))


def default_a_cap(N: int, H: int) -> int:
    """Witness search cap ceil(4 H log(N+H)); the constant 4 is a tunable choice."""
    return max(1, math.ceil(4 * H * math.log(max(N + H, 2))))


def f3_witnesses(
    ip: IntervalProduct,
    table: FactorialKernelTable,
    a_cap: int | None = None,
    *,
    exhaustive: bool = False,
) -> list[int]:
    """All ``1 <= a < N`` (and ``a <= a_cap``) whose a! shares the interval's kernel.

    ``exhaustive`` drops the cap and scans every ``a < N``; the table must
    then reach ``N - 1``.
    """
    if exhaustive:
        a_cap = ip.N - 1
    elif a_cap is None:
        a_cap = default_a_cap(ip.N, ip.H)
    hi = min(a_cap, ip.N - 1)
    if hi > table.amax:
        raise PreconditionError(f"a_cap {a_cap} exceeds kernel table size {table.amax}")
    target = ip.parity()
    # s(a!) has no prime factor above a, so smaller a cannot match
    lo = max(1, target.max_prime())
    return [a for a in range(lo, hi + 1) if table.kernels[a] == target]


def middle_primorial_log(a: int) -> float:
    """log of the product of primes in (a/2, a]; each divides a! exactly once."""
    return math.fsum(math.log(p) for p in primes_up_to(a).tolist() if 2 * p > a)


# theta(x) > x(1 - 1/(2 log x)) for x >= 563 and theta(x) < 1.01624 x (Rosser-Schoenfeld)
_RS_START = 563


def _rs_lower(a: float) -> float:
    return a * (1 - 1 / (2 * math.log(a))) - 1.01624 * a / 2


class MiddlePrimorialBound:
    """Certified non-decreasing lower bounds for log s(a!).

    ``floor_log(a)`` is <= log s(a'!) for every a' >= a. Below 563 it is the
    suffix minimum of the exact middle-primorial logs; from 563 on it uses
    explicit Chebyshev-function bounds, which increase with a.
    """

    def __init__(self):
        exact = [0.0] * _RS_START
        for a in range(1, _RS_START):
            exact[a] = middle_primorial_log(a)
        self.exact = exact
        floor = [0.0] * _RS_START
        running = _rs_lower(_RS_START)
        for a in range(_RS_START - 1, 0, -1):
            running = min(running, exact[a])
            floor[a] = running
        self._floor = floor

    def floor_log(self, a: int) -> float:
        if a < 1:
            return 0.0
        if a < _RS_START:
            return self._floor[a]
        return _rs_lower(a)

    def log_lower(self, a: int) -> float:
        """Lower bound for log s(a!) at this particular a."""
        if a < _RS_START:
            return self.exact[a]
        return _rs_lower(a)

    def first_exceeding(self, log_x: float) -> int:
        """Smallest A with s(a!) > x guaranteed for every a >= A."""
        a = 1
        while self.floor_log(a) <= log_x:
            a += 1
        return a

    def tail_inv_sqrt(self, A: int) -> float:
        """Upper bound for sum_{a > A} s(a!)^(-1/2)."""
        total = math.fsum(math.exp(-self.exact[a] / 2) for a in range(A + 1, _RS_START))
        start = max(A + 1, _RS_START)
        # geometric majorant: the exponent grows at least linearly past 563
        rate = 0.5 * (0.49188 - 1 / (2 * math.log(_RS_START)))
        total += math.exp(-_rs_lower(start) / 2) / (1 - math.exp(-rate))
        return total


class ParityIndex:
    """64-bit XOR fingerprints of squarefree kernels for all n <= limit.

    ``hashes[n]`` fingerprints s(n) and ``prefix[a]`` fingerprints s(a!), so
    the interval {N+1..N+H} has fingerprint ``prefix[N+H] ^ prefix[N]``.
    Equal kernels always give equal fingerprints; a fingerprint match is only
    a candidate and callers confirm it exactly.
    """

    def __init__(self, limit: int, seed: int = 0x5EED):
        self.limit = limit
        primes = primes_up_to(limit)
        rng = np.random.default_rng(seed)
        keys = rng.integers(1, 2**64 - 1, size=len(primes), dtype=np.uint64, endpoint=True)
        h = np.zeros(limit + 1, dtype=np.uint64)
        for p, key in zip(primes.tolist(), keys):
            q = p
            while q <= limit:
                h[q::q] ^= key
                q *= p
        self.hashes = h
        self.prefix = np.bitwise_xor.accumulate(h)
        order = np.argsort(self.prefix[1:], kind="stable")
        sorted_vals = self.prefix[1:][order]
        first = np.ones(len(sorted_vals), dtype=bool)
        first[1:] = sorted_vals[1:] != sorted_vals[:-1]
        self._keys = sorted_vals[first]
        self._min_a = (order + 1)[first]

    def min_factorial_match(self, fingerprints: np.ndarray) -> np.ndarray:
        """Smallest a >= 1 with prefix[a] equal to each fingerprint, or -1."""
        idx = np.searchsorted(self._keys, fingerprints)
        idx = np.minimum(idx, len(self._keys) - 1)
        hit = self._keys[idx] == fingerprints
        return np.where(hit, self._min_a[idx], -1)

    def factorial_matches(self, fingerprint: int, below: int) -> list[int]:
        """Every a in [1, below) whose a! fingerprint equals ``fingerprint``."""
        hits = np.flatnonzero(self.prefix[1:below] == np.uint64(fingerprint)) + 1
        return hits.tolist()


def f3_interval_candidates(index: ParityIndex, x: int, H: int) -> list[tuple[int, int]]:
    """(N, min a) for every N >= 1 with N + H <= x whose fingerprint matches some a < N."""
    if H < 1 or x - H < 1:
        return []
    right = np.arange(H + 1, x + 1)
    fp = index.prefix[right] ^ index.prefix[right - H]
    a = index.min_factorial_match(fp)
    N = right - H
    ok = (a >= 1) & (a < N)
    return list(zip(N[ok].tolist(), a[ok].tolist()))


def largest_prime_bounds_ok(N: int, H: int, ip: IntervalProduct) -> bool:
    """Sylvester-Schur: for N > H the largest prime factor of the product exceeds H."""
    return N <= H or (ip.largest is not None and ip.largest[0] > H)
