"""Certified constants and small exact probes of the sieve machinery."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import numpy as np

from .arith import DomainError, PreconditionError, primes_in_range
from .intervals import MiddlePrimorialBound, build_factorial_kernels

# B_2, B_4, ..., B_12
_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66), Fraction(-691, 2730)]


@dataclass(frozen=True)
class Certified:
    """A value with an error bar: the true number lies in [value - below, value + above]."""

    value: float
    above: float
    below: float

    @property
    def error(self) -> float:
        return max(self.above, self.below)

    def contains(self, t: float) -> bool:
        return self.value - self.below <= t <= self.value + self.above

    def __str__(self) -> str:
        return f"{self.value:.10f} ± {self.error:.1e}"


def zeta_real(s: float, terms: int = 64, corrections: int = 5) -> Certified:
    """zeta(s) for real s > 1 by Euler-Maclaurin summation.

    For real s the remainder is bounded by the first omitted correction
    term; a rounding allowance proportional to the number of summands is
    added on top.
    """
    if s <= 1:
        raise DomainError("zeta_real needs s > 1")
    N = terms
    head = math.fsum(n ** (-s) for n in range(1, N))
    tail = [N ** (1 - s) / (s - 1), 0.5 * N ** (-s)]

    def correction(k: int) -> float:
        rising = prod(s + i for i in range(2 * k - 1))
        return float(_BERNOULLI[k - 1]) / math.factorial(2 * k) * rising * N ** (-s - 2 * k + 1)

    tail.extend(correction(k) for k in range(1, corrections + 1))
    err = abs(correction(corrections + 1)) + 4 * N * 2.0**-52
    return Certified(math.fsum([head, *tail]), err, err)


def erdos_szekeres_constant(precision: float = 1e-6) -> Certified:
    """zeta(3/2) / zeta(3), the density constant of the powerful numbers."""
    if precision < 1e-8:
        raise DomainError("precision must be >= 1e-8")
    a, b = zeta_real(1.5), zeta_real(3.0)
    value = a.value / b.value
    err = (a.error + value * b.error) / (b.value - b.error)
    if err > precision:
        raise ArithmeticError(f"could not reach precision {precision} (got {err})")
    return Certified(value, err, err)


def c31_terms(A: int) -> list[tuple[int, int, float]]:
    """(a, s(a!), s(a!)^-1/2) for each a <= A whose kernel is new."""
    table = build_factorial_kernels(max(A, 1))
    seen = set()
    out = []
    for a in range(1, A + 1):
        k = table[a]
        if k in seen:
            continue
        seen.add(k)
        out.append((a, k.kernel(), math.exp(-0.5 * math.fsum(math.log(p) for p in k))))
    return out


def c31_constant(precision: float = 1e-3) -> Certified:
    """Sum of s^-1/2 over the distinct values s of s(a!).

    Terms are summed until the certified tail bound (from the primes in
    (a/2, a], which divide a! once) drops below ``precision``; the result is a
    lower bound with a one-sided error bar.
    """
    if precision < 1e-4:
        raise DomainError("precision must be >= 1e-4")
    bound = MiddlePrimorialBound()
    A = 1
    while bound.tail_inv_sqrt(A) >= precision:
        A += 1
    tail = bound.tail_inv_sqrt(A)
    total = math.fsum(t for *_, t in c31_terms(A))
    return Certified(total, tail, 0.0)


# -- Montgomery uncertainty principle and the large sieve ------------------------


@dataclass(frozen=True)
class SieveProblem:
    """Interval [start, start + length) with residue classes removed per modulus."""

    start: int
    length: int
    moduli: tuple[tuple[int, tuple[int, ...]], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.length < 1:
            raise DomainError("interval length must be >= 1")
        qs = [q for q, _ in self.moduli]
        for i, q in enumerate(qs):
            if q < 1:
                raise DomainError("moduli must be positive")
            for r in qs[i + 1 :]:
                if math.gcd(q, r) != 1:
                    raise DomainError(f"moduli {q} and {r} are not coprime")
        for q, removed in self.moduli:
            if len(set(r % q for r in removed)) != len(removed):
                raise DomainError(f"repeated residue class mod {q}")

    def omega(self, q: int) -> int:
        return len(dict(self.moduli)[q])

    def removed(self, q: int) -> set[int]:
        return {r % q for r in dict(self.moduli)[q]}

    def survivors(self) -> np.ndarray:
        n = np.arange(self.start, self.start + self.length, dtype=np.int64)
        keep = np.ones(len(n), dtype=bool)
        for q, removed in self.moduli:
            if removed:
                keep &= ~np.isin(n % q, np.array(removed, dtype=np.int64) % q)
        return n[keep]


def montgomery_check(problem: SieveProblem, f: dict[int, complex], subset) -> tuple[float, float]:
    """Both sides of the uncertainty inequality for the moduli in ``subset``.

    lhs sums |sum_n f(n) e(-a n / Q)|^2 over a mod Q = q1...qk with no qj | a;
    rhs is prod(w/(q - w)) |sum f|^2. The inequality lhs >= rhs is a theorem.
    """
    subset = list(subset)
    if len(set(subset)) != len(subset):
        raise DomainError("moduli in the subset must be distinct")
    for q in subset:
        w = problem.omega(q)
        if w >= q:
            raise DomainError(f"every class mod {q} is removed")
        bad = problem.removed(q)
        if any(v != 0 and n % q in bad for n, v in f.items()):
            raise PreconditionError(f"f does not vanish on the removed classes mod {q}")
    total = complex(sum(f.values()))
    if not subset:
        t = abs(total) ** 2
        return t, t
    Q = prod(subset)
    folded = np.zeros(Q, dtype=complex)
    for n, v in f.items():
        folded[n % Q] += v
    spectrum = np.fft.fft(folded)  # sum_r F[r] e(-a r / Q)
    a = np.arange(Q)
    keep = np.ones(Q, dtype=bool)
    for q in subset:
        keep &= a % q != 0
    lhs = float(np.sum(np.abs(spectrum[keep]) ** 2))
    rhs = math.prod(problem.omega(q) / (q - problem.omega(q)) for q in subset) * abs(total) ** 2
    return lhs, rhs


@dataclass(frozen=True)
class LargeSieveReport:
    survivors: int
    denominator: float
    length: int
    k: int

    @property
    def normalized(self) -> float | None:
        """survivors * denominator / |I|; None when the denominator vanishes."""
        if self.denominator == 0:
            return None
        return self.survivors * self.denominator / self.length


def large_sieve_report(problem: SieveProblem, k: int) -> LargeSieveReport:
    """Direct survivor count next to ((1/k) sum^[-k] w/(q - w))^k.

    The k largest summands are dropped; with k = 0 the denominator is 1.
    """
    if k < 0:
        raise DomainError("k must be >= 0")
    qs = sorted((q for q, _ in problem.moduli), reverse=True)
    if k > len(qs):
        raise PreconditionError(f"k = {k} exceeds the number of moduli")
    if prod(qs[:k]) ** 2 > problem.length:
        raise PreconditionError(f"a product of {k} moduli exceeds sqrt(|I|)")
    for q in qs:
        if problem.omega(q) >= q:
            raise DomainError(f"every class mod {q} is removed")
    survivors = len(problem.survivors())
    if k == 0:
        return LargeSieveReport(survivors, 1.0, problem.length, 0)
    terms = sorted((problem.omega(q) / (q - problem.omega(q)) for q in qs), reverse=True)
    rest = math.fsum(terms[k:])
    return LargeSieveReport(survivors, (rest / k) ** k, problem.length, k)


# -- fractional parts of N / p^j ---------------------------------------------


@dataclass
class FracpartHistogram:
    N: int
    P: int
    j: int
    bins: int
    counts: list[int]
    joint: list[list[int]]
    primes: int
    chi_square: float
    forbidden: int


def fracpart_histogram(N: int, P: int, j: int, bins: int) -> FracpartHistogram:
    """Histogram of {N / p^j} over primes P <= p < 2P, computed in exact integers.

    Also returns the joint histogram of ({N/p}, {N/p^2}) and the number of
    primes with 0.9 <= {N/p} < 1 and {N/p^2} < 0.9, a configuration in which
    some N + h, h <= p, is divisible by p but not p^2.
    """
    if P < 2 or j not in (1, 2) or bins < 2:
        raise DomainError("need P >= 2, j in {1, 2}, bins >= 2")
    ps = primes_in_range(P, 2 * P)
    counts = [0] * bins
    joint = [[0] * bins for _ in range(bins)]
    forbidden = 0
    for p in ps:
        r1, r2 = N % p, N % (p * p)
        rj, mod = (r1, p) if j == 1 else (r2, p * p)
        counts[rj * bins // mod] += 1
        joint[r1 * bins // p][r2 * bins // (p * p)] += 1
        if 10 * r1 >= 9 * p and 10 * r2 < 9 * p * p:
            forbidden += 1
    expected = len(ps) / bins
    chi2 = math.fsum((c - expected) ** 2 / expected for c in counts) if ps else 0.0
    return FracpartHistogram(N, P, j, bins, counts, joint, len(ps), chi2, forbidden)
