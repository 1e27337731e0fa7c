"""Dirichlet characters of cubefree moduli and normalized prime character sums."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import DomainError, factorize, primes_in_range

DEFAULT_EXCEPTIONAL_EXPONENT = 0.008


def _primitive_root(p: int, e: int) -> int:
    """Generator of (Z/p^e)^*, e <= 2; p = 2 handled by the caller."""
    phi = p - 1
    qs = [q for q, _ in factorize(phi)] if phi > 1 else []
    g = 2
    while any(pow(g, phi // q, p) == 1 for q in qs):
        g += 1
    if e == 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Component:
    p: int
    e: int
    modulus: int
    order: int
    dlog: tuple[int, ...]  # -1 where gcd(r, p) > 1


@lru_cache(maxsize=256)
def _components(q: int) -> tuple[_Component, ...]:
    if q < 1:
        raise DomainError("modulus must be >= 1")
    comps = []
    for p, e in factorize(q):
        if e >= 3:
            raise DomainError(f"modulus {q} is not cubefree")
        m = p**e
        if m <= 2:
            g, order = 1, 1
        elif m == 4:
            g, order = 3, 2
        else:
            g, order = _primitive_root(p, e), (p - 1) * p ** (e - 1)
        dlog = [-1] * m
        r = 1
        for k in range(order):
            dlog[r] = k
            r = r * g % m
        comps.append(_Component(p, e, m, order, tuple(dlog)))
    return tuple(comps)


def group_order(q: int) -> int:
    return math.prod(c.order for c in _components(q))


@dataclass(frozen=True)
class CharacterSpec:
    """Character number ``index`` of the dual group mod ``q``.

    The index is read in mixed radix over the prime-power components of q
    (most significant digit first); digit j on a component of order phi sends
    its generator to e(j / phi). Index 0 is the principal character.
    """

    q: int
    index: int

    def __post_init__(self):
        if not 0 <= self.index < group_order(self.q):
            raise DomainError(f"index {self.index} out of range for modulus {self.q}")

    @property
    def digits(self) -> tuple[int, ...]:
        out = []
        rest = self.index
        for c in reversed(_components(self.q)):
            rest, d = divmod(rest, c.order)
            out.append(d)
        return tuple(reversed(out))

    def __call__(self, n: int) -> complex:
        phase = 0.0
        for c, j in zip(_components(self.q), self.digits):
            k = c.dlog[n % c.modulus]
            if k < 0:
                return 0j
            phase += j * k / c.order
        return cmath.exp(2j * math.pi * phase)

    def values(self) -> np.ndarray:
        """chi(0..q-1) as a complex array."""
        phase = np.zeros(self.q)
        alive = np.ones(self.q, dtype=bool)
        r = np.arange(self.q)
        for c, j in zip(_components(self.q), self.digits):
            k = np.asarray(c.dlog)[r % c.modulus]
            alive &= k >= 0
            phase += j * np.where(k >= 0, k, 0) / c.order
        return np.where(alive, np.exp(2j * np.pi * phase), 0)

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    def conductor(self) -> int:
        f = 1
        for c, j in zip(_components(self.q), self.digits):
            if j == 0:
                continue
            # mod p^2 the character factors through mod p iff p | j
            if c.e == 2 and c.p != 2 and j % c.p == 0:
                f *= c.p
            else:
                f *= c.modulus
        return f

    @property
    def is_primitive(self) -> bool:
        return self.conductor() == self.q


def characters(q: int) -> list[CharacterSpec]:
    return [CharacterSpec(q, i) for i in range(group_order(q))]


@dataclass(frozen=True)
class PrimeCharSum:
    chi: CharacterSpec
    Z: int
    value: complex


def _prime_residue_counts(q: int, Z: int) -> tuple[np.ndarray, int]:
    ps = primes_in_range(Z, 2 * Z)
    if not ps:
        raise DomainError(f"no primes in [{Z}, {2 * Z})")
    counts = np.bincount(np.asarray(ps, dtype=np.int64) % q, minlength=q)
    return counts, len(ps)


def char_sum(chi: CharacterSpec, Z: int) -> PrimeCharSum:
    """Average of chi(p) over primes Z <= p < 2Z."""
    if Z < 2:
        raise DomainError("Z must be >= 2")
    counts, total = _prime_residue_counts(chi.q, Z)
    return PrimeCharSum(chi, Z, complex(np.dot(counts, chi.values()) / total))


@dataclass
class ExceptionalReport:
    Z: int
    exponent: float
    threshold: float
    exceptional: list[PrimeCharSum]
    primitive_square_sums: dict[int, float]
    characters_scanned: int

    @property
    def primitive_square_total(self) -> float:
        return math.fsum(self.primitive_square_sums.values())


def is_cubefree(q: int) -> bool:
    return q >= 1 and all(e < 3 for _, e in factorize(q))


def exceptional_scan(moduli, Z: int, exponent: float = DEFAULT_EXCEPTIONAL_EXPONENT) -> ExceptionalReport:
    """Non-principal characters with |s_Z(chi)| >= Z^-exponent, for each modulus.

    Also sums |s_Z(chi)|^2 over the primitive characters of each modulus.
    """
    if Z < 2:
        raise DomainError("Z must be >= 2")
    threshold = Z ** (-exponent)
    found: list[PrimeCharSum] = []
    sq: dict[int, float] = {}
    scanned = 0
    for q in moduli:
        if not is_cubefree(q):
            raise DomainError(f"modulus {q} is not cubefree")
        counts, total = _prime_residue_counts(q, Z)
        acc = []
        for chi in characters(q):
            scanned += 1
            s = complex(np.dot(counts, chi.values()) / total)
            if not chi.is_principal and abs(s) >= threshold:
                found.append(PrimeCharSum(chi, Z, s))
            if chi.is_primitive:
                acc.append(abs(s) ** 2)
        sq[q] = math.fsum(acc)
    return ExceptionalReport(Z, exponent, threshold, found, sq, scanned)
