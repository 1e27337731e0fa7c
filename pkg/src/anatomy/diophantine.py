"""Pell and Pell-type equations, consecutive powerful pairs, hyperbola and
powerful-linear-relation counts."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial, gcd, isqrt, prod

import numpy as np

from .arith import DomainError, factorize, is_powerful, is_square
from .intervals import FactorialKernelTable, build_factorial_kernels, f3_witnesses, interval_product
from .sets import enumerate_vb1

DEFAULT_PELL_A_CAP = 16
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class PellSolution:
    """x, y with u x^2 - v y^2 = 1."""

    u: int
    v: int
    x: int
    y: int

    def __post_init__(self):
        if self.u * self.x * self.x - self.v * self.y * self.y != 1:
            raise ValueError(f"({self.x}, {self.y}) does not solve {self.u}x^2 - {self.v}y^2 = 1")


def pell_fundamental(D: int) -> PellSolution:
    """Least positive solution of x^2 - D y^2 = 1 from the continued fraction of sqrt(D)."""
    if D < 2 or is_square(D):
        raise DomainError(f"D must be a positive non-square, got {D}")
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while h * h - D * k * k != 1:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return PellSolution(1, D, h, k)


def pell_compose(s: PellSolution, t: PellSolution) -> PellSolution:
    """Brahmagupta composition of two solutions of x^2 - D y^2 = 1."""
    if s.u != 1 or t.u != 1 or s.v != t.v:
        raise DomainError("composition needs two solutions of the same x^2 - D y^2 = 1")
    D = s.v
    return PellSolution(1, D, s.x * t.x + D * s.y * t.y, s.x * t.y + s.y * t.x)


def pell_like_solutions(u: int, v: int, ybound: int) -> list[PellSolution]:
    """All (x, y) with 1 <= y <= ybound and u x^2 - v y^2 = 1, by scanning y."""
    if u < 1 or v < 1:
        raise DomainError("u and v must be >= 1")
    if ybound < 1:
        return []
    if gcd(u, v) != 1:
        return []
    out = []
    if v * ybound * ybound + 1 < _INT64_SAFE:
        chunk = 1 << 20
        for lo in range(1, ybound + 1, chunk):
            y = np.arange(lo, min(lo + chunk, ybound + 1), dtype=np.int64)
            t = v * y * y + 1
            ok = t % u == 0
            for yy in y[ok].tolist():
                q = (v * yy * yy + 1) // u
                r = isqrt(q)
                if r * r == q:
                    out.append(PellSolution(u, v, r, yy))
        return out
    for yy in range(1, ybound + 1):
        t = v * yy * yy + 1
        if t % u == 0:
            q = t // u
            r = isqrt(q)
            if r * r == q:
                out.append(PellSolution(u, v, r, yy))
    return out


def consecutive_powerful_from_pell(sol: PellSolution) -> tuple[int, int]:
    """{u x^2 - 1, u x^2}; both powerful when u x^2 and v y^2 are."""
    top = sol.u * sol.x * sol.x
    return (top - 1, top)


def mahler_pairs(ybound: int) -> list[tuple[int, int]]:
    """Pairs {x^2 - 1, x^2} from x^2 - 8 y^2 = 1 with y <= ybound."""
    return [consecutive_powerful_from_pell(s) for s in pell_like_solutions(1, 8, ybound)]


def coprime_factorizations(n_factors: dict[int, int]) -> list[tuple[int, int]]:
    """Pairs (u, v) with u v = n and gcd(u, v) = 1, given n's factorization."""
    powers = [p**e for p, e in sorted(n_factors.items())]
    total = prod(powers)
    out = []
    for r in range(len(powers) + 1):
        for combo in combinations(powers, r):
            u = prod(combo)
            out.append((u, total // u))
    return sorted(out)


@dataclass(frozen=True)
class PellF3Witness:
    a: int
    solution: PellSolution

    @property
    def interval(self) -> tuple[int, int]:
        """(N, H) of the interval {v y^2, v y^2 + 1}."""
        return (self.solution.v * self.solution.y**2 - 1, 2)


def f3_from_pell(
    a: int,
    ybound: int,
    table: FactorialKernelTable | None = None,
    a_cap: int = DEFAULT_PELL_A_CAP,
) -> list[tuple[int, PellF3Witness]]:
    """Members v y^2 + 1 of F3 obtained from a! = u v and u x^2 - v y^2 = 1.

    Only coprime splittings can carry solutions, so there are 2^pi(a) of them.
    Each emitted interval is re-checked through :func:`f3_witnesses`.
    """
    if a < 1:
        raise DomainError("a must be >= 1")
    if a > a_cap:
        raise DomainError(f"a = {a} exceeds the factorial splitting cap {a_cap}")
    if table is None or table.amax < a:
        table = build_factorial_kernels(a)
    fac = factorize(factorial(a)).as_dict()
    out = []
    for u, v in coprime_factorizations(fac):
        for sol in pell_like_solutions(u, v, ybound):
            N = v * sol.y**2 - 1
            if N <= a:
                continue
            if a in f3_witnesses(interval_product(N, 2), table, a_cap=a):
                out.append((N + 2, PellF3Witness(a, sol)))
    out.sort(key=lambda t: (t[0], t[1].solution.u))
    return out


@dataclass(frozen=True)
class HyperbolaQuery:
    """Count (n, m) in N^2 with a n^2 + h = b m^2 and n <= x."""

    a: int
    b: int
    h: int
    x: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise DomainError("a and b must be >= 1")
        if self.h == 0:
            raise DomainError("h must be non-zero")
        if self.x < 0:
            raise DomainError("x must be >= 0")


def hyperbola_solutions(q: HyperbolaQuery) -> list[tuple[int, int]]:
    a, b, h, x = q.a, q.b, q.h, q.x
    out = []
    if a * x * x + abs(h) < _INT64_SAFE:
        chunk = 1 << 20
        for lo in range(1, x + 1, chunk):
            n = np.arange(lo, min(lo + chunk, x + 1), dtype=np.int64)
            t = a * n * n + h
            ok = (t > 0) & (t % b == 0)
            for nn in n[ok].tolist():
                mm2 = (a * nn * nn + h) // b
                m = isqrt(mm2)
                if m * m == mm2:
                    out.append((nn, m))
        return out
    for nn in range(1, x + 1):
        t = a * nn * nn + h
        if t > 0 and t % b == 0:
            m = isqrt(t // b)
            if m * m == t // b:
                out.append((nn, m))
    return out


def count_hyperbola(q: HyperbolaQuery) -> int:
    return len(hyperbola_solutions(q))


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def count_hyperbola_divisor(q: HyperbolaQuery) -> int:
    """Same count via (bm - cn)(bm + cn) = bh, valid when ab = c^2."""
    c = isqrt(q.a * q.b)
    if c * c != q.a * q.b:
        raise DomainError("divisor method needs a*b to be a perfect square")
    bh = q.b * q.h
    sols = set()
    for d in _divisors(abs(bh)):
        for d1 in (d, -d):
            d2 = bh // d1
            if (d2 - d1) % (2 * c) or (d1 + d2) % (2 * q.b):
                continue
            n, m = (d2 - d1) // (2 * c), (d1 + d2) // (2 * q.b)
            if 1 <= n <= q.x and m >= 1:
                sols.add((n, m))
    return len(sols)


def count_powerful_linear(a: int, b: int, h: int, x: int) -> int:
    """#{(n, m) powerful : a n + h = b m, a n <= x}."""
    return len(powerful_linear_pairs(a, b, h, x))


def powerful_linear_pairs(a: int, b: int, h: int, x: int) -> list[tuple[int, int]]:
    if a < 1 or b < 1:
        raise DomainError("a and b must be >= 1")
    if h == 0:
        raise DomainError("h must be non-zero")
    if x < a:
        return []
    ns = enumerate_vb1(x // a)
    m_top = (x + abs(h)) // b + 1
    pw = set(enumerate_vb1(max(m_top, 1)))
    out = []
    for n in ns:
        t = a * n + h
        if t > 0 and t % b == 0 and t // b in pw:
            out.append((n, t // b))
    return out


def is_powerful_int(n: int) -> bool:
    return is_powerful(factorize(n))
