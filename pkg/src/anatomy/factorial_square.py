"""Solutions of a1! a2! a3! = m^2 with a1 < a2 < a3.

Since a2! a3! = (a2!)^2 (a2+1)...a3, a triple is a solution exactly when
a1! and the interval product (a2+1)...a3 have the same squarefree kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import factorial, isqrt

import numpy as np

from .arith import DomainError, is_square
from .intervals import ParityIndex, build_factorial_kernels, interval_product

DEFAULT_HMAX = 64


@dataclass(frozen=True, order=True)
class FactorialSquareSolution:
    a3: int
    a2: int
    a1: int

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)

    def root(self) -> int:
        """m with a1! a2! a3! = m^2; only sensible for small a3."""
        v = factorial(self.a1) * factorial(self.a2) * factorial(self.a3)
        m = isqrt(v)
        if m * m != v:
            raise ArithmeticError(f"{self.triple} is not a solution")
        return m


def enumerate_solutions(x: int, hmax: int = DEFAULT_HMAX, index: ParityIndex | None = None) -> list[FactorialSquareSolution]:
    """All solutions with a3 <= x and a3 - a2 <= hmax, ordered by (a3, a2, a1)."""
    if x < 1:
        raise DomainError("x must be >= 1")
    if index is None or index.limit < x:
        index = ParityIndex(max(x, 2))
    cands = []
    for H in range(1, min(hmax, x) + 1):
        right = np.arange(H + 1, x + 1)
        fp = index.prefix[right] ^ index.prefix[right - H]
        a = index.min_factorial_match(fp)
        N = right - H
        ok = (a >= 1) & (a < N)
        cands.extend(zip(N[ok].tolist(), [H] * int(ok.sum()), a[ok].tolist()))
    if not cands:
        return []
    # at most two a1 share a kernel (a and a-1 with a a square)
    table = build_factorial_kernels(max(a for *_, a in cands) + 1)
    out = []
    for N, H, a in cands:
        target = interval_product(N, H).parity()
        for a1 in (a, a + 1):
            if a1 < N and table[a1] == target:
                out.append(FactorialSquareSolution(N + H, N, a1))
    out.sort()
    return out


def brute_force_solutions(x: int) -> list[FactorialSquareSolution]:
    """Every triple a1 < a2 < a3 <= x tested with big integers (oracle)."""
    f = [factorial(a) for a in range(x + 1)]
    out = []
    for a3 in range(3, x + 1):
        for a2 in range(2, a3):
            pair = f[a2] * f[a3]
            for a1 in range(1, a2):
                if is_square(f[a1] * pair):
                    out.append(FactorialSquareSolution(a3, a2, a1))
    out.sort()
    return out


def solution_count_table(x: int, step: int, hmax: int = DEFAULT_HMAX) -> list[dict[str, float]]:
    """Rows (t, solutions with a3 <= t, those with a3 - a2 = 1, count / sqrt(t))."""
    if step < 1:
        raise DomainError("step must be >= 1")
    sols = enumerate_solutions(x, hmax)
    a3_all = np.array([s.a3 for s in sols], dtype=np.int64)
    a3_h1 = np.array([s.a3 for s in sols if s.a3 - s.a2 == 1], dtype=np.int64)
    rows = []
    for t in range(step, x + 1, step):
        c = int(np.searchsorted(a3_all, t, side="right"))
        c1 = int(np.searchsorted(a3_h1, t, side="right"))
        rows.append({"t": t, "solutions": c, "h1_family": c1, "ratio_sqrt": c / math.sqrt(t)})
    return rows
