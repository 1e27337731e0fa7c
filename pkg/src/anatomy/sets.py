"""Enumerators for B1, B, VB1, VB, F31 and F3 up to a bound, plus count tables."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from math import isqrt
from typing import Iterable

import numpy as np

from .arith import (
    DomainError,
    build_spf,
    largest_prime_factor_table,
    primes_up_to,
    squarefree_flags,
)
from .intervals import (
    FactorialKernelTable,
    IntervalProduct,
    MiddlePrimorialBound,
    ParityIndex,
    build_factorial_kernels,
    f3_interval_candidates,
    interval_product,
    is_bad,
    is_very_bad,
)

DEFAULT_HMAX_B = 64
DEFAULT_HMAX_VB = 8
DEFAULT_HMAX_F3 = 64


class SetId(str, enum.Enum):
    B1 = "B1"
    B = "B"
    VB1 = "VB1"
    VB = "VB"
    F31 = "F31"
    F3 = "F3"

    @classmethod
    def parse(cls, name: str) -> "SetId":
        key = name.strip().upper().replace("¹", "1").replace("₃", "3")
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown set {name!r}; expected one of {[s.value for s in cls]}") from None


@dataclass(frozen=True)
class MembershipRecord:
    """Why ``n`` belongs to a set: the interval {N+1..N+H} and, where relevant, p0 or a."""

    n: int
    set: SetId
    N: int
    H: int
    p0: int | None = None
    a: int | None = None

    def replay(self, table: FactorialKernelTable | None = None) -> bool:
        if self.n == 1 and self.H == 1 and self.N == 0:
            # the include_one convention: 1 is listed but is not itself bad/F3
            return self.set in (SetId.B1, SetId.B, SetId.VB1, SetId.VB)
        if not (self.N < self.n <= self.N + self.H):
            return False
        ip = interval_product(self.N, self.H)
        if self.set in (SetId.B1, SetId.B):
            return is_bad(ip) and (self.p0 is None or ip.largest[0] == self.p0)
        if self.set in (SetId.VB1, SetId.VB):
            return is_very_bad(ip)
        if self.a is None or not (1 <= self.a < self.N):
            return False
        if table is None or table.amax < self.a:
            table = build_factorial_kernels(self.a)
        return table[self.a] == ip.parity()


# -- B1 and B ---------------------------------------------------------------


def b1_mask(lpf: np.ndarray) -> np.ndarray:
    """Mask of n >= 2 in the table whose largest prime factor divides n twice."""
    n = np.arange(len(lpf), dtype=np.int64)
    mask = np.zeros(len(lpf), dtype=bool)
    mask[2:] = n[2:] % (lpf[2:] * lpf[2:]) == 0
    return mask


def enumerate_b1(x: int, include_one: bool = True) -> list[int]:
    if x < 1:
        raise DomainError("x must be >= 1")
    lpf = largest_prime_factor_table(x)
    out = np.flatnonzero(b1_mask(lpf)).tolist()
    return ([1] if include_one else []) + out


@dataclass(frozen=True)
class BadRun:
    """Maximal run {N+1..N+H} around a B1 element with largest prime p0 (a bad interval)."""

    N: int
    H: int
    p0: int


def _table_end(x: int, hmax: int, margin: int | None) -> int:
    if margin is None:
        margin = hmax * math.ceil(math.log(max(x, 3)) ** 2)
    return x + max(margin, 2)


def bad_runs(x: int, hmax: int = DEFAULT_HMAX_B, margin: int | None = None) -> list[BadRun]:
    """Every maximal bad run that meets [1, x].

    Each B1 element n0 with largest prime p0 is extended left and right over
    elements whose largest prime factor is <= p0. The table is grown until it
    holds some t > x with lpf(t) > sqrt(table end): no run meeting [1, x] can
    cross such a t, so every relevant run lies inside the table.
    """
    end = _table_end(x, hmax, margin)
    while True:
        lpf = largest_prime_factor_table(end)
        blockers = np.flatnonzero(lpf[x + 1 :] > isqrt(end))
        if len(blockers):
            stop = x + 1 + int(blockers[0])
            break
        end *= 2
    runs = []
    seen_left: set[int] = set()
    lpf_list = lpf[: stop + 1].tolist()
    for n0 in np.flatnonzero(b1_mask(lpf[: stop + 1])).tolist():
        p0 = lpf_list[n0]
        lo = n0
        while lo > 1 and lpf_list[lo - 1] <= p0:
            lo -= 1
        if lo > x:
            continue
        hi = n0
        while hi < stop and lpf_list[hi + 1] <= p0:
            hi += 1
        if (lo, p0) in seen_left:
            continue
        seen_left.add((lo, p0))
        runs.append(BadRun(lo - 1, hi - lo + 1, p0))
    return runs


def bad_window_scan(x: int, hmax: int, n_max: int | None = None) -> list[tuple[int, int]]:
    """Brute force: bad windows (N, H) with N <= n_max, N + 1 <= x, H <= hmax."""
    n_max = x - 1 if n_max is None else min(n_max, x - 1)
    table = build_spf(max(x + hmax, 2))
    found = []
    for N in range(0, n_max + 1):
        ip = IntervalProduct(N)
        for _ in range(hmax):
            ip.extend(table)
            if is_bad(ip):
                found.append((N, ip.H))
    return found


def enumerate_b(x: int, hmax: int = DEFAULT_HMAX_B, include_one: bool = True) -> list[int]:
    return sorted(r.n for r in b_records(x, hmax, include_one))


def b_records(x: int, hmax: int = DEFAULT_HMAX_B, include_one: bool = True) -> list[MembershipRecord]:
    if x < 1:
        raise DomainError("x must be >= 1")
    members: dict[int, MembershipRecord] = {}
    if include_one:
        members[1] = MembershipRecord(1, SetId.B, 0, 1)
    for run in bad_runs(x, hmax):
        for n in range(run.N + 1, min(run.N + run.H, x) + 1):
            members.setdefault(n, MembershipRecord(n, SetId.B, run.N, run.H, p0=run.p0))
    # short windows near the origin, where N <= H is possible
    for N, H in bad_window_scan(x, hmax, n_max=hmax):
        ip = interval_product(N, H)
        for n in range(N + 1, min(N + H, x) + 1):
            members.setdefault(n, MembershipRecord(n, SetId.B, N, H, p0=ip.largest[0]))
    return [members[n] for n in sorted(members)]


# -- VB1 and VB -------------------------------------------------------------


def enumerate_vb1(x: int) -> list[int]:
    """Powerful numbers <= x, each generated once as a^2 b^3 with b squarefree."""
    if x < 1:
        raise DomainError("x must be >= 1")
    bmax = round(x ** (1 / 3)) + 2
    while bmax**3 > x:
        bmax -= 1
    sqf = squarefree_flags(bmax)
    parts = []
    for b in np.flatnonzero(sqf).tolist():
        c = b**3
        amax = isqrt(x // c)
        a = np.arange(1, amax + 1, dtype=np.int64)
        parts.append(a * a * c)
    out = np.sort(np.concatenate(parts))
    return out.tolist()


def count_powerful(x: int) -> int:
    """Number of powerful n <= x: sum over squarefree b of floor(sqrt(x / b^3))."""
    if x < 1:
        return 0
    bmax = round(x ** (1 / 3)) + 2
    while bmax**3 > x:
        bmax -= 1
    return sum(isqrt(x // b**3) for b in np.flatnonzero(squarefree_flags(bmax)).tolist())


def consecutive_powerful(x: int) -> list[int]:
    """Second elements m <= x of pairs (m-1, m) of powerful numbers."""
    pw = np.array(enumerate_vb1(x), dtype=np.int64)
    hit = np.isin(pw - 1, pw)
    return pw[hit].tolist()


def rough_powerful_candidates(limit: int, hmax: int) -> np.ndarray:
    """Mask of n <= limit in which every prime > hmax dividing n divides it twice."""
    single = np.zeros(limit + 1, dtype=np.int32)
    for p in primes_up_to(limit).tolist():
        if p <= hmax:
            continue
        single[p::p] += 1
        pp = p * p
        if pp <= limit:
            single[pp::pp] -= 1
    mask = single == 0
    mask[0] = False
    return mask


def very_bad_intervals(x: int, hmax: int = DEFAULT_HMAX_VB) -> list[tuple[int, int]]:
    """Very bad (N, H) with 2 <= H <= hmax and N + 1 <= x.

    Only windows made entirely of candidates (see
    :func:`rough_powerful_candidates`) can be very bad, since a prime above
    hmax divides at most one element of the window.
    """
    if hmax < 2:
        return []
    limit = x + hmax
    cand = rough_powerful_candidates(limit, hmax)
    table = build_spf(limit)
    found = []
    idx = np.flatnonzero(cand[1:]) + 1
    if not len(idx):
        return found
    breaks = np.flatnonzero(np.diff(idx) != 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [len(idx) - 1]))
    for s, e in zip(starts.tolist(), ends.tolist()):
        lo, hi = int(idx[s]), int(idx[e])
        if hi - lo + 1 < 2:
            continue
        for first in range(lo, min(hi, x) + 1):
            ip = IntervalProduct(first - 1)
            for _ in range(min(hmax, hi - first + 1)):
                ip.extend(table)
                if ip.H >= 2 and is_very_bad(ip):
                    found.append((ip.N, ip.H))
    return found


def enumerate_vb(x: int, hmax: int = DEFAULT_HMAX_VB) -> list[int]:
    if x < 1:
        raise DomainError("x must be >= 1")
    members = set(enumerate_vb1(x))
    for N, H in very_bad_intervals(x, hmax):
        members.update(range(N + 1, min(N + H, x) + 1))
    return sorted(members)


# -- F31 and F3 -------------------------------------------------------------


def distinct_factorial_kernels(log_x: float) -> list[tuple[int, int]]:
    """(s(a!), smallest such a) for every a whose kernel could still be <= e^log_x."""
    bound = MiddlePrimorialBound()
    amax = bound.first_exceeding(log_x)
    table = build_factorial_kernels(max(amax, 1))
    out: dict[int, int] = {}
    for a in range(1, amax + 1):
        out.setdefault(table.kernel_value(a), a)
    return sorted(out.items(), key=lambda kv: kv[1])


def f31_witnesses(x: int) -> dict[int, int]:
    """n -> smallest a with s(n) = s(a!) and 1 <= a < n - 1, for n <= x."""
    out: dict[int, int] = {}
    if x < 4:
        return out
    for s, a in distinct_factorial_kernels(math.log(x)):
        if s > x:
            continue
        for k in range(1, isqrt(x // s) + 1):
            n = s * k * k
            if a < n - 1 and (n not in out or a < out[n]):
                out[n] = a
    return out


def enumerate_f31(x: int) -> list[int]:
    return sorted(f31_witnesses(x))


@dataclass(frozen=True)
class F3Interval:
    N: int
    H: int
    a: int

    @property
    def right(self) -> int:
        return self.N + self.H


def f3_intervals(x: int, hmax: int = DEFAULT_HMAX_F3, hmin: int = 2, index: ParityIndex | None = None) -> list[F3Interval]:
    """Type F3 intervals with hmin <= H <= hmax and N + H <= x, smallest witness each.

    Candidates come from kernel fingerprints and are confirmed by comparing
    exact ParitySets.
    """
    if index is None or index.limit < x:
        index = ParityIndex(x)
    cands: list[tuple[int, int, int]] = []
    for H in range(hmin, hmax + 1):
        cands.extend((N, H, a) for N, a in f3_interval_candidates(index, x, H))
    if not cands:
        return []
    table = build_factorial_kernels(max(a for _, _, a in cands))
    out = []
    for N, H, a in cands:
        if interval_product(N, H).parity() == table[a]:
            out.append(F3Interval(N, H, a))
    out.sort(key=lambda r: (r.right, r.H))
    return out


def enumerate_f3(x: int, hmax: int = DEFAULT_HMAX_F3) -> list[int]:
    if x < 1:
        raise DomainError("x must be >= 1")
    members = set(enumerate_f31(x))
    members.update(r.right for r in f3_intervals(x, hmax))
    return sorted(members)


def f3_records(x: int, hmax: int = DEFAULT_HMAX_F3) -> list[MembershipRecord]:
    recs = {n: MembershipRecord(n, SetId.F3, n - 1, 1, a=a) for n, a in f31_witnesses(x).items()}
    for r in f3_intervals(x, hmax):
        recs.setdefault(r.right, MembershipRecord(r.right, SetId.F3, r.N, r.H, a=r.a))
    return [recs[n] for n in sorted(recs)]


# -- dispatch and tables ----------------------------------------------------


def enumerate_set(set_id: SetId | str, x: int, *, hmax: int | None = None, include_one: bool = True) -> list[int]:
    set_id = SetId.parse(set_id) if isinstance(set_id, str) else set_id
    if set_id is SetId.B1:
        return enumerate_b1(x, include_one)
    if set_id is SetId.B:
        return enumerate_b(x, hmax or DEFAULT_HMAX_B, include_one)
    if set_id is SetId.VB1:
        return enumerate_vb1(x)
    if set_id is SetId.VB:
        return enumerate_vb(x, hmax or DEFAULT_HMAX_VB)
    if set_id is SetId.F31:
        return enumerate_f31(x)
    return enumerate_f3(x, hmax or DEFAULT_HMAX_F3)


def cumulative_counts(
    x: int,
    sets: Iterable[SetId | str],
    step: int,
    *,
    hmax: int | None = None,
    include_one: bool = True,
) -> list[dict[str, int]]:
    """Rows {"t": t, <set>: #(set ∩ [1, t])} for t = step, 2 step, ..., <= x."""
    if step < 1:
        raise DomainError("step must be >= 1")
    ids = [SetId.parse(s) if isinstance(s, str) else s for s in sets]
    ts = np.arange(step, x + 1, step, dtype=np.int64)
    cols = {}
    for sid in ids:
        members = np.array(enumerate_set(sid, x, hmax=hmax, include_one=include_one), dtype=np.int64)
        cols[sid.value] = np.searchsorted(members, ts, side="right")
    return [{"t": int(t), **{k: int(v[i]) for k, v in cols.items()}} for i, t in enumerate(ts)]

