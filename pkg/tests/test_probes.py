import cmath
import math
import random

import mpmath
import numpy as np
import pytest

from anatomy.arith import DomainError, PreconditionError
from anatomy.probes import (
    Certified,
    SieveProblem,
    c31_constant,
    c31_terms,
    erdos_szekeres_constant,
    fracpart_histogram,
    large_sieve_report,
    montgomery_check,
    zeta_real,
)


def test_zeta_against_mpmath():
    for s in (1.5, 2.0, 3.0, 4.5):
        z = zeta_real(s)
        assert z.contains(float(mpmath.zeta(s)))
        assert z.error < 1e-10


def test_erdos_szekeres():
    c = erdos_szekeres_constant(1e-6)
    assert abs(c.value - 2.1732543) < 1e-6
    assert c.contains(float(mpmath.zeta(1.5) / mpmath.zeta(3)))
    with pytest.raises(DomainError):
        erdos_szekeres_constant(1e-12)


def test_c31():
    c = c31_constant(1e-3)
    assert c.below == 0 and c.above < 1e-3
    assert abs(c.value - 3.709751) < 1e-3
    assert c.contains(3.709751)
    with pytest.raises(DomainError):
        c31_constant(1e-6)


def test_c31_partial_sum():
    head = [t for a, _, t in c31_terms(4)]
    assert math.fsum(head) == pytest.approx(1 + 1 / math.sqrt(2) + 1 / math.sqrt(6), abs=1e-12)
    assert [k for _, k, _ in c31_terms(10)] == [1, 2, 6, 30, 5, 35, 70, 7]


def test_certified_str():
    assert "±" in str(Certified(1.0, 1e-3, 1e-3))


def test_montgomery_equality_case():
    prob = SieveProblem(1, 4, ((2, (0,)),))
    assert montgomery_check(prob, {1: 1, 3: 1}, [2]) == pytest.approx((4, 4))


def test_montgomery_empty_subset():
    prob = SieveProblem(1, 10, ((3, (0,)),))
    assert montgomery_check(prob, {1: 2, 2: 1j}, []) == pytest.approx((5, 5))


def test_montgomery_errors():
    prob = SieveProblem(1, 10, ((2, (0, 1)), (3, (0,))))
    with pytest.raises(DomainError):
        montgomery_check(prob, {1: 1}, [2])
    with pytest.raises(PreconditionError):
        montgomery_check(prob, {3: 1}, [3])
    with pytest.raises(DomainError):
        SieveProblem(1, 10, ((2, (0,)), (4, (1,))))


def _random_instance(rng):
    primes = [2, 3, 5, 7, 11, 13]
    moduli = rng.sample(primes, rng.randint(1, 3))
    classes = tuple((q, tuple(rng.sample(range(q), rng.randint(0, q - 1)))) for q in moduli)
    prob = SieveProblem(rng.randint(-50, 50), rng.randint(5, 80), classes)
    surv = prob.survivors().tolist()
    f = {n: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for n in surv if rng.random() < 0.7}
    subset = rng.sample(moduli, rng.randint(0, len(moduli)))
    return prob, f, subset


def test_montgomery_random_instances():
    rng = random.Random(7)
    for _ in range(300):
        prob, f, subset = _random_instance(rng)
        lhs, rhs = montgomery_check(prob, f, subset)
        assert lhs >= rhs * (1 - 1e-6) - 1e-9


def test_montgomery_lhs_direct():
    # the FFT agrees with a naive double sum
    prob = SieveProblem(0, 30, ((3, (1,)), (5, (2, 4))))
    f = {n: 1 + 0.5j * (n % 4) for n in prob.survivors().tolist()}
    Q = 15
    naive = sum(
        abs(sum(v * cmath.exp(-2j * math.pi * a * n / Q) for n, v in f.items())) ** 2
        for a in range(Q)
        if a % 3 and a % 5
    )
    assert montgomery_check(prob, f, [3, 5])[0] == pytest.approx(naive)


def test_large_sieve_examples():
    prob = SieveProblem(1, 100, ((2, (0,)), (3, (0,)), (5, (0,))))
    rep = large_sieve_report(prob, 1)
    assert rep.survivors == 26
    assert rep.denominator == pytest.approx(0.5 + 0.25)
    empty = SieveProblem(1, 50, ((2, ()), (3, ())))
    r = large_sieve_report(empty, 1)
    assert r.survivors == 50 and r.denominator == 0 and r.normalized is None
    assert large_sieve_report(prob, 0).denominator == 1


def test_large_sieve_preconditions():
    prob = SieveProblem(1, 20, ((2, (0,)), (3, (0,)), (5, (0,))))
    with pytest.raises(PreconditionError):
        large_sieve_report(prob, 2)
    with pytest.raises(PreconditionError):
        large_sieve_report(prob, 4)


def test_large_sieve_survivors_match_direct_count():
    rng = np.random.default_rng(3)
    for _ in range(20):
        qs = [2, 3, 5, 7, 11]
        moduli = tuple((q, tuple(sorted(rng.choice(q, size=int(rng.integers(0, q)), replace=False).tolist()))) for q in qs)
        prob = SieveProblem(1, 1000, moduli)
        rep = large_sieve_report(prob, 1)
        removed = dict(moduli)
        direct = sum(1 for n in range(1, 1001) if all(n % q not in removed[q] for q in qs))
        assert rep.survivors == direct


def test_fracparts():
    h = fracpart_histogram(0, 50, 1, 10)
    assert h.counts[0] == h.primes and sum(h.counts[1:]) == 0
    h = fracpart_histogram(12167, 64, 1, 10)
    assert sum(h.counts) == h.primes == 13
    assert sum(map(sum, h.joint)) == h.primes
    assert h.forbidden == 0
    assert fracpart_histogram(10**6 + 3, 200, 2, 8).chi_square >= 0
    with pytest.raises(DomainError):
        fracpart_histogram(10, 1, 1, 10)
