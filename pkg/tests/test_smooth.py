import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anatomy.arith import DomainError
from anatomy.sets import enumerate_b1
from anatomy.smooth import SmoothCounter, b1_count_exact, psi, psi_direct, scale_params


def test_psi_examples():
    assert psi(100, 3) == 20
    assert all(psi(x, 1) == 1 for x in (1, 2, 10, 10**9))
    assert psi(10, 10) == 10
    assert psi(0, 5) == 0


@given(st.integers(1, 20000), st.integers(1, 300))
@settings(max_examples=150)
def test_psi_matches_direct(x, y):
    assert psi(x, y) == psi_direct(x, y)


def test_counter_reuse_is_consistent():
    c = SmoothCounter(1000)
    for x, y in [(10**6, 7), (10**6, 100), (12345, 997), (10**8, 3)]:
        assert c.psi(x, y) == psi(x, y)


def test_psi_large_known_value():
    # 2^a 3^b <= 10^12, counted independently
    n = sum(1 for a in range(40) for b in range(26) if 2**a * 3**b <= 10**12)
    assert psi(10**12, 3) == n


def test_scale_params_against_mpmath():
    mpmath.mp.dps = 40
    for log_x in (100.0, 12 * math.log(10)):
        ll = mpmath.log(log_x)
        u0 = mpmath.sqrt(2 * log_x / ll)
        log_z = mpmath.sqrt(log_x * ll / 2)
        sp = scale_params(log_x=log_x)
        assert sp.u0 == pytest.approx(float(u0), rel=1e-12)
        assert sp.log_z == pytest.approx(float(log_z), rel=1e-12)


@pytest.mark.parametrize("x", [1e10, 1e20])
def test_scale_params_identity(x):
    sp = scale_params(x)
    assert math.exp(sp.u0 * math.log(sp.z) - math.log(x)) == pytest.approx(1, abs=1e-9)


def test_scale_params_domain_and_overflow():
    with pytest.raises(DomainError):
        scale_params(math.e)
    with pytest.raises(DomainError):
        scale_params(-1)
    sp = scale_params(log_x=1e6)
    assert math.isinf(sp.x) and sp.u0 > 0


def test_b1_count_examples():
    assert b1_count_exact(3) == 0
    assert b1_count_exact(4) == 1
    assert b1_count_exact(100) == len(enumerate_b1(100, include_one=False))
    assert b1_count_exact(72) == 14


@given(st.integers(1, 30000))
@settings(max_examples=60)
def test_b1_identity_random(x):
    assert b1_count_exact(x) == len(enumerate_b1(x, include_one=False))
