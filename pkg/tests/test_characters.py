import math

import numpy as np
import pytest

from anatomy.arith import DomainError, factorize
from anatomy.characters import (
    CharacterSpec,
    char_sum,
    characters,
    exceptional_scan,
    group_order,
    is_cubefree,
)


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 7, 9, 12, 18, 45, 50, 98, 100])
def test_group_structure(q):
    phi = sum(1 for r in range(1, q + 1) if math.gcd(r, q) == 1)
    assert group_order(q) == phi
    table = np.array([c.values() for c in characters(q)])
    # orthogonality of rows
    gram = table @ table.conj().T
    assert np.allclose(gram, phi * np.eye(phi), atol=1e-9)


@pytest.mark.parametrize("q", [12, 45, 50, 98, 7 * 11])
def test_multiplicative_and_periodic(q):
    for chi in characters(q):
        for m in range(1, 2 * q, 3):
            for n in range(1, 2 * q, 5):
                assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-9
            assert abs(chi(m) - chi(m + q)) < 1e-12
            if math.gcd(m, q) > 1:
                assert chi(m) == 0


def _primitive_count(q):
    # characters whose conductor is exactly q
    out = 1
    for p, e in factorize(q):
        if e == 1:
            out *= p - 2
        else:
            out *= (p - 1) ** 2 * p ** (e - 2)
    return out


@pytest.mark.parametrize("q", [3, 5, 12, 45, 50, 98, 63, 75, 1])
def test_primitive_counts(q):
    assert sum(c.is_primitive for c in characters(q)) == _primitive_count(q)


def test_conductor_via_induced_values():
    # a character of conductor f agrees with some character mod f on units
    for q in (45, 50, 98):
        for chi in characters(q):
            f = chi.conductor()
            units = [n for n in range(1, q) if math.gcd(n, q) == 1]
            match = any(
                all(abs(chi(n) - psi(n)) < 1e-9 for n in units)
                for psi in characters(f)
            )
            assert match


def test_char_sum_examples():
    chi = next(c for c in characters(3) if not c.is_principal)
    assert abs(char_sum(chi, 10).value) < 1e-12
    assert char_sum(CharacterSpec(7, 0), 100).value == pytest.approx(1)
    with pytest.raises(DomainError):
        char_sum(chi, 1)


def test_cubefree_guard():
    assert is_cubefree(50) and not is_cubefree(16) and not is_cubefree(54)
    with pytest.raises(DomainError):
        characters(16)
    with pytest.raises(DomainError):
        exceptional_scan([8], 100)
    with pytest.raises(DomainError):
        CharacterSpec(5, 4)


def test_exceptional_scan_primes_to_50():
    moduli = [p for p in range(2, 51) if all(p % d for d in range(2, p))]
    rep = exceptional_scan(moduli, 1000)
    assert rep.threshold == pytest.approx(1000 ** -0.008)
    assert all(abs(r.value) >= rep.threshold and not r.chi.is_principal for r in rep.exceptional)
    # brute-force cross-check of the flagged set
    flagged = {(r.chi.q, r.chi.index) for r in rep.exceptional}
    for q in moduli:
        for chi in characters(q):
            big = not chi.is_principal and abs(char_sum(chi, 1000).value) >= rep.threshold
            assert big == ((q, chi.index) in flagged)


def test_primitive_square_sums_bounded():
    moduli = [q for q in range(2, 51) if is_cubefree(q)]
    rep = exceptional_scan(moduli, 10**4)
    for q, total in rep.primitive_square_sums.items():
        assert 0 <= total <= sum(c.is_primitive for c in characters(q)) + 1e-9
