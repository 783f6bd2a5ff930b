import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import gauss_brute
from sqsieve.gauss import gauss_bound_scan, gauss_sum, gauss_sums_all_l, scan_modulus


def test_examples():
    assert gauss_sum(1, 0, 1) == pytest.approx(1)
    assert abs(gauss_sum(1, 0, 4) - (2 + 2j)) < 1e-12
    g3 = gauss_sum(1, 0, 3)
    assert abs(g3 - 1j * math.sqrt(3)) < 1e-12


def test_rejects_non_coprime():
    with pytest.raises(ValueError):
        gauss_sum(2, 1, 4)
    with pytest.raises(ValueError):
        gauss_sum(1, 0, 0)


@given(st.integers(1, 60), st.integers(-500, 500), st.integers(-500, 500))
def test_matches_brute_force_and_bound(c, k, l):
    if math.gcd(k, c) != 1:
        return
    g = gauss_sum(k, l, c)
    assert abs(g - gauss_brute(k, l, c)) < 1e-9
    assert abs(g) <= math.sqrt(2 * c) + 1e-6


@given(st.integers(1, 512), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_periodicity_and_conjugation(c, k, l):
    if math.gcd(k, c) != 1:
        return
    g = gauss_sum(k, l, c)
    assert abs(g - gauss_sum(k % c, l % c, c)) < 1e-9
    assert abs(gauss_sum(-k, -l, c) - g.conjugate()) < 1e-9


@pytest.mark.parametrize("c", [1, 2, 7, 12, 64, 97])
def test_dft_route_matches_direct(c):
    for k in range(c if c > 1 else 1):
        if math.gcd(k, c) != 1:
            continue
        row = gauss_sums_all_l(k, c)
        direct = np.array([gauss_sum(k, l, c) for l in range(c)])
        assert np.max(np.abs(row - direct)) < 1e-9


def test_scan_small_cases():
    rep1 = gauss_bound_scan(1)
    assert rep1.max_ratio == pytest.approx(1 / math.sqrt(2))
    rep4 = gauss_bound_scan(4)
    assert rep4.max_ratio == pytest.approx(1, abs=1e-12)
    assert (4, 1, 0) in rep4.attaining


def test_scan_50_against_exhaustive_oracle():
    best = 0.0
    for c in range(1, 51):
        for k in range(c if c > 1 else 1):
            if math.gcd(k, c) == 1:
                for l in range(c):
                    best = max(best, abs(gauss_brute(k, l, c)) / math.sqrt(2 * c))
    rep = gauss_bound_scan(50)
    assert rep.max_ratio == pytest.approx(best, abs=1e-12)
    assert rep.ok


def test_scan_row_value_is_consistent():
    row = scan_modulus(36)
    assert abs(row.value - gauss_sum(row.k, row.l, 36)) < 1e-9
