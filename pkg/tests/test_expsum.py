import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import eval_s_brute, sieve_brute
from sqsieve import expsum
from sqsieve.expsum import (
    CoefficientSequence,
    dyadic_blocks,
    eval_s,
    generate,
    load_coefficients,
    ones,
    parseval_average,
    random_phase,
    save_coefficients,
    sieve_sum_by_blocks,
    sieve_sum_dyadic,
    sieve_sum_squares,
)


def test_coefficient_sequence_caches_z():
    seq = CoefficientSequence(np.array([1, 2j, 3 - 4j]))
    assert seq.n_max == 3
    assert seq.z_value == pytest.approx(1 + 4 + 25, rel=1e-12)
    with pytest.raises(ValueError):
        CoefficientSequence(np.array([]))


def test_random_phase_is_unimodular_and_seeded():
    a = random_phase(500, seed=42)
    b = random_phase(500, seed=42)
    assert np.array_equal(a.coeffs, b.coeffs)
    assert np.allclose(np.abs(a.coeffs), 1)
    assert a.z_value == pytest.approx(500, rel=1e-12)
    assert not np.array_equal(a.coeffs, random_phase(500, seed=43).coeffs)


def test_generate_rejects_unknown():
    with pytest.raises(ValueError):
        generate("gaussian", 4)


def test_eval_examples():
    assert eval_s(ones(17), 0) == pytest.approx(17)
    assert abs(eval_s(ones(2), 0.5)) < 1e-15
    assert abs(eval_s(ones(2), Fraction(1, 2))) < 1e-15


@pytest.mark.parametrize("n,q", [(5, 3), (100, 7), (1000, 31), (4096, 50)])
def test_eval_geometric_closed_form(n, q):
    alpha = Fraction(1, q * q)
    expected = abs(math.sin(math.pi * n / (q * q)) / math.sin(math.pi / (q * q)))
    assert abs(eval_s(ones(n), alpha)) == pytest.approx(expected, rel=1e-10, abs=1e-9)
    assert abs(eval_s(ones(n), float(alpha))) == pytest.approx(expected, rel=1e-10, abs=1e-9)


@settings(deadline=None)
@given(st.integers(1, 200), st.integers(0, 2**32), st.floats(-3, 3, allow_nan=False))
def test_eval_matches_brute_force(n, seed, alpha):
    seq = random_phase(n, seed)
    assert abs(eval_s(seq, alpha) - eval_s_brute(seq.coeffs, alpha)) < 1e-9


def test_sieve_examples():
    assert sieve_sum_squares(ones(1), 2) == pytest.approx(3)
    seq = random_phase(30, seed=5)
    assert sieve_sum_squares(seq, 1) == pytest.approx(abs(seq.coeffs.sum()) ** 2, rel=1e-12)
    # S(1/4) = S(3/4) = 0 for four unit coefficients
    assert sieve_sum_squares(ones(4), 2) == pytest.approx(16 + 2 * abs(eval_s(ones(4), 0.25)) ** 2)
    assert sieve_sum_squares(ones(4), 2) == pytest.approx(16)


@pytest.mark.parametrize("n,q,seed", [(1, 3, 0), (7, 4, 1), (40, 6, 2), (130, 5, 3)])
def test_sieve_matches_direct_evaluation(n, q, seed):
    seq = random_phase(n, seed)
    assert sieve_sum_squares(seq, q) == pytest.approx(sieve_brute(seq.coeffs, q), rel=1e-10)


def test_dyadic_examples():
    assert sieve_sum_dyadic(ones(1), 1) == pytest.approx(1)
    assert sieve_sum_dyadic(ones(1), 4) == pytest.approx(2)
    with pytest.raises(ValueError):
        sieve_sum_dyadic(ones(1), 0.5)


@pytest.mark.parametrize("q_max", [1, 2, 3, 4, 8, 16, 23, 32])
def test_dyadic_cover_reassembles_full_sum(q_max):
    seq = random_phase(300, seed=q_max)
    pieces = dyadic_blocks(q_max)
    moduli = sorted(q for _, qs in pieces for q in qs)
    assert moduli == list(range(1, q_max + 1))
    total = math.fsum(v for _, v in sieve_sum_by_blocks(seq, q_max))
    assert total == pytest.approx(sieve_sum_squares(seq, q_max), rel=1e-9)


def test_dyadic_block_equals_full_block_sum_when_inside():
    seq = random_phase(200, seed=9)
    # every q with 16 <= q^2 <= 32 is <= 5
    direct = math.fsum(expsum.modulus_energy(seq, q) for q in (4, 5))
    assert sieve_sum_dyadic(seq, 16) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("n", [1, 10, 64, 257])
def test_parseval(n):
    seq = random_phase(n, seed=n)
    assert parseval_average(seq) == pytest.approx(seq.z_value, rel=1e-9)
    assert parseval_average(seq, m=3 * n + 2) == pytest.approx(seq.z_value, rel=1e-9)


@pytest.mark.parametrize("n,q", [(64, 2), (128, 8), (256, 16)])
def test_spacing_ceiling(n, q):
    for seed in range(3):
        seq = random_phase(n, seed)
        assert sieve_sum_squares(seq, q) <= (n + q**4) * seq.z_value


def test_unimodular_invariance():
    seq = random_phase(150, seed=11)
    rot = seq.scaled(cmath.exp(0.7j))
    assert sieve_sum_squares(rot, 9) == pytest.approx(sieve_sum_squares(seq, 9), rel=1e-12)


def test_coefficient_file_roundtrip(tmp_path):
    seq = random_phase(20, seed=4)
    path = tmp_path / "c.txt"
    save_coefficients(seq, path)
    back = load_coefficients(path)
    assert np.array_equal(back.coeffs, seq.coeffs)


def test_coefficient_file_format(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# header\n1 0\n\n0.5 -0.5  # trailing\n")
    seq = load_coefficients(path)
    assert list(seq.coeffs) == [1, 0.5 - 0.5j]
    path.write_text("1 2 3\n")
    with pytest.raises(ValueError):
        load_coefficients(path)
