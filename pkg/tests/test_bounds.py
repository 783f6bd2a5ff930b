import math
from fractions import Fraction

import numpy as np
import pytest

from sqsieve import bounds as B
from sqsieve.expsum import random_phase, sieve_sum_by_blocks, sieve_sum_squares
from sqsieve.farey import RationalApprox, block, dirichlet_approx


def test_thm2_shape():
    rep = B.evaluate_bound("thm2", {"N": 256, "Q": 16, "Z": 256, "eps": 0})
    assert rep.shape_value == pytest.approx(math.log(16) * (16**3 + 256**1.25) * 256, rel=1e-15)
    assert math.isnan(rep.ratio) and rep.exact_value == 0


def test_e4_shape():
    rep = B.evaluate_bound("E4", {"q0": 100, "delta": 1e-3, "eps": 0})
    assert rep.shape_value == pytest.approx(1 + 10**0.75, rel=1e-14)
    assert rep.shape_value == pytest.approx(6.6234132519, rel=1e-10)


def test_other_shapes():
    p = {"K": 3, "N": 10, "delta": 0.25, "Z": 2}
    assert B.evaluate_bound("thm1", p).shape_value == 3 * 14 * 2
    z = B.evaluate_bound("zhao", {"N": 16, "Q": 4, "Z": 1, "eps": 0}).shape_value
    assert z == pytest.approx(math.log(8) * (64 + 16 * 2 + 4 * 16))
    s = B.evaluate_bound("spacing", {"N": 5, "Q": 2, "Z": 3}).shape_value
    assert s == (5 + 16) * 3
    e5 = B.evaluate_bound("E5", {"q0": 4, "N": 16, "Z": 1, "eps": 0}).shape_value
    assert e5 == pytest.approx(8 + 32)


def test_thm2_log_factor_at_q_one():
    rep = B.evaluate_bound("thm2", {"N": 1, "Q": 1, "Z": 1, "eps": 0})
    assert rep.shape_value == 2.0
    assert B.thm2_log_factor(2) == math.log(2)


def test_eps_default_and_ratio():
    rep = B.evaluate_bound("E4", {"q0": 100, "delta": 1e-3}, exact=3)
    assert rep.params["eps"] == B.DEFAULT_EPS
    assert rep.ratio == pytest.approx(3 / rep.shape_value)


@pytest.mark.parametrize(
    "kind,params",
    [
        ("thm2", {"N": 1, "Q": 2}),
        ("thm2", {"N": 1, "Q": 2, "Z": 1, "bogus": 3}),
        ("E4", {"q0": 1, "delta": 0.7}),
        ("thm3", {"q0": 1, "delta": 0.1, "r": 0, "z": 0.1}),
        ("thm3", {"q0": 1, "delta": 0.1, "r": 1, "z": 0}),
        ("nope", {}),
    ],
)
def test_bad_params(kind, params):
    with pytest.raises(B.BoundParamError):
        B.evaluate_bound(kind, params)


def test_crossover_equalizes_middle_terms():
    for q0, d, r in [(100, 1e-4, 3), (5000, 1e-6, 700), (1, 0.01, 1)]:
        z = B.crossover_z(q0, d, r)
        a = q0 * r * z
        b = math.sqrt(q0) * d / (math.sqrt(r) * z)
        target = q0**0.75 * d**0.5 * r**0.25
        assert a == pytest.approx(b, rel=1e-12)
        assert a == pytest.approx(target, rel=1e-12)
        thm3 = B.evaluate_bound("thm3", {"q0": q0, "delta": d, "r": r, "z": z, "eps": 0}).shape_value
        thm4 = B.evaluate_bound("thm4", {"q0": q0, "delta": d, "r": r, "z": z, "eps": 0}).shape_value
        assert thm3 - (q0**1.5 * d + d**-0.25) == pytest.approx(target, rel=1e-9)
        assert thm4 - (1 + q0**1.5 * d) == pytest.approx(target, rel=1e-9)


def test_chain_grid_holds():
    pts = B.chain_grid([1, 10, 100, 1000, 10**4], [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    assert len(pts) > 1000
    assert all(c.ok for c in pts)
    # r = 1/sqrt(Delta) at the crossover is the equality case of the min bound
    assert max(c.min_middle / c.e2_rhs for c in pts) == pytest.approx(1, rel=1e-9)


def test_chain_am_gm_identity():
    for q0, d in [(10, 1e-3), (1e4, 1e-6)]:
        c = B.chain_check(q0, d, 1, d)
        assert c.e2_rhs == pytest.approx(math.sqrt(q0**1.5 * d * d**-0.25), rel=1e-14)


def test_lemma2_example_vacuous_and_nonvacuous():
    d = Fraction(1, 10**4)
    ap = dirichlet_approx(Fraction(1, 7) + Fraction(1, 1000), 100)
    assert (ap.b, ap.r, ap.z) == (1, 7, Fraction(1, 1000))
    rep = B.verify_lemma2_inclusion(100, 100 * d / ap.z, ap, d)
    assert rep.ok and rep.counted == 0
    d = Fraction(1, 400)
    ap = RationalApprox(1, 7, Fraction(1, 200), 20.0)
    rep = B.verify_lemma2_inclusion(1000, 1000 * d / ap.z, ap, d)
    assert rep.counted > 0 and rep.ok


def test_lemma2_diagonal_branch():
    # a/q^2 = 1/9 and b/r = 1/9 with r = q^2 = 9 in the block Q0 = 5
    d = Fraction(1, 1024)
    ap = RationalApprox(1, 9, d, 32.0)
    rep = B.verify_lemma2_inclusion(5, 5, ap, d)
    assert rep.counted >= 1
    assert rep.diagonal == 1
    assert rep.ok


def test_lemma2_preconditions():
    d = Fraction(1, 100)
    with pytest.raises(B.PreconditionError):
        B.verify_lemma2_inclusion(10, 10, RationalApprox(1, 3, d / 2, 10.0), d)  # z < Delta
    with pytest.raises(B.PreconditionError):
        B.verify_lemma2_inclusion(10, 20, RationalApprox(1, 3, d, 10.0), d)  # delta > Q0
    with pytest.raises(B.PreconditionError):
        B.verify_lemma2_inclusion(10, 10, RationalApprox(1, 11, d, 10.0), d)  # r > tau
    with pytest.raises(B.PreconditionError):
        B.verify_lemma2_inclusion(10, 5, RationalApprox(1, 3, Fraction(1, 20), 10.0), d)  # delta < Q0 Delta / z


def test_lemma2_detects_a_broken_setup():
    # sanity: a violation is reported when the claimed split is wrong
    d = Fraction(1, 400)
    ap = RationalApprox(1, 7, Fraction(1, 200), 20.0)
    blk = block(1000)
    rep = B.verify_lemma2_inclusion(1000, 1000 * d / ap.z, ap, d)
    assert rep.counted > 0
    bogus = RationalApprox(2, 7, Fraction(1, 200), 20.0)
    rep2 = B.verify_lemma2_inclusion(1000, 1000 * d / bogus.z, bogus, d)
    assert rep2.ok  # still a legal split; different alpha
    assert len(blk) > 0


def test_lemma2_random_draws_small():
    res = B.lemma2_random_check(150, seed=5)
    assert all(rep.ok for _, rep in res)
    assert sum(rep.counted for _, rep in res) > 0
    for draw, _ in res:
        B.check_lemma2_preconditions(draw.q0, draw.delta_param, draw.approx, draw.delta_window)


def test_p_bound_scan_small():
    pts = B.p_bound_scan(B.PGrid(q0_values=(1.0, 50.0), delta_values=(0.5, 1e-2, 1e-5), n_random=3))
    assert len(pts) == 2 * 3 * 4
    for p in pts:
        assert p.chain.ok
        assert {r.kind for r in p.reports} == {"thm3", "thm4", "E1", "E4"}
        assert all(r.exact_value == p.count for r in p.reports)
        assert p.r <= 1 / math.sqrt(p.delta) + 1e-12
        assert p.delta <= p.z_eff <= math.sqrt(p.delta) / p.r * (1 + 1e-12)
    single = [p for p in pts if p.q0 == 1.0 and p.delta == 0.5]
    assert all(p.count <= 1 for p in single)
    assert all(r.shape_value >= 1 for p in single for r in p.reports)


def test_p_bound_scan_small_delta_dominated_by_quarter_power():
    pts = B.p_bound_scan(B.PGrid(q0_values=(10.0,), delta_values=(1e-6,), n_random=2))
    for p in pts:
        e4 = next(r for r in p.reports if r.kind == "E4")
        assert 10**1.5 * 1e-6 < 1e-3 * 1e-6**-0.25
        assert e4.shape_value == pytest.approx(1e-6**-0.05 * (10**1.5 * 1e-6 + 1e-6**-0.25))


def test_p_bound_scan_deterministic():
    g = B.PGrid(q0_values=(30.0,), delta_values=(1e-3,), n_random=5, seed=3)
    a = [(p.alpha, p.count) for p in B.p_bound_scan(g)]
    b = [(p.alpha, p.count) for p in B.p_bound_scan(g)]
    assert a == b


def test_sieve_point_examples():
    p = B.sieve_point(1, 2, seed=0, gen="ones")
    assert p.lhs == pytest.approx(3)
    p = B.sieve_point(5, 1, seed=0, gen="ones")
    assert p.lhs == pytest.approx(25)
    assert p.thm2.shape_value == pytest.approx(5**0.05 * (1 + 5**1.25) * 5)


def test_sieve_ratio_grid_validates():
    with pytest.raises(ValueError):
        B.sieve_ratio_grid([2**15], [2], [0])
    with pytest.raises(ValueError):
        B.sieve_ratio_grid([4], [65], [0])
    with pytest.raises(ValueError):
        B.sieve_ratio_grid([4], [2], [])


def test_sieve_ratio_grid_deterministic_and_ordered():
    a = B.sieve_ratio_grid([32, 64], [2, 3], [0, 1])
    b = B.sieve_ratio_grid([32, 64], [2, 3], [0, 1])
    assert [(p.n, p.q, p.seed) for p in a] == [(n, q, s) for n in (32, 64) for q in (2, 3) for s in (0, 1)]
    assert [p.lhs for p in a] == [p.lhs for p in b]


def test_dyadic_decomposition_matches_full_sum():
    seq = random_phase(256, seed=0)
    parts = sieve_sum_by_blocks(seq, 20)
    assert math.fsum(v for _, v in parts) == pytest.approx(sieve_sum_squares(seq, 20), rel=1e-12)
    assert len(parts) <= 2 * math.log2(20) + 2
