import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mirs.diophantine import (
    CFTheta,
    badness_check,
    badness_values,
    bend_constant,
    bend_inequality_check,
    build_theta,
    pj_subsequence,
    pj_witness_indices,
    pj_witness_lower_bound,
    pj_witness_norm,
)
from mirs.constructions import pj_matrices
from mirs.engine import evaluate_witness
from mirs.errors import (
    DegenerateAngle,
    DegenerateInput,
    DepthTooShallow,
    NoEligibleDenominators,
    PrecisionExhausted,
)


def test_golden_angle(golden):
    assert golden.quotients == [1] * 40
    assert [q for _, q in golden.convergents[:8]] == [1, 2, 3, 5, 8, 13, 21, 34]
    assert golden.vartheta.startswith("0.6180339887498948482045868343656381177203")
    assert len(golden.vartheta) == 2 + 120
    assert golden.theta == pytest.approx(math.pi * (5 ** 0.5 - 1) / 2, rel=1e-15)


def test_gamma_two_quotients():
    cf = build_theta(2, 8, kappa_range=None)
    assert cf.quotients[:6] == [1, 1, 2, 5, 27, 734]
    assert [q for _, q in cf.convergents[:5]] == [1, 2, 5, 27, 734]


@pytest.mark.parametrize("gamma", [1.0, 2.0, 3.0])
def test_recurrences_exact(gamma):
    cf = build_theta(gamma, 10, kappa_range=None)
    assert cf.quotients[0] == 1
    p2, q2, p1, q1 = 1, 0, 0, 1
    for a, (p, q) in zip(cf.quotients, cf.convergents):
        assert a == q1 ** (int(gamma) - 1)
        assert p == a * p1 + p2 and q == a * q1 + q2
        p2, q2, p1, q1 = p1, q1, p, q


def test_non_integer_gamma_quotients():
    cf = build_theta(1.5, 8, kappa_range=None)
    prev_q = 1
    for a, (_, q) in zip(cf.quotients, cf.convergents):
        assert a - 1 < prev_q ** 0.5 <= a
        prev_q = q


@pytest.mark.parametrize("gamma", [1.0, 2.0])
def test_convergents_bracket_vartheta(gamma):
    from fractions import Fraction
    cf = build_theta(gamma, 12, kappa_range=None)
    P, Q = cf.ref
    v = Fraction(P, Q)
    conv = cf.convergents
    for (p, q), (_, q_next) in zip(conv, conv[1:]):
        # equality only when the reference is the next convergent itself
        assert abs(v - Fraction(p, q)) <= Fraction(1, q * q_next)
        # upper-bound half of the badness construction
        assert abs(q * v - p) * Fraction(q) ** int(gamma) < 1


def test_depth_and_gamma_checks():
    with pytest.raises(DepthTooShallow):
        build_theta(1, 1)
    with pytest.raises(DegenerateInput):
        build_theta(0.5, 5)


def test_rational_angle_flags_failure():
    cf = CFTheta.rational(1, 2)
    assert cf.theta == pytest.approx(math.pi / 2)
    rep = badness_check(cf, 2)
    assert rep.inf_value == 0.0 and rep.argmin == 2 and not rep.ok


def test_golden_badness(golden):
    rep = badness_check(golden, 100_000)
    assert rep.inf_value == pytest.approx(2 / 5 ** 0.5, rel=0.05)
    assert rep.ok
    for _, q in golden.convergents:
        s, _, _ = golden.sincos(q)
        assert q * abs(s) <= math.pi


def test_lower_bound_invariant():
    for gamma, N in ((1.0, 100_000), (2.0, 10_000)):
        cf = build_theta(gamma, 12, kappa_range=None)
        assert badness_values(cf, N).min() >= (1 / 6) * (2 / math.pi) * (1 - 1e-9)


def test_precision_exhausted(golden):
    cf = build_theta(1, 5, digits=10, kappa_range=None)
    with pytest.raises(PrecisionExhausted):
        badness_check(cf, 100_000)


def test_sincos_matches_float_for_small_n(golden):
    for n in (1, 2, 7, 100, 1000):
        s, c, _ = golden.sincos(n)
        assert s == pytest.approx(math.sin(n * golden.theta), abs=1e-12)
        assert c == pytest.approx(math.cos(n * golden.theta), abs=1e-12)


def test_sincos_huge_n(golden):
    import mpmath
    n = 10 ** 12 + 39
    s, _, _ = golden.sincos(n)
    with mpmath.workdps(60):
        ref = mpmath.sin(n * mpmath.pi * (mpmath.sqrt(5) - 1) / 2)
    assert s == pytest.approx(float(ref), rel=1e-12)


def test_bend_examples():
    C = bend_constant(1, 1)
    assert C >= 2 * 6
    C, viol = bend_inequality_check(1, 1, [math.pi / 2], np.geomspace(1, 100, 50))
    assert viol <= 0
    phi = np.linspace(0, math.pi, 2002)[1:-1]
    _, viol = bend_inequality_check(1, 1, phi, np.geomspace(1, 1e3, 300))
    assert viol <= 1e-12


def test_bend_rejects_bad_grids():
    with pytest.raises(DegenerateInput):
        bend_inequality_check(1, 1, [0.0], [1.0])
    with pytest.raises(DegenerateInput):
        bend_inequality_check(1, 1, [1.0], [0.5])


def test_witness_norm_single_block(golden):
    s, c, _ = golden.sincos(3)
    expected = np.linalg.norm([[1, s], [0, c]], 2)
    assert pj_witness_norm(golden, 3, 1) == pytest.approx(expected, rel=1e-12)


def test_witness_norm_matches_product(golden):
    pj = pj_matrices(1 / 3, golden.theta)
    w = pj_witness_indices(3, 4)
    assert len(w) == 20
    assert pj_witness_norm(golden, 3, 4) == pytest.approx(evaluate_witness(pj, w), rel=1e-9)


def test_witness_oracle_all_small(golden):
    pj = pj_matrices(1 / 3, golden.theta)
    for n in range(1, 31):
        for m in range(1, 30 // n + 1):
            assert pj_witness_norm(golden, n, m) == pytest.approx(
                evaluate_witness(pj, pj_witness_indices(n, m)), rel=1e-9)


def test_witness_lower_bound(golden):
    for t in pj_subsequence(golden, 10):
        n = 2 * t.q
        _, c, _ = golden.sincos(n)
        assert c > 0
        assert pj_witness_norm(golden, n, t.m) >= pj_witness_lower_bound(golden, n, t.m) * (1 - 1e-12)


def test_witness_huge_m_no_underflow(golden):
    v = pj_witness_norm(golden, 1, 10 ** 9)
    s, c, _ = golden.sincos(1)
    assert v == pytest.approx(np.linalg.norm([[1, s / (1 - c)], [0, 0]], 2), rel=1e-12)


def test_degenerate_angle():
    with pytest.raises(DegenerateAngle):
        pj_witness_norm(CFTheta.rational(1, 2), 4, 3)


def test_subsequence(golden):
    terms = pj_subsequence(golden, 15)
    t13 = next(t for t in terms if t.q == 13)
    assert t13.m == 169 and t13.n == 169 * 28
    assert len({t.q for t in terms}) == 15
    ratios = [b.n / a.n for a, b in zip(terms, terms[1:])]
    assert max(ratios) < 10
    assert ratios[-1] == pytest.approx(((1 + 5 ** 0.5) / 2) ** 3, rel=0.01)


def test_subsequence_eligibility():
    cf = build_theta(2, 6, kappa_range=None)
    terms = pj_subsequence(cf, 2)
    assert terms[0].q > 1
    with pytest.raises(NoEligibleDenominators):
        pj_subsequence(cf, 50)


@given(st.integers(1, 10 ** 15))
def test_frac_consistent(n):
    cf = build_theta(1, 3, kappa_range=None)
    r, parity = cf.frac(n)
    assert -0.5 <= r <= 0.5
    s, c, omc = cf.sincos(n)
    assert abs(s * s + c * c - 1) < 1e-12
    assert omc == pytest.approx(1 - abs(c), abs=1e-15)
