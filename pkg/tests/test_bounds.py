import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mvlaguerre import bounds as bd
from mvlaguerre.laguerre_mv import laguerre_mv
from mvlaguerre.laguerre_uv import szego_scaled
from mvlaguerre.numerics import DomainError, ScaledExp, pochhammer


def test_theorem1_example():
    r = bd.theorem1_bound((1, 1), 1, (0, 0))
    assert r.scaled.coef_sq == 48 ** 2 and r.scaled.pow2 == 0
    assert r.coefficient == pytest.approx(48)
    assert r.tightness == pytest.approx(0.125)
    r = bd.theorem1_bound((1, 1), 1, (2, 2))
    assert r.value == -2
    assert float(r.bound_value) == pytest.approx(48 * math.e)
    assert r.verdict == bd.PASS


def test_theorem1_domain():
    with pytest.raises(DomainError):
        bd.theorem1_bound((1, 1), 0, (1, 1))
    with pytest.raises(DomainError):
        bd.theorem1_bound((1, 1), 1, (1, -1))


@given(st.integers(0, 25), st.fractions(min_value=0, max_value=5, max_denominator=8),
       st.fractions(min_value=0, max_value=40, max_denominator=4))
def test_theorem1_k1_is_szego(n, a, x):
    r = bd.theorem1_bound((n,), a, (x,), evaluate=False)
    s = szego_scaled(n, a, x)
    assert (r.scaled.coef_sq, r.scaled.pow2, r.scaled.exp_arg) == (s.coef_sq, s.pow2, s.exp_arg)


def test_theorem2_examples():
    r = bd.theorem2_bound((1, 1), 1, (0, 0))
    assert r.coefficient == pytest.approx(0.25 * 2 ** 1.5 * 6 / (1 / 16), rel=1e-14)
    assert r.coefficient == pytest.approx(67.882, abs=1e-3)
    for n in range(8):
        r = bd.theorem2_bound((n,), Fraction(1, 3), (0,), evaluate=False)
        expected = math.sqrt(math.factorial(n) / float(pochhammer(Fraction(1, 2), n))) \
            * float(pochhammer(Fraction(4, 3), n)) / math.factorial(n)
        assert r.coefficient == pytest.approx(expected, rel=1e-13)


def test_theorem2_domains():
    with pytest.raises(DomainError):
        bd.theorem2_bound((1, 1), Fraction(-1, 2), (1, 1))
    r = bd.theorem2_bound((1, 1), Fraction(-3, 4), (1, 1), extended=True)
    assert r.extended
    with pytest.raises(DomainError):
        bd.theorem2_bound((1, 1), -1, (1, 1), extended=True)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=3),
       st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=10))
def test_value_at_origin_below_coefficient(n, a):
    v = laguerre_mv(n, a, (0,) * len(n))
    for r in (bd.theorem1_bound(n, a, (0,) * len(n)), bd.theorem2_bound(n, a, (0,) * len(n))):
        assert r.scaled.exceeds_or_equals(v)
        # k = 1, n = 0 is an exact equality, reported as NEAR_TIGHT
        assert r.verdict != bd.VIOLATION


def test_classify_exact_tie():
    # Rooney 2 at alpha = -1/2, n = 0, x = 0 is an exact equality
    r = bd.classical_bound("rooney2", 0, Fraction(-1, 2), 0)
    assert r.verdict == bd.NEAR
    assert r.tightness == pytest.approx(1.0)
    t, verdict = bd.classify(Fraction(2), ScaledExp(Fraction(1), Fraction(0), Fraction(0)))
    assert verdict == bd.VIOLATION and t == pytest.approx(2.0)


def test_ab_examples():
    a, b = bd.ab_coefficients(1, 1, 2)
    assert float(a) == pytest.approx(48)
    assert float(b) == pytest.approx(67.882, abs=1e-3)
    assert math.exp(bd.log_ab_ratio(1, 2)) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert math.exp(bd.log_ab_ratio(2, 2)) == pytest.approx(25 / (27 * math.sqrt(2)), rel=1e-14)
    for k in (1, 2, 3):
        a0, b0 = bd.ab_coefficients_exact(0, 1, k)
        assert a0 == 2 ** (k - 1)
        # B_0^2 = q_0^(2k) 2^(2k-1) = 2^(k-1)
        assert b0 == 2 ** (k - 1)


@given(st.integers(0, 12), st.integers(1, 3))
def test_ab_match_theorem_coefficients(n, k):
    a, b_sq = bd.ab_coefficients_exact(n, Fraction(3, 2), k)
    t1 = bd.theorem1_bound((n,) * k, Fraction(3, 2), (0,) * k, evaluate=False)
    t2 = bd.theorem2_bound((n,) * k, Fraction(3, 2), (0,) * k, evaluate=False)
    assert a ** 2 == t1.scaled.coef_sq * Fraction(4) ** t1.scaled.pow2
    assert b_sq == t2.scaled.coef_sq * Fraction(4) ** t2.scaled.pow2


@given(st.integers(0, 20), st.integers(1, 4))
def test_ab_ratio_independent_of_alpha(n, k):
    ratios = set()
    for a in (Fraction(1, 10), Fraction(1), Fraction(7, 2)):
        a_val, b_sq = bd.ab_coefficients_exact(n, a, k)
        ratios.add(a_val ** 2 / b_sq)
    assert len(ratios) == 1
    assert ratios.pop() == bd.ab_ratio_squared_exact(n, k)


def test_log_path_matches_exact():
    for n in (0, 1, 7, 30, 50):
        for k in (1, 2, 3):
            a, b = bd.ab_coefficients(n, Fraction(1, 2), k)
            ae, be_sq = bd.ab_coefficients_exact(n, Fraction(1, 2), k)
            assert a.log_magnitude == pytest.approx(math.log(ae), rel=1e-13, abs=1e-13)
            assert b.log_magnitude == pytest.approx(0.5 * math.log(be_sq), rel=1e-13, abs=1e-13)


def test_asymptote_constants():
    assert bd.asymptote_constant(2, "derived") == pytest.approx(0.59907, abs=1e-5)
    assert bd.asymptote_constant(2, "paper") == pytest.approx(10.4882, abs=1e-4)
    assert bd.ratio_asymptote(5, 2, "derived") == bd.asymptote_constant(2, "derived")
    assert math.exp(bd.log_ab_ratio(10 ** 5, 2)) == pytest.approx(0.5991, abs=0.01)


def test_fit_ratio_exponent():
    ns = [10 * 2 ** i for i in range(14)]
    for k in (2, 3, 4):
        slope, _ = bd.fit_ratio_exponent(k, ns)
        assert slope == pytest.approx(k / 4 - 0.5, abs=0.01)
    with pytest.raises(ValueError):
        bd.fit_ratio_exponent(2, [1, 2, 3])
    with pytest.raises(ValueError):
        bd.fit_ratio_exponent(2, [5, 4, 6, 7])


def test_envelope_winner():
    assert bd.envelope_winner(1, 2) == "theorem1"
    assert bd.envelope_winner(10 ** 4, 4) == "theorem2"


def test_theorem2_extended_range_counterexample():
    # below alpha = -1/2 the stated bound can fail; an exact witness
    r = bd.theorem2_bound((0, 6), Fraction(-9, 10), (0, 20), extended=True)
    assert r.value == Fraction(6691431192451, 720000000)
    assert r.scaled.exceeds_or_equals(r.value) is False
    assert r.verdict == bd.VIOLATION and r.extended
