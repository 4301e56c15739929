import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from mvlaguerre.laguerre_uv import (UnivariateQuery, kummer_1f1, laguerre_uv,
                                    laguerre_uv_recurrence, laguerre_uv_sequence,
                                    lewandowski_szynal_bound, rooney_bound_1, rooney_bound_2,
                                    szego_bound)
from mvlaguerre.numerics import DomainError, PoleError

rationals = st.fractions(min_value=Fraction(-9, 10), max_value=5, max_denominator=12)
xs = st.fractions(min_value=0, max_value=20, max_denominator=12)


def test_small_values():
    assert laguerre_uv(n=0, alpha=0, x=5) == 1
    assert laguerre_uv(n=1, alpha=0, x=Fraction(1)) == 0
    assert laguerre_uv(n=2, alpha=0, x=Fraction(2)) == -1
    assert laguerre_uv(UnivariateQuery(1, Fraction(1), Fraction(2))) == 0


@given(st.integers(0, 20), rationals, xs)
def test_explicit_matches_recurrence(n, alpha, x):
    assert laguerre_uv(n=n, alpha=alpha, x=x) == laguerre_uv_recurrence(n=n, alpha=alpha, x=x)


def test_against_mpmath():
    for n, a, x in [(5, 0.3, 2.7), (12, 2.0, 9.1), (20, -0.5, 15.0)]:
        ref = float(mpmath.laguerre(n, a, x))
        assert laguerre_uv(n=n, alpha=a, x=x) == pytest.approx(ref, rel=1e-13, abs=1e-13)


def test_generating_function_coefficients():
    # (1-z)^(-a-1) exp(-xz/(1-z)) = sum L_n z^n, compared through degree 12
    a, x = Fraction(3, 2), Fraction(7, 3)
    seq = laguerre_uv_sequence(12, a, x)
    mpmath.mp.dps = 40
    taylor = mpmath.taylor(lambda z: (1 - z) ** (-a - 1) * mpmath.exp(-x * z / (1 - z)), 0, 12)
    mpmath.mp.dps = 15
    for got, ref in zip(seq, taylor):
        assert float(got) == pytest.approx(float(ref), rel=1e-12, abs=1e-12)


def test_pole():
    with pytest.raises(PoleError):
        laguerre_uv(n=3, alpha=-2, x=1)
    # the sequence form is a polynomial in alpha and has no pole
    assert laguerre_uv_sequence(3, -2, 1)[3] == laguerre_uv_sequence(3, Fraction(-2), 1)[3]


def test_kummer():
    assert kummer_1f1(1, 1, 1.0) == pytest.approx(math.e)
    assert kummer_1f1(0.5, 2.5, 3.0) == pytest.approx(float(mpmath.hyp1f1(0.5, 2.5, 3.0)))
    with pytest.raises(DomainError):
        kummer_1f1(1, 1, -1.0)


def test_classical_values():
    assert szego_bound(0, 0, 0) == pytest.approx(1.0)
    assert szego_bound(5, 0, 10) == pytest.approx(math.exp(5))
    # q_0 = 2^(-1/2), so the bound is exactly 1 at alpha = -1/2, x = 0
    assert rooney_bound_2(0, Fraction(-1, 2), 0) == pytest.approx(1.0)
    assert rooney_bound_2(0, -1, 0) == pytest.approx(math.sqrt(2))
    # the sigma factor is a polynomial: 1 at n = 0, (alpha+1) + x at n = 1
    assert lewandowski_szynal_bound(0, 1, 2) == pytest.approx(1.0)
    assert lewandowski_szynal_bound(1, 1, 3) == pytest.approx(5.0)


def test_classical_domains():
    with pytest.raises(DomainError):
        szego_bound(3, Fraction(-1, 4), 1)
    with pytest.raises(DomainError):
        rooney_bound_1(3, Fraction(1, 4), 1)
    with pytest.raises(DomainError):
        rooney_bound_2(3, Fraction(-1, 4), 1)
    with pytest.raises(DomainError):
        lewandowski_szynal_bound(3, Fraction(-3, 4), 1)
    with pytest.raises(DomainError):
        szego_bound(3, 1, -1)


@given(st.integers(0, 30), st.fractions(min_value=-3, max_value=Fraction(-1, 2), max_denominator=4),
       st.fractions(min_value=0, max_value=50, max_denominator=4))
def test_rooney2_below_rooney1(n, alpha, x):
    assert rooney_bound_2(n, alpha, x) <= rooney_bound_1(n, alpha, x) * (1 + 1e-12)
