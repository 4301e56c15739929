"""Univariate Laguerre polynomials and the classical bounds on them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .numerics import (DomainError, PoleError, ScaledExp, is_exact, pochhammer, q_value,
                       to_fraction)


@dataclass(frozen=True)
class UnivariateQuery:
    n: int
    alpha: object
    x: object

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("degree n must be non-negative")

    @property
    def exact(self) -> bool:
        return is_exact(self.alpha) and is_exact(self.x)


def _query(q=None, n=None, alpha=None, x=None) -> UnivariateQuery:
    if isinstance(q, UnivariateQuery):
        return q
    if q is not None:
        n = q
    return UnivariateQuery(n, alpha, x)


def check_pole(alpha, n: int) -> None:
    """Raise PoleError if (alpha+1)_j vanishes for some j <= n."""
    c = alpha + 1
    if c == int(c) and c <= 0 and -c <= n - 1:
        raise PoleError(f"alpha+1 = {c} is a pole of the 1F1 form for n = {n}")


def laguerre_uv(q=None, alpha=None, x=None, *, n=None):
    """L_n^(alpha)(x) from the terminating 1F1 sum.

    Accepts a :class:`UnivariateQuery` or ``laguerre_uv(n, alpha, x)``.
    Exact when alpha and x are rational.  Float input is converted to the
    exact binary rational it represents and the result is rounded once, since
    the alternating terms cancel badly in double precision for large x.
    """
    q = _query(q, n, alpha, x)
    n, alpha, x = q.n, q.alpha, q.x
    check_pole(alpha, n)
    exact = q.exact
    if not exact:
        if not (math.isfinite(alpha) and math.isfinite(x)):
            raise ValueError("alpha and x must be finite")
    alpha, x = Fraction(alpha), Fraction(x)
    c = alpha + 1
    total = Fraction(0)
    term = Fraction(1)  # (-n)_j / (c)_j * x^j / j!
    for j in range(n + 1):
        total += term
        term = term * (j - n) * x / ((c + j) * (j + 1))
    value = pochhammer(c, n) / math.factorial(n) * total
    return value if exact else float(value)


def laguerre_uv_recurrence(q=None, alpha=None, x=None, *, n=None):
    """L_n^(alpha)(x) from (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}.

    Defined for every alpha, including the poles of the 1F1 form.
    """
    q = _query(q, n, alpha, x)
    return laguerre_uv_sequence(q.n, q.alpha, q.x)[q.n]


def laguerre_uv_sequence(n_max: int, alpha, x) -> list:
    """[L_0, ..., L_{n_max}] at a single (alpha, x) via the recurrence."""
    if is_exact(alpha) and is_exact(x):
        alpha, x = Fraction(alpha), Fraction(x)
        one = Fraction(1)
    else:
        alpha, x = float(alpha), float(x)
        one = 1.0
    seq = [one]
    if n_max >= 1:
        seq.append(alpha + 1 - x)
    for m in range(1, n_max):
        seq.append(((2 * m + 1 + alpha - x) * seq[m] - (m + alpha) * seq[m - 1]) / (m + 1))
    return seq


def kummer_1f1(a, c, y, tol: float = 1e-16, max_terms: int = 100000) -> float:
    """Confluent series 1F1(a; c; y) for a >= 0, c > 0, y >= 0.

    All terms are non-negative; summation stops once the next term falls
    below ``tol`` times the running sum.
    """
    a, c, y = float(a), float(c), float(y)
    if not c > 0:
        raise DomainError(f"kummer_1f1 requires c > 0, got {c}")
    if a < 0 or y < 0:
        raise DomainError("kummer_1f1 only sums non-negative-term series (a >= 0, y >= 0)")
    total = 1.0
    term = 1.0
    for j in range(max_terms):
        term *= (a + j) * y / ((c + j) * (j + 1))
        if term < tol * total:
            break
        total += term
    return total


# -- classical bounds ---------------------------------------------------------

def _check_x(x) -> None:
    if x < 0:
        raise DomainError(f"bounds require x >= 0, got x = {x}")


def szego_scaled(n: int, alpha, x) -> ScaledExp:
    alpha, x = to_fraction(alpha), to_fraction(x)
    if alpha < 0:
        raise DomainError(f"Szego bound requires alpha >= 0, got alpha = {alpha}")
    _check_x(x)
    coef = pochhammer(alpha + 1, n) / math.factorial(n)
    return ScaledExp(coef * coef, Fraction(0), x / 2)


def rooney1_scaled(n: int, alpha, x) -> ScaledExp:
    alpha, x = to_fraction(alpha), to_fraction(x)
    if alpha > 0:
        raise DomainError(f"Rooney bound 1 requires alpha <= 0, got alpha = {alpha}")
    _check_x(x)
    return ScaledExp(Fraction(1), -alpha, x / 2)


def rooney2_scaled(n: int, alpha, x) -> ScaledExp:
    alpha, x = to_fraction(alpha), to_fraction(x)
    if alpha > Fraction(-1, 2):
        raise DomainError(f"Rooney bound 2 requires alpha <= -1/2, got alpha = {alpha}")
    _check_x(x)
    return ScaledExp(q_value(n)[0], -alpha, x / 2)


def sigma_poly(n: int, alpha, x) -> Fraction:
    """(alpha+1)_n/n! * sigma_n^(alpha)(e^x) = sum_k (alpha+1)_{n-k}/(n-k)! x^k/k!."""
    alpha, x = to_fraction(alpha), to_fraction(x)
    c = alpha + 1
    return sum((pochhammer(c, n - k) / math.factorial(n - k) * x**k / math.factorial(k)
                for k in range(n + 1)), Fraction(0))


def lewandowski_szynal_scaled(n: int, alpha, x) -> ScaledExp:
    alpha, x = to_fraction(alpha), to_fraction(x)
    if alpha < Fraction(-1, 2):
        raise DomainError(
            f"Lewandowski-Szynal bound requires alpha >= -1/2, got alpha = {alpha}")
    _check_x(x)
    s = sigma_poly(n, alpha, x)
    return ScaledExp(s * s, Fraction(0), Fraction(0))


def _args(q, alpha, x):
    if isinstance(q, UnivariateQuery):
        return q.n, q.alpha, q.x
    return q, alpha, x


def szego_bound(q, alpha=None, x=None) -> float:
    """(alpha+1)_n/n! e^(x/2), alpha >= 0."""
    return float(szego_scaled(*_args(q, alpha, x)))


def rooney_bound_1(q, alpha=None, x=None) -> float:
    """2^(-alpha) e^(x/2), alpha <= 0."""
    return float(rooney1_scaled(*_args(q, alpha, x)))


def rooney_bound_2(q, alpha=None, x=None) -> float:
    """q_n 2^(-alpha) e^(x/2), alpha <= -1/2."""
    return float(rooney2_scaled(*_args(q, alpha, x)))


def lewandowski_szynal_bound(q, alpha=None, x=None) -> float:
    """(alpha+1)_n/n! sigma_n^(alpha)(e^x), alpha >= -1/2."""
    return float(lewandowski_szynal_scaled(*_args(q, alpha, x)))


CLASSICAL_SCALED = {
    "szego": szego_scaled,
    "rooney1": rooney1_scaled,
    "rooney2": rooney2_scaled,
    "lewandowski_szynal": lewandowski_szynal_scaled,
}
