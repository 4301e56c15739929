"""Exact rational and log-domain arithmetic.

Exact quantities are :class:`fractions.Fraction` instances (always stored in
lowest terms).  Quantities too large for a double are carried as
:class:`LogValue`, a sign plus the natural log of the magnitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Union

ExactScalar = Fraction
Number = Union[int, float, Fraction]

LN2 = math.log(2.0)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class DomainError(ValueError):
    """A parameter lies outside the domain of the requested operation."""


class PoleError(ZeroDivisionError):
    """A Pochhammer denominator vanishes."""


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, ``p/q`` strings and decimal strings exactly.

    Floats are converted through their shortest decimal repr, so ``0.1``
    becomes ``1/10`` rather than the binary approximation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot convert {value!r} to a rational")
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        s = value.strip()
        try:
            return Fraction(s)
        except ValueError:
            return Fraction(Decimal(s))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def log_fraction(value: Fraction) -> float:
    """Natural log of a positive rational of any size."""
    if value <= 0:
        raise DomainError("log of a non-positive rational")
    return _log_int(value.numerator) - _log_int(value.denominator)


def _log_int(n: int) -> float:
    bits = n.bit_length()
    if bits < 1000:
        return math.log(n)
    shift = bits - 64
    return math.log(n >> shift) + shift * LN2


def fraction_to_float(value: Fraction) -> float:
    """Correctly rounded float, or +/-inf if out of range."""
    try:
        return value.numerator / value.denominator
    except OverflowError:
        return math.copysign(math.inf, value)


# -- Pochhammer symbols -------------------------------------------------------

def pochhammer(a, n: int):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1).

    Exact for int/Fraction ``a``; float otherwise.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if is_exact(a):
        a = Fraction(a)
        if a.denominator == 1:
            return Fraction(_int_rising(a.numerator, n))
        # (p/q)_n = prod(p + i q) / q^n
        p, q = a.numerator, a.denominator
        num = 1
        for i in range(n):
            num *= p + i * q
        return Fraction(num, q**n)
    result = 1.0
    for i in range(n):
        result *= a + i
    return result


def _int_rising(a: int, n: int) -> int:
    if n == 0:
        return 1
    if a > 0:
        return math.perm(a + n - 1, n)
    if a + n - 1 >= 0:
        return 0
    # all factors negative
    return (-1) ** n * math.perm(-a, n)


@dataclass(frozen=True)
class LogValue:
    """Signed value stored as ``sign * exp(log_magnitude)``."""

    sign: int
    log_magnitude: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")

    @classmethod
    def from_number(cls, value) -> "LogValue":
        if isinstance(value, Fraction) or isinstance(value, int):
            value = Fraction(value)
            if value == 0:
                return cls(0)
            return cls(1 if value > 0 else -1, log_fraction(abs(value)))
        if value == 0:
            return cls(0)
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    def __mul__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            other = LogValue.from_number(other)
        sign = self.sign * other.sign
        if sign == 0:
            return LogValue(0)
        return LogValue(sign, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            other = LogValue.from_number(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogValue")
        if self.sign == 0:
            return LogValue(0)
        return LogValue(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __pow__(self, p: float) -> "LogValue":
        if self.sign == 0:
            return LogValue(0)
        if self.sign < 0 and not float(p).is_integer():
            raise DomainError("non-integer power of a negative LogValue")
        sign = -1 if (self.sign < 0 and int(p) % 2) else 1
        return LogValue(sign, self.log_magnitude * p)

    def _key(self):
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.log_magnitude)

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __gt__(self, other):
        return self._key() > other._key()

    def __ge__(self, other):
        return self._key() >= other._key()

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_magnitude > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_magnitude)


# -- log-gamma ----------------------------------------------------------------

# B_2, B_4, ..., B_20
_BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330),
]
_STIRLING = [float(b / (2 * j * (2 * j - 1))) for j, b in enumerate(_BERNOULLI, start=1)]
_EULER_GAMMA = 0.57721566490153286061


def _zeta(s: int) -> float:
    # Euler-Maclaurin with cutoff N = 10
    N = 10
    total = math.fsum(n ** -s for n in range(1, N))
    total += N ** (1 - s) / (s - 1) + 0.5 * N ** -s
    fall = s
    for j, b in enumerate(_BERNOULLI, start=1):
        term = float(b) / math.factorial(2 * j) * fall * N ** (-s - 2 * j + 1)
        total += term
        fall *= (s + 2 * j - 1) * (s + 2 * j)
    return total


_TAYLOR_TERMS = 60
# lgamma(1+e) = -gamma*e + sum_{k>=2} (-1)^k zeta(k)/k e^k
_LGAMMA1_COEF = [0.0, -_EULER_GAMMA] + [
    (-1) ** k * _zeta(k) / k for k in range(2, _TAYLOR_TERMS)
]


def _lgamma1p(e: float) -> float:
    """log Gamma(1+e) for |e| <= 1/2, accurate relative to its value."""
    acc = 0.0
    for c in reversed(_LGAMMA1_COEF):
        acc = acc * e + c
    return acc


def _stirling_tail(m: float) -> float:
    """sum_j B_2j / (2j(2j-1) m^(2j-1)), the correction in Stirling's series."""
    inv = 1.0 / m
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    return series * inv


def _stirling(x: float) -> float:
    return (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + _stirling_tail(x)


def log_gamma(x) -> float:
    """log Gamma(x) for x > 0.

    Stirling's series with Bernoulli terms through B_20 for x >= 8, an
    upward shift below that, and a Taylor series about 1 on [0.5, 2.5) so
    the zeros at x = 1 and x = 2 keep full relative accuracy.
    """
    x = float(x)
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if 0.5 <= x < 1.5:
        return _lgamma1p(x - 1.0)
    if 1.5 <= x < 2.5:
        e = x - 2.0
        return _lgamma1p(e) + math.log1p(e)
    if x >= 8.0:
        return _stirling(x)
    shift = 0.0
    prod = 1.0
    while x < 8.0:
        prod *= x
        x += 1.0
    shift = math.log(prod)
    return _stirling(x) - shift


def log_pochhammer(a, n: int) -> LogValue:
    """(a)_n in the log domain, for a > 0."""
    a = float(a)
    if not a > 0:
        raise DomainError(f"log_pochhammer requires a > 0, got {a}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return LogValue(1, 0.0)
    if n <= 32:
        return LogValue(1, math.fsum(math.log(a + i) for i in range(n)))
    return LogValue(1, log_gamma(a + n) - log_gamma(a))


# -- q_n ----------------------------------------------------------------------

@lru_cache(maxsize=4096)
def q_square(n: int) -> Fraction:
    """q_n^2 = (2n)! / (2^(2n+1) (n!)^2) = C(2n, n) / 2^(2n+1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return Fraction(math.comb(2 * n, n), 2 ** (2 * n + 1))


def q_value(n: int) -> tuple[Fraction, float]:
    """Return ``(q_n^2 exactly, q_n as a float)``."""
    sq = q_square(n)
    return sq, math.sqrt(sq.numerator / sq.denominator)


def log_q(n: int) -> float:
    """log q_n; exact square for small n, else the central-binomial expansion.

    Subtracting log-gammas of size n log n would lose about n log n * 1e-16
    in absolute terms, so the leading terms are cancelled analytically:
    log q_n^2 = -log 2 - log(pi n)/2 + S(2n) - 2 S(n), S the Stirling tail.
    """
    if n <= 64:
        return 0.5 * log_fraction(q_square(n))
    return 0.5 * (-LN2 - 0.5 * math.log(math.pi * n) + _stirling_tail(2.0 * n)
                  - 2.0 * _stirling_tail(float(n)))


# -- exact exponential enclosures ----------------------------------------------

def exp_enclosure(t: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= exp(t) <= hi`` for t >= 0 from a Taylor polynomial.

    The upper end adds the tail bound t^(m)/m! * 1/(1 - t/(m+1)) with
    m = terms, valid once m + 1 > t.
    """
    t = Fraction(t)
    if t < 0:
        raise DomainError("exp_enclosure needs t >= 0")
    if t == 0:
        return Fraction(1), Fraction(1)
    m = max(terms, int(t) + 2)
    lo = Fraction(0)
    term = Fraction(1)
    for i in range(m):
        lo += term
        term = term * t / (i + 1)
    # term is now t^m / m!
    hi = lo + term / (1 - t / (m + 1))
    return lo, hi


def exact_leq_scaled_exp(value: Fraction, coef_sq: Fraction, pow2: Fraction,
                         t: Fraction, max_terms: int = 4096) -> bool | None:
    """Decide ``|value| <= sqrt(coef_sq) * 2**pow2 * exp(t)`` exactly.

    Returns None only if the enclosure of exp(t) cannot separate the two
    sides within ``max_terms`` Taylor terms (an exact tie with t > 0 is
    impossible since e^t is irrational).
    """
    value = abs(Fraction(value))
    coef_sq = Fraction(coef_sq)
    pow2 = Fraction(pow2)
    if value == 0:
        return True
    if coef_sq <= 0:
        return False
    p, q = pow2.numerator, pow2.denominator
    # raise both sides to the power 2q: (|v|/e^t)^(2q) vs coef_sq^q 2^(2p)
    rhs = coef_sq**q * (Fraction(2) ** (2 * p))
    terms = 24 + int(t)
    while terms <= max_terms:
        lo, hi = exp_enclosure(t, terms)
        if (value / lo) ** (2 * q) <= rhs:
            return True
        if (value / hi) ** (2 * q) > rhs:
            return False
        terms *= 2
    return None


@dataclass(frozen=True)
class ScaledExp:
    """The positive value sqrt(coef_sq) * 2**pow2 * exp(exp_arg), kept exactly."""

    coef_sq: Fraction
    pow2: Fraction
    exp_arg: Fraction

    @property
    def log_value(self) -> float:
        return 0.5 * log_fraction(self.coef_sq) + float(self.pow2) * LN2 + float(self.exp_arg)

    @property
    def coefficient(self) -> float:
        """sqrt(coef_sq) * 2**pow2, without the exponential."""
        return math.exp(0.5 * log_fraction(self.coef_sq) + float(self.pow2) * LN2)

    def __float__(self) -> float:
        lv = self.log_value
        return math.exp(lv) if lv < 709.78 else math.inf

    def as_log(self) -> LogValue:
        return LogValue(1, self.log_value)

    def exceeds_or_equals(self, value) -> bool | None:
        """Exact test of ``|value| <= self``."""
        return exact_leq_scaled_exp(value, self.coef_sq, self.pow2, self.exp_arg)
