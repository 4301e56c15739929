"""Upper bounds for the multivariate Laguerre polynomials and their diagonal envelopes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import laguerre_uv as uv
from .laguerre_mv import LaguerrePoly, MultiIndex, as_index, as_point
from .numerics import (LN2, DomainError, LogValue, ScaledExp, log_gamma, log_pochhammer, log_q,
                       pochhammer, q_square, to_fraction)

NEAR_TIGHT = 1.0 - 1e-6
GUARD = 1e-9
EXACT_ENVELOPE_CAP = 50

PASS, NEAR, VIOLATION = "PASS", "NEAR_TIGHT", "VIOLATION"
SOURCES = ("theorem1", "theorem2", "szego", "rooney1", "rooney2", "lewandowski_szynal")


def classify(value, scaled: ScaledExp) -> tuple[float, str]:
    """Tightness |value|/bound and a verdict.

    Float comparison decides clear passes; anything above the near-tight
    threshold is settled by the exact comparison against rational
    enclosures of the exponential.
    """
    if value == 0:
        return 0.0, PASS
    if isinstance(value, float):
        mag = math.log(abs(value))
    else:
        mag = LogValue.from_number(value).log_magnitude
    tightness = math.exp(mag - scaled.log_value)
    if tightness <= NEAR_TIGHT:
        return tightness, PASS
    exact_value = value if isinstance(value, Fraction) else Fraction(value)
    holds = scaled.exceeds_or_equals(exact_value)
    if holds is True:
        return tightness, NEAR
    if holds is False:
        return tightness, VIOLATION
    return tightness, VIOLATION if tightness > 1 + GUARD else NEAR


@dataclass(frozen=True)
class BoundReport:
    source: str
    k: int
    n: tuple[int, ...]
    alpha: Fraction
    x: tuple
    scaled: ScaledExp
    value: Fraction | None = None
    tightness: float | None = None
    verdict: str | None = None
    extended: bool = False

    @property
    def bound_value(self) -> float | LogValue:
        """The bound as a float, or a LogValue when it overflows a double."""
        b = float(self.scaled)
        return b if math.isfinite(b) else self.scaled.as_log()

    @property
    def log_bound(self) -> float:
        return self.scaled.log_value

    @property
    def coefficient(self) -> float:
        return self.scaled.coefficient

    @property
    def flagged(self) -> bool:
        return self.verdict == VIOLATION


def _prepare(n, alpha, x):
    n, x = as_index(n), as_point(x)
    if n.k != x.k:
        raise ValueError(f"index has k = {n.k} but point has k = {x.k}")
    alpha = to_fraction(alpha)
    coords = tuple(to_fraction(c) for c in x)
    if any(c < 0 for c in coords):
        raise DomainError("bounds require every coordinate x_j >= 0")
    return n, alpha, coords


def theorem1_scaled(n: MultiIndex, alpha: Fraction, coords) -> ScaledExp:
    k = n.k
    coef = Fraction(2 ** (k - 1)) * pochhammer(alpha + 1, n.total)
    for nj in n:
        coef /= pochhammer(Fraction(1, k), nj)
    return ScaledExp(coef * coef, Fraction(0), max(coords) / 2)


def theorem2_scaled(n: MultiIndex, alpha: Fraction, coords) -> ScaledExp:
    k = n.k
    coef = pochhammer(alpha + 1, n.total)
    qsq = Fraction(1)
    for nj in n:
        coef /= pochhammer(Fraction(1, 2 * k), nj)
        qsq *= q_square(nj)
    # (2^(k - 1/2))^2 = 2^(2k - 1)
    return ScaledExp(qsq * 2 ** (2 * k - 1) * coef * coef, Fraction(0), max(coords) / 2)


def _evaluate(n, alpha, coords, evaluate: bool, value):
    if value is not None or not evaluate:
        return value
    # polynomial form has no poles in alpha
    return LaguerrePoly.build(n, alpha).eval_exact(coords)


def _report(source, n, alpha, coords, scaled, value, extended=False) -> BoundReport:
    tightness = verdict = None
    if value is not None:
        tightness, verdict = classify(value, scaled)
    return BoundReport(source, n.k, n.entries, alpha, coords, scaled, value,
                       tightness, verdict, extended)


def theorem1_bound(n, alpha, x, *, evaluate: bool = True, value=None) -> BoundReport:
    """2^(k-1) (alpha+1)_{|n|} / prod (1/k)_{n_j} * e^(|x|/2), for alpha > 0.

    At k = 1 this is Szego's bound, so alpha = 0 is admitted there as well.
    """
    n, alpha, coords = _prepare(n, alpha, x)
    if alpha < 0 or (alpha == 0 and n.k > 1):
        raise DomainError(f"theorem1 bound requires alpha > 0, got alpha = {alpha}")
    value = _evaluate(n, alpha, coords, evaluate, value)
    return _report("theorem1", n, alpha, coords, theorem1_scaled(n, alpha, coords), value)


def theorem2_bound(n, alpha, x, *, extended: bool = False, evaluate: bool = True,
                   value=None) -> BoundReport:
    """prod q_{n_j} 2^(k-1/2) (alpha+1)_{|n|} / prod (1/(2k))_{n_j} * e^(|x|/2).

    The default domain is alpha > -1/2.  ``extended=True`` admits
    alpha in (-1, -1/2]; such reports carry ``extended=True``.
    """
    n, alpha, coords = _prepare(n, alpha, x)
    in_extension = -1 < alpha <= Fraction(-1, 2)
    if alpha <= -1 or (in_extension and not extended):
        raise DomainError(
            f"theorem2 bound requires alpha > -1/2 (alpha > -1 in extended mode), "
            f"got alpha = {alpha}")
    value = _evaluate(n, alpha, coords, evaluate, value)
    return _report("theorem2", n, alpha, coords, theorem2_scaled(n, alpha, coords), value,
                   extended=in_extension)


def classical_bound(source: str, n: int, alpha, x, *, evaluate: bool = True,
                    value=None) -> BoundReport:
    """One of the univariate bounds, wrapped as a BoundReport."""
    alpha, xf = to_fraction(alpha), to_fraction(x)
    scaled = uv.CLASSICAL_SCALED[source](n, alpha, xf)
    if value is None and evaluate:
        value = uv.laguerre_uv_recurrence(n, alpha, xf)
    return _report(source, MultiIndex((n,)), alpha, (xf,), scaled, value)


def bound_report(source: str, n, alpha, x, *, extended: bool = False, value=None,
                 evaluate: bool = True) -> BoundReport:
    if source == "theorem1":
        return theorem1_bound(n, alpha, x, value=value, evaluate=evaluate)
    if source == "theorem2":
        return theorem2_bound(n, alpha, x, extended=extended, value=value, evaluate=evaluate)
    if source in uv.CLASSICAL_SCALED:
        n = as_index(n)
        x = as_point(x)
        if n.k != 1:
            raise DomainError(f"{source} is a univariate bound; got k = {n.k}")
        return classical_bound(source, n.entries[0], alpha, x.coords[0], value=value,
                               evaluate=evaluate)
    raise ValueError(f"unknown bound source {source!r}")


def in_domain(source: str, alpha: Fraction, extended: bool = False) -> bool:
    """Whether alpha lies in the domain where ``source`` is asserted (or reported)."""
    if source == "theorem1":
        return alpha > 0
    if source == "theorem2":
        return alpha > (-1 if extended else Fraction(-1, 2))
    if source == "szego":
        return alpha >= 0
    if source == "rooney1":
        return alpha <= 0
    if source == "rooney2":
        return alpha <= Fraction(-1, 2)
    if source == "lewandowski_szynal":
        return alpha >= Fraction(-1, 2)
    raise ValueError(f"unknown bound source {source!r}")


def is_asserted(source: str, alpha: Fraction) -> bool:
    return in_domain(source, alpha, extended=False)


# -- diagonal envelopes A_n, B_n -------------------------------------------------------

def _log_poch_ratio(a: float, b: float, n: int) -> float:
    """log((a)_n / (b)_n)."""
    if n <= 64:
        return math.fsum(math.log((a + i) / (b + i)) for i in range(n))
    return (log_gamma(a + n) - log_gamma(b + n)) - (log_gamma(a) - log_gamma(b))


def _log_poch(a: float, n: int) -> float:
    return log_pochhammer(a, n).log_magnitude


def ab_coefficients(n: int, alpha, k: int) -> tuple[LogValue, LogValue]:
    """(A_n(alpha,k), B_n(alpha,k)) in the log domain.

    A_n = 2^(k-1) (alpha+1)_{kn} / ((1/k)_n)^k,
    B_n = q_n^k 2^(k-1/2) (alpha+1)_{kn} / ((1/(2k))_n)^k.
    """
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    lead = _log_poch(float(alpha) + 1, k * n)
    log_a = (k - 1) * LN2 + lead - k * _log_poch(1.0 / k, n)
    log_b = k * log_q(n) + (k - 0.5) * LN2 + lead - k * _log_poch(1.0 / (2 * k), n)
    return LogValue(1, log_a), LogValue(1, log_b)


def ab_coefficients_exact(n: int, alpha, k: int) -> tuple[Fraction, Fraction]:
    """(A_n exactly, B_n^2 exactly); restricted to n <= 50."""
    if n > EXACT_ENVELOPE_CAP:
        raise ValueError(f"exact envelopes are capped at n = {EXACT_ENVELOPE_CAP}")
    alpha = to_fraction(alpha)
    lead = pochhammer(alpha + 1, k * n)
    a = Fraction(2 ** (k - 1)) * lead / pochhammer(Fraction(1, k), n) ** k
    b_over = lead / pochhammer(Fraction(1, 2 * k), n) ** k
    b_sq = q_square(n) ** k * 2 ** (2 * k - 1) * b_over * b_over
    return a, b_sq


def ab_ratio_squared_exact(n: int, k: int) -> Fraction:
    """(A_n/B_n)^2 = (1/2) q_n^(-2k) ((1/(2k))_n / (1/k)_n)^(2k); free of alpha."""
    r = pochhammer(Fraction(1, 2 * k), n) / pochhammer(Fraction(1, k), n)
    return Fraction(1, 2) / q_square(n) ** k * r ** (2 * k)


def log_ab_ratio(n: int, k: int) -> float:
    """log(A_n / B_n), computed without the common factor (alpha+1)_{kn}."""
    return -0.5 * LN2 - k * log_q(n) + k * _log_poch_ratio(1.0 / (2 * k), 1.0 / k, n)


def envelope_winner(n: int, k: int) -> str:
    """Which theorem gives the smaller diagonal envelope at (n, k)."""
    if n <= EXACT_ENVELOPE_CAP:
        r2 = ab_ratio_squared_exact(n, k)
        if r2 == 1:
            return "tie"
        return "theorem1" if r2 < 1 else "theorem2"
    return "theorem1" if log_ab_ratio(n, k) < 0 else "theorem2"


def asymptote_constant(k: int, form: str = "derived") -> float:
    """Constant C in A_n/B_n ~ C n^(k/4 - 1/2).

    ``paper`` uses the gamma ratio Gamma(1/(2k))/Gamma(1/k) in the published form;
    ``derived`` uses its reciprocal, which is what converting the
    Pochhammer ratio through Gamma gives.
    """
    log_gr = log_gamma(1.0 / (2 * k)) - log_gamma(1.0 / k)
    if form == "derived":
        log_gr = -log_gr
    elif form != "paper":
        raise ValueError(f"form must be 'paper' or 'derived', got {form!r}")
    return math.exp(0.5 * (k - 1) * LN2 + 0.25 * k * math.log(math.pi) + k * log_gr)


def ratio_asymptote(n: int, k: int, form: str = "derived") -> float:
    if n < 1:
        raise ValueError("the asymptote needs n >= 1")
    return asymptote_constant(k, form) * n ** (k / 4 - 0.5)


def fit_ratio_exponent(k: int, n_list: Sequence[int]) -> tuple[float, float]:
    """Least-squares (slope, intercept) of log(A_n/B_n) against log n.

    Only the largest half of ``n_list`` enters the fit.
    """
    ns = list(n_list)
    if len(ns) < 4:
        raise ValueError("need at least 4 points to fit")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_list must be strictly increasing")
    if ns[0] < 1 or ns[-1] > 10**6:
        raise ValueError("n must lie in [1, 10^6]")
    top = ns[len(ns) // 2:]
    logs_n = np.log(np.array(top, dtype=float))
    logs_r = np.array([log_ab_ratio(n, k) for n in top])
    slope, intercept = np.polyfit(logs_n, logs_r, 1)
    return float(slope), float(intercept)
