"""Erdelyi's multivariate Laguerre polynomials.

Three independent exact evaluation routes are provided:

* :func:`laguerre_mv` -- the confluent Lauricella form
  ``(alpha+1)_{|n|} / prod(n_j!) * Phi2[-n; alpha+1; x]``;
* :func:`gf_expansion_coeff` -- a closed coefficient formula obtained by
  expanding the generating function term by term;
* :func:`gf_truncated_series` -- brute-force Taylor expansion of the
  generating function as a truncated multivariate power series.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .laguerre_uv import kummer_1f1
from .numerics import DomainError, PoleError, is_exact, pochhammer, to_fraction

GF_SERIES_CAP = 12
DIAGONAL_DEGREE_CAP = 160
STAGNATION_TOL = 1e-14


class CapExceeded(ValueError):
    """A requested degree exceeds the configured safety cap."""


class MissingTruncation(ValueError):
    """An infinite series was requested without a degree cap."""


@dataclass(frozen=True)
class MultiIndex:
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if not self.entries:
            raise ValueError("a multi-index needs k >= 1 entries")
        if any(e < 0 for e in self.entries):
            raise ValueError("multi-index entries must be non-negative")

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class EvalPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if not self.coords:
            raise ValueError("an evaluation point needs k >= 1 coordinates")

    @property
    def k(self) -> int:
        return len(self.coords)

    @property
    def max_norm(self):
        return max(abs(c) for c in self.coords)

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def as_index(n) -> MultiIndex:
    if isinstance(n, MultiIndex):
        return n
    if isinstance(n, int):
        return MultiIndex((n,))
    return MultiIndex(tuple(n))


def as_point(x) -> EvalPoint:
    if isinstance(x, EvalPoint):
        return x
    if isinstance(x, (int, float, Fraction)):
        return EvalPoint((x,))
    return EvalPoint(tuple(x))


def indices_up_to(k: int, degree: int) -> Iterator[tuple[int, ...]]:
    """All k-tuples of non-negative ints with total <= degree, lexicographic."""
    for idx in itertools.product(range(degree + 1), repeat=k):
        if sum(idx) <= degree:
            yield idx


def indices_of_degree(k: int, degree: int) -> Iterator[tuple[int, ...]]:
    if k == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in indices_of_degree(k - 1, degree - first):
            yield (first,) + rest


# -- Phi2 ----------------------------------------------------------------------

def _layer_sums(seqs: list[list], degree: int, zero) -> list:
    """Coefficients of t^0..t^degree in prod_l sum_j seqs[l][j] t^j."""
    acc = [zero] * (degree + 1)
    acc[0] = zero + 1
    for seq in seqs:
        new = [zero] * (degree + 1)
        for i, a in enumerate(acc):
            if not a:
                continue
            for j in range(min(len(seq), degree + 1 - i)):
                new[i + j] += a * seq[j]
        acc = new
    return acc


def _variable_terms(b, y, degree: int, zero) -> list:
    """(b)_j y^j / j! for j = 0..degree, stopping early when b is a non-positive int."""
    terms = [zero + 1]
    t = zero + 1
    for j in range(degree):
        t = t * (b + j) * y / (j + 1)
        if not t and b + j == 0:
            break
        terms.append(t)
    return terms


def _is_nonpositive_int(v) -> bool:
    return v == int(v) and v <= 0


def phi2k(b: Sequence, c, x, trunc: int | None = None, tol: float = STAGNATION_TOL):
    """Confluent Lauricella series Phi2^(k)[b_1..b_k; c; x_1..x_k].

    When every ``b_j`` is a non-positive integer the series terminates and
    is summed in full.  Otherwise it is summed by total-degree layers through
    ``trunc``; on the float path summation also stops once three consecutive
    layers each add less than ``tol`` times the partial sum.
    """
    x = as_point(x)
    b = list(b)
    if len(b) != x.k:
        raise ValueError("b and x must have the same length")
    finite = all(_is_nonpositive_int(bj) for bj in b)
    if finite:
        degree = sum(int(-bj) for bj in b)
    elif trunc is None:
        raise MissingTruncation("Phi2 is an infinite series here; give a degree cap")
    else:
        degree = trunc
    exact = is_exact(c) and x.exact and all(is_exact(bj) for bj in b)
    if _is_nonpositive_int(c) and -c < degree:
        raise PoleError(f"(c)_j vanishes for c = {c} within degree {degree}")
    if exact:
        c = Fraction(c)
        seqs = [_variable_terms(Fraction(bj), Fraction(xj), degree, Fraction(0))
                for bj, xj in zip(b, x)]
        layers = _layer_sums(seqs, degree, Fraction(0))
        total = Fraction(0)
        denom = Fraction(1)
        for d, layer in enumerate(layers):
            total += layer / denom
            denom *= c + d
        return total
    c = float(c)
    if finite:
        seqs = [_variable_terms(float(bj), float(xj), degree, 0.0) for bj, xj in zip(b, x)]
        layers = _layer_sums(seqs, degree, 0.0)
        terms = []
        denom = 1.0
        for d, layer in enumerate(layers):
            terms.append(layer / denom)
            denom *= c + d
        return math.fsum(terms)
    return _phi2_float_infinite([float(bj) for bj in b], c, [float(xj) for xj in x], degree, tol)


def _phi2_float_infinite(b, c, y, degree, tol) -> float:
    # layers grown in blocks so the stagnation test can stop early
    block = 32
    d_max = min(degree, block)
    while True:
        seqs = [_variable_terms(bj, yj, d_max, 0.0) for bj, yj in zip(b, y)]
        layers = _layer_sums(seqs, d_max, 0.0)
        total = 0.0
        denom = 1.0
        quiet = 0
        for d, layer in enumerate(layers):
            term = layer / denom
            total += term
            denom *= c + d
            quiet = quiet + 1 if abs(term) < tol * abs(total) else 0
            if quiet >= 3:
                return total
        if d_max >= degree:
            return total
        d_max = min(degree, 2 * d_max)


# -- the polynomial itself ------------------------------------------------------

def _pole_check(alpha, total: int) -> None:
    c = alpha + 1
    if _is_nonpositive_int(c) and -c <= total - 1:
        raise PoleError(f"alpha+1 = {c} makes (alpha+1)_j vanish for some j < {total}")


def laguerre_mv(n, alpha, x):
    """L_{n_1..n_k}^(alpha)(x_1..x_k) from Erdelyi's Phi2 representation.

    Exact for rational inputs.
    """
    n, x = as_index(n), as_point(x)
    if n.k != x.k:
        raise ValueError(f"index has k = {n.k} but point has k = {x.k}")
    _pole_check(alpha, n.total)
    exact = is_exact(alpha) and x.exact
    if exact:
        alpha = Fraction(alpha)
    else:
        alpha = float(alpha)
    lead = pochhammer(alpha + 1, n.total)
    for nj in n:
        lead = lead / math.factorial(nj)
    return lead * phi2k([-nj for nj in n], alpha + 1, x)


def gf_expansion_coeff(n, alpha, x) -> Fraction:
    """Coefficient of z^n in the generating function, summed in closed form.

    Uses L_n = sum_{p <= n} prod_j (-x_j)^{p_j} / (p_j! (n_j - p_j)!)
    * (alpha + 1 + |p|)_{|n| - |p|}, which has no poles in alpha.
    """
    n, x = as_index(n), as_point(x)
    alpha = to_fraction(alpha)
    xs = [to_fraction(c) for c in x]
    total = Fraction(0)
    for p in itertools.product(*(range(nj + 1) for nj in n)):
        term = pochhammer(alpha + 1 + sum(p), n.total - sum(p))
        if not term:
            continue
        for pj, nj, xj in zip(p, n, xs):
            term *= (-xj) ** pj / (math.factorial(pj) * math.factorial(nj - pj))
        total += term
    return total


@dataclass
class LaguerrePoly:
    """L_n^(alpha) as an explicit polynomial in x with exact coefficients."""

    n: MultiIndex
    alpha: Fraction
    coeffs: dict[tuple[int, ...], Fraction]

    @classmethod
    def build(cls, n, alpha) -> "LaguerrePoly":
        n = as_index(n)
        alpha = to_fraction(alpha)
        coeffs = {}
        for p in itertools.product(*(range(nj + 1) for nj in n)):
            c = pochhammer(alpha + 1 + sum(p), n.total - sum(p))
            if not c:
                continue
            for pj, nj in zip(p, n):
                c = c * (-1) ** pj / (math.factorial(pj) * math.factorial(nj - pj))
            coeffs[p] = c
        return cls(n, alpha, coeffs)

    def _integer_form(self):
        if not hasattr(self, "_int_cache"):
            denom = 1
            for c in self.coeffs.values():
                denom = math.lcm(denom, c.denominator)
            ints = [(p, c.numerator * (denom // c.denominator)) for p, c in self.coeffs.items()]
            self._int_cache = (denom, ints)
        return self._int_cache

    def eval_exact(self, x) -> Fraction:
        """Exact value at rational x, using integer arithmetic throughout."""
        xs = [to_fraction(c) for c in as_point(x)]
        denom, ints = self._integer_form()
        # x_j = a_j / d_j;  x_j^p = a_j^p d_j^(n_j - p) / d_j^n_j
        scaled = []
        common = denom
        for xj, nj in zip(xs, self.n):
            a, d = xj.numerator, xj.denominator
            scaled.append([a**i * d ** (nj - i) for i in range(nj + 1)])
            common *= d**nj
        total = 0
        for p, c in ints:
            term = c
            for row, pj in zip(scaled, p):
                term *= row[pj]
            total += term
        return Fraction(total, common)

    def eval_points(self, points: np.ndarray, chunk: int = 4096
                    ) -> tuple[np.ndarray, np.ndarray]:
        """Float values at the rows of ``points`` with the same error envelope as eval_grid."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        keys = list(self.coeffs)
        c = np.array([self.coeffs[p].numerator / self.coeffs[p].denominator for p in keys])
        expo = np.array(keys, dtype=int).reshape(len(keys), self.n.k)
        vals = np.empty(points.shape[0])
        mags = np.empty(points.shape[0])
        for start in range(0, points.shape[0], chunk):
            block = points[start:start + chunk]
            mono = np.ones((block.shape[0], len(keys)))
            for j in range(self.n.k):
                v = np.vander(block[:, j], self.n.entries[j] + 1, increasing=True)
                mono *= v[:, expo[:, j]]
            vals[start:start + chunk] = mono @ c
            mags[start:start + chunk] = np.abs(mono) @ np.abs(c)
        return vals, self._gamma() * mags * (1.0 + 1e-6)

    def _gamma(self) -> float:
        # summation over len(coeffs) terms plus the products forming each monomial
        steps = len(self.coeffs) + 3 * sum(self.n.entries) + 8
        return 2.0 * steps * 2.0 ** -53

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Coefficient tensor as floats, and its elementwise absolute value."""
        shape = tuple(nj + 1 for nj in self.n)
        arr = np.zeros(shape)
        for p, c in self.coeffs.items():
            arr[p] = c.numerator / c.denominator
        return arr, np.abs(arr)

    def eval_grid(self, axes: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
        """Float values on the tensor grid ``axes[0] x ... x axes[k-1]``.

        Also returns a rigorous bound on the absolute rounding error of each
        value (coefficient rounding plus summation), for non-negative axes.
        """
        arr, absarr = self.dense()
        vals = arr
        mags = absarr
        # contract the last axis first so the output index order matches axes
        for j in reversed(range(self.n.k)):
            v = np.vander(np.asarray(axes[j], dtype=float), self.n.entries[j] + 1,
                          increasing=True)
            vals = np.tensordot(vals, v, axes=([j], [1]))
            mags = np.tensordot(mags, np.abs(v), axes=([j], [1]))
            # move the new axis into position j
            vals = np.moveaxis(vals, -1, j)
            mags = np.moveaxis(mags, -1, j)
        return vals, self._gamma() * mags * (1.0 + 1e-6)


# -- truncated multivariate power series -------------------------------------------

@dataclass
class TruncatedMvSeries:
    """Power series in z_1..z_k with exact coefficients, truncated at total degree N."""

    k: int
    degree_cap: int
    coeffs: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.coeffs:
            if sum(idx) > self.degree_cap:
                raise ValueError(f"index {idx} exceeds degree cap {self.degree_cap}")

    def __getitem__(self, idx) -> Fraction:
        return self.coeffs.get(tuple(idx), Fraction(0))

    @classmethod
    def constant(cls, k, cap, value) -> "TruncatedMvSeries":
        return cls(k, cap, {(0,) * k: Fraction(value)} if value else {})

    @classmethod
    def linear(cls, k, cap, weights) -> "TruncatedMvSeries":
        out = {}
        for j, w in enumerate(weights):
            if w and cap >= 1:
                idx = [0] * k
                idx[j] = 1
                out[tuple(idx)] = Fraction(w)
        return cls(k, cap, out)

    def __add__(self, other: "TruncatedMvSeries") -> "TruncatedMvSeries":
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            v = out.get(idx, 0) + c
            if v:
                out[idx] = v
            else:
                out.pop(idx, None)
        return TruncatedMvSeries(self.k, self.degree_cap, out)

    def scale(self, s) -> "TruncatedMvSeries":
        s = Fraction(s)
        if not s:
            return TruncatedMvSeries(self.k, self.degree_cap)
        return TruncatedMvSeries(self.k, self.degree_cap,
                                 {i: c * s for i, c in self.coeffs.items()})

    def __mul__(self, other: "TruncatedMvSeries") -> "TruncatedMvSeries":
        out: dict = {}
        cap = self.degree_cap
        for i, a in self.coeffs.items():
            di = sum(i)
            for j, b in other.coeffs.items():
                if di + sum(j) > cap:
                    continue
                idx = tuple(p + q for p, q in zip(i, j))
                out[idx] = out.get(idx, 0) + a * b
        return TruncatedMvSeries(self.k, cap, {i: c for i, c in out.items() if c})

    def exp(self) -> "TruncatedMvSeries":
        """exp of a series with zero constant term.

        Uses E(F) = F * E(w), E the Euler operator sum_j z_j d/dz_j, which gives
        |n| F_n = sum_m |m| w_m F_{n-m}.
        """
        zero = (0,) * self.k
        if self.coeffs.get(zero):
            raise ValueError("exp needs a zero constant term")
        w = [(i, sum(i) * c) for i, c in self.coeffs.items()]
        out = {zero: Fraction(1)}
        for d in range(1, self.degree_cap + 1):
            for idx in indices_of_degree(self.k, d):
                acc = Fraction(0)
                for m, wm in w:
                    rest = tuple(a - b for a, b in zip(idx, m))
                    if min(rest) < 0:
                        continue
                    f = out.get(rest)
                    if f:
                        acc += wm * f
                if acc:
                    out[idx] = acc / d
        return TruncatedMvSeries(self.k, self.degree_cap, out)


def gf_truncated_series(alpha, x, N: int, cap: int = GF_SERIES_CAP) -> TruncatedMvSeries:
    """Taylor expansion of the generating function through total degree N.

    The generating function is written as a single exponential,
    exp((alpha+1) * sum_{m>=1} s^m/m - (x.z) * sum_{m>=0} s^m) with
    s = z_1 + ... + z_k, and expanded by truncated series arithmetic.
    """
    if N > cap:
        raise CapExceeded(f"degree {N} exceeds the series cap {cap}")
    x = as_point(x)
    k = x.k
    alpha = to_fraction(alpha)
    xs = [to_fraction(c) for c in x]
    s = TruncatedMvSeries.linear(k, N, [1] * k)
    powers = [TruncatedMvSeries.constant(k, N, 1)]
    for _ in range(N):
        powers.append(powers[-1] * s)
    log_part = TruncatedMvSeries(k, N)
    geometric = TruncatedMvSeries(k, N)
    for m, sm in enumerate(powers):
        geometric = geometric + sm
        if m >= 1:
            log_part = log_part + sm.scale(Fraction(1, m))
    xz = TruncatedMvSeries.linear(k, N, xs)
    w = log_part.scale(alpha + 1) + (xz * geometric).scale(-1)
    return w.exp()


def diagonal_sequence(alpha, x, N: int, cap: int = DIAGONAL_DEGREE_CAP) -> list:
    """[L_{n,...,n}^(alpha)(x) for n = 0..N]."""
    x = as_point(x)
    if N * x.k > cap:
        raise CapExceeded(f"N*k = {N * x.k} exceeds the total-degree cap {cap}")
    return [laguerre_mv((n,) * x.k, alpha, x) for n in range(N + 1)]


# -- series identities used in the bounds -------------------------------------------

class PandaResult(NamedTuple):
    equal: bool
    lhs: list
    rhs: list
    lhs_value: Fraction
    rhs_value: Fraction


def c_rule_one(j: int) -> Fraction:
    return Fraction(1)


def c_rule_inverse_pochhammer(alpha) -> Callable[[int], Fraction]:
    """C(j) = 1 / (alpha+1)_j."""
    c = to_fraction(alpha) + 1

    def rule(j: int) -> Fraction:
        return 1 / pochhammer(c, j)

    return rule


def panda_reduce_check(alphas: Sequence, c_rule: Callable[[int], Fraction], x, D: int
                       ) -> PandaResult:
    """Compare both sides of the multiple-to-single series reduction degree by degree.

    The left side enumerates every multi-index j with |j| = d; the right side
    uses (alpha_1 + ... + alpha_k)_d / d!.  Coefficients of x^d are returned for
    d = 0..D together with both partial sums at ``x``.
    """
    alphas = [to_fraction(a) for a in alphas]
    x = to_fraction(x)
    k = len(alphas)
    lhs, rhs = [], []
    for d in range(D + 1):
        cd = c_rule(d)
        acc = Fraction(0)
        for j in indices_of_degree(k, d):
            term = Fraction(1)
            for a, jl in zip(alphas, j):
                term *= pochhammer(a, jl) / math.factorial(jl)
            acc += term
        lhs.append(cd * acc)
        rhs.append(cd * pochhammer(sum(alphas), d) / math.factorial(d))
    lv = sum((c * x**d for d, c in enumerate(lhs)), Fraction(0))
    rv = sum((c * x**d for d, c in enumerate(rhs)), Fraction(0))
    return PandaResult(lhs == rhs, lhs, rhs, lv, rv)


class ChainResult(NamedTuple):
    phi2: float
    kummer: float
    exponential: float

    def holds(self, tol: float = 1e-12) -> bool:
        return (self.phi2 <= self.kummer * (1 + tol)
                and self.kummer <= self.exponential * (1 + tol))


def chain_parameters(k: int, variant: str) -> tuple[Fraction, Fraction]:
    """Per-variable numerator parameter and the reduced 1F1 numerator."""
    if variant == "theorem1":
        return Fraction(1, k), Fraction(1)
    if variant == "theorem2":
        return Fraction(1, 2 * k), Fraction(1, 2)
    raise ValueError(f"unknown variant {variant!r}")


def chain_check(k: int, alpha, x, variant: str = "theorem1", trunc: int = 4000) -> ChainResult:
    """Phi2[b..b; alpha+1; x/2] <= 1F1[k b; alpha+1; |x|/2] <= exp(|x|/2).

    b = 1/k for theorem1 (alpha > 0) and 1/(2k) for theorem2 (alpha > -1/2).
    """
    x = as_point(x)
    if x.k != k:
        raise ValueError("point dimension must equal k")
    alpha_f = float(alpha)
    if variant == "theorem1" and not alpha_f > 0:
        raise DomainError(f"theorem1 chain requires alpha > 0, got {alpha}")
    if variant == "theorem2" and not alpha_f > -0.5:
        raise DomainError(f"theorem2 chain requires alpha > -1/2, got {alpha}")
    if any(float(c) < 0 for c in x):
        raise DomainError("chain requires non-negative coordinates")
    b, a = chain_parameters(k, variant)
    half = [float(c) / 2 for c in x]
    y = max(half)
    phi = phi2k([float(b)] * k, alpha_f + 1, half, trunc=trunc)
    return ChainResult(phi, kummer_1f1(float(a), alpha_f + 1, y), math.exp(y))
