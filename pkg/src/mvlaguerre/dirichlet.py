"""Dirichlet measure on the standard simplex and Monte-Carlo checks of the
integral representation of the multivariate Laguerre polynomials.

Random streams come from numpy's PCG64; stream ``s`` of seed ``seed`` is
seeded with ``seed ^ s`` so substreams are reproducible independently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .laguerre_mv import as_index, as_point, indices_up_to, laguerre_mv, phi2k
from .numerics import DomainError, is_exact, pochhammer, to_fraction

CHUNK = 1 << 16


@dataclass(frozen=True)
class DirichletParams:
    b: tuple
    beta: object

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        if not self.b:
            raise ValueError("need k >= 1 shape parameters")
        if any(float(bj) <= 0 for bj in self.b) or float(self.beta) <= 0:
            raise DomainError("Dirichlet parameters must all be positive")

    @property
    def k(self) -> int:
        return len(self.b)

    @property
    def shapes(self) -> np.ndarray:
        return np.array([float(v) for v in self.b + (self.beta,)])


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed ^ stream))


def dirichlet_moment(p: DirichletParams, j) -> Fraction | float:
    """E[u_1^j_1 ... u_k^j_k] = prod (b_l)_{j_l} / (b_1 + ... + b_k + beta)_{|j|}."""
    j = as_index(j)
    if j.k != p.k:
        raise ValueError("moment index must have k entries")
    params = p.b + (p.beta,)
    if all(is_exact(v) for v in params):
        b = [Fraction(v) for v in p.b]
        top = sum(b, Fraction(0)) + Fraction(p.beta)
    else:
        b = [float(v) for v in p.b]
        top = sum(b) + float(p.beta)
    num = 1
    for bl, jl in zip(b, j):
        num = num * pochhammer(bl, jl)
    return num / pochhammer(top, j.total)


def dirichlet_sample(p: DirichletParams, seed: int, count: int, stream: int = 0) -> np.ndarray:
    """``count`` points of the simplex drawn from the Dirichlet measure, shape (count, k).

    Draws k+1 independent Gamma variates with shapes b_1..b_k, beta and
    normalizes by their sum.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = generator(seed, stream)
    g = rng.standard_gamma(p.shapes, size=(count, p.k + 1))
    return g[:, :p.k] / g.sum(axis=1, keepdims=True)


@dataclass
class RunningMean:
    """Mean and variance accumulator that merges associatively (Chan et al.)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "RunningMean":
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls()
        mean = float(values.mean())
        return cls(values.size, mean, float(((values - mean) ** 2).sum()))

    def merge(self, other: "RunningMean") -> "RunningMean":
        if other.count == 0:
            return RunningMean(self.count, self.mean, self.m2)
        if self.count == 0:
            return RunningMean(other.count, other.mean, other.m2)
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return RunningMean(n, mean, m2)

    @property
    def std_error(self) -> float:
        if self.count < 2:
            return math.inf
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


def _pairwise(parts: list[RunningMean]) -> RunningMean:
    while len(parts) > 1:
        parts = [parts[i].merge(parts[i + 1]) if i + 1 < len(parts) else parts[i]
                 for i in range(0, len(parts), 2)]
    return parts[0] if parts else RunningMean()


def _chunked(p: DirichletParams, seed: int, count: int, stream: int, fn) -> RunningMean:
    rng = generator(seed, stream)
    shapes = p.shapes
    parts = []
    left = count
    while left > 0:
        m = min(CHUNK, left)
        g = rng.standard_gamma(shapes, size=(m, p.k + 1))
        u = g[:, :p.k] / g.sum(axis=1, keepdims=True)
        parts.append(RunningMean.of(fn(u)))
        left -= m
    return _pairwise(parts)


class MCEstimate(NamedTuple):
    exact: float
    estimate: float
    std_error: float

    def within(self, nsigma: float = 3.0) -> bool:
        slack = 1e-12 * max(1.0, abs(self.exact))
        return abs(self.estimate - self.exact) <= nsigma * self.std_error + slack


def mc_moment(p: DirichletParams, j, samples: int, seed: int, stream: int = 0) -> MCEstimate:
    """Empirical moment E[u^j] against the exact Pochhammer formula."""
    j = as_index(j)
    powers = np.array(j.entries, dtype=float)
    acc = _chunked(p, seed, samples, stream, lambda u: np.prod(u ** powers, axis=1))
    return MCEstimate(float(dirichlet_moment(p, j)), acc.mean, acc.std_error)


def mc_total_mass(p: DirichletParams, samples: int, seed: int, stream: int = 0) -> MCEstimate:
    """Fraction of samples inside the closed simplex; the measure has mass 1."""
    def inside(u):
        return ((u >= 0).all(axis=1) & (u.sum(axis=1) <= 1 + 1e-12)).astype(float)
    acc = _chunked(p, seed, samples, stream, inside)
    return MCEstimate(1.0, acc.mean, acc.std_error)


def exp_moment_series(p: DirichletParams, x, D: int) -> Fraction:
    """sum_{|j| <= D} prod (x_l/2)^{j_l}/j_l! * E[u^j]: the truncated integral of exp(x.u/2)."""
    x = as_point(x)
    half = [to_fraction(c) / 2 for c in x]
    total = Fraction(0)
    for j in indices_up_to(p.k, D):
        w = Fraction(1)
        for hl, jl in zip(half, j):
            w *= hl ** jl / math.factorial(jl)
        total += w * dirichlet_moment(p, j)
    return total


def moment_series_phi2(p: DirichletParams, x, D: int) -> Fraction:
    """The same truncation expressed as Phi2[b; b_1+..+b_k+beta; x/2]."""
    x = as_point(x)
    half = [to_fraction(c) / 2 for c in x]
    c = sum((Fraction(v) for v in p.b), Fraction(0)) + Fraction(p.beta)
    return phi2k([Fraction(v) for v in p.b], c, half, trunc=D)


def _laguerre_array(n: int, alpha: float, t: np.ndarray) -> np.ndarray:
    """L_n^(alpha)(t) elementwise by the three-term recurrence."""
    prev = np.ones_like(t)
    if n == 0:
        return prev
    cur = alpha + 1.0 - t
    for m in range(1, n):
        prev, cur = cur, ((2 * m + 1 + alpha - t) * cur - (m + alpha) * prev) / (m + 1)
    return cur


def integral_repr_check(n, alphas: Sequence, beta, x, samples: int = 10**4, seed: int = 0,
                        stream: int = 0) -> MCEstimate:
    """Monte-Carlo estimate of the Dirichlet-integral representation.

    L_n^(A)(x) with A = alpha_1 + ... + alpha_k + beta + k equals
    (A+1)_{|n|} / prod (alpha_j+1)_{n_j} times the mean of
    prod L_{n_j}^(alpha_j)(x_j u_j) under Dirichlet(alpha+1; beta+1).
    Returns the exact left side, the estimate and its standard error.
    """
    n, x = as_index(n), as_point(x)
    alphas = [to_fraction(a) for a in alphas]
    beta = to_fraction(beta)
    if len(alphas) != n.k or x.k != n.k:
        raise ValueError("n, alphas and x must all have k entries")
    if any(a <= -1 for a in alphas) or beta <= -1:
        raise DomainError("the representation needs every alpha_j > -1 and beta > -1")
    if any(float(c) < 0 for c in x):
        raise DomainError("the representation is checked for x_j >= 0")
    if samples < 10**4:
        raise ValueError("use at least 10^4 samples")
    big = sum(alphas, Fraction(0)) + beta + n.k
    lhs = laguerre_mv(n, big, tuple(to_fraction(c) for c in x))
    pre = pochhammer(big + 1, n.total)
    for a, nj in zip(alphas, n):
        pre /= pochhammer(a + 1, nj)
    pre_f = float(pre)
    p = DirichletParams(tuple(a + 1 for a in alphas), beta + 1)
    xs = [float(c) for c in x]
    af = [float(a) for a in alphas]

    def integrand(u):
        out = np.ones(u.shape[0])
        for j in range(n.k):
            out *= _laguerre_array(n.entries[j], af[j], xs[j] * u[:, j])
        return out * pre_f

    acc = _chunked(p, seed, samples, stream, integrand)
    return MCEstimate(float(lhs), acc.mean, acc.std_error)


def specialization_parameters(k: int, alpha, variant: str) -> tuple[list[Fraction], Fraction]:
    """(alpha_j list, beta) that turn the representation into the one opening each proof."""
    alpha = to_fraction(alpha)
    if variant == "theorem1":
        if alpha <= 0:
            raise DomainError(f"theorem1 specialization requires alpha > 0, got {alpha}")
        return [Fraction(1 - k, k)] * k, alpha - 1
    if variant == "theorem2":
        if alpha <= Fraction(-1, 2):
            raise DomainError(f"theorem2 specialization requires alpha > -1/2, got {alpha}")
        return [Fraction(1 - 2 * k, 2 * k)] * k, alpha - Fraction(1, 2)
    raise ValueError(f"unknown variant {variant!r}")


def specialization_check(n, alpha, x, variant: str = "theorem1", samples: int = 10**4,
                         seed: int = 0, stream: int = 0) -> MCEstimate:
    n = as_index(n)
    alphas, beta = specialization_parameters(n.k, alpha, variant)
    return integral_repr_check(n, alphas, beta, x, samples, seed, stream)
