"""Inequality campaigns over parameter grids, summary statistics, and reports."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import bounds as bd
from .laguerre_mv import LaguerrePoly, MultiIndex
from .laguerre_uv import CLASSICAL_SCALED
from .numerics import LN2, DomainError, log_fraction, pochhammer, to_fraction

EXACT_DEGREE_CAP = 60
POLICIES = ("exact_fallback", "float_guarded")
CERTIFY_MARGIN = 1e-12

CSV_FIELDS = ["k", "n_vec", "alpha", "x_vec", "value", "bound_source", "bound",
              "tightness", "verdict"]


class ConfigError(ValueError):
    """A sweep configuration is malformed or infeasible."""


def fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def fmt_rational(v: Fraction) -> str:
    return str(Fraction(v))


@dataclass(frozen=True)
class XGrid:
    mode: str = "grid"
    values: tuple = ()
    low: Fraction = Fraction(0)
    high: Fraction = Fraction(10)
    denominator: int = 1000

    @classmethod
    def from_dict(cls, d: dict) -> "XGrid":
        mode = d.get("mode", "grid")
        if mode == "grid":
            if "values" in d:
                values = tuple(to_fraction(v) for v in d["values"])
            else:
                start, stop = to_fraction(d.get("start", 0)), to_fraction(d["stop"])
                step = to_fraction(d["step"])
                if step <= 0:
                    raise ConfigError("x_grid step must be positive")
                count = int((stop - start) / step)
                values = tuple(start + i * step for i in range(count + 1))
            if not values:
                raise ConfigError("x_grid has no values")
            return cls("grid", values)
        if mode == "random":
            return cls("random", (), to_fraction(d.get("low", 0)), to_fraction(d.get("high", 10)),
                       int(d.get("denominator", 1000)))
        raise ConfigError(f"unknown x_grid mode {mode!r}")

    def to_dict(self) -> dict:
        if self.mode == "grid":
            return {"mode": "grid", "values": [fmt_rational(v) for v in self.values]}
        return {"mode": "random", "low": fmt_rational(self.low), "high": fmt_rational(self.high),
                "denominator": self.denominator}


@dataclass(frozen=True)
class SweepConfig:
    k: int
    index_cap: int
    alpha_set: tuple
    x_grid: XGrid
    bounds: tuple
    sample_count: int = 0
    seed: int | None = None
    comparison_policy: str = "exact_fallback"
    keep_records: bool = True
    ratio_n_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha_set", tuple(to_fraction(a) for a in self.alpha_set))
        object.__setattr__(self, "bounds", tuple(self.bounds))
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.index_cap < 0:
            raise ConfigError("index_cap must be >= 0")
        if not self.alpha_set:
            raise ConfigError("alpha_set is empty")
        if not self.bounds:
            raise ConfigError("bounds is empty")
        for b in self.bounds:
            if b not in bd.SOURCES:
                raise ConfigError(f"unknown bound source {b!r}")
            if b in CLASSICAL_SCALED and self.k != 1:
                raise ConfigError(f"{b} is univariate; it needs k = 1")
        if self.comparison_policy not in POLICIES:
            raise ConfigError(f"comparison_policy must be one of {POLICIES}")
        if self.x_grid.mode == "random":
            if self.seed is None:
                raise ConfigError("random x sampling needs a seed")
            if self.sample_count < 1:
                raise ConfigError("random x sampling needs sample_count >= 1")
        if self.x_grid.mode == "grid" and any(v < 0 for v in self.x_grid.values):
            raise ConfigError("bound checks need non-negative coordinates")
        if self.x_grid.mode == "random" and self.x_grid.low < 0:
            raise ConfigError("bound checks need non-negative coordinates")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        try:
            return cls(
                k=int(d["k"]),
                index_cap=int(d["index_cap"]),
                alpha_set=tuple(to_fraction(a) for a in d["alpha_set"]),
                x_grid=XGrid.from_dict(d["x_grid"]),
                bounds=tuple(d["bounds"]),
                sample_count=int(d.get("sample_count", 0)),
                seed=None if d.get("seed") is None else int(d["seed"]),
                comparison_policy=d.get("comparison_policy", "exact_fallback"),
                keep_records=bool(d.get("keep_records", True)),
                ratio_n_max=d.get("ratio_n_max"),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed sweep config: {exc}") from exc

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "index_cap": self.index_cap,
            "alpha_set": [fmt_rational(a) for a in self.alpha_set],
            "x_grid": self.x_grid.to_dict(),
            "sample_count": self.sample_count,
            "seed": self.seed,
            "bounds": list(self.bounds),
            "comparison_policy": self.comparison_policy,
            "keep_records": self.keep_records,
            "ratio_n_max": self.ratio_n_max,
        }


@dataclass(frozen=True)
class BoundCheck:
    source: str
    bound: float
    tightness: float
    verdict: str
    asserted: bool


@dataclass(frozen=True)
class SweepRecord:
    k: int
    n: tuple
    alpha: Fraction
    x: tuple
    value: float
    checks: tuple

    def rows(self) -> list[dict]:
        base = {
            "k": self.k,
            "n_vec": ";".join(str(v) for v in self.n),
            "alpha": fmt_rational(self.alpha),
            "x_vec": ";".join(fmt_rational(v) for v in self.x),
            "value": self.value,
        }
        return [dict(base, bound_source=c.source, bound=c.bound, tightness=c.tightness,
                     verdict=c.verdict) for c in self.checks]


@dataclass
class _Extreme:
    tightness: float = -1.0
    n: tuple = ()
    alpha: Fraction = Fraction(0)
    x: tuple = ()

    def offer(self, t, n, alpha, x):
        if t > self.tightness:
            self.tightness, self.n, self.alpha, self.x = t, n, alpha, x

    def to_dict(self) -> dict:
        return {"tightness": self.tightness, "n_vec": list(self.n),
                "alpha": fmt_rational(self.alpha), "x_vec": [fmt_rational(v) for v in self.x]}


@dataclass
class _Tally:
    records: int = 0
    checks: int = 0
    violations: int = 0
    near_tight: int = 0
    exact_rechecks: int = 0
    unasserted_checks: int = 0
    unasserted_violations: int = 0
    extremes: dict = field(default_factory=dict)

    def merge(self, other: "_Tally") -> None:
        self.records += other.records
        self.checks += other.checks
        self.violations += other.violations
        self.near_tight += other.near_tight
        self.exact_rechecks += other.exact_rechecks
        self.unasserted_checks += other.unasserted_checks
        self.unasserted_violations += other.unasserted_violations
        for src, ext in other.extremes.items():
            mine = self.extremes.setdefault(src, _Extreme())
            mine.offer(ext.tightness, ext.n, ext.alpha, ext.x)

    def count(self, source, tightness, verdict, asserted, n, alpha, x):
        self.checks += 1
        if asserted:
            if verdict == bd.VIOLATION:
                self.violations += 1
            self.extremes.setdefault(source, _Extreme()).offer(tightness, n, alpha, x)
        else:
            self.unasserted_checks += 1
            if verdict == bd.VIOLATION:
                self.unasserted_violations += 1
            self.extremes.setdefault(source + ":extended", _Extreme()).offer(
                tightness, n, alpha, x)
        if verdict == bd.NEAR:
            self.near_tight += 1


@dataclass
class CampaignSummary:
    records: int
    violations: int
    max_tightness: dict
    winners: list
    ratio_fit: dict | None
    checks: int = 0
    near_tight: int = 0
    exact_rechecks: int = 0
    unasserted_checks: int = 0
    unasserted_violations: int = 0

    def to_dict(self) -> dict:
        return {
            "records": self.records,
            "violations": self.violations,
            "max_tightness": self.max_tightness,
            "winners": self.winners,
            "ratio_fit": self.ratio_fit,
            "checks": self.checks,
            "near_tight": self.near_tight,
            "exact_rechecks": self.exact_rechecks,
            "unasserted_checks": self.unasserted_checks,
            "unasserted_violations": self.unasserted_violations,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignSummary":
        return cls(**d)


# -- per-(n, alpha) work ----------------------------------------------------------

def _applicable(config: SweepConfig, alpha: Fraction) -> list[tuple[str, bool]]:
    out = []
    for src in config.bounds:
        if bd.in_domain(src, alpha):
            out.append((src, True))
        elif src == "theorem2" and bd.in_domain(src, alpha, extended=True):
            out.append((src, False))
    return out


def _points(config: SweepConfig) -> list[tuple]:
    g = config.x_grid
    if g.mode == "grid":
        return list(itertools.product(g.values, repeat=config.k))
    rng = np.random.Generator(np.random.PCG64(config.seed))
    lo = int(g.low * g.denominator)
    hi = int(g.high * g.denominator)
    draws = rng.integers(lo, hi + 1, size=(config.sample_count, config.k))
    return [tuple(Fraction(int(v), g.denominator) for v in row) for row in draws]


def _scaled(src: str, n: MultiIndex, alpha: Fraction, x: tuple):
    if src == "theorem1":
        return bd.theorem1_scaled(n, alpha, x)
    if src == "theorem2":
        return bd.theorem2_scaled(n, alpha, x)
    return CLASSICAL_SCALED[src](n.entries[0], alpha, x[0])


def _log_bound_array(src: str, n: MultiIndex, alpha: Fraction, pts: np.ndarray) -> np.ndarray:
    """log of the bound at each row of ``pts`` (float)."""
    zero = (Fraction(0),) * n.k
    if src == "lewandowski_szynal":
        m = n.entries[0]
        c = alpha + 1
        coefs = [pochhammer(c, m - i) / math.factorial(m - i) / math.factorial(i)
                 for i in range(m + 1)]
        poly = np.polynomial.polynomial.polyval(pts[:, 0], [float(v) for v in coefs])
        return np.log(poly)
    base = _scaled(src, n, alpha, zero)
    log0 = 0.5 * log_fraction(base.coef_sq) + float(base.pow2) * LN2
    return log0 + pts.max(axis=1) / 2.0


def _work_item(config: SweepConfig, n: tuple, alpha: Fraction, points: list[tuple],
               fpoints: np.ndarray | None):
    n_idx = MultiIndex(n)
    poly = LaguerrePoly.build(n_idx, alpha)
    tally = _Tally()
    records = [] if config.keep_records else None
    active = _applicable(config, alpha)
    if not active:
        return records, tally
    if config.comparison_policy == "exact_fallback":
        for x in points:
            value = poly.eval_exact(x)
            checks = []
            for src, asserted in active:
                scaled = _scaled(src, n_idx, alpha, x)
                t, verdict = bd.classify(value, scaled)
                if t > bd.NEAR_TIGHT:
                    tally.exact_rechecks += 1
                tally.count(src, t, verdict, asserted, n, alpha, x)
                if records is not None:
                    checks.append(BoundCheck(src, float(scaled), t, verdict, asserted))
            tally.records += 1
            if records is not None:
                records.append(SweepRecord(config.k, n, alpha, x, float(value), tuple(checks)))
        return records, tally

    # float_guarded: vectorized values with a rigorous rounding envelope
    if config.x_grid.mode == "grid":
        axis = np.array([float(v) for v in config.x_grid.values])
        vals, err = poly.eval_grid([axis] * config.k)
        vals, err = vals.reshape(-1), err.reshape(-1)
    else:
        vals, err = poly.eval_points(fpoints)
    absval = np.abs(vals)
    with np.errstate(divide="ignore"):
        log_abs = np.log(absval)
        log_hi = np.log(absval + err)
    per_source = []
    for src, asserted in active:
        logb = _log_bound_array(src, n_idx, alpha, fpoints)
        tight = np.exp(log_abs - logb)
        certified = (log_hi <= logb + math.log1p(-CERTIFY_MARGIN)) & (tight <= bd.NEAR_TIGHT)
        per_source.append((src, asserted, logb, tight, certified))
    exact_values: dict[int, Fraction] = {}
    for i, x in enumerate(points):
        checks = []
        for src, asserted, logb, tight, certified in per_source:
            if certified[i]:
                t, verdict = float(tight[i]), bd.PASS
            else:
                if i not in exact_values:
                    exact_values[i] = poly.eval_exact(x)
                tally.exact_rechecks += 1
                t, verdict = bd.classify(exact_values[i], _scaled(src, n_idx, alpha, x))
            tally.count(src, t, verdict, asserted, n, alpha, x)
            if records is not None:
                checks.append(BoundCheck(src, math.exp(logb[i]), t, verdict, asserted))
        tally.records += 1
        if records is not None:
            value = float(exact_values[i]) if i in exact_values else float(vals[i])
            records.append(SweepRecord(config.k, n, alpha, x, value, tuple(checks)))
    return records, tally


def _vectorized_tally(config, n, alpha, points, fpoints):
    """Summary-only variant of the float_guarded path (no per-point Python loop)."""
    n_idx = MultiIndex(n)
    poly = LaguerrePoly.build(n_idx, alpha)
    tally = _Tally()
    active = _applicable(config, alpha)
    if not active:
        return None, tally
    if config.x_grid.mode == "grid":
        axis = np.array([float(v) for v in config.x_grid.values])
        vals, err = poly.eval_grid([axis] * config.k)
        vals, err = vals.reshape(-1), err.reshape(-1)
    else:
        vals, err = poly.eval_points(fpoints)
    absval = np.abs(vals)
    with np.errstate(divide="ignore"):
        log_abs = np.log(absval)
        log_hi = np.log(absval + err)
    tally.records = len(points)
    for src, asserted in active:
        logb = _log_bound_array(src, n_idx, alpha, fpoints)
        tight = np.exp(log_abs - logb)
        certified = (log_hi <= logb + math.log1p(-CERTIFY_MARGIN)) & (tight <= bd.NEAR_TIGHT)
        bad = np.flatnonzero(~certified)
        if certified.any():
            idx = int(np.argmax(np.where(certified, tight, -1.0)))
            tally.count(src, float(tight[idx]), bd.PASS, asserted, n, alpha, points[idx])
            # remaining certified checks only add to the counters
            extra = int(certified.sum()) - 1
            tally.checks += extra
            if not asserted:
                tally.unasserted_checks += extra
        for i in bad:
            tally.exact_rechecks += 1
            t, verdict = bd.classify(poly.eval_exact(points[i]),
                                     _scaled(src, n_idx, alpha, points[i]))
            tally.count(src, t, verdict, asserted, n, alpha, points[i])
    return None, tally


def _winners(config: SweepConfig) -> list[dict]:
    if not {"theorem1", "theorem2"} <= set(config.bounds):
        return []
    positive = [a for a in config.alpha_set if a > 0]
    alpha = positive[0] if positive else Fraction(1)
    zero = (Fraction(0),) * config.k
    out = []
    for m in range(config.index_cap + 1):
        n = MultiIndex((m,) * config.k)
        a_sq = bd.theorem1_scaled(n, alpha, zero).coef_sq
        b_sq = bd.theorem2_scaled(n, alpha, zero).coef_sq
        if a_sq < b_sq:
            w = "theorem1"
        elif b_sq < a_sq:
            w = "theorem2"
        else:
            w = "tie"
        out.append({"k": config.k, "n": m, "winner": w})
    return out


def run_sweep(config: SweepConfig, threads: int | None = None
              ) -> tuple[list[SweepRecord], CampaignSummary]:
    """Evaluate every (n, alpha, x) of the campaign against the configured bounds.

    Output is deterministic for a given config; ``threads`` only changes
    how work items are scheduled.
    """
    if config.index_cap * config.k > EXACT_DEGREE_CAP:
        raise ConfigError(
            f"index_cap * k = {config.index_cap * config.k} exceeds the exact-path cap "
            f"{EXACT_DEGREE_CAP}")
    points = _points(config)
    fpoints = np.array([[float(c) for c in x] for x in points], dtype=float).reshape(
        len(points), config.k)
    items = [(n, a) for n in itertools.product(range(config.index_cap + 1), repeat=config.k)
             for a in config.alpha_set]
    fast = config.comparison_policy == "float_guarded" and not config.keep_records
    fn = _vectorized_tally if fast else _work_item

    def run(item):
        return fn(config, item[0], item[1], points, fpoints)

    workers = threads or os.cpu_count() or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, items))
    else:
        results = [run(item) for item in items]

    records: list[SweepRecord] = []
    total = _Tally()
    for recs, tally in results:
        if recs:
            records.extend(recs)
        total.merge(tally)
    records.sort(key=_record_key)

    ratio_fit = None
    if config.ratio_n_max:
        rep = adjudicate_asymptote(config.k, int(config.ratio_n_max)) if config.k > 1 else None
        if rep is not None:
            ratio_fit = {"slope": rep["slope"], "intercept": rep["intercept"],
                         "residual": rep["residual"]}
    summary = CampaignSummary(
        records=total.records,
        violations=total.violations,
        max_tightness={src: total.extremes[src].to_dict() for src in sorted(total.extremes)},
        winners=_winners(config),
        ratio_fit=ratio_fit,
        checks=total.checks,
        near_tight=total.near_tight,
        exact_rechecks=total.exact_rechecks,
        unasserted_checks=total.unasserted_checks,
        unasserted_violations=total.unasserted_violations,
    )
    return records, summary


def _record_key(r: SweepRecord):
    return (r.k, r.n, r.alpha, r.x)


# -- asymptote adjudication -----------------------------------------------------------

def adjudicate_asymptote(k: int, n_max: int, points: int = 60, tolerance: float = 0.02) -> dict:
    """Fit log(A_n/B_n) against log n and compare the constant with both closed forms."""
    if n_max < 1000:
        raise ValueError("n_max must be at least 1000")
    ns = sorted({int(round(v)) for v in np.geomspace(10, n_max, points)})
    slope, intercept = bd.fit_ratio_exponent(k, ns)
    top = ns[len(ns) // 2:]
    pred = slope * np.log(top) + intercept
    actual = np.array([bd.log_ab_ratio(n, k) for n in top])
    residual = float(np.sqrt(np.mean((actual - pred) ** 2)))
    expo = k / 4 - 0.5
    decade = [n for n in ns if n >= n_max / 10]
    fitted = float(np.mean([math.exp(bd.log_ab_ratio(n, k)) / n**expo for n in decade]))
    paper = bd.asymptote_constant(k, "paper")
    derived = bd.asymptote_constant(k, "derived")
    matches = [name for name, c in (("paper", paper), ("derived", derived))
               if abs(fitted - c) <= tolerance * c]
    verdict = matches[0] if len(matches) == 1 else ("BOTH" if matches else "NEITHER")
    return {
        "k": k,
        "n_max": n_max,
        "slope": slope,
        "expected_slope": expo,
        "intercept": intercept,
        "residual": residual,
        "fitted_constant": fitted,
        "paper_constant": paper,
        "derived_constant": derived,
        "verdict": verdict,
    }


# -- reports ------------------------------------------------------------------------

def _csv_cell(name: str, value):
    if name in ("value", "bound", "tightness"):
        return fmt_float(value)
    return value


def _json_number(v: float):
    return v if math.isfinite(v) else None


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        for row in r.rows():
            writer.writerow([_csv_cell(f, row[f]) for f in CSV_FIELDS])
    return buf.getvalue()


def records_to_json(records: Iterable[SweepRecord]) -> str:
    rows = []
    for r in records:
        for row in r.rows():
            rows.append({f: (_json_number(row[f]) if f in ("value", "bound", "tightness")
                             else row[f]) for f in CSV_FIELDS})
    return json.dumps(rows, indent=1) + "\n"


def summary_to_json(summary: CampaignSummary) -> str:
    return json.dumps(summary.to_dict(), indent=1) + "\n"


def summary_to_csv(summary: CampaignSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["field", "value"])
    for key, value in summary.to_dict().items():
        writer.writerow([key, json.dumps(value, sort_keys=True)])
    return buf.getvalue()


def render_report(obj, fmt: str) -> str:
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    if isinstance(obj, CampaignSummary):
        return summary_to_json(obj) if fmt == "json" else summary_to_csv(obj)
    records = list(obj)
    return records_to_json(records) if fmt == "json" else records_to_csv(records)


def emit_report(obj, fmt: str, destination) -> None:
    """Write records or a summary as CSV or JSON to a path or a text stream."""
    text = render_report(obj, fmt)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {destination}: {exc}") from exc


def load_summary(text: str) -> CampaignSummary:
    return CampaignSummary.from_dict(json.loads(text))
