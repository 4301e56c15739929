"""Command-line interface.

Exit codes: 0 ok, 1 violation, 2 usage / malformed input, 3 domain or pole
error, 4 I/O error.  Data goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds as bd
from .dirichlet import integral_repr_check, specialization_check
from .laguerre_mv import CapExceeded, diagonal_sequence, gf_expansion_coeff, laguerre_mv
from .numerics import DomainError, PoleError, to_fraction
from .verify import ConfigError, SweepConfig, adjudicate_asymptote, emit_report, fmt_float, run_sweep

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


def rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def rational_list(text: str) -> list[Fraction]:
    return [rational(t) for t in text.split(",") if t.strip()]


def int_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from exc
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("indices must be non-negative")
    return values


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _check_lengths(args, *names):
    for name in names:
        values = getattr(args, name)
        if len(values) != args.k:
            raise UsageError(f"--{name} has {len(values)} entries but --k is {args.k}")


def _out(args, obj, lines: list[str]):
    if getattr(args, "format", "text") == "json":
        print(json.dumps(obj, indent=1))
    else:
        for line in lines:
            print(line)


def cmd_eval(args) -> int:
    _check_lengths(args, "n", "x")
    if args.method == "explicit":
        print(laguerre_mv(args.n, args.alpha, args.x))
    elif args.method == "gf":
        print(gf_expansion_coeff(args.n, args.alpha, args.x))
    else:
        a = laguerre_mv(args.n, args.alpha, args.x)
        b = gf_expansion_coeff(args.n, args.alpha, args.x)
        print(a)
        print(b)
        print("AGREE" if a == b else "DISAGREE")
        if a != b:
            return EXIT_VIOLATION
    return EXIT_OK


def _bound_for(args) -> bd.BoundReport:
    _check_lengths(args, "n", "x")
    if args.theorem == 1:
        return bd.theorem1_bound(args.n, args.alpha, args.x)
    extended = -1 < args.alpha <= Fraction(-1, 2)
    return bd.theorem2_bound(args.n, args.alpha, args.x, extended=extended)


def _report_obj(r: bd.BoundReport) -> dict:
    return {
        "source": r.source,
        "k": r.k,
        "n_vec": list(r.n),
        "alpha": str(r.alpha),
        "x_vec": [str(v) for v in r.x],
        "coefficient": r.coefficient,
        "bound": float(r.bound_value),
        "log_bound": r.log_bound,
        "value": str(r.value),
        "tightness": r.tightness,
        "verdict": r.verdict,
        "extended": r.extended,
    }


def _report_lines(r: bd.BoundReport, with_verdict: bool) -> list[str]:
    lines = [
        f"source: {r.source}",
        f"coefficient: {fmt_float(r.coefficient)}",
        f"bound: {fmt_float(float(r.bound_value))}",
        f"value: {r.value}",
        f"tightness: {fmt_float(r.tightness)}",
    ]
    if with_verdict:
        tag = " EXTENDED-DOMAIN" if r.extended else ""
        lines.append(f"verdict: {r.verdict}{tag}")
    elif r.extended:
        lines.append("EXTENDED-DOMAIN")
    return lines


def cmd_bound(args) -> int:
    r = _bound_for(args)
    _out(args, _report_obj(r), _report_lines(r, with_verdict=False))
    return EXIT_OK


def cmd_check(args) -> int:
    r = _bound_for(args)
    _out(args, _report_obj(r), _report_lines(r, with_verdict=True))
    if r.extended:
        return EXIT_OK
    return EXIT_VIOLATION if r.verdict == bd.VIOLATION else EXIT_OK


def cmd_sweep(args) -> int:
    try:
        config = SweepConfig.from_json(args.config)
    except OSError as exc:
        print(f"cannot read config {args.config}: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"malformed config {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records, summary = run_sweep(config, threads=args.threads)
    if args.records:
        emit_report(records, args.format, args.records)
    if args.summary:
        emit_report(summary, "json", args.summary)
    if not args.records and not args.summary:
        emit_report(records if config.keep_records else summary, args.format, sys.stdout)
    print(f"records={summary.records} violations={summary.violations} "
          f"unasserted_violations={summary.unasserted_violations}", file=sys.stderr)
    return EXIT_VIOLATION if summary.violations else EXIT_OK


def cmd_diagonal(args) -> int:
    _check_lengths(args, "x")
    seq = diagonal_sequence(args.alpha, args.x, args.N)
    _out(args, [str(v) for v in seq], [", ".join(str(v) for v in seq)])
    return EXIT_OK


def cmd_mc_check(args) -> int:
    _check_lengths(args, "n", "x")
    if args.variant:
        if args.alpha is None:
            raise UsageError("--variant needs --alpha")
        est = specialization_check(args.n, args.alpha, args.x, args.variant, args.samples,
                                   args.seed)
    else:
        if args.alphas is None or args.beta is None:
            raise UsageError("give --alphas and --beta, or --variant with --alpha")
        _check_lengths(args, "alphas")
        est = integral_repr_check(args.n, args.alphas, args.beta, args.x, args.samples,
                                  args.seed)
    within = est.within(3.0)
    obj = {"lhs": est.exact, "estimate": est.estimate, "std_error": est.std_error,
           "within_3sigma": within}
    _out(args, obj, [f"lhs: {fmt_float(est.exact)}",
                     f"estimate: {fmt_float(est.estimate)}",
                     f"std_error: {fmt_float(est.std_error)}",
                     "WITHIN 3 SIGMA" if within else "OUTSIDE 3 SIGMA"])
    return EXIT_OK


def cmd_ratio(args) -> int:
    rep = adjudicate_asymptote(args.k, args.n_max)
    _out(args, rep, [
        f"slope: {fmt_float(rep['slope'])} (expected {rep['expected_slope']})",
        f"fitted constant: {fmt_float(rep['fitted_constant'])}",
        f"paper constant: {fmt_float(rep['paper_constant'])}",
        f"derived constant: {fmt_float(rep['derived_constant'])}",
        f"verdict: {rep['verdict']}",
    ])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mvlaguerre",
        description="Evaluate multivariate Laguerre polynomials and check their upper bounds.")
    sub = p.add_subparsers(dest="command", required=True)

    def point_args(sp, need_alpha=True):
        sp.add_argument("--k", type=int, required=True, help="number of variables, k >= 1")
        sp.add_argument("--n", type=int_list, required=True,
                        help="comma-separated degrees n_1..n_k, each >= 0")
        if need_alpha:
            sp.add_argument("--alpha", type=rational, required=True,
                            help="parameter alpha, rational (p/q or decimal)")
        sp.add_argument("--x", type=rational_list, required=True,
                        help="comma-separated coordinates x_1..x_k, rational")

    def fmt_arg(sp, choices=("text", "json")):
        sp.add_argument("--format", choices=choices, default=choices[0],
                        help=f"output format, one of {', '.join(choices)}")

    sp = sub.add_parser("eval", help="evaluate L_n^(alpha)(x) exactly")
    point_args(sp)
    sp.add_argument("--method", choices=("explicit", "gf", "both"), default="explicit",
                    help="explicit (Phi2 form), gf (generating-function coefficient) or both")
    sp.set_defaults(func=cmd_eval)

    for name, func, text in (("bound", cmd_bound, "print a theorem bound and its tightness"),
                             ("check", cmd_check, "check |L| <= bound; exit 1 on violation")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--theorem", type=int, choices=(1, 2), required=True,
                        help="1: alpha > 0 (alpha >= 0 when k = 1); 2: alpha > -1/2, "
                             "with (-1, -1/2] reported as EXTENDED-DOMAIN")
        point_args(sp)
        fmt_arg(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("sweep", help="run a verification campaign from a JSON config")
    sp.add_argument("--config", required=True, help="path to a SweepConfig JSON file")
    sp.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="record report format, csv or json")
    sp.add_argument("--records", help="write the record report to this path")
    sp.add_argument("--summary", help="write the JSON campaign summary to this path")
    sp.add_argument("--threads", type=positive_int, default=None,
                    help="worker cap, positive int (default: machine parallelism); "
                         "does not change output bytes")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("diagonal", help="print L_(n,...,n)^(alpha)(x) for n = 0..N")
    sp.add_argument("--k", type=int, required=True, help="number of variables, k >= 1")
    sp.add_argument("--alpha", type=rational, required=True, help="parameter alpha, rational")
    sp.add_argument("--x", type=rational_list, required=True,
                    help="comma-separated coordinates x_1..x_k, rational")
    sp.add_argument("--N", type=int, required=True, help="last diagonal index, N >= 0")
    fmt_arg(sp)
    sp.set_defaults(func=cmd_diagonal)

    sp = sub.add_parser("mc-check", help="Monte-Carlo check of the Dirichlet integral representation")
    sp.add_argument("--k", type=int, required=True, help="number of variables, k >= 1")
    sp.add_argument("--n", type=int_list, required=True, help="comma-separated degrees, each >= 0")
    sp.add_argument("--x", type=rational_list, required=True,
                    help="comma-separated coordinates, each >= 0")
    sp.add_argument("--alphas", type=rational_list, help="comma-separated alpha_j, each > -1")
    sp.add_argument("--beta", type=rational, help="beta > -1")
    sp.add_argument("--variant", choices=("theorem1", "theorem2"),
                    help="use the parameter choice opening a proof (needs --alpha)")
    sp.add_argument("--alpha", type=rational,
                    help="alpha for --variant (> 0 for theorem1, > -1/2 for theorem2)")
    sp.add_argument("--samples", type=int, default=10**5, help="sample count, >= 10^4")
    sp.add_argument("--seed", type=int, default=0, help="non-negative integer seed")
    fmt_arg(sp)
    sp.set_defaults(func=cmd_mc_check)

    sp = sub.add_parser("ratio", help="adjudicate the asymptote of A_n/B_n")
    sp.add_argument("--k", type=int, required=True, help="number of variables, k >= 2")
    sp.add_argument("--n-max", type=int, default=10**5, dest="n_max",
                    help="largest n, 10^3 <= n_max <= 10^6")
    fmt_arg(sp)
    sp.set_defaults(func=cmd_ratio)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PoleError, CapExceeded) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
