"""Command-line interface: ``digitfn <subcommand> ...``.

Exit status is 0 when every check passes, 1 when a check fails or a
counterexample is found, and 2 for usage, input or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any

from . import clt
from .digits import naf
from .errors import DigitFnError, InputError
from .funcs import BUILTIN_NAMES, builtin, rlt_inverse
from .quasi import ADDITIVE, MULTIPLICATIVE, QuasiSpec, SplitEvaluator, enumerate_bset, split_blocks, verify_identity
from .quasi import BSetAutomaton, monotone_parameter_check
from .regular import (
    affine_closure,
    block_count_transducer,
    check_quasiadditive,
    check_quasimultiplicative,
    check_transducer_conditions,
    find_quasimultiplicative_parameter,
    load_representation,
    load_transducer,
    minimize,
    naf_weight_transducer,
)

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def render(value: Any) -> Any:
    """Rationals as ``"p/q"`` strings, reals to 9 significant digits."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return float(f"{value:.9g}")
    if isinstance(value, dict):
        return {k: render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    return str(value)


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    data = render(report)
    if fmt == "json":
        out.write(json.dumps(data, indent=2) + "\n")
        return
    for key, val in data.items():
        if isinstance(val, list) and val and isinstance(val[0], str):
            out.write(f"{key}:\n")
            for line in val:
                out.write(f"  {line}\n")
        elif isinstance(val, (list, dict)):
            out.write(f"{key}: {json.dumps(val)}\n")
        else:
            out.write(f"{key}: {val}\n")


def _spec_from_args(args) -> QuasiSpec:
    f = builtin(args.fn).spec
    if getattr(args, "r", None) is not None:
        f = f.with_r(args.r)
    return f


# -- subcommands -----------------------------------------------------------------

def cmd_eval(args) -> tuple[int, dict]:
    f = _spec_from_args(args)
    report = {"function": f.name, "n": args.n, "value": f(args.n)}
    if f.name.startswith("naf"):
        report["naf"] = str(naf(args.n))
    if args.split:
        report["value_by_splitting"] = SplitEvaluator(f)(args.n)
        report["agree"] = report["value"] == report["value_by_splitting"]
    return (EXIT_OK if report.get("agree", True) else EXIT_FAIL), report


def cmd_split(args) -> tuple[int, dict]:
    res = split_blocks(args.n, args.q, args.r)
    return EXIT_OK, {
        "n": args.n, "q": args.q, "r": args.r,
        "blocks": list(res.blocks), "reduced": list(res.reduced), "exponents": list(res.exponents),
    }


def cmd_check_quasi(args) -> tuple[int, dict]:
    f = _spec_from_args(args)
    if args.q is not None and args.q != f.q:
        raise InputError(f"{f.name} is defined for base {f.q}, not {args.q}")
    if args.mode is not None:
        f = replace(f, mode=ADDITIVE if args.mode == "add" else MULTIPLICATIVE)
    if args.s is not None:
        bad = monotone_parameter_check(f, args.s, args.a_max, args.k_max)
        r = args.s
    else:
        bad = verify_identity(f, args.a_max, args.k_max)
        r = f.r
    report = {"function": f.name, "q": f.q, "r": r, "mode": f.mode, "a_max": args.a_max, "k_max": args.k_max,
              "result": "PASS" if bad is None else "FAIL"}
    if bad is not None:
        report["counterexample"] = {"a": bad.a, "k": bad.k, "b": bad.b, "lhs": bad.lhs, "rhs": bad.rhs}
    return (EXIT_OK if bad is None else EXIT_FAIL), report


def cmd_check_regular(args) -> tuple[int, dict]:
    R = load_representation(args.rep)
    report: dict = {"representation": str(args.rep), "dimension": R.dim}
    if args.minimize_only:
        M = minimize(R)
        report["minimized"] = M.to_json()
        return EXIT_OK, report
    if args.mult:
        r = args.r
        if r is None:
            r = find_quasimultiplicative_parameter(R)
            report["found_r"] = r
            if r is None:
                report["result"] = "FAIL"
                return EXIT_FAIL, report
        rep = check_quasimultiplicative(R, r, minimal=not args.raw)
        report.update({"mode": MULTIPLICATIVE, "r": r, "checks": rep.lines(), "result": "PASS" if rep.holds else "FAIL"})
        return (EXIT_OK if rep.holds else EXIT_FAIL), report
    if args.r is None:
        raise DigitFnError("--r is required for the additive check")
    rep = check_quasiadditive(R, args.r)
    report.update({"mode": ADDITIVE, "r": args.r, "checks": rep.lines(), "result": "PASS" if rep.holds else "FAIL"})
    if args.show_closures:
        report["U_basis"] = affine_closure(R, "left").basis
        report["V_basis"] = affine_closure(R, "right").basis
    return (EXIT_OK if rep.holds else EXIT_FAIL), report


def cmd_check_transducer(args) -> tuple[int, dict]:
    if args.transducer:
        T = load_transducer(args.transducer)
        src = str(args.transducer)
    elif args.builtin == "naf-weight":
        T, src = naf_weight_transducer(), "naf-weight"
    else:
        T, src = block_count_transducer([args.builtin.split(":", 1)[1]]), args.builtin
    rep = check_transducer_conditions(T, args.r)
    report = {"transducer": src, "states": len(T.states), "r": args.r, "checks": rep.lines(),
              "result": "PASS" if rep.holds else "FAIL"}
    return (EXIT_OK if rep.holds else EXIT_FAIL), report


def cmd_constants(args) -> tuple[int, dict]:
    report: dict = {}
    if args.rep:
        if args.r is None:
            raise DigitFnError("--r is required with --rep")
        R = load_representation(args.rep)
        q, r = R.q, args.r
        m = clt.exact_moments(R, r)
        report["function"] = str(args.rep)
    else:
        f = _spec_from_args(args)
        q, r = f.q, f.r
        report["function"] = f.name
        if args.rlt is not None:
            mu, s2 = clt.rlt_constants(rlt_inverse(f), args.rlt)
            report.update({"mu": mu, "sigma2": s2, "provenance": f"rlt-closed-form(I={args.rlt})", "tail_params": None})
            return EXIT_OK, report
        if args.exact:
            if not f.additive or f.rep is None:
                raise DigitFnError(f"{f.name}: exact constants need an additive function with a representation")
            m = clt.exact_moments(f.rep, r)
        else:
            spectrum = clt.bset_value_spectrum(f, args.truncate)
            m = clt.truncated_moments(f, args.truncate, tail=args.tail == "on", spectrum=spectrum)
            if args.singularity:
                series = clt.BSeries.from_spectrum(f, spectrum)
                report["singularity_mu"] = clt.singularity_mean(series)
                report["singularity_sigma2"] = clt.singularity_variance(series)
    mu, s2 = clt.constants(m, q, r)
    report.update({
        "mu": mu, "sigma2": s2, "provenance": m.provenance,
        "bt": m.bt, "btt": m.btt, "btx": m.btx, "tail_params": m.tail_params,
    })
    # keep headline keys first
    order = ["function", "mu", "sigma2", "provenance", "bt", "btt", "btx", "tail_params"]
    return EXIT_OK, {k: report[k] for k in order if k in report} | {k: v for k, v in report.items() if k not in order}


def _experiment_worker(name: str, r: int | None, k: int) -> clt.ExperimentReport:
    f = builtin(name).spec
    if r is not None:
        f = f.with_r(r)
    return clt.empirical_experiment(f, k)


def cmd_experiment(args) -> tuple[int, dict]:
    f = _spec_from_args(args)
    ks = args.k
    if args.jobs > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_experiment_worker, [args.fn] * len(ks), [args.r] * len(ks), ks))
    else:
        reports = [clt.empirical_experiment(f, k) for k in ks]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "count", "mean", "variance", "ks_distance"])
            for rep in reports:
                w.writerow([render(x) for x in rep.row().values()])
    if args.hist:
        with open(args.hist, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "lo", "hi", "mass"])
            for rep in reports:
                for lo, hi, mass in rep.histogram:
                    w.writerow([rep.k, lo, hi, render(mass)])
    rows = []
    for rep in reports:
        row = rep.row()
        row["degenerate"] = rep.degenerate
        if rep.ks_distance_lattice is not None:
            row["ks_distance_lattice"] = rep.ks_distance_lattice
        rows.append(row)
    return EXIT_OK, {"function": f.name, "experiments": rows}


def cmd_gf_check(args) -> tuple[int, dict]:
    f = _spec_from_args(args)
    rep = clt.gf_identity_check(f, args.K, args.t)
    bad = [r for r in rep.rows if not r.ok]
    report = {"function": f.name, "K": args.K, "t": list(args.t), "compared": len(rep.rows),
              "result": "PASS" if rep.holds else "FAIL"}
    if bad:
        report["mismatches"] = [{"t": r.t, "k": r.k, "series": r.series, "direct": r.direct} for r in bad[:10]]
    return (EXIT_OK if rep.holds else EXIT_FAIL), report


def cmd_bset(args) -> tuple[int, dict]:
    aut = BSetAutomaton(args.q, args.r)
    report = {"q": args.q, "r": args.r, "max_len": args.max_len, "counts": aut.counts(args.max_len)[1:],
              "growth_rate": aut.growth_rate()}
    if not args.count_only:
        report["members"] = enumerate_bset(args.q, args.r, args.max_len)
    return EXIT_OK, report


# -- parser ----------------------------------------------------------------------

def _fn_arg(p, required=True):
    p.add_argument("--fn", required=required, help=f"builtin function: {', '.join(BUILTIN_NAMES)}")
    p.add_argument("--r", type=int, default=None, help="override the parameter r")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="digitfn", description=__doc__.splitlines()[0])
    parser.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a builtin function")
    _fn_arg(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--split", action="store_true", help="also evaluate through block splitting")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("split", help="split an expansion into blocks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("check-quasi", help="brute-force check of the functional equation")
    _fn_arg(p)
    p.add_argument("--q", type=int, default=None, help="expected base (must match the function)")
    p.add_argument("--mode", choices=("add", "mult"), default=None, help="override the identity to test")
    p.add_argument("--a-max", "--amax", dest="a_max", type=int, default=64)
    p.add_argument("--k-max", "--kmax", dest="k_max", type=int, default=8)
    p.add_argument("--s", type=int, default=None, help="check with a larger parameter s >= r")
    p.set_defaults(func=cmd_check_quasi)

    p = sub.add_parser("check-regular", help="decide quasi-additivity/multiplicativity of a representation")
    p.add_argument("--rep", required=True, help="representation JSON file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--mult", action="store_true")
    mode.add_argument("--add", action="store_true")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--raw", action="store_true", help="skip minimization in the multiplicative test")
    p.add_argument("--minimize-only", action="store_true")
    p.add_argument("--show-closures", action="store_true")
    p.set_defaults(func=cmd_check_regular)

    p = sub.add_parser("check-transducer", help="check the transducer sufficient condition")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--transducer", help="transducer JSON file")
    src.add_argument("--builtin", help="naf-weight or block-count:<digits>")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_check_transducer)

    p = sub.add_parser("constants", help="mean and variance constants")
    _fn_arg(p, required=False)
    p.add_argument("--rep", help="additive representation file (with --r)")
    how = p.add_mutually_exclusive_group()
    how.add_argument("--exact", action="store_true")
    how.add_argument("--truncate", type=int, default=28, metavar="L")
    how.add_argument("--rlt", type=int, nargs="?", const=200, default=None, metavar="I",
                     help="closed-form run length transform sums truncated at I")
    p.add_argument("--tail", choices=("on", "off"), default="on")
    p.add_argument("--singularity", action="store_true", help="add the dominant-root cross-check")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("experiment", help="exhaustive distribution over n < q^k")
    _fn_arg(p)
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--out", help="CSV of k, count, mean, variance, ks_distance")
    p.add_argument("--hist", help="CSV of the standardized histogram")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (1 = in-process reference)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("gf-check", help="generating function identity against direct sums")
    _fn_arg(p)
    p.add_argument("--K", type=int, default=12)
    p.add_argument("--t", type=int, nargs="+", default=[0, 1, 2])
    p.set_defaults(func=cmd_gf_check)

    p = sub.add_parser("bset", help="list or count the B-set")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_bset)
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "constants" and not args.fn and not args.rep:
        parser.error("constants needs --fn or --rep")
    try:
        code, report = args.func(args)
    except (DigitFnError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"digitfn: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    emit(report, args.fmt, out)
    return code


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
