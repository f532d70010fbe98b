"""Command-line front end: shape JSON in, machine-readable reports out.

Subcommands: ``bkk``, ``expect``, ``bounds``, ``mc-det``, ``simulate``,
``verify``.  Shapes are read from JSON files of the form
``{"block_sizes": [...], "degrees": [[...], ...]}``.  Reports are JSON on
stdout (schema version 1); per-sample or per-check CSV goes to ``--dump``.
Exit codes: 0 ok, 2 invalid input, 3 resource cap exceeded, 4 verification
failure.  The environment variable MHROOTS_THREADS overrides ``--workers``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import __version__, corpus
from .bkk import bkk_permanent, bkk_recursive, is_simply_reducible
from .empirical import (
    DEGENERATE_TOL,
    INFINITY_TOL,
    UnsupportedFamilyError,
    empirical_expectation,
    sample_counts,
)
from .expectation import (
    ExpectationResult,
    bounds,
    expectation,
    row_recursion_check,
)
from .gaussian import abs_det_closed_standard, mc_abs_det, variance_profile
from .permanent import MatrixTooLargeError
from .shape import ShapeError, ShapeSpec, SupportTooLargeError, from_json

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_TOO_LARGE = 3
EXIT_VERIFY_FAIL = 4


def _load_shape(path: str) -> ShapeSpec:
    with open(path) as fh:
        data = json.load(fh)
    return from_json(data)


def _tolerances(args) -> dict:
    return {
        "imag_tau": args.tau_imag,
        "infinity_tol": INFINITY_TOL,
        "degenerate_tol": DEGENERATE_TOL,
        "stderr_multiplier": args.stderr_mult,
        "miss_budget": args.miss_budget,
    }


def _mc_json(est) -> dict:
    # elapsed is intentionally dropped so identical runs emit identical bytes
    return {
        "mean": est.mean,
        "stderr": est.stderr,
        "samples": est.samples,
        "seed": est.seed,
        "provenance": "monte_carlo",
    }


def _expectation_json(res: ExpectationResult) -> dict:
    out: dict = {
        "value": res.value,
        "provenance": res.kind,
        "stderr": res.stderr,
        "prefactor": res.prefactor,
    }
    if res.closed is not None:
        out["closed_form"] = {
            "rational": f"{res.closed.rational.numerator}/{res.closed.rational.denominator}",
            "pi_sqrt_power": res.closed.pi_sqrt_power,
            "radicand": res.closed.radicand,
        }
    if res.mc is not None:
        out["mc"] = _mc_json(res.mc)
    if res.parts is not None:
        out["parts"] = [_expectation_json(p) for p in res.parts]
    return out


def _report(args, subcommand: str, spec: ShapeSpec | None, results: dict, t0: float) -> dict:
    return {
        "schema": 1,
        "version": __version__,
        "subcommand": subcommand,
        "shape": spec.to_json() if spec is not None else None,
        "seed": getattr(args, "seed", None),
        "samples": getattr(args, "samples", None),
        "workers": _workers(args),
        "tolerances": _tolerances(args),
        "results": results,
        "wall_time_s": time.perf_counter() - t0,
    }


def _emit(report: dict) -> None:
    print(json.dumps(report, sort_keys=True, indent=2))


def _workers(args) -> int:
    env = os.environ.get("MHROOTS_THREADS")
    if env:
        return max(1, int(env))
    return max(1, getattr(args, "workers", 1))


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_bkk(args) -> int:
    t0 = time.perf_counter()
    spec = _load_shape(args.shape)
    value = bkk_recursive(spec)
    results: dict = {
        "bkk": {"value": value.count, "provenance": "exact", "derivation": value.derivation},
    }
    if spec.n <= 12:
        perm = bkk_permanent(spec)
        results["bkk_permanent_check"] = {"value": perm.count, "provenance": "exact"}
    red = is_simply_reducible(spec)
    results["simply_reducible"] = red.reducible
    results["witness"] = [list(step) for step in red.witness] if red.witness else None
    _emit(_report(args, "bkk", spec, results, t0))
    return EXIT_OK


def cmd_expect(args) -> int:
    t0 = time.perf_counter()
    spec = _load_shape(args.shape)
    res = expectation(spec, args.samples, args.seed, _workers(args))
    _emit(_report(args, "expect", spec, {"expectation": _expectation_json(res)}, t0))
    return EXIT_OK


def cmd_bounds(args) -> int:
    t0 = time.perf_counter()
    spec = _load_shape(args.shape)
    rep = bounds(spec, args.samples, args.seed, _workers(args))
    results = {
        "upper": {"value": rep.upper, "provenance": "exact"},
        "lower": {"value": rep.lower, "provenance": "exact"},
        "bkk": {"value": rep.bkk, "provenance": "exact"},
        "estimate": _expectation_json(rep.estimate),
        "equality": rep.equality,
        "margin_upper": rep.margin_upper,
        "margin_lower": rep.margin_lower,
    }
    _emit(_report(args, "bounds", spec, results, t0))
    slack = args.stderr_mult * rep.estimate.stderr + 1e-9 * max(1.0, rep.upper)
    if rep.margin_upper < -slack or rep.margin_lower < -slack:
        print("bounds violated beyond Monte Carlo slack", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def cmd_mc_det(args) -> int:
    t0 = time.perf_counter()
    spec = _load_shape(args.shape)
    est = mc_abs_det(variance_profile(spec), args.samples, args.seed, _workers(args))
    _emit(_report(args, "mc-det", spec, {"mean_abs_det": _mc_json(est)}, t0))
    return EXIT_OK


def cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    spec = _load_shape(args.shape)
    est = empirical_expectation(spec, args.samples, args.seed)
    counts, flags = sample_counts(spec, args.samples, args.seed, tau=args.tau_imag)
    results = {
        "mean_roots": _mc_json(est),
        "flagged_samples": len(flags),
    }
    if args.dump:
        _write_csv(
            args.dump,
            ["sample", "root_count", "flags"],
            (
                (i, int(counts[i]), "|".join(flags.get(i, ())))
                for i in range(args.samples)
            ),
        )
        results["dump"] = args.dump
    _emit(_report(args, "simulate", spec, results, t0))
    return EXIT_OK


def _verify_checks(args):
    """One dict per check; status PASS, WARN (an MC miss), or FAIL."""
    mult = args.stderr_mult
    workers = _workers(args)

    def line(check, index, status, detail):
        return {"check": check, "index": index, "status": status, "detail": detail}

    for n in range(1, 5):
        est = mc_abs_det(np.ones((n, n)), args.samples, args.seed + n, workers)
        target = abs_det_closed_standard(n)
        miss = abs(est.mean - target) > mult * est.stderr
        yield line(
            "det_mean_closed_form", n, "WARN" if miss else "PASS",
            f"n={n} mc={est.mean:.6g} closed={target:.6g} stderr={est.stderr:.3g}",
        ), True

    for t in range(args.count):
        spec = corpus.random_shape(args.seed, t, max_n=args.n_max, max_degree=args.delta_max)
        perm = bkk_permanent(spec).count
        rec = bkk_recursive(spec).count
        pivots_ok = all(
            bkk_recursive(spec, ("row", i)).count == perm for i in range(1, spec.n + 1)
        ) and all(
            bkk_recursive(spec, ("column", j)).count == perm
            for j in range(1, spec.k + 1)
            if spec.block_sizes[j - 1] > 0
        )
        ok = perm == rec and pivots_ok
        yield line(
            "bkk_consistency", t, "PASS" if ok else "FAIL",
            f"shape={spec.to_json()} permanent={perm} recursive={rec}",
        ), False

        rep = bounds(spec, args.samples, args.seed + 1000 + t, workers)
        is_mc = rep.estimate.stderr > 0
        slack = mult * rep.estimate.stderr + 1e-9 * max(1.0, rep.upper)
        sandwich_ok = rep.margin_upper >= -slack and rep.margin_lower >= -slack
        status = "PASS" if sandwich_ok else ("WARN" if is_mc else "FAIL")
        yield line(
            "bound_sandwich", t, status,
            f"upper={rep.upper:.6g} est={rep.estimate.value:.6g} lower={rep.lower:.6g}",
        ), is_mc

        if rep.equality:
            tight = (
                abs(rep.margin_upper) <= slack and abs(rep.margin_lower) <= slack
            )
            status = "PASS" if tight else ("WARN" if is_mc else "FAIL")
            yield line(
                "bound_tightness", t, status,
                f"margins=({rep.margin_upper:.3g},{rep.margin_lower:.3g})",
            ), is_mc

        for i in range(1, spec.n + 1):
            rr = row_recursion_check(spec, i, args.samples, args.seed + 2000 + t, workers)
            is_mc_row = rr.middle.stderr > 0 or rr.upper_stderr > 0 or rr.lower_stderr > 0
            status = "PASS" if rr.holds else ("WARN" if is_mc_row else "FAIL")
            yield line(
                "row_recursion", f"{t}:{i}", status,
                f"upper={rr.upper:.6g} mid={rr.middle.value:.6g} lower={rr.lower:.6g}",
            ), is_mc_row


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    checks = []
    mc_total = 0
    warns = 0
    fails = 0
    for check, is_mc in _verify_checks(args):
        checks.append(check)
        mc_total += bool(is_mc)
        warns += check["status"] == "WARN"
        fails += check["status"] == "FAIL"
    warn_rate = warns / mc_total if mc_total else 0.0
    ok = fails == 0 and warn_rate <= args.miss_budget
    results = {
        "checks": checks,
        "counts": {
            "pass": sum(c["status"] == "PASS" for c in checks),
            "warn": warns,
            "fail": fails,
        },
        "mc_checks": mc_total,
        "warn_rate": warn_rate,
        "ok": ok,
    }
    if args.dump:
        _write_csv(
            args.dump,
            ["check", "index", "status", "detail"],
            ((c["check"], c["index"], c["status"], c["detail"]) for c in checks),
        )
        results["dump"] = args.dump
    _emit(_report(args, "verify", None, results, t0))
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def _add_common(parser, samples_default=100_000):
    parser.add_argument("--samples", type=int, default=samples_default)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--dump", type=str, default=None, help="CSV output path")
    parser.add_argument("--tau-imag", dest="tau_imag", type=float, default=1e-8)
    parser.add_argument("--stderr-mult", dest="stderr_mult", type=float, default=4.0)
    parser.add_argument("--miss-budget", dest="miss_budget", type=float, default=0.05)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mhroots",
        description="Expected real-root counts of random multihomogeneous systems",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bkk", help="generic complex-root count and reducibility")
    p.add_argument("shape")
    _add_common(p)
    p.set_defaults(func=cmd_bkk)

    p = sub.add_parser("expect", help="expected real-root count")
    p.add_argument("shape")
    _add_common(p)
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("bounds", help="two-sided bounds and point estimate")
    p.add_argument("shape")
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("mc-det", help="Monte Carlo mean |det| of the shape's matrix")
    p.add_argument("shape")
    _add_common(p)
    p.set_defaults(func=cmd_mc_det)

    p = sub.add_parser("simulate", help="sample systems and count real roots")
    p.add_argument("shape")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="batch property verification on a random corpus")
    _add_common(p, samples_default=100_000)
    p.add_argument("--count", type=int, default=100, help="number of corpus shapes")
    p.add_argument("--n-max", dest="n_max", type=int, default=5)
    p.add_argument("--delta-max", dest="delta_max", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ShapeError, UnsupportedFamilyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (MatrixTooLargeError, SupportTooLargeError) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
