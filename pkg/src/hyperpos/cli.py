"""Command-line front end: ``hyperpos <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 I/O error.
Numbers on the command line are read as exact fractions ("1/2", "0.1" and
"1e-3" all work) so boundary points can be named exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from fractions import Fraction

from . import bessel, gasper, regions, verify
from .errors import HyperposError
from .special_core import DEFAULT_REL_TOL, ParameterTriple, asymptotic_1F2, eval_1F2

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3

# argparse only treats "-3" and "-0.5" as values; accept "-3/8" and "-1e-3" too
NEGATIVE_NUMBER = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?(/\d+)?$")


class UsageError(Exception):
    pass


def number(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, Fraction)):
        return f"{float(value):.17g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def write_records(records: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump([{k: _jsonable(v) for k, v in r.items()} for r in records], out, indent=1)
        out.write("\n")
        return
    if not records:
        return
    writer = csv.writer(out, lineterminator="\n")
    fields = list(records[0])
    writer.writerow(fields)
    for r in records:
        writer.writerow([_fmt(r.get(k)) for k in fields])


def _emit(args, records):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_records(records, args.format, fh)
    else:
        write_records(records, args.format, sys.stdout)


def _grid(lo: Fraction, hi: Fraction, steps: int) -> list[float]:
    if steps < 2:
        raise UsageError("a grid needs at least 2 steps")
    if not lo < hi:
        raise UsageError(f"grid needs min < max, got {lo} and {hi}")
    return [float(lo + (hi - lo) * k / (steps - 1)) for k in range(steps)]


# --------------------------------------------------------------------------
# commands

def cmd_eval(args):
    t = ParameterTriple(args.a, args.b, args.c)
    if not args.x >= 0:
        raise UsageError(f"x must be nonnegative, got {args.x}")
    methods = ("direct", "asymptotic", "gasper") if args.method == "all" else (args.method,)
    records = []
    for m in methods:
        if m == "direct":
            ev = eval_1F2(t.a, t.b, t.c, args.x, rel_tol=args.tol)
        elif m == "asymptotic":
            ev = asymptotic_1F2(t, args.x)
        else:
            if args.x == 0:
                ev = eval_1F2(t.a, t.b, t.c, 0)
            else:
                nu = args.nu if args.nu is not None else t.a - Fraction(1, 2)
                ev = gasper.eval_via_gasper(t, nu, args.x, args.max_n)
        records.append({"method": m, "value": ev.value, "terms_used": ev.terms_used,
                        "tail_bound": ev.tail_bound, "error_bound": ev.error_bound})
    if len(records) > 1:
        values = [r["value"] for r in records]
        spread = max(values) - min(values)
        for r in records:
            r["max_discrepancy"] = spread
    _emit(args, records)
    return EXIT_OK


def _label_record(a, b, c, label: regions.RegionLabel) -> dict:
    br = label.zero_bracket
    return {"a": a, "b": b, "c": c, "region": label.region.value, "clause": label.clause,
            "bracket_hi": br.hi if br else None,
            "bracket_closed": br.closed_hi if br else None}


def cmd_classify(args):
    label = regions.classify(args.a, args.b, args.c)
    record = _label_record(args.a, args.b, args.c, label)
    record["sufficiency"] = regions.sufficiency_check(ParameterTriple(args.a, args.b, args.c)).status.value
    status = EXIT_OK
    if args.verify:
        t = ParameterTriple(args.a, args.b, args.c)
        scan = regions.sign_scan_verify(t, float(args.x) if args.x else None)
        record["scan_x_max"] = scan.x_max
        record["scan_sign_change_lo"] = scan.sign_change.lo if scan.sign_change else None
        record["scan_sign_change_hi"] = scan.sign_change.hi if scan.sign_change else None
        agrees = True
        if label.region in (regions.Region.P_INTERIOR, regions.Region.LAMBDA_CORNER):
            agrees = scan.no_sign_change
        elif label.region is regions.Region.N_ALTERNATING and label.zero_bracket is not None:
            agrees = regions.scan_confirms(scan, label.zero_bracket)
        record["scan_agrees"] = agrees
        if not agrees:
            status = EXIT_VERIFY
    _emit(args, [record])
    return status


def cmd_zeros(args):
    alpha = args.alpha
    records = []
    try:
        bounds = bessel.first_zero_bounds(alpha)
        lo, hi = bounds.lo, bounds.hi
    except HyperposError:
        lo = hi = None
    br = bessel.first_zero_bracket(alpha)
    records.append({"alpha": alpha, "index": 1, "zero": 0.5 * (br.lo + br.hi),
                    "bracket_lo": br.lo, "bracket_hi": br.hi, "bound_lo": lo, "bound_hi": hi})
    if args.x is not None:
        for k, z in enumerate(bessel.bessel_zeros(alpha, float(args.x))[1:], start=2):
            records.append({"alpha": alpha, "index": k, "zero": z, "bracket_lo": None,
                            "bracket_hi": None, "bound_lo": None, "bound_hi": None})
    _emit(args, records)
    return EXIT_OK


def cmd_gasper(args):
    t = ParameterTriple(args.a, args.b, args.c)
    if args.nu is not None:
        nu = args.nu
    else:
        natural = gasper.natural_nu(t)
        nu = natural[0] if natural else t.a - Fraction(1, 2)
    e = gasper.expand(t, nu, args.max_n)
    conclusion = gasper.bound_conclusion(e).value
    records = [{"n": n, "coefficient": v, "sign": s, "nu": nu, "reduction": e.reduction.value,
                "pattern": e.sign_pattern.value, "exact": e.exact, "conclusion": conclusion}
               for (n, v), s in zip(e.coefficients, e.signs)]
    _emit(args, records)
    return EXIT_OK


def cmd_region_grid(args):
    a = float(args.a)
    if not a > 0:
        raise UsageError("a must be positive")
    bs = _grid(*args.b_range, int(args.b_range_steps))
    cs = _grid(*args.c_range, int(args.c_range_steps))
    if bs[0] <= 0 or cs[0] <= 0:
        raise UsageError("grid bounds must be positive")
    records = []
    for b in bs:
        for c in cs:
            label = regions.classify(a, b, c)
            r = _label_record(a, b, c, label)
            records.append(r)
    _emit(args, records)
    return EXIT_OK


def cmd_bessel_integral_grid(args):
    alphas = _grid(*args.alpha_range, int(args.alpha_range_steps))
    betas = _grid(*args.beta_range, int(args.beta_range_steps))
    records = []
    for al in alphas:
        if not al > -1:
            continue
        for be in betas:
            label = regions.bessel_integral_region(al, be)
            records.append({"alpha": al, "beta": be, "region": label.region.value,
                            "detail": label.detail})
    _emit(args, records)
    return EXIT_OK


def cmd_verify(args):
    checks = verify.run_suite(args.suite, args.seed)
    out = io.StringIO()
    for c in checks:
        out.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  [{c.anchor}]  {c.detail}\n")
    failed = [c for c in checks if not c.passed]
    if failed:
        out.write(f"first failure: {failed[0].name}\n")
    out.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed\n")
    text = out.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_VERIFY if failed else EXIT_OK


# --------------------------------------------------------------------------
# parser

def _range(parser, name, help_text):
    parser.add_argument(f"--{name}", nargs=2, type=number, required=True, metavar=("MIN", "MAX"),
                        help=help_text)
    parser.add_argument(f"--{name}-steps", type=int, default=50)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="FILE")

    p = argparse.ArgumentParser(prog="hyperpos", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate 1F2(a; b, c; -x^2/4)")
    for name in "abc":
        e.add_argument(name, type=number)
    e.add_argument("--x", type=number, required=True)
    e.add_argument("--method", choices=("direct", "asymptotic", "gasper", "all"), default="direct")
    e.add_argument("--nu", type=number)
    e.add_argument("--max-n", type=int, default=gasper.DEFAULT_MAX_N)
    e.add_argument("--tol", type=float, default=DEFAULT_REL_TOL)
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("classify", parents=[common], help="positivity region of (a, b, c)")
    for name in "abc":
        c.add_argument(name, type=number)
    c.add_argument("--verify", action="store_true", help="confirm with a sign scan")
    c.add_argument("--x", type=number, help="scan limit for --verify")
    c.set_defaults(func=cmd_classify)

    z = sub.add_parser("zeros", parents=[common], help="zeros of the normalized Bessel function")
    z.add_argument("alpha", type=number)
    z.add_argument("--x", type=number, help="list every zero up to this point")
    z.set_defaults(func=cmd_zeros)

    g = sub.add_parser("gasper", parents=[common], help="squared-Bessel expansion coefficients")
    for name in "abc":
        g.add_argument(name, type=number)
    g.add_argument("--nu", type=number)
    g.add_argument("--max-n", type=int, default=20)
    g.set_defaults(func=cmd_gasper)

    r = sub.add_parser("region-grid", parents=[common], help="classify a (b, c) grid for fixed a")
    r.add_argument("a", type=number)
    _range(r, "b-range", "range of b")
    _range(r, "c-range", "range of c")
    r.set_defaults(func=cmd_region_grid)

    bi = sub.add_parser("bessel-integral-grid", parents=[common],
                        help="label an (alpha, beta) grid for the integral of J_alpha t^-beta")
    _range(bi, "alpha-range", "range of alpha; points with alpha <= -1 are skipped")
    _range(bi, "beta-range", "range of beta")
    bi.set_defaults(func=cmd_bessel_integral_grid)

    v = sub.add_parser("verify", help="run a self-check suite")
    v.add_argument("suite", choices=verify.SUITES + ("all",))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", metavar="FILE")
    v.set_defaults(func=cmd_verify)

    for parser in (p, *sub.choices.values()):
        parser._negative_number_matcher = NEGATIVE_NUMBER
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_DOMAIN
    try:
        return args.func(args)
    except (HyperposError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
