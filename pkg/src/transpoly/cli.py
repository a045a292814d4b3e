"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 computation budget exceeded,
3 cache corruption.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from .asymptotics import (
    DEFAULT_A,
    LogReal,
    estimate_count_log,
    estimate_rel_volume_proxy_log,
    estimate_volume_log,
    hyp_margin,
)
from .cache import CachedCounter, CacheError, CountCache
from .counting import BudgetExceeded, MarginError, MarginSpec
from .ehrhart import (
    absolute_volume,
    ehrhart_value,
    interpolate_ehrhart,
    relative_volume,
    verify_polynomial,
)
from .report import build_table1, read_actual_file

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_CACHE = 0, 1, 2, 3
DEFAULT_TIME_BUDGET = 600.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")

    def exit(self, status=0, message=None):
        # --help and --version land here
        raise _EarlyExit(status, message or "")


class _EarlyExit(Exception):
    def __init__(self, status, message):
        super().__init__(message)
        self.status = status
        self.message = message


def _fraction(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", metavar="PATH", help="persistent count cache file")
    common.add_argument("--time-budget", type=float, default=DEFAULT_TIME_BUDGET,
                        metavar="SECONDS", help="wall-clock limit per exact count")
    common.add_argument("--threads", type=int, default=1, metavar="K")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--digits", type=int, default=6, help="significant digits for reals")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="transpoly", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", parents=[common],
                       help="exact number of matrices with constant margins")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--z", type=int, help="count lattice points of z*T(m,n) instead")

    p = sub.add_parser("ehrhart", parents=[common], help="Ehrhart polynomial of T(m,n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="check a held-out dilation")

    p = sub.add_parser("volume", parents=[common], help="volume of T(m,n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true",
                   help="exact volume by Ehrhart interpolation (default: asymptotic estimate)")

    p = sub.add_parser("estimate", parents=[common], help="asymptotic estimates in log space")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--lambda-mult", type=int, help="relative-volume proxy at z = K*z0")

    p = sub.add_parser("table1", parents=[common], help="Birkhoff volume accuracy table")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--max-exact-n", type=int, default=5)
    p.add_argument("--actual-file", metavar="PATH", help="CSV of n,volume literature values")
    p.add_argument("--figure", metavar="PATH", help="also render the table as a figure")

    p = sub.add_parser("hyp", parents=[common], help="check the count-estimate hypothesis")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_fraction, help="density s/n (rational)")
    p.add_argument("--s", type=int, help="row sum; gives lambda = s/n")
    p.add_argument("--a", type=float, default=DEFAULT_A)
    return parser


def _real(x: float, digits: int) -> str:
    return f"{x:#.{digits}g}".rstrip(".")


def _render(fmt: str, fields: list, digits: int) -> str:
    """Render a list of (name, value) pairs; floats get ``digits`` significant digits."""
    def show(v):
        if isinstance(v, float):
            return _real(v, digits)
        return "" if v is None else str(v)

    if fmt == "json":
        return json.dumps({k: (v if isinstance(v, (int, float, bool)) or v is None else str(v))
                           for k, v in fields}, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([k for k, _ in fields])
        w.writerow([show(v) for _, v in fields])
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{k} = {show(v)}" for k, v in fields)


def _cmd_count(args, counter):
    if args.z is not None:
        if args.s is not None or args.t is not None:
            raise UsageError("count: give either --z or --s/--t, not both")
        value = ehrhart_value(args.m, args.n, args.z, counter)
        fields = [("m", args.m), ("n", args.n), ("z", args.z), ("count", value)]
    else:
        if args.s is None:
            raise UsageError("count: --s is required unless --z is given")
        t = args.t if args.t is not None else Fraction(args.m * args.s, args.n)
        if t != int(t):
            raise UsageError("count: m*s is not divisible by n; give --t explicitly")
        spec = MarginSpec(args.m, args.s, args.n, int(t))
        value = counter(spec)
        fields = [("m", spec.m), ("s", spec.s), ("n", spec.n), ("t", spec.t), ("count", value)]
    if args.format == "text":
        return str(value)
    # counts travel as decimal strings
    return _render(args.format, [(k, str(v) if k == "count" else v) for k, v in fields],
                   args.digits)


def _cmd_ehrhart(args, counter):
    poly = interpolate_ehrhart(args.m, args.n, counter)
    ok = verify_polynomial(poly, counter) if args.verify else None
    if args.format == "json":
        doc = poly.to_dict()
        doc["relative_volume"] = str(relative_volume(poly))
        doc["verified"] = ok
        return json.dumps(doc, indent=2)
    if args.format == "csv":
        lines = ["power,coefficient"]
        lines += [f"{poly.d - i},{c}" for i, c in enumerate(poly.coeffs)]
        return "\n".join(lines)
    terms = " + ".join(f"({c})*z^{poly.d - i}" for i, c in enumerate(poly.coeffs) if c)
    out = [
        f"period = {poly.z0}",
        f"degree = {poly.d}",
        f"H(z) = {terms}   (z a multiple of {poly.z0}; 0 otherwise)",
        f"nu = {relative_volume(poly)}",
    ]
    if ok is not None:
        out.append(f"held-out check at z = {(poly.d + 1) * poly.z0}: {'ok' if ok else 'FAILED'}")
    return "\n".join(out)


def _cmd_volume(args, counter):
    if args.exact:
        poly = interpolate_ehrhart(args.m, args.n, counter)
        nu = relative_volume(poly)
        vol = absolute_volume(args.m, args.n, nu)
        fields = [("nu", nu), ("vol", vol), ("vol_decimal", float(vol))]
        if args.format == "json":
            return json.dumps({"nu": str(nu), "vol": vol.to_dict()}, indent=2)
        return _render(args.format, fields, args.digits)
    est = estimate_volume_log(args.m, args.n)
    fields = [("log_vol_estimate", est.log_value), ("vol_estimate", est.format(args.digits))]
    return _render(args.format, fields, args.digits)


def _cmd_estimate(args, counter):
    if args.lambda_mult is not None:
        est = estimate_rel_volume_proxy_log(args.m, args.n, args.lambda_mult)
        what = "log_nu_proxy"
    elif args.s is not None or args.t is not None:
        s = args.s if args.s is not None else Fraction(args.n * args.t, args.m)
        t = args.t if args.t is not None else Fraction(args.m * args.s, args.n)
        if s != int(s) or t != int(t):
            raise UsageError("estimate: margins are not integral; give both --s and --t")
        est = estimate_count_log(MarginSpec(args.m, int(s), args.n, int(t)))
        what = "log_count_estimate"
    else:
        est = estimate_volume_log(args.m, args.n)
        what = "log_vol_estimate"
    fields = [(what, est.log_value), ("value", est.format(args.digits))]
    return _render(args.format, fields, args.digits)


def _cmd_hyp(args, counter):
    if args.lam is None and args.s is None:
        raise UsageError("hyp: give --lambda or --s")
    lam = args.lam if args.lam is not None else Fraction(args.s, args.n)
    rep = hyp_margin(args.m, args.n, lam, args.a)
    if args.format == "json":
        return json.dumps(rep.to_dict(), indent=2)
    fields = [("lhs", rep.lhs), ("rhs", rep.rhs), ("a", rep.a),
              ("satisfied", "yes" if rep.satisfied else "no")]
    return _render(args.format, fields, args.digits)


def _format_table(rows, fmt, digits):
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2)
    header = ["n", "estimate", "actual", "estimate/actual"]
    body = []
    for r in rows:
        actual = "" if r.exact_volume is None else LogReal(r.exact_volume.log()).format(digits)
        if r.ratio is not None:
            ratio = _real(r.ratio, digits)
        elif r.status == "budget exceeded":
            ratio = "BUDGET EXCEEDED"
        else:
            ratio = ""
        body.append([str(r.n), r.estimate_log.format(digits), actual, ratio])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue().rstrip("\n")
    widths = [max(len(row[i]) for row in [header] + body) for i in range(4)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in body]
    return "\n".join(lines)


def _cmd_table1(args, counter):
    actual = read_actual_file(args.actual_file) if args.actual_file else None
    rows = build_table1(args.max_n, counter, args.max_exact_n, actual)
    text = _format_table(rows, args.format, args.digits)
    if args.figure:
        from .plotting import plot_table1

        plot_table1(rows, args.figure)
    if any(r.status == "budget exceeded" for r in rows):
        text += "\n# partial results: rows marked BUDGET EXCEEDED ran out of time"
        raise _Partial(text)
    return text


class _Partial(Exception):
    def __init__(self, text):
        super().__init__(text)
        self.text = text


COMMANDS = {
    "count": _cmd_count,
    "ehrhart": _cmd_ehrhart,
    "volume": _cmd_volume,
    "estimate": _cmd_estimate,
    "table1": _cmd_table1,
    "hyp": _cmd_hyp,
}


def run_cli(argv) -> tuple:
    """Run one command; returns ``(exit_code, output_text)`` without touching sys.exit."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        return EXIT_USAGE, str(exc)
    except _EarlyExit as exc:
        return (EXIT_OK if exc.status == 0 else EXIT_USAGE), (exc.message or parser.format_help())
    if args.digits < 1:
        return EXIT_USAGE, "--digits must be positive"
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cache = None
    try:
        cache = CountCache(args.cache)
        counter = CachedCounter(cache, time_budget=args.time_budget, threads=args.threads)
        return EXIT_OK, COMMANDS[args.command](args, counter)
    except UsageError as exc:
        return EXIT_USAGE, f"{parser.prog} {args.command}: {exc}"
    except (MarginError, ValueError) as exc:
        return EXIT_USAGE, f"{parser.prog} {args.command}: error: {exc}"
    except _Partial as exc:
        return EXIT_BUDGET, exc.text
    except BudgetExceeded as exc:
        return EXIT_BUDGET, f"{parser.prog} {args.command}: {exc} (no result)"
    except CacheError as exc:
        return EXIT_CACHE, f"{parser.prog} {args.command}: cache error: {exc}"
    finally:
        if cache is not None:
            cache.close()


def main(argv=None):
    code, text = run_cli(sys.argv[1:] if argv is None else argv)
    if text:
        stream = sys.stderr if code in (EXIT_USAGE, EXIT_CACHE) else sys.stdout
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
