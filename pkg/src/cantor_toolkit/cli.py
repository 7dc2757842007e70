"""Command-line front end.

Subcommands: cover | thickness | intersect | dimension | membership.
Numeric inputs are exact rationals ("p/q", integers, or plain decimals,
all parsed exactly).  Scan centers are digit codes ("11:zero") or the
literal "1/m", never bare numbers: the parameters they name are typically
irrational and only a code pins one down certifiably.  Exit codes:
0 success, 2 invalid configuration, 3 precision exhaustion.
"""

from __future__ import annotations

import argparse
import sys

from . import output
from ._rat import Q, dec_to_rational, to_rational
from .coding import membership
from .dimension import local_dimension_scan
from .errors import CantorToolkitError, DomainError, NoRootError, PrecisionExhaustedError
from .exact_arith import Bracket, Code, Tail, solve_lambda
from .lambda_set import cover, cover_sequence, is_admissible
from .thickness import ek_hulls, find_interleaved_pairs, intersection_report, tau_estimate


class ConfigError(Exception):
    pass


def _parse_rational(text: str, name: str) -> Q:
    try:
        if "." in text:
            return dec_to_rational(text)
        return to_rational(text)
    except (ValueError, TypeError):
        raise ConfigError("%s: cannot parse %r as an exact rational" % (name, text))


def _parse_point(text: str, name: str) -> Q:
    value = _parse_rational(text, name)
    if value == 0:
        raise ConfigError(
            "%s must lie in (0,1); at 0 the parameter set is the whole half-open hull (0, 1/m]"
            % name
        )
    if value == 1:
        raise ConfigError(
            "%s must lie in (0,1); at 1 the parameter set is the single point {1/m}" % name
        )
    if not 0 < value < 1:
        raise ConfigError("%s must lie in (0,1)" % name)
    return value


def _parse_tol(text: str) -> Q:
    text = text.strip()
    if text.startswith("2^-"):
        return Q(1, 2 ** int(text[3:]))
    value = _parse_rational(text, "tol")
    if value <= 0:
        raise ConfigError("tol must be positive")
    return value


def _resolve_center(text: str, x: Q, m: int, tol) -> Bracket:
    if text.strip() == "1/m":
        cap = Q(1, m)
        return Bracket(cap, cap, Code(m, (), Tail.TRUNCATED), x)
    try:
        code = Code.parse(text, m)
    except (DomainError, ValueError):
        raise ConfigError("cannot parse %r as a digit code for m=%d" % (text, m))
    if not is_admissible(x, m, code.prefix):
        raise ConfigError("code %r is not admissible for x=%s" % (text, x))
    try:
        return solve_lambda(x, code, tol)
    except NoRootError:
        raise ConfigError("code %r names no parameter in (0, 1/m] for x=%s" % (text, x))


def _write(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(sub, *, needs_y=False):
    sub.add_argument("--m", type=int, required=True, help="alphabet size, >= 2")
    sub.add_argument("--x", required=True, help="point as exact rational p/q in (0,1)")
    if needs_y:
        sub.add_argument("--y", required=True, help="second point as exact rational p/q")
    sub.add_argument("--tol", default="2^-64", help="bracket width target (2^-N, p/q or decimal)")
    sub.add_argument("--digits", type=int, default=6, help="decimal places in rendered output")
    sub.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantor-toolkit",
        description="Certified construction and analysis of Cantor-set parameter sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cover", help="basic-interval cover of the parameter set")
    _add_common(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv", "svg", "text"), default="json")

    p = sub.add_parser("thickness", help="thickness reports of the thick subsystems")
    _add_common(p)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = sub.add_parser("intersect", help="interleaved subsystem pairs of two points")
    _add_common(p, needs_y=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("dimension", help="local box-dimension scan")
    _add_common(p)
    p.add_argument("--at", required=True, help='scan center: "1/m" or a code like "11:zero"')
    p.add_argument("--deltas", required=True, help="comma-separated window radii (rationals)")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--grid-depth", type=int, default=14, dest="grid_depth")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = sub.add_parser("membership", help="certified membership test for one parameter")
    _add_common(p)
    p.add_argument("--lambda", required=True, dest="lam", help="parameter as exact rational p/q")
    p.add_argument("--max-steps", type=int, default=256, dest="max_steps")
    p.add_argument("--format", choices=("json", "text"), default="text")

    return parser


def _cmd_cover(args) -> int:
    x = _parse_point(args.x, "x")
    tol = _parse_tol(args.tol)
    if args.format == "svg":
        levels = cover_sequence(x, args.m, args.depth, tol)
        _write(output.cover_svg(levels, args.digits), args.out)
        return 0
    level = cover(x, args.m, args.depth, tol)
    if args.format == "json":
        _write(output.to_json(output.cover_payload(level, args.digits)), args.out)
    elif args.format == "csv":
        _write(output.cover_csv(level, args.digits), args.out)
    else:
        _write(output.cover_text(level, args.digits), args.out)
    return 0


def _cmd_thickness(args) -> int:
    x = _parse_point(args.x, "x")
    tol = _parse_tol(args.tol)
    if args.kmax < 0:
        raise ConfigError("kmax must be >= 0")
    systems = ek_hulls(x, args.m, args.kmax, tol)
    reports = [tau_estimate(x, args.m, k, args.depth, tol) for k in range(1, args.kmax + 1)]
    payload = output.thickness_payload(x, args.m, systems, reports, args.digits)
    if args.format == "json":
        _write(output.to_json(payload), args.out)
    elif args.format == "csv":
        _write(output.thickness_csv(payload), args.out)
    else:
        _write(output.thickness_text(payload, args.digits), args.out)
    return 0


def _cmd_intersect(args) -> int:
    x = _parse_point(args.x, "x")
    y = _parse_point(args.y, "y")
    tol = _parse_tol(args.tol)
    pairs = find_interleaved_pairs(x, y, args.m, args.kmax, args.depth, tol)
    reports = [intersection_report(p) for p in pairs]
    payload = output.interleave_payload(x, y, args.m, args.kmax, pairs, reports, args.digits)
    if args.format == "json":
        _write(output.to_json(payload), args.out)
    else:
        _write(output.interleave_text(payload), args.out)
    return 0


def _cmd_dimension(args) -> int:
    x = _parse_point(args.x, "x")
    tol = _parse_tol(args.tol)
    center = _resolve_center(args.at, x, args.m, tol)
    deltas = [_parse_rational(part, "deltas") for part in args.deltas.split(",") if part.strip()]
    if not deltas:
        raise ConfigError("need at least one delta")
    scan = local_dimension_scan(x, args.m, center, deltas, args.depth, args.grid_depth, tol)
    payload = output.dimension_payload(x, args.m, scan, args.digits)
    if args.format == "json":
        _write(output.to_json(payload), args.out)
    elif args.format == "csv":
        _write(output.dimension_csv(scan), args.out)
    else:
        _write(output.dimension_text(payload), args.out)
    return 0


def _cmd_membership(args) -> int:
    x = _parse_point(args.x, "x")
    lam = _parse_rational(args.lam, "lambda")
    if not (0 < lam and lam * args.m <= 1):
        raise ConfigError("lambda must lie in (0, 1/m]")
    result = membership(x, lam, args.m, max_steps=args.max_steps)
    payload = output.membership_payload(x, lam, args.m, result)
    if args.format == "json":
        _write(output.to_json(payload), args.out)
    else:
        _write(output.membership_text(payload), args.out)
    return 0


_HANDLERS = {
    "cover": _cmd_cover,
    "thickness": _cmd_thickness,
    "intersect": _cmd_intersect,
    "dimension": _cmd_dimension,
    "membership": _cmd_membership,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.m < 2:
        print("error: m must be >= 2", file=sys.stderr)
        return 2
    if args.digits < 0:
        print("error: digits must be >= 0", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except DomainError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except PrecisionExhaustedError as exc:
        print("precision exhausted: %s" % exc, file=sys.stderr)
        return 3
    except CantorToolkitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
