"""Command-line front end.

Subcommands: member, cover, theorem1, theorem2.  All exact inputs use the
canonical text forms ("p/q", "(a+b*sqrt(d))/c", "t=p/q",
"t=log((a+b*sqrt(d))/c)/log(n)"); decimals like "0.6" are parsed exactly, and
the aliases "phi" and "silver" expand to (1+sqrt(5))/2 and 1+sqrt(2).

Exit codes: 0 success, 1 internal or precision failure, 2 hypothesis
violation (invalid parameter domain), 3 parse/usage error.  JSON output has
sorted keys; every number carries an exact form plus a 20-digit decimal
rendering that is display-only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import construct, gapscan
from .diocore import (
    DEFAULT_ORACLE_Q,
    DiophParams,
    brute_force_member,
    is_member,
)
from .exactnum import (
    Exponent,
    PrecisionExhausted,
    QuadIrr,
    UnsupportedFieldError,
    Value,
    decimal_str,
    exponent_str,
    make_quad,
    parse_exponent,
    parse_value,
    value_str,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_HYPOTHESIS = 2
EXIT_PARSE = 3

ALIASES = {
    "phi": lambda: make_quad(1, 1, 2, 5),
    "silver": lambda: make_quad(1, 1, 1, 2),
}


class ParseFailure(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we use 3
        raise ParseFailure(message)


def parse_value_arg(text: str) -> Value:
    s = text.strip()
    if s in ALIASES:
        return ALIASES[s]()
    if "." in s and "sqrt" not in s:
        try:
            return Fraction(s)  # exact decimal like "0.6"
        except ValueError as e:
            raise ParseFailure(f"bad value {text!r}") from e
    try:
        return parse_value(s)
    except (ValueError, UnsupportedFieldError) as e:
        raise ParseFailure(f"bad value {text!r}: {e}") from e


def parse_exponent_arg(text: str) -> Exponent:
    s = text.strip()
    if "." in s and "sqrt" not in s:
        try:
            return Exponent.rational(Fraction(s))
        except ValueError as e:
            raise ParseFailure(f"bad exponent {text!r}: {e}") from e
    try:
        return parse_exponent(s)
    except ValueError as e:
        raise ParseFailure(f"bad exponent {text!r}: {e}") from e


def number_json(x) -> dict:
    """Exact form plus display-only decimal."""
    if isinstance(x, Exponent):
        out = {"exact": exponent_str(x)}
        if x.rat is not None:
            out["decimal"] = decimal_str(x.rat)
        else:
            lo, hi = x.enclosure(96)
            out["decimal"] = decimal_str((lo + hi) / 2)
        return out
    return {"exact": value_str(x), "decimal": decimal_str(x)}


def emit(payload: dict, args) -> None:
    payload = dict(payload)
    payload["decimal_fields_are_display_only"] = True
    text = json.dumps(payload, indent=2, sort_keys=True)
    out_path = getattr(args, "out", None)
    if out_path:
        tmp = out_path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(text + "\n")
        os.replace(tmp, out_path)
    else:
        print(text)


def load_config(path: Optional[str]) -> dict:
    """key=value lines; '#' comments and blank lines ignored."""
    if not path:
        return {}
    conf = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseFailure(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            conf[key.strip()] = val.strip()
    return conf


def _params(args) -> DiophParams:
    try:
        return DiophParams(parse_value_arg(args.gamma), parse_exponent_arg(args.tau))
    except ValueError as e:
        if isinstance(e, ParseFailure):
            raise
        raise construct.HypothesisViolation(str(e)) from e


# ---------------------------------------------------------------------------
# subcommands

def cmd_member(args) -> int:
    params = _params(args)
    xi = parse_value_arg(args.xi)
    verdict = is_member(xi, params, max_precision=args.max_precision)
    payload = {
        "command": "member",
        "xi": number_json(xi),
        "gamma": number_json(params.gamma),
        "tau": number_json(params.tau),
        "classification": params.classification,
        "verdict": verdict.to_json(),
        "record": verdict.to_record(),
    }
    if args.oracle is not None:
        report = brute_force_member(xi, params, Q=args.oracle)
        agree = (verdict.kind == "member" and report.consistent) or \
                (verdict.kind == "not-member" and not report.consistent)
        payload["oracle"] = report.to_json()
        payload["oracle_agrees"] = agree if verdict.kind != "unknown" else None
    emit(payload, args)
    return EXIT_OK


def cmd_cover(args) -> int:
    params = _params(args)
    cover = gapscan.build_cover(params, args.Q, precision=args.precision)
    bounds = gapscan.measure_bounds(cover)
    touches = gapscan.find_touching_points(cover)
    if args.csv:
        cover.to_csv(args.csv)
    payload = {
        "command": "cover",
        "gamma": number_json(params.gamma),
        "tau": number_json(params.tau),
        "Q": args.Q,
        "classification": params.classification,
        "interval_count": cover.interval_count,
        "component_count": len(cover),
        "covered_length_lower": number_json(bounds.covered_lower),
        "covered_length_upper": number_json(bounds.covered_upper),
        "measure_lower": number_json(bounds.lower),
        "measure_upper": number_json(bounds.upper),
        "tail_bound": number_json(bounds.tail_bound),
        "divergent_tail": bounds.divergent_tail,
        "touching_confirmed": [
            {"xi": number_json(t.xi),
             "left": f"{t.left_source[0]}/{t.left_source[1]}",
             "right": f"{t.right_source[0]}/{t.right_source[1]}"}
            for t in touches if t.confirmed
        ],
        "touching_unconfirmed_count": sum(1 for t in touches if not t.confirmed),
        "csv": args.csv,
    }
    emit(payload, args)
    return EXIT_OK


def _parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError as e:
        raise ParseFailure(f"bad range {text!r}, expected A..B") from e


def cmd_theorem1(args) -> int:
    if args.range:
        lo, hi = _parse_range(args.range)
        ns = list(range(lo, hi + 1))
    elif args.n is not None:
        ns = [args.n]
    else:
        raise ParseFailure("theorem1 needs n or --range")
    instances = [construct.theorem1(n, max_precision=args.max_precision) for n in ns]
    payload = {
        "command": "theorem1",
        "instances": [inst.to_json() for inst in instances],
        "certified": len(instances),
    }
    emit(payload, args)
    return EXIT_OK


def cmd_theorem2(args) -> int:
    alpha = parse_value_arg(args.alpha)
    if not isinstance(alpha, QuadIrr):
        raise construct.HypothesisViolation("alpha must be a quadratic irrational")
    params = _params(args)
    inst = construct.theorem2_transform(alpha, params.gamma, params.tau,
                                        max_precision=args.max_precision)
    if args.search:
        inst.search_result = construct.search_isolation_params(
            inst.alpha_prime, params.tau)
    payload = {"command": "theorem2", "transform": inst.to_json()}
    emit(payload, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring

def build_parser() -> _Parser:
    parser = _Parser(prog="diogap",
                     description="Exact membership, covers, and isolation "
                                 "certificates for badly-approximable sets")
    parser.add_argument("--config", help="key=value config file overriding defaults")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", help="write JSON atomically to this path")
        p.add_argument("--max-precision", type=int, default=4096,
                       dest="max_precision", help="enclosure precision ceiling (bits)")

    p = sub.add_parser("member", help="decide membership of an exact number")
    p.add_argument("--xi", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--oracle", type=int, nargs="?", const=DEFAULT_ORACLE_Q,
                   default=None, metavar="Q",
                   help="cross-check with the definition scan up to Q")
    common(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("cover", help="excluded-interval cover and measure bracket")
    p.add_argument("--gamma", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--q", dest="Q", type=int, default=1000)
    p.add_argument("--csv", help="write the merged intervals as CSV")
    p.add_argument("--precision", type=int, default=gapscan.COVER_PRECISION)
    common(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("theorem1", help="certified isolated point for n >= 2")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--range", help="A..B builds every n in the range")
    common(p)
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("theorem2", help="equivalent-representative transform")
    p.add_argument("--alpha", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--search", action="store_true",
                   help="exploratory parameter search for the image point")
    common(p)
    p.set_defaults(func=cmd_theorem2)
    return parser


def apply_config(args, conf: dict) -> None:
    # config supplies defaults; explicit flags win because argparse already
    # filled them, so only overwrite values that are still at their default
    mapping = {"q": ("Q", int), "max_precision": ("max_precision", int),
               "precision": ("precision", int), "oracle": ("oracle", int)}
    for key, (attr, conv) in mapping.items():
        if key in conf and hasattr(args, attr):
            defaults = {"Q": 1000, "max_precision": 4096,
                        "precision": gapscan.COVER_PRECISION, "oracle": None}
            if getattr(args, attr) == defaults.get(attr):
                setattr(args, attr, conv(conf[key]))


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        apply_config(args, load_config(args.config))
        return args.func(args)
    except ParseFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except construct.HypothesisViolation as e:
        print(f"hypothesis violation: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (PrecisionExhausted, construct.IndeterminateFloor) as e:
        print(f"precision failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except Exception as e:  # keep exit-code contract for anything unexpected
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
