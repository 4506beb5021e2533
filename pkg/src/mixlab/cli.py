"""mixlab command line.

Usage examples::

    mixlab measure --p 2 --d 2 --poly "1+u1+u2" --sites "(0,0);(1,0);(0,1)" --values 0,0,0
    mixlab scan --p 2 --d 2 --poly "1+u1+u2" --shape "(0,0);(1,0);(0,1)" --values 0,0,0 --n 1:8 --format csv
    mixlab witness --p 2 --d 2 --poly "1+u1+u2" --shape "(0,0);(1,0);(0,1)" --n 1:16
    mixlab oracle --p 2 --d 2 --poly "1+u1+u2" --sites "(0,0)" --values 0 --window "(0,0);(2,2)"
    mixlab sunit-enum --gens 2,3 --coeffs 1,1 --height 1
    mixlab sunit-family --gens 2,3 --sign --coeffs 1,1,-1 --subset 2,3 --height 3
    mixlab sunit-frobenius --p 2 --base "t;1+t" --coeffs 1,1 --n 0:3

Exit status: 0 on success, 1 on input errors, 2 when a work bound is hit.
The thread count for scans comes from the MIXLAB_THREADS environment
variable; output does not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import MixlabError, WorkBoundExceeded
from .haar import (
    DEFAULT_MAX_STATES,
    CylinderSpec,
    SystemSpec,
    cylinder_measure,
    joint_measure,
    window_oracle,
)
from .mixing import Shape, dilation_scan, shape_witness, singleton_cylinders, witness_scan
from .ratfunc import frobenius_orbit
from .sunit import (
    DEFAULT_MAX_WORK,
    SUnitEquation,
    SUnitGroup,
    degenerate_family_count,
    enumerate_solutions,
)
from .text import (
    format_points,
    parse_box,
    parse_ints,
    parse_points,
    parse_poly,
    parse_range,
    parse_ratfunc,
    parse_rationals,
)

SCHEMA = "mixlab/1"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise InputError(message)


def rat(x: Fraction) -> dict[str, int]:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def rat_text(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _system(args) -> SystemSpec:
    return SystemSpec(args.p, args.d, parse_poly(args.poly, args.p, args.d))


def _cylinder(sites_text: str, values_text: str, d: int) -> CylinderSpec:
    sites = parse_points(sites_text, d)
    values = parse_ints(values_text)
    if len(values) != len(sites):
        raise InputError(f"{len(sites)} sites but {len(values)} values")
    return CylinderSpec.from_lists(sites, values)


def _cylinder_json(c: CylinderSpec) -> list[dict[str, Any]]:
    return [{"site": list(s), "value": v} for s, v in c.assignments]


# -- commands -----------------------------------------------------------------


def cmd_measure(args) -> tuple[dict, list[list]]:
    sys_ = _system(args)
    sites_list = args.sites or []
    values_list = args.values or []
    if len(sites_list) != len(values_list):
        raise InputError("--sites and --values must be given the same number of times")
    cylinders = [_cylinder(s, v, args.d) for s, v in zip(sites_list, values_list)]
    if args.translates is not None:
        translates = parse_points(args.translates, args.d)
        if len(translates) != len(cylinders):
            raise InputError("need one translate per cylinder")
        result = joint_measure(sys_, cylinders, translates)
    else:
        if len(cylinders) > 1:
            raise InputError("several cylinders need --translates")
        result = cylinder_measure(sys_, cylinders[0] if cylinders else CylinderSpec())
    out = {
        "cylinders": [_cylinder_json(c) for c in cylinders],
        "measure": rat(result.value),
        "log_exponent": result.exponent,
    }
    rows = [["measure", "log_exponent"], [rat_text(result.value), "" if result.exponent is None else result.exponent]]
    return out, rows


def cmd_scan(args) -> tuple[dict, list[list]]:
    sys_ = _system(args)
    shape = Shape(tuple(parse_points(args.shape, args.d)))
    values = parse_ints(args.values) if args.values else None
    cylinders = singleton_cylinders(shape, values)
    records = dilation_scan(sys_, shape, cylinders, parse_range(args.n))
    out = {
        "records": [
            {
                "n": r.n,
                "joint": rat(r.joint),
                "product": rat(r.product),
                "defect": rat(r.defect),
                "witness_dim": r.witness_dim,
            }
            for r in records
        ]
    }
    rows = [["n", "joint", "product", "defect", "witness_dim"]]
    rows += [[r.n, rat_text(r.joint), rat_text(r.product), rat_text(r.defect), r.witness_dim] for r in records]
    return out, rows


def cmd_witness(args) -> tuple[dict, list[list]]:
    sys_ = _system(args)
    shape = Shape(tuple(parse_points(args.shape, args.d)))
    entries = []
    rows = [["n", "witness_dim", "coeffs", "quotient"]]
    for n, dim in witness_scan(sys_, shape, parse_range(args.n)):
        entry: dict[str, Any] = {"n": n, "witness_dim": dim, "witness": None}
        coeffs = quotient = ""
        if dim:
            w = shape_witness(sys_, shape, n)
            entry["witness"] = {"coeffs": list(w.coeffs), "quotient": str(w.quotient)}
            coeffs = ",".join(map(str, w.coeffs))
            quotient = str(w.quotient)
        entries.append(entry)
        rows.append([n, dim, coeffs, quotient])
    return {"entries": entries}, rows


def cmd_oracle(args) -> tuple[dict, list[list]]:
    sys_ = _system(args)
    c = _cylinder(args.sites, args.values, args.d)
    window = parse_box(args.window, args.d) if args.window else None
    rep = window_oracle(sys_, c, window, max_states=args.max_window_states)
    out = {
        "cylinder": _cylinder_json(c),
        "window": {"lo": list(rep.window.lo), "hi": list(rep.window.hi)},
        "image_size": rep.image_size,
        "matching": rep.matching,
        "measure_estimate": rat(rep.measure_estimate),
        "stabilized": rep.stabilized,
    }
    rows = [
        ["window_lo", "window_hi", "image_size", "matching", "measure_estimate", "stabilized"],
        [
            format_points([rep.window.lo]),
            format_points([rep.window.hi]),
            rep.image_size,
            rep.matching,
            rat_text(rep.measure_estimate),
            str(rep.stabilized).lower(),
        ],
    ]
    return out, rows


def _group_eq(args) -> tuple[SUnitGroup, SUnitEquation]:
    return SUnitGroup(tuple(parse_rationals(args.gens)), args.sign), SUnitEquation(tuple(parse_rationals(args.coeffs)))


def cmd_sunit_enum(args) -> tuple[dict, list[list]]:
    group, eq = _group_eq(args)
    sols = enumerate_solutions(eq, group, args.height, max_work=args.max_work)
    out = {
        "prime_support": list(group.prime_support),
        "count": len(sols),
        "non_degenerate_count": sum(not s.is_degenerate for s in sols),
        "solutions": [
            {
                "values": [rat(v) for v in s.values],
                "exponents": [list(e) for e in s.exponents],
                "signs": list(s.signs),
                "degenerate_subsets": [[i + 1 for i in J] for J in s.degeneracy],
            }
            for s in sols
        ],
    }
    rows = [["index", "values", "exponents", "signs", "degenerate_subsets"]]
    for i, s in enumerate(sols):
        rows.append(
            [
                i,
                ";".join(rat_text(v) for v in s.values),
                ";".join(",".join(map(str, e)) for e in s.exponents),
                ";".join(map(str, s.signs)),
                ";".join(",".join(str(j + 1) for j in J) for J in s.degeneracy),
            ]
        )
    return out, rows


def cmd_sunit_family(args) -> tuple[dict, list[list]]:
    group, eq = _group_eq(args)
    subset = [i - 1 for i in parse_ints(args.subset)]
    counts = [
        {"height": h, "count": degenerate_family_count(eq, group, subset, h, max_work=args.max_work)}
        for h in range(args.height + 1)
    ]
    out = {"counts": counts, "count": counts[-1]["count"]}
    rows = [["height", "count"]] + [[c["height"], c["count"]] for c in counts]
    return out, rows


def cmd_sunit_frobenius(args) -> tuple[dict, list[list]]:
    base = [parse_ratfunc(t, args.p) for t in args.base.split(";")]
    coeffs = parse_ints(args.coeffs)
    orbit = []
    rows = [["n", "terms", "degrees"]]
    for n in parse_range(args.n):
        image = frobenius_orbit(args.p, base, coeffs, n)
        degrees = [max(x.num.degree, x.den.degree) for x in image]
        orbit.append({"n": n, "terms": [str(x) for x in image], "degrees": degrees, "verified": True})
        rows.append([n, ";".join(str(x) for x in image), ";".join(map(str, degrees))])
    return {"orbit": orbit}, rows


COMMANDS = {
    "measure": cmd_measure,
    "scan": cmd_scan,
    "witness": cmd_witness,
    "oracle": cmd_oracle,
    "sunit-enum": cmd_sunit_enum,
    "sunit-family": cmd_sunit_family,
    "sunit-frobenius": cmd_sunit_frobenius,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--config", help="key=value file supplying flag defaults")

    system = _Parser(add_help=False)
    system.add_argument("--p", type=int, required=True, help="prime modulus")
    system.add_argument("--d", type=int, required=True, help="lattice dimension")
    system.add_argument("--poly", required=True, help='defining polynomial, e.g. "1+u1+u2"')

    group = _Parser(add_help=False)
    group.add_argument("--gens", required=True, help="comma-separated rational generators")
    group.add_argument("--coeffs", required=True, help="comma-separated equation coefficients")
    group.add_argument("--sign", action="store_true", help="allow the unit -1")
    group.add_argument("--height", type=int, required=True, help="exponent box bound H")
    group.add_argument("--max-work", type=int, default=DEFAULT_MAX_WORK)

    parser = _Parser(prog="mixlab", description="Exact higher-order mixing and S-unit experiments.")
    parser.add_argument("--version", action="version", version=f"mixlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("measure", parents=[common, system], help="cylinder or joint measure")
    p.add_argument("--sites", action="append", help="sites of one cylinder; repeat for several")
    p.add_argument("--values", action="append", help="values aligned with the matching --sites")
    p.add_argument("--translates", help="one translate per cylinder (joint measure)")

    p = sub.add_parser("scan", parents=[common, system], help="dilation scan of mixing defects")
    p.add_argument("--shape", required=True)
    p.add_argument("--values", help="singleton values per shape point (default all 0)")
    p.add_argument("--n", required=True, help="dilations, a:b or a comma list")

    p = sub.add_parser("witness", parents=[common, system], help="shape witness dimensions")
    p.add_argument("--shape", required=True)
    p.add_argument("--n", required=True)

    p = sub.add_parser("oracle", parents=[common, system], help="window enumeration oracle")
    p.add_argument("--sites", required=True)
    p.add_argument("--values", required=True)
    p.add_argument("--window", help='"(lo);(hi)", default: bounding box of the sites')
    p.add_argument("--max-window-states", type=int, default=DEFAULT_MAX_STATES)

    p = sub.add_parser("sunit-enum", parents=[common, group], help="enumerate S-unit solutions")

    p = sub.add_parser("sunit-family", parents=[common, group], help="degenerate family counts")
    p.add_argument("--subset", required=True, help="1-based term indices whose sub-sum vanishes")

    p = sub.add_parser("sunit-frobenius", parents=[common], help="Frobenius orbit over F_p(t)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--base", required=True, help='semicolon-separated terms, e.g. "t;1+t"')
    p.add_argument("--coeffs", required=True)
    p.add_argument("--n", required=True)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _config_argv(path: str, sub: argparse.ArgumentParser) -> list[str]:
    actions = {a.dest: a for a in sub._actions if a.option_strings}
    argv: list[str] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = key.replace("-", "_")
        action = actions.get(dest)
        if action is None or dest in ("config", "help"):
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        flag = action.option_strings[0]
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() in ("1", "true", "yes"):
                argv.append(flag)
            elif value.lower() not in ("0", "false", "no"):
                raise InputError(f"{path}:{lineno}: {key} expects true or false")
        else:
            argv += [flag, value]
    return argv


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    """Parse ``argv``; config-file values go first so explicit flags win."""
    parser = build_parser()
    argv = list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if known.config and rest and not rest[0].startswith("-"):
        try:
            sub = _subparser(parser, rest[0])
        except KeyError:
            raise InputError(f"unknown command {rest[0]!r}") from None
        argv = [rest[0]] + _config_argv(known.config, sub) + rest[1:] + ["--config", known.config]
    return parser.parse_args(argv)


def _echo(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "config", "command", "format")}


def render(args: argparse.Namespace, result: dict, rows: list[list]) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        return buf.getvalue()
    report = {"schema": SCHEMA, "command": args.command, "input": _echo(args), "result": result}
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = parse_args(list(argv))
        result, rows = COMMANDS[args.command](args)
        text = render(args, result, rows)
    except WorkBoundExceeded as exc:
        print(f"mixlab: work bound exceeded: {exc}", file=stderr)
        return 2
    except (InputError, MixlabError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"mixlab: error: {exc}", file=stderr)
        return 1
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return 0


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
