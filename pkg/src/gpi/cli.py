"""Command-line driver: ``gpi <subcommand> [options]``.

Every subcommand accepts ``--config FILE``, an INI file whose ``[gpi]`` section
(and optionally a section named after the subcommand) supplies defaults for the
long options; flags given on the command line win.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from fractions import Fraction

from .evalut import is_identity
from .freelie import LieError, format_monomial, parse_poly
from .groupgrade import (REMAINING, GradingSpec, GroupDescriptor, GroupError, GroupHom,
                         named_grading)
from .scalars import FieldError, FieldMode
from .tideal import Bounds, TIdealError, nonspecht_chain_check, normal_form, pi_map, verify_theorem
from .theorems import OPEN_PROBLEM_MESSAGE, theorem_spec
from .wqo import (KINDS, WqoError, compare_order, consequence_witness, encode, encoding_leq,
                  minimal_elements)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# option name -> (type, default) for values that may come from a config file
_CONFIGURABLE = {
    "grading": (str, None), "group": (str, None), "g": (str, None), "h": (str, None),
    "field": (str, None), "max_deg": (int, None), "max_nontrivial": (int, None),
    "max_y": (int, None), "out": (str, None), "kmax": (int, 4), "kind": (str, None),
    "poly": (list, None), "drop": (list, None), "codomain": (str, None), "images": (str, None),
    "verbose": (bool, False),
}


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(report) -> str:
    return json.dumps(_jsonable(report), indent=2, ensure_ascii=False)


# ---------------------------------------------------------------- configuration

def _apply_config(args, command: str):
    values = {}
    if args.config:
        cp = configparser.ConfigParser()
        try:
            with open(args.config, encoding="utf-8") as fh:
                cp.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        for section in ("gpi", command):
            if cp.has_section(section):
                for key, raw in cp.items(section):
                    values[key.replace("-", "_")] = raw
    for name, (typ, default) in _CONFIGURABLE.items():
        if not hasattr(args, name):
            continue
        if getattr(args, name) not in (None, False):
            continue
        if name in values:
            raw = values[name]
            try:
                if typ is list:
                    val = [line.strip() for line in raw.splitlines() if line.strip()]
                elif typ is bool:
                    val = raw.strip().lower() in ("1", "true", "yes", "on")
                else:
                    val = typ(raw.strip())
            except ValueError as exc:
                raise UsageError(f"bad config value for {name}: {raw!r}") from exc
            setattr(args, name, val)
        elif getattr(args, name) is None:
            setattr(args, name, default)
    return args


def _grading(args) -> GradingSpec:
    if args.grading:
        if args.group or args.g or args.h:
            raise UsageError("give either --grading or --group/--g/--h, not both")
        return named_grading(args.grading)
    if not (args.group and args.g and args.h):
        raise UsageError("a grading is required: --grading NAME or --group G --g (..) --h (..)")
    G = GroupDescriptor.parse(args.group)
    return GradingSpec(G, G.parse_element(args.g), G.parse_element(args.h))


def _mode(args) -> FieldMode:
    return FieldMode.parse(args.field or "Q")


def _bounds(args) -> Bounds:
    base = Bounds()
    return Bounds(max_deg=args.max_deg if args.max_deg is not None else base.max_deg,
                  max_nontrivial=args.max_nontrivial if args.max_nontrivial is not None
                  else base.max_nontrivial,
                  max_y=args.max_y if args.max_y is not None else base.max_y)


def _polys(args, grading, count=None) -> list:
    texts = args.poly or []
    if count is not None and len(texts) != count:
        raise UsageError(f"expected {count} --poly argument(s), got {len(texts)}")
    if not texts:
        raise UsageError("at least one --poly is required")
    return [parse_poly(t, grading) for t in texts]


def _spec_for(grading: GradingSpec, mode: FieldMode):
    try:
        spec = theorem_spec(grading.cls, grading)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not spec.admits(mode):
        raise UsageError(OPEN_PROBLEM_MESSAGE if spec.cls == REMAINING else
                         spec.inadmissible_message(mode))
    return spec


def _kind(args) -> str:
    if args.kind not in KINDS:
        raise UsageError(f"--kind must be one of {', '.join(KINDS)}")
    return args.kind


# ---------------------------------------------------------------- subcommands

def cmd_classify(args):
    G = _grading(args)
    support = [str(d) for d in sorted(G.support)]
    report = {"group": str(G.group), "g": str(G.g), "h": str(G.h),
              "class": G.cls, "support": support}
    return EXIT_OK, report, G.cls


def cmd_check(args):
    G, mode = _grading(args), _mode(args)
    f = _polys(args, G, 1)[0]
    ok = is_identity(f, G, mode)
    report = {"grading": G.cls, "field_mode": mode.label(), "poly": f.format(), "identity": ok}
    return EXIT_OK, report, json.dumps(ok)


def cmd_normal_form(args):
    G, mode = _grading(args), _mode(args)
    spec = _spec_for(G, mode)
    f = _polys(args, G, 1)[0]
    terms = [{"coef": c, "monomial": format_monomial(b)}
             for c, b in normal_form(f, spec, mode, G) if c]
    report = {"grading": G.cls, "field_mode": mode.label(), "poly": f.format(),
              "normal_form": terms}
    return EXIT_OK, report, None


def _progress(entry):
    flags = "".join(k if v else "-" for k, v in entry["checks"].items())
    print(f"  {entry['multidegree']}: {flags}", file=sys.stderr)


def cmd_verify(args):
    G, mode = _grading(args), _mode(args)
    spec = _spec_for(G, mode)
    if args.drop:
        spec = spec.without(*args.drop)
    report = verify_theorem(spec, G, mode, _bounds(args), _progress if args.verbose else None)
    if args.drop:
        report["dropped"] = list(args.drop)
    if not report["pass"]:
        for c in report["components"]:
            bad = [k for k, v in c["checks"].items() if not v]
            if bad:
                print(f"check(s) {','.join(bad)} failed at multidegree {c['multidegree']}",
                      file=sys.stderr)
    return (EXIT_OK if report["pass"] else EXIT_FAIL), report, None


def cmd_wqo_compare(args):
    G, kind = _grading(args), _kind(args)
    a, b = _polys(args, G, 2)
    ea, eb = encode(a, kind), encode(b, kind)
    report = {"kind": kind, "left": a.format(), "right": b.format(),
              "encodings": [ea.to_json(), eb.to_json()],
              "left_leq_right": encoding_leq(ea, eb), "right_leq_left": encoding_leq(eb, ea)}
    try:
        report["order"] = compare_order(a, b, kind)
    except WqoError as exc:
        report["order"] = None
        report["order_note"] = str(exc)
    return EXIT_OK, report, None


def cmd_minimal(args):
    G, kind = _grading(args), _kind(args)
    C = _polys(args, G)
    mins = minimal_elements(C, kind)
    report = {"kind": kind, "input": [c.format() for c in C],
              "minimal": [m.format() for m in mins],
              "encodings": [encode(m, kind).to_json() for m in mins]}
    return EXIT_OK, report, None


def cmd_witness(args):
    G, mode, kind = _grading(args), _mode(args), _kind(args)
    if G.cls == REMAINING and mode.is_finite:
        raise UsageError(OPEN_PROBLEM_MESSAGE)
    f, h = _polys(args, G, 2)
    res = consequence_witness(f, h, kind, G, mode)
    report = {"kind": kind, "field_mode": mode.label(), "f": f.format(), "h": h.format(),
              "witness": res["witness"].format(), "verified": res["verified"]}
    return (EXIT_OK if res["verified"] else EXIT_FAIL), report, None


def cmd_pi_map(args):
    G = _grading(args)
    if not (args.codomain and args.images):
        raise UsageError("pi-map needs --codomain H and --images '(..);(..)'")
    H = GroupDescriptor.parse(args.codomain)
    imgs = tuple(H.parse_element(t) for t in args.images.split(";") if t.strip())
    alpha = GroupHom(G.group, H, imgs)
    coarse = GradingSpec(H, alpha(G.g), alpha(G.h))
    f = _polys(args, coarse, 1)[0]
    out = pi_map(f, alpha, G)
    report = {"grading": G.cls, "coarsening": coarse.cls, "poly": f.format(),
              "image": out.format()}
    return EXIT_OK, report, None


def cmd_nonspecht(args):
    mode = FieldMode.parse(args.field) if args.field else FieldMode.prime_infinite(2)
    report = nonspecht_chain_check(args.kmax, mode)
    return (EXIT_OK if report["pass"] else EXIT_FAIL), report, None


COMMANDS = {
    "classify": (cmd_classify, "classify an elementary grading"),
    "check": (cmd_check, "decide whether a polynomial is a graded identity"),
    "normal-form": (cmd_normal_form, "coordinates over the identity basis modulo identities"),
    "verify": (cmd_verify, "verify a basis theorem on every bounded multidegree"),
    "wqo-compare": (cmd_wqo_compare, "compare two commutators under the encoding orders"),
    "minimal": (cmd_minimal, "minimal elements of a set of commutators"),
    "witness": (cmd_witness, "constructive consequence witness for h from f"),
    "pi-map": (cmd_pi_map, "lift a polynomial along a coarsening"),
    "nonspecht": (cmd_nonspecht, "strictness of the non-finitely-generated chain"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with defaults ([gpi] section)")
    common.add_argument("--grading", help="named grading: universal, almost-universal, "
                        "almost-canonical, remaining, canonical, trivial")
    common.add_argument("--group", help='abelian group, e.g. "Z*Z" or "Z2"')
    common.add_argument("--g", help='degree of e12, e.g. "(1,0)"')
    common.add_argument("--h", help='degree of e23, e.g. "(0,1)"')
    common.add_argument("--field", help="Q, F<p> or F<p>-inf (default Q)")
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("-v", "--verbose", action="store_true", default=None)

    parser = argparse.ArgumentParser(prog="gpi", description="Graded polynomial identities of UT3.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("check", "normal-form", "wqo-compare", "minimal", "witness", "pi-map"):
            p.add_argument("--poly", action="append", help="polynomial (repeatable)")
        if name in ("wqo-compare", "minimal", "witness"):
            p.add_argument("--kind", help="encoding kind: " + ", ".join(KINDS))
        if name == "verify":
            p.add_argument("--max-deg", type=int)
            p.add_argument("--max-nontrivial", type=int)
            p.add_argument("--max-y", type=int)
            p.add_argument("--drop", action="append", help="omit a generator item (repeatable)")
        if name == "nonspecht":
            p.add_argument("--kmax", type=int)
        if name == "pi-map":
            p.add_argument("--codomain", help="target group of the coarsening")
            p.add_argument("--images", help="images of the generators, ';'-separated")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, args.command)
        handler = COMMANDS[args.command][0]
        code, report, summary = handler(args)
    except UsageError as exc:
        print(f"gpi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GroupError, LieError, FieldError, WqoError, TIdealError, ValueError) as exc:
        print(f"gpi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(summary if summary is not None else text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
