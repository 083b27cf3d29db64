"""Command-line front end.

Exit codes: 0 on success (an Unknown verdict is a success), 1 when the
engine derives a contradiction, 2 for parse, flag and registry errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .engine import ExternalFact, propagate
from .expr import ParseError, parse_expr
from .fronts import FIXTURES, FrontError, audit_front, fixture_front, parse_front, random_front
from .patterns import RegistryError, datum_to_json, default_registry, load_registry
from .report import explain, render_text, report_json
from .shake import build_gluings, compare_gluings
from .trace import ContradictionError
from .verdicts import Characterization, FamilyHypothesisError, audit_meridian_flags, family_table, shake_slice_verdict

OK, CONTRADICTION, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _registry(args):
    if args.registry is None:
        return default_registry()
    try:
        return load_registry(args.registry, validate=not getattr(args, "no_validate", False))
    except OSError as exc:
        raise UsageError(f"cannot read registry: {exc}") from exc
    except (RegistryError, ValueError, KeyError) as exc:
        raise UsageError(f"bad registry {args.registry}: {exc}") from exc


def _expr(text, reg):
    try:
        return parse_expr(text, reg)
    except ParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc


def _assumptions(args, e) -> list[ExternalFact]:
    out = []
    for r in args.assume_suitable or []:
        out.append(ExternalFact(e, "suitable", r=r, note="assumed on the command line"))
    for pair in args.assume_witness or []:
        out.append(ExternalFact(e, "witness", value=tuple(pair), note="assumed on the command line"))
    if args.assume_slice:
        out.append(ExternalFact(e, "slice", note="assumed on the command line"))
    return out


def cmd_eval(args, out) -> int:
    reg = _registry(args)
    e = _expr(args.expr, reg)
    rs = args.r or [0]
    store = propagate(e, reg, rs=rs, external=_assumptions(args, e))
    if args.json:
        text = json.dumps(report_json(store, rs), indent=2, sort_keys=False) + "\n"
    else:
        text = render_text(store, rs)
    if args.explain:
        # ids are only stable once the report has been built
        try:
            text = explain(store, args.explain)
        except KeyError:
            raise UsageError(f"no derivation {args.explain!r}") from None
    out.write(text)
    return OK


def cmd_table(args, out) -> int:
    reg = _registry(args)
    if args.pattern not in reg:
        raise UsageError(f"unknown pattern {args.pattern!r}")
    if args.iters < 0:
        raise UsageError("--iters must be >= 0")
    base = _expr(args.base, reg)
    try:
        table = family_table(args.pattern, base, args.r, args.iters, reg, fallback=not args.closed_form)
    except FamilyHypothesisError as exc:
        raise UsageError(f"closed form does not apply: {exc}") from exc
    if args.format == "csv":
        out.write(table.to_csv())
        return OK
    how = "closed form" if table.closed_form else "per-term propagation"
    out.write(f"{args.pattern} iterates of {table.base} with r = {args.r} ({how})\n")
    for msg in table.diagnostics:
        out.write(f"  note: {msg}\n")
    out.write(table.to_csv().replace(",", "\t"))
    return OK


def cmd_verdict(args, out) -> int:
    reg = _registry(args)
    e = _expr(args.expr, reg)
    ch = None
    if args.characterization:
        if args.characterization not in reg:
            raise UsageError(f"unknown pattern {args.characterization!r}")
        ch = Characterization(args.characterization)
    try:
        v, store = shake_slice_verdict(e, args.r, reg, characterization=ch)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out.write(f"{store.display} at r = {args.r}: {v.kind}\n")
    for reason, tid in zip(v.reasons, v.traces):
        out.write(f"  {reason}  [{tid}]\n")
    if args.explain:
        for tid in v.traces:
            out.write(explain(store, tid))
    return OK


def cmd_oracle(args, out) -> int:
    fronts = []
    if args.front:
        try:
            with open(args.front) as fh:
                fronts.append((args.front, parse_front(fh.read())))
        except OSError as exc:
            raise UsageError(f"cannot read front: {exc}") from exc
        except FrontError as exc:
            raise UsageError(f"bad front {args.front}: {exc}") from exc
    for name in args.fixture or []:
        if name not in FIXTURES:
            raise UsageError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
        fronts.append((name, fixture_front(name)))
    for i in range(args.random):
        fronts.append((f"random seed={args.seed + i}", random_front(args.seed + i, args.size)))
    if not fronts:
        fronts = [(name, fixture_front(name)) for name in FIXTURES]
    failures = 0
    for name, f in fronts:
        tb, rot = f.tb_rot()
        line = f"{name}: tb = {tb}, rot = {rot}"
        if args.check:
            bad = audit_front(f)
            failures += bool(bad)
            line += "  ok" if not bad else "  FAILED: " + "; ".join(bad)
        out.write(line + "\n")
    return OK if not failures else CONTRADICTION


def _pattern_or_int(text, reg):
    try:
        return int(text)
    except ValueError:
        pass
    if text not in reg:
        raise UsageError(f"{text!r} is neither a winding number nor a registry pattern")
    return reg[text]


def cmd_compare(args, out) -> int:
    reg = _registry(args)
    p, q = _pattern_or_int(args.p, reg), _pattern_or_int(args.q, reg)
    for x, label in ((p, "P"), (q, "Q")):
        if x == 0:
            raise UsageError(f"winding number of {label} must be nonzero")
    cmp = compare_gluings(p, q, args.r, args.s)
    out.write(f"{cmp}\n")
    if args.verbose:
        for g in build_gluings(p, q, args.r, args.s):
            out.write("\n".join(g.lines()) + "\n")
    return OK


def cmd_registry(args, out) -> int:
    reg = _registry(args)
    if args.action == "list":
        for p in reg:
            g = "?" if p.g4 is None else (str(p.g4[0]) if p.g4[0] == p.g4[1] else f"[{p.g4[0]}, {p.g4[1]}]")
            n = "?" if p.n_geom is None else p.n_geom
            legs = " ".join(f"({a}, {b})" for a, b in sorted(p.leg_pairs)) or "-"
            out.write(f"{p.name}: w = {p.w}, n = {n}, g4 = {g}, legs {legs}, "
                      f"slice closure {p.tilde_slice}, meridian {p.meridian_ng}\n")
        return OK
    if args.action == "dump":
        out.write(json.dumps([datum_to_json(p) for p in reg], indent=2) + "\n")
        return OK
    bad = reg.problems()
    for name, msgs in bad.items():
        for msg in msgs:
            out.write(f"{name}: {msg}\n")
    audit = audit_meridian_flags(reg)
    for msg in audit:
        out.write(f"meridian flag: {msg}\n")
    if bad:
        return USAGE
    if audit:
        return CONTRADICTION
    out.write(f"{len(reg)} patterns ok\n")
    return OK


def _pair(text):
    try:
        tb, rot = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected TB,ROT, got {text!r}") from None
    return tb, rot


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shakecert", description="Certified bounds for shake genus and friends.")
    ap.add_argument("--registry", help="pattern registry JSON (default: the shipped fixtures)")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="bounds for one knot expression")
    ev.add_argument("expr")
    ev.add_argument("--r", type=int, action="append", help="shake framing to report (repeatable, default 0)")
    ev.add_argument("--json", action="store_true")
    ev.add_argument("--explain", metavar="ID", help="print the derivation tree for a trace id")
    ev.add_argument("--assume-suitable", type=int, action="append", metavar="R")
    ev.add_argument("--assume-witness", type=_pair, action="append", metavar="TB,ROT")
    ev.add_argument("--assume-slice", action="store_true")
    ev.set_defaults(func=cmd_eval)

    tb = sub.add_parser("table", help="invariants of iterated satellites")
    tb.add_argument("--pattern", required=True)
    tb.add_argument("--base", required=True)
    tb.add_argument("--r", type=int, required=True)
    tb.add_argument("--iters", type=int, required=True)
    tb.add_argument("--format", choices=("csv", "text"), default="text")
    tb.add_argument("--closed-form", action="store_true", help="fail instead of propagating each term")
    tb.set_defaults(func=cmd_table)

    vd = sub.add_parser("verdict", help="is the knot r-shake slice?")
    vd.add_argument("expr")
    vd.add_argument("--r", type=int, required=True)
    vd.add_argument("--characterization", metavar="PATTERN",
                    help="assume PATTERN_r(K) is slice for this ribbon winding-one pattern")
    vd.add_argument("--explain", action="store_true")
    vd.set_defaults(func=cmd_verdict)

    orc = sub.add_parser("oracle", help="tb and rot of front diagrams")
    orc.add_argument("--front", help="front file")
    orc.add_argument("--fixture", action="append", metavar="NAME")
    orc.add_argument("--random", type=int, default=0, metavar="N")
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--size", type=int, default=3)
    orc.add_argument("--check", action="store_true", help="audit stabilizations and connected sums too")
    orc.set_defaults(func=cmd_oracle)

    cg = sub.add_parser("compare-gluings", help="iterated versus composed satellite gluings")
    cg.add_argument("p", help="pattern name or winding number")
    cg.add_argument("q", help="pattern name or winding number")
    cg.add_argument("--r", type=int, required=True)
    cg.add_argument("--s", type=int, required=True)
    cg.add_argument("--verbose", action="store_true")
    cg.set_defaults(func=cmd_compare)

    rg = sub.add_parser("registry", help="inspect the pattern registry")
    rg.add_argument("action", choices=("list", "validate", "dump"))
    rg.set_defaults(func=cmd_registry, no_validate=True)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if getattr(args, "size", 1) < 1:
        err.write("error: --size must be >= 1\n")
        return USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return USAGE
    except ContradictionError as exc:
        err.write(f"{exc}\n")
        return CONTRADICTION


def main() -> None:
    sys.exit(run())
