"""Command-line front end: `linimp <verb> ...`.

Every verb builds a Report.  Text output lists the checks sorted by name and
ends with a `summary pass=.. fail=.. skip=.. ok=..` line; `--format kv` prints
one `key=value` record per line instead.  Exit status: 0 when no check fails,
1 when one does, 2 on usage, parse or missing-file errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import terms as T
from .combinators import (
    LINEAR_BASES,
    NonLinearInput,
    abstract_exponential,
    abstract_linear,
    bases_used,
    comb_free_vars,
    show_comb,
    to_term,
)
from .formats import load_lattice, load_structure, print_lattice
from .linreal import (
    DEFAULT_PROJECT_CAP,
    SituationError,
    as_implicative,
    closure_check,
    enumerate_types,
    jacobi_check,
    load_situation,
    type_report,
    verify_situation,
)
from .quotient import build_quotient, residuated_suite
from .records import (
    RecordPair,
    adjunction_check,
    additive_suite,
    exponential_from_fixpoint_check,
    fixpoint_bang_table,
    fixpoint_report,
    verify_record,
)
from .report import Report
from .separators import KINDS, SeparatorError, core, generate, upward_closure
from .sequent import check_proof, extract, load_proof, rules_used, soundness_check, target_core
from .structures import (
    DEFAULT_DEPTH_CAP,
    InterpretError,
    StructureError,
    check_typing,
    combinator_value_check,
    interpret,
    roundtrip_check,
    verify_implicative,
    verify_lattice,
)
from .suite import CRITERIA, DEFAULT_SEED, SuiteConfig, suite
from .syntax import ParseError, parse_term


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    report: Report
    results: list[tuple[str, str]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# helpers


def _elements(A, text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [A.lattice.id(x) for x in text.split(",") if x]
    except (KeyError, ValueError, StructureError) as e:
        raise UsageError(f"unknown element in {text!r}: {e}") from None


def _bindings(items: Sequence[str] | None, sep: str) -> list[tuple[str, str]]:
    out = []
    for item in items or ():
        name, found, value = item.partition(sep)
        if not found or not name or not value:
            raise UsageError(f"expected NAME{sep}ELEMENT, got {item!r}")
        out.append((name, value))
    return out


def _show_set(A, xs) -> str:
    return "{" + ", ".join(A.lattice.names[a] for a in sorted(xs)) + "}"


def _pair(A, text: str) -> RecordPair:
    left, found, right = text.partition(",")
    if not found:
        raise UsageError(f"--pair expects LEFT,RIGHT, got {text!r}")
    for label in (left, right):
        if label not in A.records:
            raise UsageError(f"{A.name} has no record table {label!r}")
    return RecordPair(A, left, right)


def _separator(A, text: str, kind: str = "linear"):
    if text == "core":
        return core(A, kind).carrier
    return generate(_elements(A, text), A, kind).carrier


# ---------------------------------------------------------------------------
# verbs


def cmd_check_lattice(args) -> Outcome:
    L, A = load_lattice(args.file)
    rep = Report(f"check-lattice {args.file}")
    rep.extend(verify_lattice(L), "lattice")
    if A is not None and rep.ok:
        rep.extend(verify_implicative(A), "implicative")
    return Outcome(rep, [("elements", str(L.n))])


def cmd_check_structure(args) -> Outcome:
    A = load_structure(args.file)
    rep = Report(f"check-structure {args.file}")
    imp = verify_implicative(A)
    rep.extend(imp, "implicative")
    if imp.ok:
        rep.extend(roundtrip_check(A), "roundtrip")
        rep.extend(combinator_value_check(A), "closed-forms")
    return Outcome(rep)


def cmd_interp(args) -> Outcome:
    A = load_structure(args.file)
    t = parse_term(args.term)
    env = dict(_bindings(args.env, "="))
    rep = Report(f"interp on {A.name}")
    value = interpret(t, A, env, args.depth)
    rep.add("interpreted", True)
    return Outcome(rep, [("term", T.show(t)), ("value", A.lattice.names[value])])


def cmd_typecheck(args) -> Outcome:
    A = load_structure(args.file)
    t = parse_term(args.term)
    ctx = [(x, A.lattice.id(v)) for x, v in _bindings(args.ctx, ":")]
    a = A.lattice.id(args.type)
    value = interpret(t, A, {x.lstrip("!"): v for x, v in ctx}, args.depth) if T.free_variables(t) <= {
        x.lstrip("!") for x, _ in ctx} else None
    rep = Report(f"typecheck on {A.name}")
    ok = check_typing(ctx, t, a, A, args.depth)
    shown = A.lattice.names[value] if value is not None else "unbound variables"
    rep.add("typing", ok, f"value {shown} not below {args.type}")
    return Outcome(rep, [("value", shown)])


def cmd_abstract(args) -> Outcome:
    t = parse_term(args.term)
    rep = Report("abstract")
    c = abstract_exponential(t) if args.exponential else abstract_linear(t)
    if not args.exponential:
        rep.add("linear-bases", bases_used(c) <= set(LINEAR_BASES), sorted(bases_used(c)))
    rep.add("free-variables-kept", set(comb_free_vars(c)) == set(T.free_variables(t)))
    same = T.normal_key(to_term(c), args.fuel) == T.normal_key(t, args.fuel)
    rep.add("normal-form-agrees", same, T.show(T.normalize(to_term(c), args.fuel)))
    return Outcome(rep, [("word", show_comb(c))])


def cmd_check_proof(args) -> Outcome:
    p = load_proof(args.file)
    res = check_proof(p)
    rep = Report(f"check-proof {args.file}")
    rep.add("valid-proof", res.ok, f"{res.path}: {res.message}" if not res.ok else None)
    results = [("conclusion", str(p.sequent))]
    if res.ok:
        results += [("rules", " ".join(sorted(rules_used(p)))), ("target-core", target_core(p))]
    return Outcome(rep, results)


def cmd_extract(args) -> Outcome:
    p = load_proof(args.file)
    res = check_proof(p)
    rep = Report(f"extract {args.file}")
    if not rep.add("valid-proof", res.ok, f"{res.path}: {res.message}" if not res.ok else None):
        return Outcome(rep)
    t = extract(p)
    lin = T.is_linear_bang(t) if rules_used(p) & {"!wL", "!cL", "!dL", "!R"} else T.is_linear(t)
    rep.add("linear", bool(lin), "; ".join(lin.diagnostics))
    return Outcome(rep, [("term", T.show(t)), ("normal-form", T.show(T.normalize(t, args.fuel)))])


def cmd_soundness(args) -> Outcome:
    p = load_proof(args.proof)
    A = load_structure(args.lattice)
    return Outcome(soundness_check(p, A), [("target-core", target_core(p))])


def cmd_core(args) -> Outcome:
    A = load_structure(args.file)
    S = generate(_elements(A, args.from_), A, args.kind, tuple(args.pair.split(",")))
    return Outcome(S.report, [("separator", _show_set(A, S.carrier)), ("consistent", str(A.bottom not in S.carrier).lower())])


def cmd_quotient(args) -> Outcome:
    A = load_structure(args.file)
    S = _separator(A, args.separator)
    Q = build_quotient(A, S)
    rep = Report(f"quotient {A.name}")
    rep.extend(Q.report, "quotient")
    rep.extend(residuated_suite(Q), "laws")
    return Outcome(rep, [("separator", _show_set(A, S)), ("classes", str(Q.size))]
                   + [(f"class{x}", line.split(": ", 1)[1]) for x, line in enumerate(Q.render().splitlines()[1:])])


def cmd_linreal(args) -> Outcome:
    S = load_situation(args.file)
    if args.action == "verify":
        rep = Report(f"linreal verify {S.name}")
        rep.extend(verify_situation(S), "situation")
        rep.extend(jacobi_check(S), "jacobi")
        rep.extend(closure_check(S), "orthogonality")
        return Outcome(rep)
    if args.action == "types":
        types = enumerate_types(S, args.cap)
        rep = type_report(S, types)
        return Outcome(rep, [("count", str(len(types)))] + [(f"type{i}", S.show_set(X)) for i, X in enumerate(types)])
    B = as_implicative(S, args.cap)
    if args.action == "export":
        rep = Report(f"linreal export {S.name}")
        rep.extend(verify_implicative(B.structure), "implicative")
        return Outcome(rep, [("lattice-file", "\n" + print_lattice(B.structure.lattice, B.structure).rstrip())])
    return Outcome(B.report, [("types", str(len(B.types))),
                              ("separator", _show_set(B.structure, B.separator.carrier))])


def cmd_records(args) -> Outcome:
    A = load_structure(args.file)
    pair = _pair(A, args.pair)
    if args.action == "verify":
        rep = Report(f"records {A.name}")
        for label in (pair.left, pair.right):
            table = A.records[label]
            rec = verify_record(table, A)
            rep.extend(rec, f"record-{label}")
            if rec.ok:
                rep.extend(adjunction_check(table, A), f"record-{label}")
        rep.extend(additive_suite(A, pair), "additive")
        return Outcome(rep)
    if args.action == "fixbang":
        return cmd_fixbang(args, A, pair)
    if len(args.elements) != 2:
        raise UsageError(f"records {args.action} needs two elements")
    a, b = (A.lattice.id(x) for x in args.elements)
    op = pair.with_ if args.action == "with" else pair.oplus
    rep = Report(f"records {args.action} {A.name}")
    ok, wit = pair.compatible()
    rep.add("compatible-pair", ok, wit)
    return Outcome(rep, [("value", A.lattice.names[op(a, b)])])


def cmd_fixbang(args, A=None, pair=None) -> Outcome:
    A = A if A is not None else load_structure(args.file)
    pair = pair if pair is not None else _pair(A, args.pair)
    rep = Report(f"fixbang {A.name}")
    rep.extend(fixpoint_report(A, pair), "fixpoint")
    S = upward_closure(A, _elements(A, args.separator)) if args.separator else None
    rep.extend(exponential_from_fixpoint_check(A, pair, S), "exponential")
    table = fixpoint_bang_table(A, pair)
    return Outcome(rep, [("bang", " ".join(f"{A.lattice.names[a]}->{A.lattice.names[b]}" for a, b in enumerate(table)))])


def cmd_suite(args) -> Outcome:
    cfg = SuiteConfig(seed=args.seed, fuel=args.fuel, cap=args.cap)
    return Outcome(suite(cfg, args.only))


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for random batteries")
    common.add_argument("--fuel", type=int, default=T.DEFAULT_FUEL, help="reduction step budget")
    common.add_argument("--cap", type=int, default=DEFAULT_PROJECT_CAP, help="linreal project cap")
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH_CAP, help="interpreter binder cap")
    common.add_argument("--format", choices=("text", "kv"), default="text")

    parser = argparse.ArgumentParser(prog="linimp", description="Linear implicative algebra toolkit.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    verb("check-lattice", cmd_check_lattice, "verify a lattice file").add_argument("file")
    verb("check-structure", cmd_check_structure, "verify an implicative structure").add_argument("file")

    p = verb("interp", cmd_interp, "interpret a closed or parametrised term")
    p.add_argument("term")
    p.add_argument("file")
    p.add_argument("--env", nargs="*", metavar="X=ELEM")

    p = verb("typecheck", cmd_typecheck, "check a semantic typing judgement")
    p.add_argument("term")
    p.add_argument("type", metavar="ELEM")
    p.add_argument("file")
    p.add_argument("--ctx", nargs="*", metavar="X:ELEM")

    p = verb("abstract", cmd_abstract, "compile a lambda-term to combinators")
    p.add_argument("term")
    p.add_argument("--exponential", action="store_true", help="allow ! and the exponential bases")

    verb("check-proof", cmd_check_proof, "check a sequent proof file").add_argument("file")
    verb("extract", cmd_extract, "extract the realiser of a proof").add_argument("file")

    p = verb("soundness", cmd_soundness, "check a proof against a structure")
    p.add_argument("proof")
    p.add_argument("lattice")

    p = verb("core", cmd_core, "generate a separator")
    p.add_argument("file")
    p.add_argument("--kind", choices=KINDS, default="linear")
    p.add_argument("--from", dest="from_", metavar="A,B", help="extra generators")
    p.add_argument("--pair", default="l,r", help="record labels for additive kinds")

    p = verb("quotient", cmd_quotient, "quotient by a linear separator")
    p.add_argument("file")
    p.add_argument("--separator", default="core", metavar="core|A,B", help="core, or generators")

    p = verb("linreal", cmd_linreal, "linear realisability situations")
    p.add_argument("action", choices=("verify", "types", "export", "bridge"))
    p.add_argument("file")

    p = verb("records", cmd_records, "record pairs and additive connectives")
    p.add_argument("action", choices=("verify", "with", "oplus", "fixbang"))
    p.add_argument("file")
    p.add_argument("elements", nargs="*")
    p.add_argument("--pair", default="l,r")
    p.add_argument("--separator", metavar="A,B", help="fixbang: test the up-set of these elements")

    p = verb("fixbang", cmd_fixbang, "fixpoint exponential of a record pair")
    p.add_argument("file")
    p.add_argument("--pair", default="l,r")
    p.add_argument("--separator", metavar="A,B", help="test the up-set of these elements (default: additive core)")

    p = verb("suite", cmd_suite, "run the acceptance criteria")
    p.add_argument("--only", nargs="*", choices=list(CRITERIA), metavar="NAME")
    return parser


def render(argv: Sequence[str], outcome: Outcome, fmt: str) -> str:
    rep = outcome.report
    if fmt == "kv":
        lines = ["command=" + " ".join(argv)]
        lines += [f"result.{k}={v!r}" if "\n" in v else f"result.{k}={v}" for k, v in outcome.results]
        lines.append(rep.render("kv"))
        return "\n".join(lines)
    lines = ["$ linimp " + " ".join(argv)]
    lines += [f"{k}: {v}" for k, v in outcome.results]
    lines.append(rep.render("text"))
    c = rep.counts()
    lines.append(f"summary pass={c['pass']} fail={c['fail']} skip={c['skip']} ok={str(rep.ok).lower()}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        outcome = args.func(args)
    except ParseError as e:
        print(f"error: parse error at {e}", file=err)
        return 2
    except FileNotFoundError as e:
        print(f"error: no such file: {e}", file=err)
        return 2
    except UsageError as e:
        print(f"error: {e}", file=err)
        return 2
    except (NonLinearInput, SituationError, SeparatorError, StructureError, InterpretError, KeyError) as e:
        rep = Report(f"{args.verb} rejected")
        detail = getattr(e, "report", None)
        if detail is not None:
            rep.extend(detail)
        rep.add("input-accepted", False, None, detail=f"{type(e).__name__}: {e}")
        outcome = Outcome(rep)
    print(render(argv, outcome, args.format), file=out)
    return 0 if outcome.report.ok else 1


def main() -> None:
    sys.exit(run())
