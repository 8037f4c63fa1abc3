"""IMLL/IMELL formulas, sequent proofs, term extraction and soundness.

Formula syntax: atoms are identifiers, `bot`, `1` (= bot -o bot), `~A`
(= A -o bot), `!A`, `A * B`, `A | B` (par), `A -o B` (right associative).
Precedence from loosest: `-o`, `|`, `*`, then the prefixes `!` and `~`.

Proof files hold one s-expression per node:

    (rule "[A, B] |- C" premise ...)

with rule one of ax cut tensorR tensorL lolliR lolliL !wL !cL !dL !R.
`;` starts a comment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence, Union

from . import terms as T
from .combinators import base_term
from .report import Report
from .structures import ImpStructure, interpret
from .syntax import ParseError, TokenStream, tokenize

# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Lolli:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Par:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class OfCourse:
    body: "Formula"


Formula = Union[Atom, Bot, Lolli, Tensor, Par, OfCourse]

ONE = Lolli(Bot(), Bot())


def neg(a: Formula) -> Formula:
    return Lolli(a, Bot())


def atoms(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Bot):
        return set()
    if isinstance(f, OfCourse):
        return atoms(f.body)
    return atoms(f.left) | atoms(f.right)


def has_bang(f: Formula) -> bool:
    if isinstance(f, OfCourse):
        return True
    if isinstance(f, (Atom, Bot)):
        return False
    return has_bang(f.left) or has_bang(f.right)


def _parse_lolli(ts: TokenStream) -> Formula:
    left = _parse_par(ts)
    if ts.at("-o"):
        ts.next()
        return Lolli(left, _parse_lolli(ts))
    return left


def _parse_par(ts: TokenStream) -> Formula:
    f = _parse_tensor(ts)
    while ts.at("|"):
        ts.next()
        f = Par(f, _parse_tensor(ts))
    return f


def _parse_tensor(ts: TokenStream) -> Formula:
    f = _parse_unary(ts)
    while ts.at("*"):
        ts.next()
        f = Tensor(f, _parse_unary(ts))
    return f


def _parse_unary(ts: TokenStream) -> Formula:
    if ts.at("!"):
        ts.next()
        return OfCourse(_parse_unary(ts))
    if ts.at("~"):
        ts.next()
        return neg(_parse_unary(ts))
    if ts.at("("):
        ts.next()
        f = _parse_lolli(ts)
        ts.expect(")")
        return f
    tok = ts.next()
    if tok.kind == "number" and tok.text == "1":
        return ONE
    if tok.kind == "ident":
        return Bot() if tok.text == "bot" else Atom(tok.text)
    raise ParseError(f"unexpected {tok.text or 'end of input'!r} in formula", tok.line, tok.col)


def parse_formula(text: str) -> Formula:
    ts = TokenStream(tokenize(text))
    f = _parse_lolli(ts)
    if ts.peek().kind != "eof":
        raise ts.error(f"trailing input {ts.peek().text!r}")
    return f


_PREC = {Lolli: 0, Par: 1, Tensor: 2}


def show_formula(f: Formula, prec: int = 0) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bot):
        return "bot"
    if f == ONE:
        return "1"
    if isinstance(f, OfCourse):
        return "!" + show_formula(f.body, 3)
    if isinstance(f, Lolli) and isinstance(f.right, Bot):
        return "~" + show_formula(f.left, 3)
    p = _PREC[type(f)]
    if isinstance(f, Lolli):
        s = f"{show_formula(f.left, 1)} -o {show_formula(f.right, 0)}"
    else:
        op = " * " if isinstance(f, Tensor) else " | "
        s = f"{show_formula(f.left, p)}{op}{show_formula(f.right, p + 1)}"
    return f"({s})" if p < prec else s


# ---------------------------------------------------------------------------
# Sequents and proofs


@dataclass(frozen=True)
class Sequent:
    ctx: tuple[Formula, ...]
    concl: Formula

    def __str__(self) -> str:
        return f"[{', '.join(show_formula(f) for f in self.ctx)}] |- {show_formula(self.concl)}"


def parse_sequent(text: str) -> Sequent:
    ts = TokenStream(tokenize(text))
    ts.expect("[")
    ctx = []
    if not ts.at("]"):
        ctx.append(_parse_lolli(ts))
        while ts.at(","):
            ts.next()
            ctx.append(_parse_lolli(ts))
    ts.expect("]")
    ts.expect("|-")
    concl = _parse_lolli(ts)
    if ts.peek().kind != "eof":
        raise ts.error(f"trailing input {ts.peek().text!r}")
    return Sequent(tuple(ctx), concl)


RULES = ("ax", "cut", "tensorR", "tensorL", "lolliR", "lolliL", "!wL", "!cL", "!dL", "!R")
BANG_RULES = ("!wL", "!cL", "!dL", "!R")


@dataclass(frozen=True)
class Proof:
    rule: str
    sequent: Sequent
    premises: tuple["Proof", ...] = field(default=())

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


class InvalidProof(ValueError):
    def __init__(self, path: tuple[int, ...], message: str):
        super().__init__(f"at node {'/'.join(map(str, path)) or 'root'}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class _Match:
    principal: int | None
    sources: tuple[tuple[int | str, ...], ...]  # per premise: conclusion index or active tag


_ARITY = {"ax": 0, "cut": 2, "tensorR": 2, "tensorL": 1, "lolliR": 1, "lolliL": 2,
          "!wL": 1, "!cL": 1, "!dL": 1, "!R": 1}


def _distribute(conc: Sequence[Formula], pool: list[int], prem_ctx: Sequence[Formula],
                actives: Sequence[tuple[Formula, str]]) -> tuple | None:
    """Align a premise context: actives are claimed first, the rest drawn from pool."""
    out: list[int | str | None] = [None] * len(prem_ctx)
    for f, tag in actives:
        for i, g in enumerate(prem_ctx):
            if out[i] is None and g == f:
                out[i] = tag
                break
        else:
            return None
    for i, g in enumerate(prem_ctx):
        if out[i] is None:
            for k, j in enumerate(pool):
                if conc[j] == g:
                    out[i] = pool.pop(k)
                    break
            else:
                return None
    return tuple(out)


def _try(conc: Sequent, principal: int | None, premises: Sequence[Proof],
         actives: Sequence[Sequence[tuple[Formula, str]]]) -> _Match | None:
    pool = [i for i in range(len(conc.ctx)) if i != principal]
    sources = []
    for prem, act in zip(premises, actives):
        src = _distribute(conc.ctx, pool, prem.sequent.ctx, act)
        if src is None:
            return None
        sources.append(src)
    if pool:
        return None
    return _Match(principal, tuple(sources))


def _analyse(p: Proof) -> _Match:
    """Match the node against its rule schema or raise ValueError."""
    rule, seq, prem = p.rule, p.sequent, p.premises
    if rule not in _ARITY:
        raise ValueError(f"unknown rule {rule!r}")
    if len(prem) != _ARITY[rule]:
        raise ValueError(f"{rule} expects {_ARITY[rule]} premises, got {len(prem)}")
    C = seq.concl
    ps = [q.sequent for q in prem]
    m = None
    if rule == "ax":
        if len(seq.ctx) == 1 and seq.ctx[0] == C:
            m = _Match(None, ())
    elif rule == "cut":
        if ps[1].concl == C:
            m = _try(seq, None, prem, [[], [(ps[0].concl, "cut")]])
    elif rule == "tensorR":
        if C == Tensor(ps[0].concl, ps[1].concl):
            m = _try(seq, None, prem, [[], []])
    elif rule == "lolliR":
        if isinstance(C, Lolli) and ps[0].concl == C.right:
            m = _try(seq, None, prem, [[(C.left, "x")]])
    elif rule == "!R":
        if isinstance(C, OfCourse) and ps[0].concl == C.body and all(isinstance(f, OfCourse) for f in seq.ctx):
            m = _try(seq, None, prem, [[]])
        elif isinstance(C, OfCourse) and not all(isinstance(f, OfCourse) for f in seq.ctx):
            raise ValueError("!R needs every context formula under !")
    else:
        for j, P in enumerate(seq.ctx):
            if rule == "tensorL" and isinstance(P, Tensor) and ps[0].concl == C:
                m = _try(seq, j, prem, [[(P.left, "x"), (P.right, "y")]])
            elif rule == "lolliL" and isinstance(P, Lolli) and ps[0].concl == P.left and ps[1].concl == C:
                m = _try(seq, j, prem, [[], [(P.right, "x")]])
            elif rule == "!wL" and isinstance(P, OfCourse) and ps[0].concl == C:
                m = _try(seq, j, prem, [[]])
            elif rule == "!cL" and isinstance(P, OfCourse) and ps[0].concl == C:
                m = _try(seq, j, prem, [[(P, "x"), (P, "y")]])
            elif rule == "!dL" and isinstance(P, OfCourse) and ps[0].concl == C:
                m = _try(seq, j, prem, [[(P.body, "x")]])
            if m is not None:
                break
    if m is None:
        raise ValueError(f"{rule} does not match {seq}")
    return m


@dataclass
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_proof(p: Proof) -> CheckResult:
    """Structural validity; on failure the path (premise indices) of the first bad node."""

    def go(q: Proof, path: tuple[int, ...]) -> CheckResult:
        try:
            _analyse(q)
        except ValueError as e:
            return CheckResult(False, path, str(e))
        for i, sub in enumerate(q.premises):
            r = go(sub, path + (i,))
            if not r:
                return r
        return CheckResult(True)

    return go(p, ())


def rules_used(p: Proof) -> set[str]:
    return {q.rule for q in p.nodes()}


def is_imell(p: Proof) -> bool:
    return any(q.rule in BANG_RULES or any(has_bang(f) for f in (*q.sequent.ctx, q.sequent.concl)) for q in p.nodes())


def uses_digging(p: Proof) -> bool:
    """Promotion under a non-empty context needs digging for its arguments."""
    return any(q.rule == "!R" and q.sequent.ctx for q in p.nodes())


def target_core(p: Proof) -> str:
    """Separator kind the conclusion must land in, given the rules used."""
    if not is_imell(p):
        return "linear"
    if "!dL" in rules_used(p) or uses_digging(p):
        return "exponential"
    return "elementary"


# ---------------------------------------------------------------------------
# Extraction


def _use(x: str, f: Formula) -> T.Term:
    return T.Bang(T.Var(x)) if isinstance(f, OfCourse) else T.Var(x)


def _bind(x: str, f: Formula, body: T.Term) -> T.Term:
    return T.BangLam(x, body) if isinstance(f, OfCourse) else T.Lam(x, body)


def extract(p: Proof, names: Sequence[str] | None = None) -> T.Term:
    """Realiser of the conclusion; context entries `!A` are bound as `!x`."""
    res = check_proof(p)
    if not res:
        raise InvalidProof(res.path, res.message)
    names = list(names) if names is not None else [f"h{i + 1}" for i in range(len(p.sequent.ctx))]
    if len(names) != len(p.sequent.ctx):
        raise ValueError("one name per context formula is needed")
    counter = itertools.count(1)

    def fresh() -> str:
        return f"v{next(counter)}"

    def go(q: Proof, nm: list[str]) -> T.Term:
        m = _analyse(q)
        ctx = q.sequent.ctx
        rule = q.rule

        def sub(k: int, tags: Mapping[str, str] | None = None) -> T.Term:
            tags = tags or {}
            prem_names = [nm[s] if isinstance(s, int) else tags[s] for s in m.sources[k]]
            return go(q.premises[k], prem_names)

        if rule == "ax":
            return _use(nm[0], ctx[0])
        if rule == "cut":
            x = fresh()
            a = q.premises[0].sequent.concl
            return T.App(_bind(x, a, sub(1, {"cut": x})), sub(0))
        if rule == "tensorR":
            z = fresh()
            return T.Lam(z, T.app(T.Var(z), sub(0), sub(1)))
        if rule == "lolliR":
            x = fresh()
            return _bind(x, q.sequent.concl.left, sub(0, {"x": x}))
        P = ctx[m.principal] if m.principal is not None else None
        if rule == "tensorL":
            x, y = fresh(), fresh()
            body = _bind(x, P.left, _bind(y, P.right, sub(0, {"x": x, "y": y})))
            return T.App(T.Var(nm[m.principal]), body)
        if rule == "lolliL":
            x = fresh()
            arg = T.App(T.Var(nm[m.principal]), sub(0))
            return T.App(_bind(x, P.right, sub(1, {"x": x})), arg)
        if rule == "!wL":
            return T.app(base_term("K!"), sub(0), T.Bang(T.Var(nm[m.principal])))
        if rule == "!cL":
            x, y = fresh(), fresh()
            return T.app(base_term("W!"), T.lams([f"!{x}", f"!{y}"], sub(0, {"x": x, "y": y})),
                         T.Bang(T.Var(nm[m.principal])))
        if rule == "!dL":
            x = fresh()
            return T.App(_bind(x, P.body, sub(0, {"x": x})), T.App(base_term("D"), T.Bang(T.Var(nm[m.principal]))))
        if rule == "!R":
            t = sub(0)
            if not ctx:
                return T.Bang(t)
            term = T.Bang(T.lams([f"!{x}" for x in nm], t))
            for x in nm:
                term = T.app(base_term("F"), term, T.App(base_term("delta"), T.Bang(T.Var(x))))
            return term
        raise AssertionError(rule)

    with T._deep_recursion():
        return go(p, names)


# ---------------------------------------------------------------------------
# Semantics


def interpret_formula(f: Formula, valuation: Mapping[str, int | str], A: ImpStructure) -> int:
    if isinstance(f, Atom):
        if f.name not in valuation:
            raise KeyError(f"no value for atom {f.name!r}")
        return A.lattice.id(valuation[f.name])
    if isinstance(f, Bot):
        return A.bottom
    if isinstance(f, OfCourse):
        return A.bang_of(interpret_formula(f.body, valuation, A))
    a = interpret_formula(f.left, valuation, A)
    b = interpret_formula(f.right, valuation, A)
    if isinstance(f, Lolli):
        return A.imp[a][b]
    if isinstance(f, Tensor):
        return A.tensor(a, b)
    return A.par(a, b)


def valuations(f: Formula, A: ImpStructure):
    names = sorted(atoms(f))
    for values in itertools.product(A.elements, repeat=len(names)):
        yield dict(zip(names, values))


def _core(A: ImpStructure, kind: str) -> frozenset[int]:
    from .separators import core

    cache = A.__dict__.setdefault("_core_cache", {})
    if kind not in cache:
        cache[kind] = core(A, kind).carrier
    return cache[kind]


def soundness_check(p: Proof, A: ImpStructure, valuation: Mapping[str, int] | None = None) -> Report:
    """Realiser below the conclusion, and conclusion inside the matching core.

    With no valuation every assignment of the conclusion's atoms is tried.
    """
    rep = Report(f"soundness {p.sequent} on {A.name}")
    res = check_proof(p)
    if not rep.add("valid-proof", res.ok, res.message or None):
        return rep
    if not rep.add("closed-conclusion", not p.sequent.ctx, str(p.sequent)):
        return rep
    t = extract(p)
    imell = is_imell(p)
    lin = T.is_linear_bang(t) if imell else T.is_linear(t)
    rep.add("extract-linear-bang" if imell else "extract-linear", bool(lin), "; ".join(lin.diagnostics))
    if imell and A.bang is None:
        rep.skip("semantics", "structure has no ! table")
        return rep
    kind = target_core(p)
    carrier = _core(A, kind)
    realiser = interpret(t, A)
    vals = [valuation] if valuation is not None else list(valuations(p.sequent.concl, A))
    names = A.lattice.names
    below = inside = None
    for v in vals:
        value = interpret_formula(p.sequent.concl, v, A)
        if below is None and not A.le(realiser, value):
            below = (v, names[realiser], names[value])
        if inside is None and value not in carrier:
            inside = (v, names[value])
    rep.add("realiser-below", below is None, below)
    rep.add(f"in-{kind}-core", inside is None, inside, detail=f"{len(vals)} valuations")
    return rep


# ---------------------------------------------------------------------------
# Proof files


def _sexpr_tokens(text: str):
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch, line, col
            i, col = i + 1, col + 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line, col)
            yield ("str", text[i + 1:j]), line, col
            col += j + 1 - i
            i = j + 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in '()";':
            j += 1
        yield ("atom", text[i:j]), line, col
        col += j - i
        i = j


def parse_proof(text: str) -> Proof:
    toks = list(_sexpr_tokens(text))
    pos = 0

    def err(msg):
        if pos < len(toks):
            _, line, col = toks[pos]
            return ParseError(msg, line, col)
        return ParseError(msg + " at end of input", 1, 1)

    def node() -> Proof:
        nonlocal pos
        if pos >= len(toks) or toks[pos][0] != "(":
            raise err("expected '('")
        pos += 1
        if pos >= len(toks) or not isinstance(toks[pos][0], tuple) or toks[pos][0][0] != "atom":
            raise err("expected a rule name")
        rule = toks[pos][0][1]
        if rule not in RULES:
            raise err(f"unknown rule {rule!r}")
        pos += 1
        if pos >= len(toks) or not isinstance(toks[pos][0], tuple) or toks[pos][0][0] != "str":
            raise err("expected a quoted sequent")
        _, line, col = toks[pos]
        try:
            seq = parse_sequent(toks[pos][0][1])
        except ParseError as e:
            raise ParseError(f"in sequent: {e}", line, col) from None
        pos += 1
        prem = []
        while pos < len(toks) and toks[pos][0] == "(":
            prem.append(node())
        if pos >= len(toks) or toks[pos][0] != ")":
            raise err("expected ')'")
        pos += 1
        return Proof(rule, seq, tuple(prem))

    p = node()
    if pos != len(toks):
        raise err("trailing input")
    return p


def print_proof(p: Proof, indent: int = 0) -> str:
    pad = "  " * indent
    head = f'{pad}({p.rule} "{p.sequent}"'
    if not p.premises:
        return head + ")"
    return head + "\n" + "\n".join(print_proof(q, indent + 1) for q in p.premises) + ")"


def load_proof(path: str | Path) -> Proof:
    from .formats import resolve_path

    return parse_proof(resolve_path(path).read_text())


@lru_cache(maxsize=None)
def corpus_paths() -> tuple[Path, ...]:
    from .formats import DATA_DIR

    return tuple(sorted((DATA_DIR / "proofs").glob("*.proof")))
