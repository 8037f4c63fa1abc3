"""Record maps, additive connectives, additive separators and fixpoint exponentials.

A record is a meet-preserving map on the carrier, stored as a table on the
structure under a label.  A pair of labels (left, right) gives `with` and
`oplus`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .report import PASS, Report
from .separators import Separator, generate, verify
from .structures import ImpStructure, StructureError


def verify_record(table: Sequence[int], A: ImpStructure) -> Report:
    rep = Report(f"record on {A.name}")
    names = A.lattice.names
    if len(table) != A.n or any(not 0 <= v < A.n for v in table):
        rep.add("shape", False, list(table))
        return rep
    rep.add("empty-meet", table[A.top] == A.top, names[table[A.top]])
    bad = next(
        ((names[a], names[b]) for a in A.elements for b in A.elements
         if table[A.meet(a, b)] != A.meet(table[a], table[b])),
        None,
    )
    rep.add("binary-meet", bad is None, bad)
    return rep


def extract_table(table: Sequence[int], A: ImpStructure) -> list[int]:
    """Left adjoint: extract(a) = meet{b : a <= l(b)}."""
    return [A.meet_all(b for b in A.elements if A.le(a, table[b])) for a in A.elements]


def adjunction_check(table: Sequence[int], A: ImpStructure) -> Report:
    rep = Report(f"record adjunction on {A.name}")
    ex = extract_table(table, A)
    names = A.lattice.names
    bad = next(
        ((names[a], names[b]) for a in A.elements for b in A.elements
         if A.le(ex[a], b) != A.le(a, table[b])),
        None,
    )
    rep.add("adjunction", bad is None, bad)
    unit = next((names[a] for a in A.elements if not A.le(a, table[ex[a]])), None)
    rep.add("unit", unit is None, unit)
    counit = next((names[a] for a in A.elements if not A.le(ex[table[a]], a)), None)
    rep.add("counit", counit is None, counit)
    for what, f in (("record", table), ("extract", ex)):
        mono = next(
            ((names[a], names[b]) for a in A.elements for b in A.elements if A.le(a, b) and not A.le(f[a], f[b])),
            None,
        )
        rep.add(f"{what}-monotone", mono is None, mono)
    # l . extract is a monad (closure) and extract . l a comonad (kernel).
    monad = [table[ex[a]] for a in A.elements]
    comonad = [ex[table[a]] for a in A.elements]
    bad = next((names[a] for a in A.elements if monad[monad[a]] != monad[a]), None)
    rep.add("monad-multiplication", bad is None, bad)
    bad = next((names[a] for a in A.elements if comonad[comonad[a]] != comonad[a]), None)
    rep.add("comonad-comultiplication", bad is None, bad)
    bad = next((names[a] for a in A.elements if table[ex[table[a]]] != table[a]), None)
    rep.add("triangle-record", bad is None, bad)
    bad = next((names[a] for a in A.elements if ex[table[ex[a]]] != ex[a]), None)
    rep.add("triangle-extract", bad is None, bad)
    return rep


def compatible(left: Sequence[int], right: Sequence[int], A: ImpStructure) -> tuple[bool, tuple | None]:
    """Compatibility of two records; on failure (label, a, b) for the first violated equation.

    The left equation is scanned over all pairs before the right one.
    """
    ex_l, ex_r = extract_table(left, A), extract_table(right, A)
    pairs = [(a, b) for a in reversed(A.elements) for b in A.elements]
    for a, b in pairs:
        if ex_l[A.meet(left[a], right[b])] != ex_l[left[a]]:
            return False, ("l", a, b)
    for a, b in pairs:
        if ex_r[A.meet(left[a], right[b])] != ex_r[right[b]]:
            return False, ("r", a, b)
    return True, None


@dataclass(frozen=True)
class RecordPair:
    """Two labelled record tables on one structure."""

    A: ImpStructure
    left: str = "l"
    right: str = "r"

    @property
    def l(self) -> tuple[int, ...]:
        return self.A.record(self.left)

    @property
    def r(self) -> tuple[int, ...]:
        return self.A.record(self.right)

    def compatible(self) -> tuple[bool, tuple | None]:
        return compatible(self.l, self.r, self.A)

    def with_(self, a: int, b: int) -> int:
        return self.A.meet(self.l[a], self.r[b])

    def oplus(self, a: int, b: int) -> int:
        imp = self.A.imp
        return self.A.meet_all(imp[self.with_(imp[a][c], imp[b][c])][c] for c in self.A.elements)


def pair_of(A: ImpStructure, pair: RecordPair | tuple[str, str] | None = None) -> RecordPair:
    if isinstance(pair, RecordPair):
        return pair
    left, right = pair or ("l", "r")
    for label in (left, right):
        if label not in A.records:
            raise StructureError(f"{A.name or 'structure'} has no record table {label!r}")
    return RecordPair(A, left, right)


def demorgan_check(pair: RecordPair, A: ImpStructure | None = None) -> Report:
    A = A or pair.A
    rep = Report(f"oplus below negated with on {A.name}")
    names = A.lattice.names
    neg = A.neg
    bad = next(
        ((names[a], names[b]) for a in A.elements for b in A.elements
         if not A.le(pair.oplus(a, b), neg(pair.with_(neg(a), neg(b))))),
        None,
    )
    rep.add("demorgan", bad is None, bad)
    return rep


def verify_additive_separator(S: Iterable[int], pair: RecordPair, A: ImpStructure | None = None) -> Report:
    """Separator laws plus conditions 1-4; condition 4 is reported as skipped when it fails."""
    A = A or pair.A
    return verify(S, A, "additive", (pair.left, pair.right))


def additive_core(pair: RecordPair) -> Separator:
    return generate((), pair.A, "additive", (pair.left, pair.right))


def additive_suite(A: ImpStructure, pair: RecordPair, S: Iterable[int] | None = None) -> Report:
    """The additive laws and the multiplicative/additive distributivity laws, via entailment."""
    S = additive_core(pair).carrier if S is None else frozenset(S.carrier if isinstance(S, Separator) else S)
    rep = Report(f"additive laws on {A.name}")
    compat, wit = pair.compatible()
    rep.add("compatible-pair", compat, wit)
    pre = verify_additive_separator(S, pair, A)
    rep.add("additive-separator", pre.ok, [c.name for c in pre.failures()] or None)
    if not pre.ok:
        return rep
    cond4 = pre.get("cond4")
    names = A.lattice.names
    els = list(A.elements)
    imp = A.imp
    W, O, TT = pair.with_, pair.oplus, A.tensor

    def ent(a, b):
        return imp[a][b] in S

    def equiv(a, b):
        return ent(a, b) and ent(b, a)

    def law(name, arity, holds):
        bad = next((xs for xs in product(els, repeat=arity) if not holds(*xs)), None)
        rep.add(name, bad is None, None if bad is None else tuple(names[x] for x in bad))

    top, bot = A.top, A.bottom
    law("with-commutes", 2, lambda a, b: equiv(W(a, b), W(b, a)))
    law("oplus-commutes", 2, lambda a, b: equiv(O(a, b), O(b, a)))
    law("with-projections", 2, lambda a, b: ent(W(a, b), a) and ent(W(a, b), b))
    law("oplus-injections", 2, lambda a, b: ent(a, O(a, b)) and ent(b, O(a, b)))
    law("with-top-unit", 1, lambda a: equiv(W(a, top), a) and equiv(W(top, a), a))
    law("oplus-bottom-unit", 1, lambda a: equiv(O(a, bot), a) and equiv(O(bot, a), a))
    if cond4 is not None and cond4.status == PASS:
        law("with-associative", 3, lambda a, b, c: equiv(W(a, W(b, c)), W(W(a, b), c)))
    else:
        rep.skip("with-associative", "needs condition 4")
    law("oplus-copairing", 3, lambda a, b, d: not (ent(a, d) and ent(b, d)) or ent(O(a, b), d))
    law("oplus-associative", 3, lambda a, b, c: equiv(O(a, O(b, c)), O(O(a, b), c)))
    law("with-pairing", 3, lambda c, a, b: not (ent(c, a) and ent(c, b)) or ent(c, W(a, b)))
    law("tensor-oplus-distrib-forward", 3, lambda a, b, c: ent(TT(a, O(b, c)), O(TT(a, b), TT(a, c))))
    law("tensor-oplus-distrib-backward", 3, lambda a, b, c: ent(O(TT(a, b), TT(a, c)), TT(a, O(b, c))))
    law("lolli-with-distrib", 3, lambda a, b, c: ent(imp[a][W(b, c)], W(imp[a][b], imp[a][c])))
    law("oplus-lolli-distrib", 3, lambda a, b, c: equiv(imp[O(a, b)][c], W(imp[a][c], imp[b][c])))
    return rep


# ---------------------------------------------------------------------------
# Fixpoint exponentials


def bang_step(pair: RecordPair, X: int):
    """a |-> 1 & (X & (a * a))."""
    A = pair.A
    one = A.one()
    return lambda a: pair.with_(one, pair.with_(X, A.tensor(a, a)))


def whynot_step(pair: RecordPair, X: int):
    """a |-> bot + (X + (a par a))."""
    A = pair.A
    return lambda a: pair.oplus(A.bottom, pair.oplus(X, A.par(a, a)))


class NonMonotoneStep(ValueError):
    pass


def _iterate(A: ImpStructure, step, start: int) -> list[int]:
    for a in A.elements:
        for b in A.elements:
            if A.le(a, b) and not A.le(step(a), step(b)):
                raise NonMonotoneStep(f"step map not monotone at {A.lattice.names[a]} <= {A.lattice.names[b]}")
    trace = [start]
    for _ in range(A.n + 1):
        nxt = step(trace[-1])
        if nxt == trace[-1]:
            return trace
        trace.append(nxt)
    raise AssertionError("iteration did not stabilise")


def fixpoint_trace(X: int, pair: RecordPair, greatest: bool = True) -> list[int]:
    A = pair.A
    if greatest:
        return _iterate(A, bang_step(pair, X), A.top)
    return _iterate(A, whynot_step(pair, X), A.bottom)


def fixpoint_bang(X: int, A: ImpStructure, pair: RecordPair | tuple[str, str] | None = None) -> int:
    return fixpoint_trace(X, pair_of(A, pair), True)[-1]


def fixpoint_whynot(X: int, A: ImpStructure, pair: RecordPair | tuple[str, str] | None = None) -> int:
    return fixpoint_trace(X, pair_of(A, pair), False)[-1]


def fixpoint_bang_table(A: ImpStructure, pair: RecordPair | tuple[str, str] | None = None) -> list[int]:
    p = pair_of(A, pair)
    return [fixpoint_trace(x, p, True)[-1] for x in A.elements]


def fixpoint_report(A: ImpStructure, pair: RecordPair | tuple[str, str] | None = None) -> Report:
    p = pair_of(A, pair)
    rep = Report(f"fixpoint exponentials on {A.name}")
    names = A.lattice.names
    height = A.lattice.height
    bang, whynot = [], []
    for greatest, out, label in ((True, bang, "bang"), (False, whynot, "whynot")):
        try:
            traces = [fixpoint_trace(x, p, greatest) for x in A.elements]
        except NonMonotoneStep as e:
            rep.add(f"{label}-step-monotone", False, str(e))
            return rep
        rep.add(f"{label}-step-monotone", True)
        long = next((names[x] for x, tr in zip(A.elements, traces) if len(tr) - 1 > height), None)
        rep.add(f"{label}-chain-within-height", long is None, long, detail=f"height {height}")
        cmp = (lambda u, v: A.le(v, u)) if greatest else A.le
        mono_chain = next((names[x] for x, tr in zip(A.elements, traces)
                           if any(not cmp(u, v) for u, v in zip(tr, tr[1:]))), None)
        rep.add(f"{label}-chain-{'descending' if greatest else 'ascending'}", mono_chain is None, mono_chain)
        out.extend(tr[-1] for tr in traces)
        fix = next((names[x] for x in A.elements
                    if (bang_step(p, x) if greatest else whynot_step(p, x))(out[x]) != out[x]), None)
        rep.add(f"{label}-is-fixpoint", fix is None, fix)
    mono = next(((names[a], names[b]) for a in A.elements for b in A.elements
                 if A.le(a, b) and not A.le(bang[a], bang[b])), None)
    rep.add("bang-monotone", mono is None, mono)
    rep.note("bang-table", f"{[names[v] for v in bang]}")
    rep.note("whynot-table", f"{[names[v] for v in whynot]}")
    return rep


def exponential_from_fixpoint_check(
    A: ImpStructure, pair: RecordPair | tuple[str, str] | None = None, S: Iterable[int] | None = None
) -> Report:
    """Install the fixpoint `!` and verify S as an exponential separator for it.

    S defaults to the additive core of the pair.  The same S is also checked
    against the identity `!` as a baseline.
    """
    p = pair_of(A, pair)
    table = fixpoint_bang_table(A, p)
    carrier = additive_core(p).carrier if S is None else frozenset(S.carrier if isinstance(S, Separator) else S)
    rep = Report(f"fixpoint exponential on {A.name}")
    rep.extend(verify(carrier, A.with_bang(table), "exponential"), "fixpoint")
    rep.extend(verify(carrier, A.with_bang(list(A.elements)), "exponential"), "identity-baseline")
    names = A.lattice.names
    rep.note("bang-table", f"{[names[v] for v in table]}")
    rep.note("separator", f"{{{', '.join(names[a] for a in sorted(carrier))}}}")
    rep.note("separator-consistent", str(A.bottom not in carrier))
    return rep
