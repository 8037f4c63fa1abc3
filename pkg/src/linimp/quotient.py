"""Entailment preorder of a linear separator and the quotient algebra A/S."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable

from . import terms as T
from .combinators import base_term
from .report import Report
from .separators import Separator
from .structures import ImpStructure, interpret
from .syntax import parse_term


def _carrier(S) -> frozenset[int]:
    return frozenset(S.carrier if isinstance(S, Separator) else S)


def entails(A: ImpStructure, S: Iterable[int]) -> Callable[[int, int], bool]:
    """a |-_S b iff a -o b lies in S."""
    carrier = _carrier(S)
    imp = A.imp
    return lambda a, b: imp[a][b] in carrier


@dataclass
class QuotientAlgebra:
    A: ImpStructure
    S: frozenset[int]
    classes: list[tuple[int, ...]]
    class_of: list[int]
    class_imp: list[list[int]]
    class_tensor: list[list[int]]
    entail: list[list[bool]]
    report: Report

    def rep(self, x: int) -> int:
        return self.classes[x][0]

    @property
    def size(self) -> int:
        return len(self.classes)

    def show_class(self, x: int) -> str:
        names = self.A.lattice.names
        return "[" + " ".join(names[a] for a in self.classes[x]) + "]"

    def join(self, x: int, y: int) -> int | None:
        """Least upper bound in the entailment order, when it exists."""
        ub = [z for z in range(self.size) if self.entail[x][z] and self.entail[y][z]]
        least = [z for z in ub if all(self.entail[z][w] for w in ub)]
        return least[0] if least else None

    def render(self) -> str:
        lines = [f"{self.size} classes"]
        for x in range(self.size):
            above = [self.show_class(y) for y in range(self.size) if y != x and self.entail[x][y]]
            lines.append(f"  {x}: {self.show_class(x)}  entails {' '.join(above) or '-'}")
        return "\n".join(lines)


def build_quotient(A: ImpStructure, S: Iterable[int]) -> QuotientAlgebra:
    """Classes of mutual entailment, operations through minimum representatives.

    Independence of representatives is re-checked over every choice, and for
    the tensor also through an explicit realiser in S.
    """
    carrier = _carrier(S)
    ent = entails(A, carrier)
    els = list(A.elements)
    class_of = [-1] * A.n
    classes: list[tuple[int, ...]] = []
    for a in els:
        if class_of[a] < 0:
            members = tuple(b for b in els if ent(a, b) and ent(b, a))
            for b in members:
                class_of[b] = len(classes)
            classes.append(members)
    k = len(classes)
    rep = [c[0] for c in classes]
    imp = [[class_of[A.imp[rep[x]][rep[y]]] for y in range(k)] for x in range(k)]
    ten = [[class_of[A.tensor(rep[x], rep[y])] for y in range(k)] for x in range(k)]
    entail = [[ent(rep[x], rep[y]) for y in range(k)] for x in range(k)]

    report = Report(f"quotient {A.name}")
    names = A.lattice.names
    refl = next((names[a] for a in els if not ent(a, a)), None)
    report.add("entail-reflexive", refl is None, refl)
    trans = next(((names[a], names[b], names[c]) for a in els for b in els for c in els
                  if ent(a, b) and ent(b, c) and not ent(a, c)), None)
    report.add("entail-transitive", trans is None, trans)
    partition = sorted(a for c in classes for a in c) == els
    report.add("partition", partition)
    for label, op, table in (("imp", lambda a, b: A.imp[a][b], imp), ("tensor", A.tensor, ten)):
        bad = next(((names[a], names[b]) for a in els for b in els
                    if class_of[op(a, b)] != table[class_of[a]][class_of[b]]), None)
        report.add(f"well-defined-{label}", bad is None, bad)
    cert = _tensor_certificate(A, carrier, ent)
    report.add("tensor-certificate", cert is None, cert)
    antisym = next(((x, y) for x in range(k) for y in range(k) if x != y and entail[x][y] and entail[y][x]), None)
    report.add("entail-antisymmetric", antisym is None, antisym)
    return QuotientAlgebra(A, carrier, classes, class_of, imp, ten, entail, report)


_TENSOR_CERT = parse_term(r"\x.x (\y z t.t (p y) (q z))")


def _tensor_certificate(A: ImpStructure, S: frozenset[int], ent) -> tuple | None:
    """For a |- a' and b |- b', the realiser lands in S below a*b -o a'*b'."""
    names = A.lattice.names
    values = {}
    for p in set(A.imp[a][b] for a in A.elements for b in A.elements if ent(a, b)):
        for q in set(A.imp[a][b] for a in A.elements for b in A.elements if ent(a, b)):
            values[p, q] = interpret(_TENSOR_CERT, A, {"p": p, "q": q})
    for a, a2, b, b2 in product(A.elements, repeat=4):
        if ent(a, a2) and ent(b, b2):
            v = values[A.imp[a][a2], A.imp[b][b2]]
            if v not in S or not A.le(v, A.imp[A.tensor(a, b)][A.tensor(a2, b2)]):
                return tuple(names[x] for x in (a, a2, b, b2))
    return None


# Realisers of the eight laws; `I` stands for the parameter I^A.
WITNESSES: dict[str, T.Term] = {
    name: parse_term(src)
    for name, src in {
        "commutativity": r"\x.x (\a b y.y b a)",
        "associativity-right": r"\x.x (\y c.y (\a b t.t a (\u.u b c)))",
        "associativity-left": r"\x.x (\a y.y (\b c t.t (\u.u a b) c))",
        "neutral-elim": r"\x.x (\a i.i a)",
        "neutral-intro": r"\a.\x.x a I",
        "currying-forward": r"\x a b.x (\y.y a b)",
        "currying-backward": r"\x y.y (\a b.x a b)",
        "modus-ponens": r"\x.x (\y a.y a)",
        "pairing": r"\a b x.x a b",
        "transitivity": r"\x a.x (\y z.z (y a))",
        "tensor-rule": r"\x y.x (\u v.y (\a c t.t (u a) (v c)))",
    }.items()
}


def _witness_types(A: ImpStructure, unit: int) -> dict[str, tuple[int, Callable]]:
    """Per witness: arity and the implication it must sit below."""
    i, t = A.imp, A.tensor
    return {
        "commutativity": (2, lambda a, b: i[t(a, b)][t(b, a)]),
        "associativity-right": (3, lambda a, b, c: i[t(t(a, b), c)][t(a, t(b, c))]),
        "associativity-left": (3, lambda a, b, c: i[t(a, t(b, c))][t(t(a, b), c)]),
        "neutral-elim": (1, lambda a: i[t(a, unit)][a]),
        "neutral-intro": (1, lambda a: i[a][t(a, unit)]),
        "currying-forward": (3, lambda a, b, c: i[i[t(a, b)][c]][A.arrow(a, b, c)]),
        "currying-backward": (3, lambda a, b, c: i[A.arrow(a, b, c)][i[t(a, b)][c]]),
        "modus-ponens": (2, lambda a, b: i[t(i[a][b], a)][b]),
        "pairing": (2, lambda a, b: A.arrow(a, b, t(a, b))),
        "transitivity": (3, lambda a, b, c: i[t(i[a][b], i[b][c])][i[a][c]]),
        "tensor-rule": (4, lambda a, b, c, d: i[t(i[a][b], i[c][d])][i[t(a, c)][t(b, d)]]),
    }


_LAW_WITNESSES = {
    "commutativity": ("commutativity",),
    "associativity": ("associativity-right", "associativity-left"),
    "identity-neutral": ("neutral-elim", "neutral-intro"),
    "currying": ("currying-forward", "currying-backward"),
    "modus-ponens": ("modus-ponens",),
    "pairing": ("pairing",),
    "transitivity": ("transitivity",),
    "tensor-rule": ("tensor-rule",),
}


def residuated_suite(Q: QuotientAlgebra) -> Report:
    """Each law on the class tables, then through its realiser."""
    A, S = Q.A, Q.S
    rep = Report(f"residuated laws on {A.name}/S")
    k = range(Q.size)
    ci, ct, en = Q.class_imp, Q.class_tensor, Q.entail
    unit = interpret(base_term("I"), A)
    u = Q.class_of[unit]
    semantic = {
        "commutativity": (2, lambda x, y: ct[x][y] == ct[y][x]),
        "associativity": (3, lambda x, y, z: ct[ct[x][y]][z] == ct[x][ct[y][z]]),
        "identity-neutral": (1, lambda x: ct[x][u] == x),
        "currying": (3, lambda x, y, z: ci[ct[x][y]][z] == ci[x][ci[y][z]]),
        "modus-ponens": (2, lambda x, y: en[ct[ci[x][y]][x]][y]),
        "pairing": (2, lambda x, y: en[x][ci[y][ct[x][y]]]),
        "transitivity": (3, lambda x, y, z: en[ct[ci[x][y]][ci[y][z]]][ci[x][z]]),
        "tensor-rule": (4, lambda a, b, c, d: en[ct[ci[a][b]][ci[c][d]]][ci[ct[a][c]][ct[b][d]]]),
    }
    for law, (arity, holds) in semantic.items():
        bad = next((xs for xs in product(k, repeat=arity) if not holds(*xs)), None)
        rep.add(f"{law}.classes", bad is None, None if bad is None else tuple(Q.show_class(x) for x in bad))

    names = A.lattice.names
    types = _witness_types(A, unit)
    for law, wits in _LAW_WITNESSES.items():
        problems = []
        for w in wits:
            term = WITNESSES[w]
            if not T.is_linear(term):
                problems.append(f"{w} not linear")
                continue
            value = interpret(term, A, {"I": unit})
            if value not in S:
                problems.append(f"{w}={names[value]} not in S")
            arity, ty = types[w]
            bad = next((xs for xs in product(A.elements, repeat=arity) if not A.le(value, ty(*xs))), None)
            if bad is not None:
                problems.append(f"{w} not below type at {tuple(names[x] for x in bad)}")
        rep.add(f"{law}.witness", not problems, "; ".join(problems) or None)
    missing = [(Q.show_class(x), Q.show_class(y)) for x in k for y in k if Q.join(x, y) is None]
    if missing:
        rep.note("joins", f"missing for {len(missing)} pairs, e.g. {missing[0]}")
    else:
        rep.note("joins", "all binary joins exist")
    return rep
