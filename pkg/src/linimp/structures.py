"""Finite complete lattices with implication or application, and the
interpretation of terms inside them.

Elements are integer ids ``0..n-1``; tables are tuples indexed by ids.
"""

from __future__ import annotations

import random
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import terms as T
from .report import Report

DEFAULT_DEPTH_CAP = 6


class StructureError(ValueError):
    pass


class InterpretError(ValueError):
    pass


class DepthLimitExceeded(InterpretError):
    def __init__(self, depth: int, cap: int):
        super().__init__(f"abstraction body has {depth} live binders, cap is {cap}")
        self.depth = depth
        self.cap = cap


# ---------------------------------------------------------------------------
# Lattices


def _bits(X: int) -> list[int]:
    out = []
    while X:
        low = X & -X
        out.append(low.bit_length() - 1)
        X ^= low
    return out


class FinLattice:
    """A finite partial order; meets/joins are None where they do not exist."""

    def __init__(self, names: Sequence[str], leq: Sequence[Sequence[bool]]):
        self.names = tuple(str(x) for x in names)
        self.n = len(self.names)
        self.leq = tuple(tuple(bool(v) for v in row) for row in leq)
        if len(self.leq) != self.n or any(len(r) != self.n for r in self.leq):
            raise StructureError("leq table has the wrong shape")
        self._index = {name: i for i, name in enumerate(self.names)}

    @classmethod
    def from_pairs(cls, names: Sequence[str], pairs: Iterable[tuple[int, int]]) -> "FinLattice":
        """Reflexive-transitive closure of the given (lower, upper) pairs."""
        n = len(names)
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in pairs:
            rel[a][b] = True
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    row_k = rel[k]
                    row_i = rel[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        return cls(names, rel)

    def __repr__(self) -> str:
        return f"FinLattice({list(self.names)})"

    @property
    def elements(self) -> range:
        return range(self.n)

    def id(self, ident: str | int) -> int:
        if isinstance(ident, int):
            if 0 <= ident < self.n:
                return ident
            raise StructureError(f"no element with id {ident}")
        if ident in self._index:
            return self._index[ident]
        if ident.isdigit() and int(ident) < self.n:
            return int(ident)
        raise StructureError(f"unknown element {ident!r}")

    def name(self, a: int) -> str:
        return self.names[a]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << d for d in self.elements if self.leq[d][a]) for a in self.elements)

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << d for d in self.elements if self.leq[a][d]) for a in self.elements)

    @staticmethod
    def _bound_table(inner: tuple[int, ...]) -> tuple[tuple[int | None, ...], ...]:
        # The bound of a, b is the unique common bound c whose own cone
        # contains every common bound.
        n = len(inner)
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                cands = inner[a] & inner[b]
                best = [c for c in _bits(cands) if cands & ~inner[c] == 0]
                row.append(best[0] if len(best) == 1 else None)
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def meet_table(self) -> tuple[tuple[int | None, ...], ...]:
        return self._bound_table(self.down_masks)

    @cached_property
    def join_table(self) -> tuple[tuple[int | None, ...], ...]:
        return self._bound_table(self.up_masks)

    @cached_property
    def top(self) -> int | None:
        tops = [t for t in self.elements if all(self.leq[a][t] for a in self.elements)]
        return tops[0] if tops else None

    @cached_property
    def bottom(self) -> int | None:
        bots = [t for t in self.elements if all(self.leq[t][a] for a in self.elements)]
        return bots[0] if bots else None

    def meet(self, a: int, b: int) -> int:
        m = self.meet_table[a][b]
        if m is None:
            raise StructureError(f"no meet for {self.names[a]}, {self.names[b]}")
        return m

    def join(self, a: int, b: int) -> int:
        j = self.join_table[a][b]
        if j is None:
            raise StructureError(f"no join for {self.names[a]}, {self.names[b]}")
        return j

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.top
        table = self.meet_table
        for x in xs:
            acc = table[acc][x]
        return acc

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        table = self.join_table
        for x in xs:
            acc = table[acc][x]
        return acc

    def upset(self, a: int) -> list[int]:
        return [b for b in self.elements if self.leq[a][b]]

    def downset(self, a: int) -> list[int]:
        return [b for b in self.elements if self.leq[b][a]]

    @cached_property
    def height(self) -> int:
        """Number of edges in a longest chain."""
        order = sorted(self.elements, key=lambda a: len(self.downset(a)))
        best = {}
        for a in order:
            best[a] = max((best[b] + 1 for b in self.downset(a) if b != a), default=0)
        return max(best.values(), default=0)

    def is_distributive(self) -> bool:
        m, j = self.meet_table, self.join_table
        return all(
            m[a][j[b][c]] == j[m[a][b]][m[a][c]] for a in self.elements for b in self.elements for c in self.elements
        )


def verify_lattice(L: FinLattice) -> Report:
    rep = Report(f"lattice {len(L.names)} elements")
    els = L.elements
    rep.add("reflexive", all(L.leq[a][a] for a in els), next((L.names[a] for a in els if not L.leq[a][a]), None))
    anti = next(((L.names[a], L.names[b]) for a in els for b in els if a != b and L.leq[a][b] and L.leq[b][a]), None)
    rep.add("antisymmetric", anti is None, anti)
    up = L.up_masks
    trans = next(
        ((L.names[a], L.names[b], L.names[c]) for a in els for b in _bits(up[a]) if up[b] & ~up[a]
         for c in _bits(up[b] & ~up[a])),
        None,
    )
    rep.add("transitive", trans is None, trans)
    if not rep.ok:
        rep.skip("bounds", "not a partial order")
        return rep
    rep.add("top", L.top is not None)
    rep.add("bottom", L.bottom is not None)
    no_meet = next(((L.names[a], L.names[b]) for a in els for b in els if L.meet_table[a][b] is None), None)
    rep.add("binary-meets", no_meet is None, no_meet)
    no_join = next(((L.names[a], L.names[b]) for a in els for b in els if L.join_table[a][b] is None), None)
    rep.add("binary-joins", no_join is None, no_join)
    return rep


def heyting_arrow(L: FinLattice) -> tuple[tuple[int, ...], ...]:
    """a -> b = join{c : c /\\ a <= b}; an implication exactly when L is distributive."""
    return tuple(
        tuple(L.join_all(c for c in L.elements if L.le(L.meet(c, a), b)) for b in L.elements) for a in L.elements
    )


# ---------------------------------------------------------------------------
# Implicative and applicative structures


def _freeze(table: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in table)


class ImpStructure:
    """Complete lattice with implication, optional `!` and record tables."""

    def __init__(
        self,
        lattice: FinLattice,
        imp: Sequence[Sequence[int]],
        bang: Sequence[int] | None = None,
        records: Mapping[str, Sequence[int]] | None = None,
        name: str = "",
    ):
        self.lattice = lattice
        self.imp = _freeze(imp)
        n = lattice.n
        if len(self.imp) != n or any(len(r) != n for r in self.imp):
            raise StructureError("implication table has the wrong shape")
        self.bang = tuple(int(v) for v in bang) if bang is not None else None
        if self.bang is not None and len(self.bang) != n:
            raise StructureError("! table has the wrong shape")
        self.records = {k: tuple(int(v) for v in tbl) for k, tbl in (records or {}).items()}
        self.name = name

    def __repr__(self) -> str:
        return f"ImpStructure({self.name or self.lattice.n})"

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def elements(self) -> range:
        return self.lattice.elements

    @property
    def top(self) -> int:
        return self.lattice.top

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    def le(self, a: int, b: int) -> bool:
        return self.lattice.leq[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.lattice.meet_table[a][b]

    def join(self, a: int, b: int) -> int:
        return self.lattice.join_table[a][b]

    def meet_all(self, xs: Iterable[int]) -> int:
        return self.lattice.meet_all(xs)

    def join_all(self, xs: Iterable[int]) -> int:
        return self.lattice.join_all(xs)

    def arrow(self, *xs: int) -> int:
        """Right-associated chain x1 -> x2 -> ... -> xn."""
        acc = xs[-1]
        for x in reversed(xs[:-1]):
            acc = self.imp[x][acc]
        return acc

    def with_bang(self, bang: Sequence[int] | None) -> "ImpStructure":
        return ImpStructure(self.lattice, self.imp, bang, self.records, self.name)

    def with_records(self, records: Mapping[str, Sequence[int]]) -> "ImpStructure":
        return ImpStructure(self.lattice, self.imp, self.bang, records, self.name)

    def bang_of(self, a: int) -> int:
        if self.bang is None:
            raise InterpretError("structure has no ! table")
        return self.bang[a]

    @cached_property
    def app_table(self) -> tuple[tuple[int, ...], ...]:
        L = self.lattice
        imp = self.imp
        return tuple(
            tuple(L.meet_all(c for c in L.elements if L.leq[a][imp[b][c]]) for b in L.elements) for a in L.elements
        )

    def app(self, a: int, b: int) -> int:
        return self.app_table[a][b]

    @cached_property
    def tensor_table(self) -> tuple[tuple[int, ...], ...]:
        imp = self.imp
        els = self.elements
        return tuple(
            tuple(self.meet_all(imp[imp[a][imp[b][c]]][c] for c in els) for b in els) for a in els
        )

    def tensor(self, a: int, b: int) -> int:
        return self.tensor_table[a][b]

    def par(self, a: int, b: int) -> int:
        imp = self.imp
        return self.meet_all(imp[imp[a][c]][imp[imp[b][c]][c]] for c in self.elements)

    def neg(self, a: int) -> int:
        return self.imp[a][self.bottom]

    def one(self) -> int:
        return self.imp[self.bottom][self.bottom]

    def record(self, label: str) -> tuple[int, ...]:
        if label not in self.records:
            raise InterpretError(f"structure has no record table for label {label!r}")
        return self.records[label]

    @cached_property
    def _extract_tables(self) -> dict[str, tuple[int, ...]]:
        L = self.lattice
        return {
            label: tuple(L.meet_all(b for b in L.elements if L.leq[a][tbl[b]]) for a in L.elements)
            for label, tbl in self.records.items()
        }

    def extract(self, label: str, a: int) -> int:
        self.record(label)
        return self._extract_tables[label][a]


class AppStructure:
    """Complete lattice with an application table."""

    def __init__(self, lattice: FinLattice, app: Sequence[Sequence[int]], name: str = ""):
        self.lattice = lattice
        self.app_table = _freeze(app)
        self.name = name

    def app(self, a: int, b: int) -> int:
        return self.app_table[a][b]


def app_of_imp(A: ImpStructure) -> AppStructure:
    return AppStructure(A.lattice, A.app_table, A.name)


def imp_of_app(P: AppStructure) -> ImpStructure:
    """a ~> b = join{c : c.a <= b}."""
    L = P.lattice
    app = P.app_table
    imp = [[L.join_all(c for c in L.elements if L.leq[app[c][a]][b]) for b in L.elements] for a in L.elements]
    return ImpStructure(L, imp, name=P.name)


def verify_implicative(A: ImpStructure) -> Report:
    rep = Report(f"implicative {A.name}".strip())
    lat = verify_lattice(A.lattice)
    if not lat.ok:
        return rep.extend(lat, "lattice")
    L, imp, els = A.lattice, A.imp, A.elements
    # Antitone in the first argument and monotone in the second; by
    # transitivity this is the four-variable variance law.
    leq = L.leq
    bad = next(
        ((L.names[a], L.names[a2], L.names[b], L.names[b]) for a in els for a2 in els if leq[a2][a]
         for b in els if not leq[imp[a][b]][imp[a2][b]]),
        None,
    )
    if bad is None:
        bad = next(
            ((L.names[a], L.names[a], L.names[b], L.names[b2]) for b in els for b2 in els if leq[b][b2]
             for a in els if not leq[imp[a][b]][imp[a][b2]]),
            None,
        )
    rep.add("variance", bad is None, bad)
    bad = next((L.names[a] for a in els if imp[a][L.top] != L.top), None)
    rep.add("empty-meet", bad is None, bad)
    mt = L.meet_table
    bad = None
    for a, b in product(els, repeat=2):
        ia, mx = imp[a], mt[imp[a][b]]
        # row over c: a -> (b /\ c) against (a -> b) /\ (a -> c)
        if [ia[m] for m in mt[b]] != [mx[y] for y in ia]:
            c = next(c for c in els if ia[mt[b][c]] != mx[ia[c]])
            bad = (L.names[a], L.names[b], L.names[c])
            break
    rep.add("binary-meet", bad is None, bad)
    if A.bang is not None:
        bad = next(
            ((L.names[a], L.names[b]) for a in els for b in els if L.leq[a][b] and not L.leq[A.bang[a]][A.bang[b]]),
            None,
        )
        rep.add("bang-monotone", bad is None, bad)
    return rep


def verify_applicative(P: AppStructure) -> Report:
    rep = Report(f"applicative {P.name}".strip())
    lat = verify_lattice(P.lattice)
    if not lat.ok:
        return rep.extend(lat, "lattice")
    L, app, els = P.lattice, P.app_table, P.lattice.elements
    bad = None
    for a, a2, b, b2 in product(els, repeat=4):
        if L.leq[a][a2] and L.leq[b][b2] and not L.leq[app[a][b]][app[a2][b2]]:
            bad = tuple(L.names[x] for x in (a, a2, b, b2))
            break
    rep.add("monotone", bad is None, bad)
    bad = next((L.names[b] for b in els if app[L.bottom][b] != L.bottom), None)
    rep.add("empty-join", bad is None, bad)
    bad = next(
        ((L.names[a], L.names[b], L.names[c]) for a in els for b in els for c in els
         if app[L.join_table[a][b]][c] != L.join_table[app[a][c]][app[b][c]]),
        None,
    )
    rep.add("binary-join", bad is None, bad)
    return rep


def roundtrip_check(A: ImpStructure | AppStructure) -> Report:
    """imp -> app -> imp and app -> imp -> app are identities; adjunction on all triples."""
    if isinstance(A, ImpStructure):
        imp_s, app_s = A, app_of_imp(A)
    else:
        app_s, imp_s = A, imp_of_app(A)
    rep = Report(f"roundtrip {A.name}".strip())
    L, els = imp_s.lattice, imp_s.elements
    back_imp = imp_of_app(app_of_imp(imp_s)).imp
    bad = next(((L.names[a], L.names[b]) for a in els for b in els if back_imp[a][b] != imp_s.imp[a][b]), None)
    rep.add("imp-app-imp", bad is None, bad)
    back_app = app_of_imp(imp_of_app(app_s)).app_table
    bad = next(((L.names[a], L.names[b]) for a in els for b in els if back_app[a][b] != app_s.app_table[a][b]), None)
    rep.add("app-imp-app", bad is None, bad)
    app, imp = app_s.app_table, imp_of_app(app_s).imp
    bad = next(
        ((L.names[a], L.names[b], L.names[c]) for a in els for b in els for c in els
         if L.leq[app[a][b]][c] != L.leq[a][imp[b][c]]),
        None,
    )
    rep.add("adjunction", bad is None, bad)
    bad = next(((L.names[a], L.names[b]) for a in els for b in els if not L.leq[a][imp[b][app[a][b]]]), None)
    rep.add("unit", bad is None, bad)
    bad = next(((L.names[a], L.names[b]) for a in els for b in els if not L.leq[app[imp[a][b]][a]][b]), None)
    rep.add("counit", bad is None, bad)
    return rep


def kleisli(A: ImpStructure, bang: Sequence[int] | None = None) -> ImpStructure:
    """The structure with a -> b := !a -o b."""
    bang = tuple(bang) if bang is not None else A.bang
    if bang is None:
        raise StructureError("kleisli needs a ! table")
    imp = [[A.imp[bang[a]][b] for b in A.elements] for a in A.elements]
    return ImpStructure(A.lattice, imp, bang, A.records, f"{A.name}!".strip())


# ---------------------------------------------------------------------------
# Interpretation
#
# Terms are compiled to a hash-consed graph over de Bruijn indices.  Each node
# records its loose indices; its value depends only on their values, which is
# the memo key.  An abstraction whose body has k loose indices costs n^k
# evaluations of that body in the worst case, hence the cap on k.


class _Compiled:
    def __init__(self, A: ImpStructure, env: Mapping[str, int], cap: int):
        self.A = A
        self.env = env
        self.cap = cap
        self.nodes: list[tuple] = []
        self.loose: list[tuple[int, ...]] = []
        self.intern: dict[tuple, int] = {}
        self.memo: dict[tuple, int] = {}

    def add(self, key: tuple, loose: Iterable[int]) -> int:
        nid = self.intern.get(key)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(key)
            self.loose.append(tuple(sorted(set(loose))))
            self.intern[key] = nid
        return nid

    def compile(self, t: tuple) -> int:
        tag = t[0]
        if tag == "V":
            return self.add(("V", t[1]), (t[1],))
        if tag == "F":
            if t[1] not in self.env:
                raise InterpretError(f"unresolved free variable {t[1]!r}")
            return self.add(("K", self.env[t[1]]), ())
        if tag == "P":
            try:
                return self.add(("K", self.A.lattice.id(t[1])), ())
            except StructureError as e:
                raise InterpretError(str(e)) from None
        if tag == "A":
            f, a = self.compile(t[1]), self.compile(t[2])
            return self.add(("A", f, a), self.loose[f] + self.loose[a])
        if tag in ("L", "BL"):
            body = self.compile(t[1])
            if len(self.loose[body]) > self.cap:
                raise DepthLimitExceeded(len(self.loose[body]), self.cap)
            if tag == "BL" and self.A.bang is None:
                raise InterpretError("structure has no ! table")
            return self.add((tag, body), (i - 1 for i in self.loose[body] if i > 0))
        if tag == "B":
            if self.A.bang is None:
                raise InterpretError("structure has no ! table")
            body = self.compile(t[1])
            return self.add(("B", body), self.loose[body])
        if tag == "R0":
            return self.add(("K", self.A.top), ())
        if tag == "R":
            self.A.record(t[2])
            base, fld = self.compile(t[1]), self.compile(t[3])
            return self.add(("R", base, t[2], fld), self.loose[base] + self.loose[fld])
        if tag == "S":
            self.A.record(t[2])
            base = self.compile(t[1])
            return self.add(("S", base, t[2]), self.loose[base])
        raise TypeError(t)

    def ev(self, nid: int, env: tuple[int, ...]) -> int:
        key = (nid,) + tuple(env[-1 - i] for i in self.loose[nid])
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        node = self.nodes[nid]
        tag = node[0]
        A = self.A
        if tag == "K":
            v = node[1]
        elif tag == "V":
            v = env[-1 - node[1]]
        elif tag == "A":
            v = A.app_table[self.ev(node[1], env)][self.ev(node[2], env)]
        elif tag == "L":
            meet, imp, body = A.lattice.meet_table, A.imp, node[1]
            v = A.top
            for a in A.elements:
                v = meet[v][imp[a][self.ev(body, env + (a,))]]
        elif tag == "BL":
            meet, imp, bang, body = A.lattice.meet_table, A.imp, A.bang, node[1]
            v = A.top
            for a in A.elements:
                v = meet[v][imp[bang[a]][self.ev(body, env + (a,))]]
        elif tag == "B":
            v = A.bang[self.ev(node[1], env)]
        elif tag == "R":
            v = A.meet(self.ev(node[1], env), A.records[node[2]][self.ev(node[3], env)])
        elif tag == "S":
            v = A.extract(node[2], self.ev(node[1], env))
        else:
            raise TypeError(node)
        self.memo[key] = v
        return v


def interpret(
    t: T.Term,
    A: ImpStructure,
    env: Mapping[str, int | str] | None = None,
    cap: int = DEFAULT_DEPTH_CAP,
) -> int:
    """The value of t in A, free variables read from env (element ids or names)."""
    resolved = {k: A.lattice.id(v) for k, v in (env or {}).items()}
    with T._deep_recursion():
        comp = _Compiled(A, resolved, cap)
        root = comp.compile(T.to_db(t, hints=False))
        return comp.ev(root, ())


def _context_env(ctx: Sequence[tuple[str, int]] | Mapping[str, int]) -> dict[str, int]:
    items = ctx.items() if isinstance(ctx, Mapping) else ctx
    out: dict[str, int] = {}
    for name, val in items:
        key = name[1:] if name.startswith("!") else name
        if key in out:
            raise InterpretError(f"variable {key!r} declared twice in context")
        out[key] = val
    return out


def check_typing(ctx, t: T.Term, a: int, A: ImpStructure, cap: int = DEFAULT_DEPTH_CAP) -> bool:
    """Gamma |- t : a  iff  fv(t) within dom(Gamma) and (t[Gamma]) <= a.

    `!x : !a` entries are written ("!x", a) and bind x to a.
    """
    env = _context_env(ctx)
    if not T.free_variables(t) <= set(env):
        return False
    return A.le(interpret(t, A, env, cap), a)


# closed forms of the combinators as meets over the structure
def _closed_forms(A: ImpStructure) -> dict[str, callable]:
    els = A.elements
    imp = A.imp
    r = A.arrow
    b = A.bang_of
    meet = A.meet_all

    mt = A.lattice.meet_table

    def comp():
        # (y -o z) -o (x -o y) -o x -o z
        acc = A.top
        for ix in imp:
            for y in els:
                row = imp[ix[y]]
                iy = imp[y]
                for z in els:
                    acc = mt[acc][imp[iy[z]][row[ix[z]]]]
        return acc

    def swap():
        # (x -o y -o z) -o y -o x -o z
        acc = A.top
        for ix in imp:
            for y in els:
                iy = imp[y]
                for z in els:
                    acc = mt[acc][imp[ix[iy[z]]][iy[ix[z]]]]
        return acc

    def share():
        # (x -o y -o z) -o (x -o y) -o x -o z
        acc = A.top
        for ix in imp:
            for y in els:
                iy = imp[y]
                row = imp[ix[y]]
                for z in els:
                    acc = mt[acc][imp[ix[iy[z]]][row[ix[z]]]]
        return acc

    return {
        "I": lambda: meet(imp[a][a] for a in els),
        "B": comp,
        "C": swap,
        "K": lambda: meet(r(x, y, x) for x, y in product(els, repeat=2)),
        "W": lambda: meet(r(r(x, x, y), x, y) for x, y in product(els, repeat=2)),
        "S": share,
        "K!": lambda: meet(r(x, b(y), x) for x, y in product(els, repeat=2)),
        "W!": lambda: meet(r(r(b(x), b(x), y), b(x), y) for x, y in product(els, repeat=2)),
        "F": lambda: meet(r(b(r(x, y)), b(x), b(y)) for x, y in product(els, repeat=2)),
        "D": lambda: meet(r(b(x), x) for x in els),
        "delta": lambda: meet(r(b(x), b(b(x))) for x in els),
    }


def closed_form_value(name: str, A: ImpStructure) -> int:
    forms = _closed_forms(A)
    if name not in forms:
        raise StructureError(f"no closed form for {name!r}")
    return forms[name]()


INTUITIONISTIC_NAMES = ("I", "B", "C", "K", "W", "S")
EXPONENTIAL_NAMES = ("K!", "W!", "F", "D", "delta")


def combinator_value(name: str, A: ImpStructure) -> tuple[int, int, bool]:
    """(interpreted value, closed-form meet, whether they agree)."""
    from .combinators import base_term

    forms = _closed_forms(A)
    if name not in forms:
        raise StructureError(f"no closed form for {name!r}")
    value = interpret(base_term(name), A)
    closed = forms[name]()
    return value, closed, value == closed


def combinator_value_check(A: ImpStructure) -> Report:
    rep = Report(f"combinator values {A.name}".strip())
    names = INTUITIONISTIC_NAMES + (EXPONENTIAL_NAMES if A.bang is not None else ())
    for name in names:
        value, closed, ok = combinator_value(name, A)
        rep.add(name, ok, (A.lattice.names[value], A.lattice.names[closed]))
    if A.bang is None:
        rep.skip("exponential", "no ! table")
    return rep


# ---------------------------------------------------------------------------
# Random checks of the semantic typing rules


def _pick_above(A: ImpStructure, v: int, rng: random.Random) -> int:
    return rng.choice(A.lattice.upset(v))


def _pick_below(A: ImpStructure, v: int, rng: random.Random) -> int:
    return rng.choice(A.lattice.downset(v))


def _judgement(A: ImpStructure, rng: random.Random, names: list[str], size: int = 10):
    """A random linear term over `names`, a random context, and a type above its value."""
    from .generators import random_linear_term

    t = random_linear_term(rng, size, free=names)
    env = {x: rng.choice(A.elements) for x in names}
    return t, env, _pick_above(A, interpret(t, A, env), rng)


def typing_rule_suite(A: ImpStructure, seed: int = 0, samples: int = 30) -> Report:
    """Premises-imply-conclusion for each semantic rule on random instances."""
    rng = random.Random(seed)
    rep = Report(f"typing rules {A.name}".strip())
    els = list(A.elements)
    le = A.le
    V, App_, Lam_, lams, app = T.Var, T.App, T.Lam, T.lams, T.app

    def holds(ctx: dict, t: T.Term, a: int) -> bool:
        return check_typing(ctx, t, a, A)

    def run(rule: str, body) -> None:
        for _ in range(samples):
            witness = body()
            if witness is not None:
                rep.add(rule, False, witness)
                return
        rep.add(rule, True)

    run("axiom", lambda: next((a for a in els if not holds({"x": a}, V("x"), a)), None))
    run("parameter", lambda: next((a for a in els if not holds({}, T.Param(a), a)), None))

    def subsumption():
        t, env, a = _judgement(A, rng, ["x", "y"])
        a2 = _pick_above(A, a, rng)
        return None if holds(env, t, a2) else (T.show(t), env, a2)

    def context_subsumption():
        t, env, a = _judgement(A, rng, ["x", "y"])
        env2 = {k: _pick_below(A, v, rng) for k, v in env.items()}
        return None if holds(env2, t, a) else (T.show(t), env2, a)

    def lolli_r():
        t, env, b = _judgement(A, rng, ["g", "x"])
        a = env.pop("x")
        return None if holds(env, Lam_("x", t), A.imp[a][b]) else (T.show(t), a, b)

    def cut():
        t, g_env, a = _judgement(A, rng, ["g"])
        u, d_env, _ = _judgement(A, rng, ["d", "x"])
        d_env["x"] = a
        b = _pick_above(A, interpret(u, A, d_env), rng)
        del d_env["x"]
        return None if holds({**g_env, **d_env}, App_(Lam_("x", u), t), b) else (T.show(t), T.show(u))

    def lolli_l():
        t, g_env, a = _judgement(A, rng, ["g"])
        b = rng.choice(els)
        u, d_env, _ = _judgement(A, rng, ["d", "x"])
        d_env["x"] = b
        c = _pick_above(A, interpret(u, A, d_env), rng)
        del d_env["x"]
        ctx = {**g_env, **d_env, "y": A.imp[a][b]}
        return None if holds(ctx, App_(Lam_("x", u), App_(V("y"), t)), c) else (T.show(t), T.show(u))

    def generalization():
        t, env, _ = _judgement(A, rng, ["x", "y"])
        v = interpret(t, A, env)
        bounds = [_pick_above(A, v, rng) for _ in range(rng.randint(0, 3))]
        return None if holds(env, t, A.meet_all(bounds)) else (T.show(t), bounds)

    def tensor_r():
        t, g_env, a = _judgement(A, rng, ["g"])
        u, d_env, b = _judgement(A, rng, ["d"])
        term = Lam_("z", app(V("z"), t, u))
        return None if holds({**g_env, **d_env}, term, A.tensor(a, b)) else (T.show(t), T.show(u))

    def tensor_l():
        t, env, c = _judgement(A, rng, ["g", "x", "y"])
        a, b = env.pop("x"), env.pop("y")
        env["z"] = A.tensor(a, b)
        term = App_(V("z"), lams("x y", t))
        return None if holds(env, term, c) else (T.show(t), a, b)

    for rule, fn in [
        ("subsumption", subsumption),
        ("context-subsumption", context_subsumption),
        ("lolli-R", lolli_r),
        ("cut", cut),
        ("lolli-L", lolli_l),
        ("generalization", generalization),
        ("tensor-R", tensor_r),
        ("tensor-L", tensor_l),
    ]:
        run(rule, fn)

    if A.bang is None:
        rep.skip("bang-rules", "no ! table")
    else:
        _bang_rules(A, rng, samples, rep, run)
    if not A.records:
        rep.skip("record-rules", "no record tables")
    else:
        for label in sorted(A.records):
            _record_rules(A, rng, label, run)
    return rep


def _bang_rules(A: ImpStructure, rng: random.Random, samples: int, rep: Report, run) -> None:
    from .combinators import base_term

    V, App_, B = T.Var, T.App, T.Bang
    els = list(A.elements)
    bang = A.bang
    K, W, D, F, delta = (base_term(n) for n in ("K!", "W!", "D", "F", "delta"))

    def holds(ctx, t, a):
        return check_typing(ctx, t, a, A)

    def lolli_r_bang():
        # Gamma, !x:!a |- t : c  =>  Gamma |- \!x.t : !a -o c
        t, env, c = _judgement(A, rng, ["g", "x"])
        a = env.pop("x")
        return None if holds(env, T.BangLam("x", t), A.imp[bang[a]][c]) else (T.show(t), a, c)

    def weaken_redex():
        t, env, c = _judgement(A, rng, ["g"])
        env["!x"] = rng.choice(els)
        return None if holds(env, App_(T.BangLam("x", t), B(V("x"))), c) else T.show(t)

    def weaken_comb():
        t, env, c = _judgement(A, rng, ["g"])
        env["!x"] = rng.choice(els)
        return None if holds(env, T.app(K, t, B(V("x"))), c) else T.show(t)

    def contract(comb: bool):
        def body():
            # t uses x and y only under ! so they can be shared
            core, env, _ = _judgement(A, rng, ["g", "p", "q"])
            t = T.substitute(T.substitute(core, "p", B(V("x"))), "q", B(V("y")))
            a = rng.choice(els)
            env.pop("p"), env.pop("q")
            env_xy = {**env, "x": a, "y": a}
            c = _pick_above(A, interpret(t, A, env_xy), rng)
            if comb:
                term = T.app(W, T.lams("!x !y", t), B(V("z")))
            else:
                term = T.substitute(T.substitute(t, "x", V("z")), "y", V("z"))
            return None if holds({**env, "!z": a}, term, c) else T.show(t)
        return body

    def dereliction(comb: bool):
        def body():
            t, env, c = _judgement(A, rng, ["g", "x"])
            a = env.pop("x")
            if comb:
                term = App_(T.Lam("x", t), App_(D, B(V("x"))))
                ctx = {**env, "!x": a}
                return None if holds(ctx, term, c) else T.show(t)
            return None if holds({**env, "!x": a}, t, c) else T.show(t)
        return body

    def promotion():
        core, env, _ = _judgement(A, rng, ["p", "q"])
        t = T.substitute(T.substitute(core, "p", B(V("x"))), "q", B(V("y")))
        env = {"!x": env["p"], "!y": env["q"]}
        a = _pick_above(A, interpret(t, A, _context_env(env)), rng)
        return None if holds(env, B(t), bang[a]) else T.show(t)

    def promotion_template(dig: bool):
        def body():
            core, env, _ = _judgement(A, rng, ["p", "q"])
            t = T.substitute(T.substitute(core, "p", B(V("x"))), "q", B(V("y")))
            ctx = {"!x": env["p"], "!y": env["q"]}
            a = _pick_above(A, interpret(t, A, _context_env(ctx)), rng)
            args = [B(V(v)) for v in ("x", "y")]
            if dig:
                args = [App_(delta, arg) for arg in args]
            term = B(T.lams("!x !y", t))
            for arg in args:
                term = T.app(F, term, arg)
            return None if holds(ctx, term, bang[a]) else (T.show(t), ctx, a)
        return body

    run("bang.lolli-R", lolli_r_bang)
    run("bang.weakening-redex", weaken_redex)
    run("bang.weakening-K", weaken_comb)
    run("bang.contraction-subst", contract(False))
    run("bang.contraction-W", contract(True))
    run("bang.dereliction-subst", dereliction(False))
    run("bang.dereliction-D", dereliction(True))
    run("bang.promotion", promotion)
    run("bang.promotion-F-delta", promotion_template(True))
    # Literal F template without digging; sound only when !a <= !!a.
    idempotent = all(A.le(bang[a], bang[bang[a]]) for a in els)
    before = len(rep.checks)
    run("bang.promotion-F-literal", promotion_template(False))
    if not idempotent:
        rep.checks[before].detail = (rep.checks[before].detail + " (!a <= !!a fails here)").strip()


def _record_rules(A: ImpStructure, rng: random.Random, label: str, run) -> None:
    rec = A.record(label)

    def holds(ctx, t, a):
        return check_typing(ctx, t, a, A)

    def intro():
        t, env, a = _judgement(A, rng, ["g"])
        return None if holds(env, T.RecordExt(T.EmptyRecord(), label, t), rec[a]) else T.show(t)

    def elim():
        # side condition instantiated with alpha = l(a)
        a = rng.choice(list(A.elements))
        t, env, _ = _judgement(A, rng, ["g"])
        if not A.le(interpret(t, A, env), rec[a]):
            return None
        return None if holds(env, T.Select(t, label), a) else T.show(t)

    run(f"record.{label}.intro", intro)
    run(f"record.{label}.elim", elim)


# ---------------------------------------------------------------------------
# Monotony and reduction soundness


def monotony_check(A: ImpStructure, seed: int = 0, samples: int = 40) -> Report:
    from .generators import random_bang_term, random_linear_term

    rng = random.Random(seed)
    rep = Report(f"monotony {A.name}".strip())
    L = A.lattice
    pairs = [(a, b) for a in A.elements for b in A.elements if L.leq[a][b]]

    def check(make_term, label):
        for _ in range(samples):
            t = make_term()
            (a1, a2), (b1, b2) = rng.choice(pairs), rng.choice(pairs)
            try:
                lo = interpret(t, A, {"x": a1, "y": b1})
                hi = interpret(t, A, {"x": a2, "y": b2})
            except DepthLimitExceeded:
                continue
            if not L.leq[lo][hi]:
                rep.add(label, False, (T.show(t), (a1, a2), (b1, b2)))
                return
        rep.add(label, True)

    check(lambda: random_linear_term(rng, 16, free=["x", "y"]), "linear")
    if A.bang is not None:
        check(lambda: T.app(random_bang_term(rng, 12), T.Var("x"), T.Bang(T.Var("y"))), "bang")
    return rep


def reduction_soundness_check(A: ImpStructure, seed: int = 0, samples: int = 40, fuel: int = 200) -> Report:
    """Each reduction step weakly increases the interpretation."""
    from .generators import random_bang_term, random_linear_term

    rng = random.Random(seed)
    rep = Report(f"reduction soundness {A.name}".strip())

    def check(make_term, label):
        for _ in range(samples):
            t = make_term()
            try:
                prev = interpret(t, A)
            except DepthLimitExceeded:
                continue
            for _ in range(fuel):
                nxt = T.reduce_step(t)
                if nxt is T.NormalForm:
                    break
                try:
                    cur = interpret(nxt, A)
                except DepthLimitExceeded:
                    break
                if not A.le(prev, cur):
                    rep.add(label, False, (T.show(t), T.show(nxt)))
                    return
                t, prev = nxt, cur
        rep.add(label, True)

    def params(t):
        return T.app(t, T.Param(rng.choice(A.elements)), T.Param(rng.choice(A.elements)))

    check(lambda: params(random_linear_term(rng, 18)), "beta")
    if A.bang is not None:
        check(lambda: T.app(random_bang_term(rng, 14), T.Param(rng.choice(A.elements)),
                            T.Bang(T.Param(rng.choice(A.elements)))), "beta-bang")
    return rep
