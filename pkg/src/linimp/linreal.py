"""Finite linear realisability situations and their lattice of types.

Projects are pairs (alpha, p) of a group element of Z/k and a program; a
set of projects is an int bitmask over `alpha * |P| + p`.

Situation files:

    theta: Z/2
    pole: 1
    programs: e g
    ex: e g -> g
    m: g g -> 1
    id: e
    tau: e

Missing `m` entries default to 0.  `#` starts a comment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .report import Report
from .separators import Separator, generator_values, verify
from .structures import FinLattice, ImpStructure, verify_implicative
from .syntax import ParseError

DEFAULT_PROJECT_CAP = 16


class SituationError(ValueError):
    pass


class CapExceeded(SituationError):
    pass


class HypothesisError(SituationError):
    def __init__(self, report: Report):
        failed = ", ".join(c.name for c in report.failures())
        super().__init__(f"situation hypotheses fail: {failed}")
        self.report = report


@dataclass
class Situation:
    programs: list[str]
    ex: list[list[int]]
    m: list[list[int]]
    k: int = 2
    pole: frozenset[int] = frozenset({1})
    id: int | None = None
    tau: int | None = None
    name: str = ""

    def __post_init__(self):
        n = len(self.programs)
        if self.k < 1:
            raise SituationError("theta needs k >= 1")
        for tbl, what, bound in ((self.ex, "ex", n), (self.m, "m", self.k)):
            if len(tbl) != n or any(len(r) != n for r in tbl):
                raise SituationError(f"{what} table has the wrong shape")
            if any(not 0 <= v < bound for r in tbl for v in r):
                raise SituationError(f"{what} table has an out-of-range entry")
        self.pole = frozenset(int(x) % self.k for x in self.pole)
        for d in (self.id, self.tau):
            if d is not None and not 0 <= d < n:
                raise SituationError("distinguished program out of range")

    @property
    def n_programs(self) -> int:
        return len(self.programs)

    @property
    def n_projects(self) -> int:
        return self.k * self.n_programs

    @property
    def full(self) -> int:
        return (1 << self.n_projects) - 1

    # projects ------------------------------------------------------------

    def project(self, alpha: int, prog: int | str) -> int:
        p = self.programs.index(prog) if isinstance(prog, str) else prog
        return (alpha % self.k) * self.n_programs + p

    def unpack(self, x: int) -> tuple[int, int]:
        return divmod(x, self.n_programs)

    def show_project(self, x: int) -> str:
        alpha, p = self.unpack(x)
        return f"{alpha}.{self.programs[p]}"

    def show_set(self, X: int) -> str:
        return "{" + ", ".join(self.show_project(x) for x in members(X)) + "}"

    def ex_proj(self, x: tuple[int, int] | int, y: tuple[int, int] | int) -> tuple[int, int]:
        (a, p), (b, q) = (self.unpack(z) if isinstance(z, int) else z for z in (x, y))
        return ((a + b + self.m[p][q]) % self.k, self.ex[p][q])

    def meas_proj(self, x: tuple[int, int] | int, y: tuple[int, int] | int) -> int:
        (a, p), (b, q) = (self.unpack(z) if isinstance(z, int) else z for z in (x, y))
        return (a + b + self.m[p][q]) % self.k

    @cached_property
    def ex_index(self) -> list[list[int]]:
        N = range(self.n_projects)
        return [[self.project(*self.ex_proj(x, y)) for y in N] for x in N]

    @cached_property
    def _perp(self) -> list[int]:
        """perp[x] = mask of projects orthogonal to x."""
        out = []
        for x in range(self.n_projects):
            mask = 0
            for y in range(self.n_projects):
                if self.meas_proj(x, y) in self.pole:
                    mask |= 1 << y
            out.append(mask)
        return out

    # orthogonality ----------------------------------------------------------

    def orthogonal(self, X: int) -> int:
        out = self.full
        for x in members(X):
            out &= self._perp[x]
        return out

    @cached_property
    def _closures(self) -> dict[int, int]:
        return {}

    def closure(self, X: int) -> int:
        out = self._closures.get(X)
        if out is None:
            out = self._closures[X] = self.orthogonal(self.orthogonal(X))
        return out

    def is_type(self, X: int) -> bool:
        return self.closure(X) == X

    @cached_property
    def _images(self) -> list[dict[int, int]]:
        return [{} for _ in range(self.n_projects)]

    def image(self, x: int, B: int) -> int:
        """{Ex(x, b) : b in B} as a mask."""
        cache = self._images[x]
        out = cache.get(B)
        if out is None:
            row = self.ex_index[x]
            out = 0
            for b in members(B):
                out |= 1 << row[b]
            cache[B] = out
        return out

    def lolli(self, A: int, B: int) -> int:
        out = 0
        for x in range(self.n_projects):
            if self.image(x, A) & ~B == 0:
                out |= 1 << x
        return out

    def exec_set(self, A: int, B: int) -> int:
        """Raw pointwise executions {Ex(a, b)}."""
        out = 0
        for a in members(A):
            out |= self.image(a, B)
        return out

    def tensor(self, A: int, B: int) -> int:
        return self.closure(self.exec_set(A, B))


def members(X: int) -> list[int]:
    out = []
    while X:
        low = X & -X
        out.append(low.bit_length() - 1)
        X ^= low
    return out


def mask(xs: Iterable[int]) -> int:
    out = 0
    for x in xs:
        out |= 1 << x
    return out


# ---------------------------------------------------------------------------
# Checks


def verify_situation(S: Situation) -> Report:
    rep = Report(f"situation {S.name}")
    P = range(S.n_programs)
    ex, m, k, nm = S.ex, S.m, S.k, S.programs
    assoc = next(((nm[p], nm[q], nm[r]) for p in P for q in P for r in P
                  if ex[ex[p][q]][r] != ex[p][ex[q][r]]), None)
    rep.add("ex-associative", assoc is None, assoc)
    tref = next(((nm[p], nm[q], nm[r]) for p in P for q in P for r in P
                 if (m[ex[p][q]][r] + m[p][q]) % k != (m[p][ex[q][r]] + m[q][r]) % k), None)
    rep.add("trefoil", tref is None, tref)
    sym = next(((nm[p], nm[q]) for p in P for q in P if m[p][q] != m[q][p]), None)
    rep.add("m-symmetric", sym is None, sym)
    if S.id is None:
        rep.skip("id-unit", "no id declared")
        rep.skip("id-measure-zero", "no id declared")
    else:
        i = S.id
        rep.add("id-unit", all(ex[i][p] == p for p in P), next((nm[p] for p in P if ex[i][p] != p), None))
        rep.add("id-measure-zero", all(m[i][p] == 0 for p in P), next((nm[p] for p in P if m[i][p]), None))
    if S.tau is None:
        for name in ("tau-measure-zero", "tau-swap-outer", "tau-swap-inner"):
            rep.skip(name, "no tau declared")
    else:
        t = S.tau
        rep.add("tau-measure-zero", all(m[t][p] == 0 for p in P), next((nm[p] for p in P if m[t][p]), None))
        outer = next(((nm[p], nm[q]) for p in P for q in P if ex[t][ex[p][q]] != ex[q][p]), None)
        rep.add("tau-swap-outer", outer is None, outer, detail="Ex(tau, Ex(p,q)) = Ex(q,p)")
        inner = next(((nm[p], nm[q]) for p in P for q in P if ex[ex[t][p]][q] != ex[q][p]), None)
        rep.add("tau-swap-inner", inner is None, inner, detail="Ex(Ex(tau,p), q) = Ex(q,p)")
    return rep


def jacobi_check(S: Situation) -> Report:
    rep = Report(f"jacobi {S.name}")
    N = range(S.n_projects)
    bad = next(((S.show_project(x), S.show_project(y), S.show_project(z)) for x in N for y in N for z in N
                if S.meas_proj(S.ex_index[x][y], z) != S.meas_proj(x, S.ex_index[y][z])), None)
    rep.add("jacobi", bad is None, bad, detail=f"{S.n_projects ** 3} triples")
    return rep


def closure_check(S: Situation, cap: int = 12) -> Report:
    """Antitone orthogonal, extensive idempotent monotone closure, triple orthogonal."""
    rep = Report(f"orthogonality {S.name}")
    if S.n_projects > cap:
        rep.skip("exhaustive", f"{S.n_projects} projects exceeds cap {cap}")
        return rep
    subsets = range(1 << S.n_projects)
    orth = [S.orthogonal(X) for X in subsets]
    clo = [orth[orth[X]] for X in subsets]
    rep.add("extensive", all(X & clo[X] == X for X in subsets))
    rep.add("idempotent", all(clo[clo[X]] == clo[X] for X in subsets))
    rep.add("triple-orthogonal", all(orth[clo[X]] == orth[X] for X in subsets))
    # Antitone and monotone over single-element extensions suffices.
    n = S.n_projects
    rep.add("orthogonal-antitone", all(orth[X | 1 << i] & orth[X] == orth[X | 1 << i] for X in subsets for i in range(n)))
    rep.add("closure-monotone", all(clo[X] & clo[X | 1 << i] == clo[X] for X in subsets for i in range(n)))
    return rep


def enumerate_types(S: Situation, cap: int = DEFAULT_PROJECT_CAP) -> list[int]:
    """All X^perp, sorted by size then mask."""
    n = S.n_projects
    if n > cap:
        raise CapExceeded(f"{n} projects exceeds the enumeration cap {cap}")
    orth = [S.full] * (1 << n)
    perp = S._perp
    for X in range(1, 1 << n):
        low = (X & -X).bit_length() - 1
        orth[X] = orth[X & (X - 1)] & perp[low]
    return sorted(set(orth), key=lambda X: (bin(X).count("1"), X))


def type_lattice(S: Situation, types: Sequence[int]) -> FinLattice:
    names = [S.show_set(X) for X in types]
    leq = [[A & B == A for B in types] for A in types]
    return FinLattice(names, leq)


def type_report(S: Situation, types: Sequence[int]) -> Report:
    rep = Report(f"types {S.name}")
    ts = set(types)
    rep.add("full-is-type", S.full in ts)
    rep.add("closure-of-empty", S.closure(0) in ts, detail=S.show_set(S.closure(0)))
    inter = next(((S.show_set(A), S.show_set(B)) for A in types for B in types if A & B not in ts), None)
    rep.add("closed-under-intersection", inter is None, inter)
    union = next(((S.show_set(A), S.show_set(B)) for A in types for B in types if S.closure(A | B) not in ts), None)
    rep.add("join-is-closed-union", union is None, union)
    lolli = {(A, B): S.lolli(A, B) for A in types for B in types}
    lol = next(((S.show_set(A), S.show_set(B)) for (A, B), X in lolli.items() if X not in ts), None)
    rep.add("lolli-is-type", lol is None, lol)
    ident = next(((S.show_set(A), S.show_set(B)) for (A, B), X in lolli.items()
                  if X != S.orthogonal(S.tensor(A, S.orthogonal(B)))), None)
    rep.add("lolli-tensor-duality", ident is None, ident)
    if S.tau is not None:
        t = S.project(0, S.tau)
        tensor = {(A, B): S.tensor(A, B) for A in types for B in types}
        swap = next(((S.show_set(A), S.show_set(B)) for (A, B), X in tensor.items()
                     if S.image(t, X) & ~tensor[B, A]), None)
        rep.add("tau-swaps-tensor", swap is None, swap)
    return rep


# ---------------------------------------------------------------------------
# Bridge to implicative structures


@dataclass
class Bridge:
    situation: Situation
    types: list[int]
    structure: ImpStructure
    separator: Separator
    report: Report = field(repr=False)

    def type_of(self, a: int) -> int:
        return self.types[a]


def as_implicative(S: Situation, cap: int = DEFAULT_PROJECT_CAP) -> Bridge:
    """(types, inclusion, lolli) with the non-empty types as separator.

    Refused unless associativity, trefoil, symmetric m and the id/tau laws hold.
    """
    hyp = verify_situation(S)
    needed = ("ex-associative", "trefoil", "m-symmetric", "id-unit", "id-measure-zero", "tau-measure-zero")
    broken = [c for c in hyp.checks if c.name in needed and c.status != "pass"]
    tau_ok = any(hyp.get(n) is not None and hyp.get(n).status == "pass" for n in ("tau-swap-outer", "tau-swap-inner"))
    if broken or not tau_ok:
        raise HypothesisError(hyp)
    types = enumerate_types(S, cap)
    index = {X: i for i, X in enumerate(types)}
    L = type_lattice(S, types)
    imp = [[index[S.lolli(A, B)] for B in types] for A in types]
    A = ImpStructure(L, imp, name=f"types({S.name})")
    carrier = frozenset(i for i, X in enumerate(types) if X)

    rep = Report(f"bridge {S.name}")
    rep.extend(hyp, "hypotheses")
    rep.extend(type_report(S, types), "types")
    rep.extend(verify_implicative(A), "implicative")
    sep = verify(carrier, A, "linear")
    rep.extend(sep, "separator")
    bottom_set = types[A.bottom]
    rep.add("separator-consistent", A.bottom not in carrier, S.show_set(bottom_set),
            detail="bottom type is empty" if not bottom_set else "bottom type is non-empty")

    values = {name: types[v] for name, v in generator_values(A, "linear").items()}
    pid = S.project(0, S.id)
    t = S.project(0, S.tau)
    tt = S.project(*S.ex_proj(t, t))
    rep.add("id-project-in-I", values["I"] >> pid & 1, S.show_set(values["I"]))
    rep.add("id-project-in-B", values["B"] >> pid & 1, S.show_set(values["B"]))
    rep.add("doubled-tau-in-C", values["C"] >> tt & 1, (S.show_project(tt), S.show_set(values["C"])))

    gap_closed = next(((S.show_set(X), S.show_set(Y)) for i, X in enumerate(types) for j, Y in enumerate(types)
                       if types[A.app(i, j)] != S.closure(S.exec_set(X, Y))), None)
    rep.add("application-agrees-with-closure", gap_closed is None, gap_closed)
    raw = sum(1 for i, X in enumerate(types) for j, Y in enumerate(types) if types[A.app(i, j)] != S.exec_set(X, Y))
    rep.note("application-raw-gap", f"{raw} of {len(types) ** 2} pairs where the raw execution set is not closed")
    return Bridge(S, types, A, Separator(carrier, "linear", sep), rep)


# ---------------------------------------------------------------------------
# Constructions


_GROUPS = {
    "Z2": ([(0,), (1,)], lambda x, y: ((x[0] + y[0]) % 2,)),
    "Z3": ([(0,), (1,), (2,)], lambda x, y: ((x[0] + y[0]) % 3,)),
    "Z2xZ2": ([(a, b) for a in range(2) for b in range(2)], lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)),
}


def _is_cocycle(ex: list[list[int]], m: list[list[int]], k: int) -> bool:
    N = range(len(ex))
    return all((m[ex[p][q]][r] + m[p][q]) % k == (m[p][ex[q][r]] + m[q][r]) % k for p in N for q in N for r in N)


def _automorphisms(ex: list[list[int]]) -> list[tuple[int, ...]]:
    N = range(len(ex))
    return [pi for pi in itertools.permutations(N)
            if all(pi[ex[p][q]] == ex[pi[p]][pi[q]] for p in N for q in N)]


def _is_hom(ex: list[list[int]], phi: Sequence[int], k: int) -> bool:
    N = range(len(ex))
    return all(phi[ex[p][q]] % k == (phi[p] + phi[q]) % k for p in N for q in N)


def product_cocycles(group: str, k: int) -> list[list[int]]:
    """Homomorphisms phi into Z/k whose product form m is non-zero, one per m up to
    relabelling the group by an automorphism (isomorphic situations have isomorphic types)."""
    elements, op = _GROUPS[group]
    n = len(elements)
    ex = [[elements.index(op(g, h)) for h in elements] for g in elements]
    autos = _automorphisms(ex)
    zero = elements.index(tuple(0 for _ in elements[0]))
    seen, out = set(), []
    for rest in itertools.product(range(k), repeat=n - 1):
        phi = list(rest[:zero]) + [0] + list(rest[zero:])
        m = [[phi[i] * phi[j] % k for j in range(n)] for i in range(n)]
        if not any(map(any, m)) or not _is_hom(ex, phi, k):
            continue
        orbit = {tuple(tuple(m[pi[i]][pi[j]] for j in range(n)) for i in range(n)) for pi in autos}
        if seen.isdisjoint(orbit):
            seen |= orbit
            out.append(phi)
    return out


def _group_name(g: tuple[int, ...]) -> str:
    return "".join(str(c) for c in g)


def cocycle_situation(group: str, phi: Sequence[int] | None = None, pole: Iterable[int] = (1,), k: int = 2) -> Situation:
    """Programs = group elements, ex = group law, m(p, q) = phi(p) * phi(q) in Z/k.

    phi defaults to the first coordinate and must be a group homomorphism into Z/k;
    the trefoil law is then re-checked on the built table.
    """
    if group not in _GROUPS:
        raise SituationError(f"unknown group {group!r}; choose from {sorted(_GROUPS)}")
    elements, op = _GROUPS[group]
    n = len(elements)
    phi = list(phi) if phi is not None else [g[0] % k for g in elements]
    if len(phi) != n:
        raise SituationError("phi needs one value per group element")
    ex = [[elements.index(op(g, h)) for h in elements] for g in elements]
    if not _is_hom(ex, phi, k):
        raise SituationError(f"phi={phi} is not a homomorphism into Z/{k}")
    m = [[(phi[i] * phi[j]) % k for j in range(n)] for i in range(n)]
    if not _is_cocycle(ex, m, k):
        raise SituationError(f"phi={phi} does not give a 2-cocycle in Z/{k}")
    zero = elements.index(tuple(0 for _ in elements[0]))
    pole = frozenset(pole)
    return Situation([_group_name(g) for g in elements], ex, m, k, pole, zero, zero,
                     name=f"{group}-cocycle-k{k}-pole{''.join(map(str, sorted(pole))) or 'none'}")


def trivial_situation(group: str = "Z2", pole: Iterable[int] = (1,), k: int = 2) -> Situation:
    S = cocycle_situation(group, [0] * len(_GROUPS[group][0]), pole, k)
    S.name = S.name.replace("cocycle", "trivial")
    return S


# ---------------------------------------------------------------------------
# Files


def parse_situation(text: str, name: str = "") -> Situation:
    k = None
    pole: list[int] = []
    programs: list[str] | None = None
    ex_lines, m_lines = [], []
    ident = {"id": None, "tau": None}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if not sep:
            raise ParseError("expected 'key: value'", lineno, 1)
        if key == "theta":
            if not rest.startswith("Z/") or not rest[2:].isdigit():
                raise ParseError("theta must be Z/k", lineno, 1)
            k = int(rest[2:])
        elif key == "pole":
            try:
                pole = [int(x) for x in rest.split()]
            except ValueError:
                raise ParseError("pole lists integers", lineno, 1) from None
        elif key == "programs":
            programs = rest.split()
        elif key in ("ex", "m"):
            lhs, arrow, out = rest.partition("->")
            args = lhs.split()
            if not arrow or len(args) != 2 or len(out.split()) != 1:
                raise ParseError(f"expected '{key}: p q -> r'", lineno, 1)
            (ex_lines if key == "ex" else m_lines).append((args[0], args[1], out.strip(), lineno))
        elif key in ident:
            ident[key] = (rest, lineno)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    if k is None or programs is None:
        raise ParseError("need 'theta:' and 'programs:' lines", 1, 1)
    index = {p: i for i, p in enumerate(programs)}

    def look(p, ln):
        if p not in index:
            raise ParseError(f"unknown program {p!r}", ln, 1)
        return index[p]

    n = len(programs)
    ex = [[None] * n for _ in range(n)]
    for p, q, r, ln in ex_lines:
        ex[look(p, ln)][look(q, ln)] = look(r, ln)
    missing = [(programs[i], programs[j]) for i in range(n) for j in range(n) if ex[i][j] is None]
    if missing:
        raise ParseError(f"ex table misses {missing[0]}", 1, 1)
    m = [[0] * n for _ in range(n)]
    for p, q, v, ln in m_lines:
        if not v.isdigit():
            raise ParseError("m values are integers", ln, 1)
        m[look(p, ln)][look(q, ln)] = int(v) % k
    ids = {key: (look(*val) if val else None) for key, val in ident.items()}
    return Situation(programs, ex, m, k, frozenset(pole), ids["id"], ids["tau"], name=name)


def print_situation(S: Situation) -> str:
    nm = S.programs
    lines = [f"theta: Z/{S.k}", f"pole: {' '.join(map(str, sorted(S.pole)))}".rstrip(), f"programs: {' '.join(nm)}"]
    P = range(S.n_programs)
    lines += [f"ex: {nm[p]} {nm[q]} -> {nm[S.ex[p][q]]}" for p in P for q in P]
    lines += [f"m: {nm[p]} {nm[q]} -> {S.m[p][q]}" for p in P for q in P if S.m[p][q]]
    if S.id is not None:
        lines.append(f"id: {nm[S.id]}")
    if S.tau is not None:
        lines.append(f"tau: {nm[S.tau]}")
    return "\n".join(lines) + "\n"


def load_situation(path) -> Situation:
    from .formats import resolve_path

    p = resolve_path(path)
    return parse_situation(p.read_text(), p.stem)


def battery(cap: int = DEFAULT_PROJECT_CAP) -> list[Situation]:
    """Every non-zero product cocycle and the zero one, over Z2, Z3, Z2xZ2, with
    Theta in {Z/2, Z/4} (plus Z3 over Z/3), at every pole."""
    out = []
    for group in _GROUPS:
        for k in (2, 3, 4) if group == "Z3" else (2, 4):
            if k * len(_GROUPS[group][0]) > cap:
                continue
            phis = product_cocycles(group, k)
            for r in range(k + 1):
                for pole in itertools.combinations(range(k), r):
                    for phi in phis:
                        S = cocycle_situation(group, phi, pole, k)
                        S.name += "-phi" + "".join(map(str, phi))
                        out.append(S)
                    out.append(trivial_situation(group, pole, k))
    return out
