"""Combinators, permutation terms, and bracket abstraction.

Linear abstraction follows the classical induction: a variable becomes I,
an application `u v` becomes `T A(k,n) u0 v0` where T is a permutation
prefix grouping the abstracted variables into a `u` block followed by a
`v` block.  Exponential abstraction adds the `!` combinators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from . import terms as T
from .syntax import parse_term

LINEAR_BASES = ("I", "B", "C")
EXPONENTIAL_BASES = ("I", "B", "C", "K!", "W!", "F", "D", "delta")
ALL_BASES = ("I", "B", "C", "K", "W", "S", "K!", "W!", "F", "D", "delta")

_BASE_SOURCE = {
    "I": r"\x.x",
    "B": r"\x y z.x (y z)",
    "C": r"\x y z.x z y",
    "K": r"\x y.x",
    "W": r"\x y.x y y",
    "S": r"\x y z.x z (y z)",
    "K!": r"\x !y.x",
    "W!": r"\x !y.x !y !y",
    "F": r"\!x !y.!(x y)",
    "D": r"\!x.x",
    "delta": r"\!x.!!x",
}


class UnknownCombinator(KeyError):
    pass


class NonLinearInput(ValueError):
    def __init__(self, diagnostics: Sequence[str]):
        super().__init__("; ".join(diagnostics) or "term is not linear")
        self.diagnostics = tuple(diagnostics)


class NonLinearBangInput(NonLinearInput):
    pass


class FamilyIndexError(ValueError):
    """Family index constraint violated."""


def base_term(name: str) -> T.Term:
    try:
        return parse_term(_BASE_SOURCE[name])
    except KeyError:
        raise UnknownCombinator(name) from None


# ---------------------------------------------------------------------------
# Combinatory terms


@dataclass(frozen=True)
class Comb:
    name: str

    def __post_init__(self):
        if self.name not in _BASE_SOURCE:
            raise UnknownCombinator(self.name)

    def __str__(self) -> str:
        return show_comb(self)


@dataclass(frozen=True)
class CVar:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class CApp:
    fun: "CombTerm"
    arg: "CombTerm"

    def __str__(self) -> str:
        return show_comb(self)


@dataclass(frozen=True)
class CBang:
    body: "CombTerm"

    def __str__(self) -> str:
        return show_comb(self)


CombTerm = Union[Comb, CVar, CApp, CBang]

I, B, C = Comb("I"), Comb("B"), Comb("C")


def capp(*parts: CombTerm) -> CombTerm:
    out = parts[0]
    for p in parts[1:]:
        out = CApp(out, p)
    return out


def show_comb(c: CombTerm) -> str:
    if isinstance(c, Comb):
        return "δ" if c.name == "delta" else c.name
    if isinstance(c, CVar):
        return c.name
    if isinstance(c, CBang):
        inner = show_comb(c.body)
        return "!" + (inner if isinstance(c.body, (Comb, CVar, CBang)) else f"({inner})")
    f = show_comb(c.fun)
    a = show_comb(c.arg)
    if isinstance(c.arg, CApp):
        a = f"({a})"
    return f"{f} {a}"


def to_term(c: CombTerm) -> T.Term:
    """Lambda reading: combinator names are replaced by their lambda terms."""
    if isinstance(c, Comb):
        return base_term(c.name)
    if isinstance(c, CVar):
        return T.Var(c.name)
    if isinstance(c, CBang):
        return T.Bang(to_term(c.body))
    return T.App(to_term(c.fun), to_term(c.arg))


def from_term(t: T.Term) -> CombTerm:
    """Read a lambda-free term (variables, application, `!`) as a combinatory term."""
    if isinstance(t, T.Var):
        if t.name in _BASE_SOURCE:
            return Comb(t.name)
        return CVar(t.name)
    if isinstance(t, T.App):
        return CApp(from_term(t.fun), from_term(t.arg))
    if isinstance(t, T.Bang):
        return CBang(from_term(t.body))
    raise ValueError(f"not a combinatory term: {T.show(t)}")


def comb_nodes(c: CombTerm) -> Iterable[CombTerm]:
    stack = [c]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, CApp):
            stack.extend((s.arg, s.fun))
        elif isinstance(s, CBang):
            stack.append(s.body)


def bases_used(c: CombTerm) -> set[str]:
    return {s.name for s in comb_nodes(c) if isinstance(s, Comb)}


def comb_size(c: CombTerm) -> int:
    return sum(1 for _ in comb_nodes(c))


def comb_free_vars(c: CombTerm) -> dict[str, int]:
    counts: dict[str, int] = {}
    for s in comb_nodes(c):
        if isinstance(s, CVar):
            counts[s.name] = counts.get(s.name, 0) + 1
    return counts


def is_linear_combinatory(c: CombTerm) -> bool:
    return all(isinstance(s, (CApp, CVar)) or (isinstance(s, Comb) and s.name in LINEAR_BASES) for s in comb_nodes(c))


def is_exponential_combinatory(c: CombTerm) -> bool:
    return all(not isinstance(s, Comb) or s.name in EXPONENTIAL_BASES for s in comb_nodes(c))


# ---------------------------------------------------------------------------
# Permutations


@dataclass(frozen=True)
class Permutation:
    """Bijection on {1..n} stored by images, trailing fixed points trimmed."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = list(self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation: {self.images}")
        while imgs and imgs[-1] == len(imgs):
            imgs.pop()
        object.__setattr__(self, "images", tuple(imgs))

    @classmethod
    def identity(cls) -> "Permutation":
        return cls(())

    @classmethod
    def from_cycles(cls, *cycles: Sequence[int]) -> "Permutation":
        n = max((max(c) for c in cycles if c), default=0)
        imgs = list(range(1, n + 1))
        for cyc in reversed(cycles):
            # compose right to left: the last cycle acts first
            step = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
            imgs = [step.get(v, v) for v in imgs]
        return cls(tuple(imgs))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1] if 1 <= i <= len(self.images) else i

    def compose(self, other: "Permutation") -> "Permutation":
        """(self ∘ other)(i) = self(other(i))."""
        n = max(self.degree, other.degree)
        return Permutation(tuple(self(other(i)) for i in range(1, n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def adjacent_word(self) -> list[int]:
        """Indices i1..ik with self = s_i1 ∘ ... ∘ s_ik, s_i = (i i+1); bubble sort."""
        arr = list(self.images)
        swaps = []
        for end in range(len(arr) - 1, 0, -1):
            for j in range(end):
                if arr[j] > arr[j + 1]:
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    swaps.append(j + 1)
        return list(reversed(swaps))

    def __str__(self) -> str:
        seen, parts = set(), []
        for i in range(1, self.degree + 1):
            if i in seen or self(i) == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "id"


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def perm_term(sigma: Permutation, n: int | None = None) -> T.Term:
    """λx y1..yn. x y_{σ⁻¹(1)} .. y_{σ⁻¹(n)}; n defaults to the least support."""
    n = sigma.degree if n is None else max(n, sigma.degree)
    inv = sigma.inverse()
    body: T.Term = T.Var("x")
    for j in range(1, n + 1):
        body = T.App(body, T.Var(f"y{inv(j)}"))
    return T.lams(["x"] + [f"y{j}" for j in range(1, n + 1)], body)


@lru_cache(maxsize=None)
def _c_n(n: int) -> CombTerm:
    return C if n == 1 else CApp(B, _c_n(n - 1))


@lru_cache(maxsize=None)
def _b_n(n: int) -> CombTerm:
    return B if n == 1 else CApp(B, _b_n(n - 1))


@lru_cache(maxsize=None)
def _i_n(n: int) -> CombTerm:
    return I if n == 1 else CApp(B, _i_n(n - 1))


def perm_to_comb(sigma: Permutation) -> CombTerm:
    """Closed {I,B,C} word reducing to λ_σ, built from adjacent transpositions."""
    word = sigma.adjacent_word()
    if not word:
        return I
    # λ_{τρ} ⇝ B λ_ρ λ_τ, peeling the leftmost factor τ = s_i1.
    out: CombTerm = _c_n(word[-1])
    for i in reversed(word[:-1]):
        out = capp(B, out, _c_n(i))
    return out


# ---------------------------------------------------------------------------
# Families


@lru_cache(maxsize=None)
def _c_lk(l: int, k: int) -> CombTerm:
    if l == k + 1:
        return I
    if l == k:
        return _c_n(k)
    return capp(B, _c_n(l), _c_lk(l + 1, k))


@lru_cache(maxsize=None)
def _b_kn(k: int, n: int) -> CombTerm:
    if n == k:
        return I
    if n == k + 1:
        return _b_n(k)
    return capp(B, _b_n(k), _b_kn(k, n - 1))


@lru_cache(maxsize=None)
def _a_kn(k: int, n: int) -> CombTerm:
    return CApp(_c_lk(2, k + 1), _b_kn(k + 1, n + 1))


def family(kind: str, *indices: int) -> CombTerm:
    """Named combinator families: I_n, B_n, C_n, C_lk, B_kn, A_kn."""
    if kind in ("I_n", "B_n", "C_n"):
        (n,) = indices
        if n < 1:
            raise FamilyIndexError(f"{kind} needs n >= 1")
        return {"I_n": _i_n, "B_n": _b_n, "C_n": _c_n}[kind](n)
    if kind == "C_lk":
        l, k = indices
        if not 1 <= l <= k:
            raise FamilyIndexError("C_lk needs 1 <= l <= k")
        return _c_lk(l, k)
    if kind == "B_kn":
        k, n = indices
        if not 1 <= k < n:
            raise FamilyIndexError("B_kn needs 1 <= k < n")
        return _b_kn(k, n)
    if kind == "A_kn":
        k, n = indices
        if not 1 <= k < n:
            raise FamilyIndexError("A_kn needs 1 <= k < n")
        return _a_kn(k, n)
    raise FamilyIndexError(f"unknown family {kind}")


def family_target(kind: str, *indices: int) -> T.Term:
    """The lambda term a family member is expected to reduce to."""
    v = T.Var
    if kind == "I_n":
        (n,) = indices
        xs = [f"x{i}" for i in range(1, n + 1)]
        return T.lams(xs, T.app(*map(v, xs)))
    if kind in ("B_n", "C_n"):
        (n,) = indices
        xs = [f"x{i}" for i in range(1, n + 1)]
        head = T.app(*map(v, xs))
        body = T.App(head, T.App(v("y"), v("z"))) if kind == "B_n" else T.app(head, v("z"), v("y"))
        return T.lams(xs + ["y", "z"], body)
    if kind == "C_lk":
        l, k = indices
        return perm_term(Permutation.from_cycles(list(range(k + 1, l - 1, -1))))
    if kind == "B_kn":
        k, n = indices
        ys = [f"y{i}" for i in range(1, n + 1)]
        grouped = T.app(*map(v, ys[k - 1 :]))
        return T.lams(["x"] + ys, T.App(T.app(v("x"), *map(v, ys[: k - 1])), grouped))
    if kind == "A_kn":
        k, n = indices
        zs = [f"z{i}" for i in range(1, n + 1)]
        inner = T.app(v("y"), *map(v, zs[k:]))
        return T.lams(["x", "y"] + zs, T.App(T.app(v("x"), *map(v, zs[:k])), inner))
    raise FamilyIndexError(f"unknown family {kind}")


# ---------------------------------------------------------------------------
# Bracket abstraction


class _Fresh:
    def __init__(self, avoid: Iterable[str]):
        self.avoid = set(avoid)
        self.n = 0

    def __call__(self, base: str) -> str:
        while True:
            self.n += 1
            name = f"{base}{self.n}_"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def _occurs_at_depth0(c: CombTerm, x: str) -> bool:
    if isinstance(c, CVar):
        return c.name == x
    if isinstance(c, CApp):
        return _occurs_at_depth0(c.fun, x) or _occurs_at_depth0(c.arg, x)
    return False


def abstract_multi(t: T.Term | CombTerm, variables: Sequence[str]) -> CombTerm:
    """Combinatory term reducing to λx1..xn.t, for t combinatory and linear in the xi."""
    c = t if isinstance(t, (Comb, CVar, CApp, CBang)) else from_term(t)
    counts = comb_free_vars(c)
    for x in variables:
        if counts.get(x, 0) != 1 or not _occurs_at_depth0(c, x):
            raise NonLinearInput([f"{x} must occur exactly once outside `!`"])
    if len(set(variables)) != len(variables):
        raise NonLinearInput(["repeated abstraction variable"])
    return _lemma(c, list(variables))


def _lemma(c: CombTerm, xs: list[str]) -> CombTerm:
    if not xs:
        return c
    if isinstance(c, CVar):
        return I
    if not isinstance(c, CApp):
        raise NonLinearInput([f"cannot abstract {xs} from {show_comb(c)}"])
    in_fun = comb_free_vars(c.fun)
    us = [x for x in xs if x in in_fun]
    vs = [x for x in xs if x not in in_fun]
    k, n = len(us), len(xs)
    core = _a_kn(k, n)
    if us + vs != xs:
        # λ_σ core u0 v0 x1..xn = core u0 v0 z1..zn with z = us + vs
        pos = {x: i for i, x in enumerate(xs, start=1)}
        images = [1, 2] + [0] * n
        for j, z in enumerate(us + vs, start=1):
            images[2 + pos[z] - 1] = 2 + j
        core = CApp(perm_to_comb(Permutation(tuple(images))), core)
    return capp(core, _lemma(c.fun, us), _lemma(c.arg, vs))


@lru_cache(maxsize=None)
def _base_normal_keys() -> dict[tuple, str]:
    return {T.normal_key(base_term(name)): name for name in ALL_BASES}


def _match_base(t: T.Term, allowed: Sequence[str]) -> CombTerm | None:
    if T.free_variables(t):
        return None
    name = _base_normal_keys().get(T.normal_key(t))
    return Comb(name) if name in allowed else None


def abstract_linear(t: T.Term) -> CombTerm:
    """{I,B,C} combinatory term whose normal form is that of the linear term t."""
    verdict = T.is_linear(t)
    if not verdict:
        raise NonLinearInput(verdict.diagnostics)
    return _theorem(t, LINEAR_BASES, _Fresh(_all_names(t)))


def abstract_exponential(t: T.Term) -> CombTerm:
    """Exponential combinatory term whose normal form is that of t."""
    try:
        verdict = T.is_linear_bang(t)
    except T.NotBangLambda as exc:
        raise NonLinearBangInput([str(exc)]) from None
    if not verdict:
        raise NonLinearBangInput(verdict.diagnostics)
    return _theorem(t, EXPONENTIAL_BASES, _Fresh(_all_names(t)))


def _all_names(t: T.Term) -> set[str]:
    out = set()
    for s in T.subterms(t):
        if isinstance(s, T.Var):
            out.add(s.name)
        elif isinstance(s, (T.Lam, T.BangLam)):
            out.add(s.binder)
    return out


def _theorem(t: T.Term, allowed: Sequence[str], fresh: _Fresh) -> CombTerm:
    if isinstance(t, T.Var):
        return CVar(t.name)
    if isinstance(t, T.App):
        return CApp(_theorem(t.fun, allowed, fresh), _theorem(t.arg, allowed, fresh))
    if isinstance(t, T.Bang):
        return CBang(_theorem(t.body, allowed, fresh))
    if isinstance(t, (T.Lam, T.BangLam)):
        hit = _match_base(t, allowed)
        if hit is not None:
            return hit
        body = _theorem(t.body, allowed, fresh)
        if isinstance(t, T.Lam):
            return _lemma(body, [t.binder])
        return _bang_abstract(body, t.binder, fresh)
    raise ValueError(f"no combinatory translation for {T.show(t)}")


def _rename_occurrences(c: CombTerm, x: str, first: str, rest: str) -> CombTerm:
    seen = [False]

    def go(s: CombTerm) -> CombTerm:
        if isinstance(s, CVar) and s.name == x:
            if not seen[0]:
                seen[0] = True
                return CVar(first)
            return CVar(rest)
        if isinstance(s, CApp):
            f = go(s.fun)
            return CApp(f, go(s.arg))
        if isinstance(s, CBang):
            return CBang(go(s.body))
        return s

    return go(c)


def _replace_var(c: CombTerm, x: str, by: CombTerm) -> CombTerm:
    if isinstance(c, CVar):
        return by if c.name == x else c
    if isinstance(c, CApp):
        return CApp(_replace_var(c.fun, x, by), _replace_var(c.arg, x, by))
    if isinstance(c, CBang):
        return CBang(_replace_var(c.body, x, by))
    return c


def _split_outer_bang(c: CombTerm, x: str, hole: str) -> tuple[CombTerm, CombTerm]:
    """Context with the outermost `!w` containing x replaced by a hole, and w."""
    if isinstance(c, CBang):
        return CVar(hole), c.body
    if isinstance(c, CApp):
        if x in comb_free_vars(c.fun):
            ctx, w = _split_outer_bang(c.fun, x, hole)
            return CApp(ctx, c.arg), w
        ctx, w = _split_outer_bang(c.arg, x, hole)
        return CApp(c.fun, ctx), w
    raise ValueError("variable not found")


def _bang_abstract(c: CombTerm, x: str, fresh: _Fresh) -> CombTerm:
    """Combinatory term reducing to λ!x.c; x may occur any number of times."""
    K_, W_, F_, D_, dig = (Comb(n) for n in ("K!", "W!", "F", "D", "delta"))
    uses = comb_free_vars(c).get(x, 0)
    if uses == 0:
        return CApp(K_, c)
    if uses > 1:
        first, rest = fresh(x), fresh(x)
        c2 = _rename_occurrences(c, x, first, rest)
        inner = _bang_abstract(c2, rest, fresh)
        return CApp(W_, _bang_abstract(inner, first, fresh))
    if c == CVar(x):
        return D_
    p = fresh("p")
    if _occurs_at_depth0(c, x):
        c2 = _replace_var(c, x, CApp(D_, CVar(p)))
    else:
        ctx, w = _split_outer_bang(c, x, p)
        if _occurs_at_depth0(w, x):
            lifted = capp(F_, CBang(_lemma(w, [x])), CVar(p))
            if isinstance(ctx, CVar):
                return CApp(F_, CBang(_lemma(w, [x])))
        else:
            lifted = capp(F_, CBang(_bang_abstract(w, x, fresh)), CApp(dig, CVar(p)))
        c2 = _replace_var(ctx, p, lifted)
    # W!(B K! g) !a ⇝ K! (g !a) !a ⇝ g !a
    return CApp(W_, capp(B, K_, _lemma(c2, [p])))
