"""Lambda terms with `!`, `!`-abstraction, records and structure parameters.

Terms are immutable dataclasses.  Named terms are the public surface; the
normaliser works on an internal de Bruijn encoding (nested tuples) and
converts back, which keeps substitution cheap on large combinator words.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Union

DEFAULT_FUEL = 100_000


# ---------------------------------------------------------------------------
# Syntax


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Term"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Bang:
    body: "Term"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class BangLam:
    binder: str
    body: "Term"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class EmptyRecord:
    def __str__(self) -> str:
        return "<>"


@dataclass(frozen=True)
class RecordExt:
    base: "Term"
    label: str
    field: "Term"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Select:
    base: "Term"
    label: str

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Param:
    """Opaque reference to an element of a finite structure."""

    ident: object

    def __str__(self) -> str:
        return f"#{self.ident}"


Term = Union[Var, App, Lam, Bang, BangLam, EmptyRecord, RecordExt, Select, Param]


class NotPlainLambda(ValueError):
    """Raised by `is_linear` on terms using `!` or records."""


class NotBangLambda(ValueError):
    """Raised by `is_linear_bang` on terms using records."""


class FuelExhausted(RuntimeError):
    def __init__(self, fuel: int):
        super().__init__(f"no normal form within {fuel} reduction steps")
        self.fuel = fuel


class _NormalFormType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NormalForm"


NormalForm = _NormalFormType()


@dataclass(frozen=True)
class Redex:
    """A contractible subterm; `position` is a path of child indices."""

    kind: str  # beta | bang | iota-hit | iota-miss
    position: tuple[int, ...]


def app(*terms: Term) -> Term:
    """Left-nested application `t0 t1 ... tn`."""
    out = terms[0]
    for t in terms[1:]:
        out = App(out, t)
    return out


def lams(binders: str | list[str], body: Term) -> Term:
    names = binders.split() if isinstance(binders, str) else binders
    for name in reversed(names):
        if name.startswith("!"):
            body = BangLam(name[1:], body)
        else:
            body = Lam(name, body)
    return body


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, (Lam, BangLam, Bang)):
        return (t.body,)
    if isinstance(t, RecordExt):
        return (t.base, t.field)
    if isinstance(t, Select):
        return (t.base,)
    return ()


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(children(s))


def uses_bang(t: Term) -> bool:
    return any(isinstance(s, (Bang, BangLam)) for s in subterms(t))


def uses_records(t: Term) -> bool:
    return any(isinstance(s, (EmptyRecord, RecordExt, Select)) for s in subterms(t))


def params(t: Term) -> set:
    return {s.ident for s in subterms(t) if isinstance(s, Param)}


# ---------------------------------------------------------------------------
# Free variables and linearity


def free_variables(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, (Lam, BangLam)):
        return free_variables(t.body) - {t.binder}
    out: frozenset[str] = frozenset()
    for c in children(t):
        out |= free_variables(c)
    return out


@dataclass(frozen=True)
class Linearity:
    ok: bool
    diagnostics: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


class _Binding:
    __slots__ = ("name", "kind", "uses", "under_bang")

    def __init__(self, name: str, kind: str):
        self.name = name
        self.kind = kind  # lam | banglam | free
        self.uses = 0
        self.under_bang = 0


def _count_uses(t: Term) -> list[_Binding]:
    """Occurrence counts for every binder and every free variable name."""
    bindings: list[_Binding] = []
    free: dict[str, _Binding] = {}

    # An occurrence is under `!` for its binder when a Bang sits between them.
    def walk_rel(s: Term, scope: dict[str, tuple[_Binding, int]], depth: int) -> None:
        if isinstance(s, Var):
            entry = scope.get(s.name)
            if entry is None:
                b = free.get(s.name)
                if b is None:
                    b = free[s.name] = _Binding(s.name, "free")
                    bindings.append(b)
                bound_depth = 0
            else:
                b, bound_depth = entry
            b.uses += 1
            if depth > bound_depth:
                b.under_bang += 1
        elif isinstance(s, (Lam, BangLam)):
            b = _Binding(s.binder, "lam" if isinstance(s, Lam) else "banglam")
            bindings.append(b)
            walk_rel(s.body, {**scope, s.binder: (b, depth)}, depth)
        elif isinstance(s, Bang):
            walk_rel(s.body, scope, depth + 1)
        else:
            for c in children(s):
                walk_rel(c, scope, depth)

    walk_rel(t, {}, 0)
    return bindings


def is_linear(t: Term) -> Linearity:
    """Every lambda binds a variable used exactly once; free variables at most once."""
    if uses_bang(t) or uses_records(t):
        raise NotPlainLambda("term uses `!` or record constructs")
    diags = []
    for b in _count_uses(t):
        if b.kind == "lam" and b.uses != 1:
            diags.append(f"bound variable {b.name} used {b.uses} times")
        elif b.kind == "free" and b.uses > 1:
            diags.append(f"free variable {b.name} used {b.uses} times")
    return Linearity(not diags, tuple(diags))


def is_linear_bang(t: Term) -> Linearity:
    """Linearity for the `!` calculus.

    Plain-lambda variables occur exactly once and never under `!`; free
    variables at most once; `!`-lambda variables are unrestricted.
    """
    if uses_records(t):
        raise NotBangLambda("term uses record constructs")
    diags = []
    for b in _count_uses(t):
        if b.kind == "lam":
            if b.uses != 1:
                diags.append(f"bound variable {b.name} used {b.uses} times")
            if b.under_bang:
                diags.append(f"bound variable {b.name} occurs under !")
        elif b.kind == "free" and b.uses > 1:
            diags.append(f"free variable {b.name} used {b.uses} times")
    return Linearity(not diags, tuple(diags))


# ---------------------------------------------------------------------------
# Named substitution and single-step reduction


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding replacement of the free occurrences of `x` by `u`."""
    fv_u = free_variables(u)

    def go(s: Term) -> Term:
        if isinstance(s, Var):
            return u if s.name == x else s
        if isinstance(s, (Lam, BangLam)):
            if s.binder == x:
                return s
            body = s.body
            binder = s.binder
            if binder in fv_u and x in free_variables(body):
                new = fresh_name(binder, fv_u | free_variables(body) | {x})
                body = substitute(body, binder, Var(new))
                binder = new
            return type(s)(binder, go(body))
        if isinstance(s, App):
            return App(go(s.fun), go(s.arg))
        if isinstance(s, Bang):
            return Bang(go(s.body))
        if isinstance(s, RecordExt):
            return RecordExt(go(s.base), s.label, go(s.field))
        if isinstance(s, Select):
            return Select(go(s.base), s.label)
        return s

    return go(t)


def _redex_kind(t: Term) -> str | None:
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return "beta"
        if isinstance(t.fun, BangLam) and isinstance(t.arg, Bang):
            return "bang"
    elif isinstance(t, Select) and isinstance(t.base, RecordExt):
        return "iota-hit" if t.base.label == t.label else "iota-miss"
    return None


def find_redex(t: Term) -> Redex | None:
    """Leftmost-outermost redex, or None."""
    stack: list[tuple[Term, tuple[int, ...]]] = [(t, ())]
    while stack:
        s, pos = stack.pop()
        kind = _redex_kind(s)
        if kind is not None:
            return Redex(kind, pos)
        kids = children(s)
        for i in reversed(range(len(kids))):
            stack.append((kids[i], pos + (i,)))
    return None


def _contract(t: Term) -> Term:
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return substitute(t.fun.body, t.fun.binder, t.arg)
    if isinstance(t, App) and isinstance(t.fun, BangLam) and isinstance(t.arg, Bang):
        return substitute(t.fun.body, t.fun.binder, t.arg.body)
    if isinstance(t, Select) and isinstance(t.base, RecordExt):
        if t.base.label == t.label:
            return t.base.field
        return Select(t.base.base, t.label)
    raise ValueError("not a redex")


def _replace_at(t: Term, pos: tuple[int, ...], new: Term) -> Term:
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    if isinstance(t, App):
        return App(_replace_at(t.fun, rest, new), t.arg) if i == 0 else App(t.fun, _replace_at(t.arg, rest, new))
    if isinstance(t, (Lam, BangLam)):
        return type(t)(t.binder, _replace_at(t.body, rest, new))
    if isinstance(t, Bang):
        return Bang(_replace_at(t.body, rest, new))
    if isinstance(t, RecordExt):
        if i == 0:
            return RecordExt(_replace_at(t.base, rest, new), t.label, t.field)
        return RecordExt(t.base, t.label, _replace_at(t.field, rest, new))
    if isinstance(t, Select):
        return Select(_replace_at(t.base, rest, new), t.label)
    raise ValueError("bad position")


def subterm_at(t: Term, pos: tuple[int, ...]) -> Term:
    for i in pos:
        t = children(t)[i]
    return t


def reduce_step(t: Term) -> Term | _NormalFormType:
    """One leftmost-outermost beta / `!` / iota step, or `NormalForm`."""
    r = find_redex(t)
    if r is None:
        return NormalForm
    return _replace_at(t, r.position, _contract(subterm_at(t, r.position)))


# ---------------------------------------------------------------------------
# De Bruijn engine
#
# ("V", i) bound index      ("F", name) free variable    ("P", ident)
# ("A", f, a)               ("L", body, hint)            ("BL", body, hint)
# ("B", body)               ("R0",)                      ("R", base, label, field)
# ("S", base, label)


def to_db(t: Term, hints: bool = True) -> tuple:
    def go(s: Term, env: tuple[str, ...]) -> tuple:
        if isinstance(s, Var):
            for i in range(len(env) - 1, -1, -1):
                if env[i] == s.name:
                    return ("V", len(env) - 1 - i)
            return ("F", s.name)
        if isinstance(s, App):
            return ("A", go(s.fun, env), go(s.arg, env))
        if isinstance(s, Lam):
            return ("L", go(s.body, env + (s.binder,)), s.binder if hints else None)
        if isinstance(s, BangLam):
            return ("BL", go(s.body, env + (s.binder,)), s.binder if hints else None)
        if isinstance(s, Bang):
            return ("B", go(s.body, env))
        if isinstance(s, EmptyRecord):
            return ("R0",)
        if isinstance(s, RecordExt):
            return ("R", go(s.base, env), s.label, go(s.field, env))
        if isinstance(s, Select):
            return ("S", go(s.base, env), s.label)
        if isinstance(s, Param):
            return ("P", s.ident)
        raise TypeError(f"not a term: {s!r}")

    with _deep_recursion():
        return go(t, ())


def _db_free_names(t: tuple, out: set[str]) -> set[str]:
    tag = t[0]
    if tag == "F":
        out.add(t[1])
    elif tag == "A":
        _db_free_names(t[1], out)
        _db_free_names(t[2], out)
    elif tag in ("L", "BL", "B"):
        _db_free_names(t[1], out)
    elif tag == "R":
        _db_free_names(t[1], out)
        _db_free_names(t[3], out)
    elif tag == "S":
        _db_free_names(t[1], out)
    return out


def from_db(t: tuple) -> Term:
    free = _db_free_names(t, set())

    def go(s: tuple, env: list[str]) -> Term:
        tag = s[0]
        if tag == "V":
            return Var(env[len(env) - 1 - s[1]])
        if tag == "F":
            return Var(s[1])
        if tag == "A":
            return App(go(s[1], env), go(s[2], env))
        if tag in ("L", "BL"):
            hint = s[2] or "x"
            name = hint
            taken = free.union(env)
            if name in taken:
                name = fresh_name(hint, taken)
            body = go(s[1], env + [name])
            return Lam(name, body) if tag == "L" else BangLam(name, body)
        if tag == "B":
            return Bang(go(s[1], env))
        if tag == "R0":
            return EmptyRecord()
        if tag == "R":
            return RecordExt(go(s[1], env), s[2], go(s[3], env))
        if tag == "S":
            return Select(go(s[1], env), s[2])
        if tag == "P":
            return Param(s[1])
        raise TypeError(s)

    with _deep_recursion():
        return go(t, [])


def _shift(t: tuple, d: int, cutoff: int) -> tuple:
    tag = t[0]
    if tag == "V":
        return ("V", t[1] + d) if t[1] >= cutoff else t
    if tag == "A":
        return ("A", _shift(t[1], d, cutoff), _shift(t[2], d, cutoff))
    if tag in ("L", "BL"):
        return (tag, _shift(t[1], d, cutoff + 1), t[2])
    if tag == "B":
        return ("B", _shift(t[1], d, cutoff))
    if tag == "R":
        return ("R", _shift(t[1], d, cutoff), t[2], _shift(t[3], d, cutoff))
    if tag == "S":
        return ("S", _shift(t[1], d, cutoff), t[2])
    return t


def _has_loose(t: tuple, depth: int = 0) -> bool:
    tag = t[0]
    if tag == "V":
        return t[1] >= depth
    if tag == "A":
        return _has_loose(t[1], depth) or _has_loose(t[2], depth)
    if tag in ("L", "BL"):
        return _has_loose(t[1], depth + 1)
    if tag == "B":
        return _has_loose(t[1], depth)
    if tag == "R":
        return _has_loose(t[1], depth) or _has_loose(t[3], depth)
    if tag == "S":
        return _has_loose(t[1], depth)
    return False


def _subst_top(body: tuple, u: tuple) -> tuple:
    """body[0 := u], lowering the other loose indices."""
    closed = not _has_loose(u)

    def go(s: tuple, depth: int) -> tuple:
        tag = s[0]
        if tag == "V":
            i = s[1]
            if i == depth:
                return u if closed or depth == 0 else _shift(u, depth, 0)
            if i > depth:
                return ("V", i - 1)
            return s
        if tag == "A":
            return ("A", go(s[1], depth), go(s[2], depth))
        if tag in ("L", "BL"):
            return (tag, go(s[1], depth + 1), s[2])
        if tag == "B":
            return ("B", go(s[1], depth))
        if tag == "R":
            return ("R", go(s[1], depth), s[2], go(s[3], depth))
        if tag == "S":
            return ("S", go(s[1], depth), s[2])
        return s

    return go(body, 0)


class _Reducer:
    """Head-first normal-order evaluation with a step budget."""

    def __init__(self, fuel: int):
        self.fuel = fuel
        self.steps = 0

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.fuel:
            raise FuelExhausted(self.fuel)

    def whnf(self, t: tuple) -> tuple:
        while True:
            tag = t[0]
            if tag == "A":
                f = self.whnf(t[1])
                if f[0] == "L":
                    self._tick()
                    t = _subst_top(f[1], t[2])
                    continue
                if f[0] == "BL":
                    a = self.whnf(t[2])
                    if a[0] == "B":
                        self._tick()
                        t = _subst_top(f[1], a[1])
                        continue
                    return ("A", f, a)
                return ("A", f, t[2])
            if tag == "S":
                b = self.whnf(t[1])
                if b[0] == "R":
                    self._tick()
                    t = b[3] if b[2] == t[2] else ("S", b[1], t[2])
                    continue
                return ("S", b, t[2])
            return t

    def nf(self, t: tuple) -> tuple:
        t = self.whnf(t)
        tag = t[0]
        if tag in ("L", "BL"):
            return (tag, self.nf(t[1]), t[2])
        if tag == "B":
            return ("B", self.nf(t[1]))
        if tag == "A":
            return ("A", self.nf(t[1]), self.nf(t[2]))
        if tag == "S":
            return ("S", self.nf(t[1]), t[2])
        if tag == "R":
            return ("R", self.nf(t[1]), t[2], self.nf(t[3]))
        return t


@contextmanager
def _deep_recursion(limit: int = 50_000):
    old = sys.getrecursionlimit()
    if old < limit:
        sys.setrecursionlimit(limit)
    try:
        yield
    finally:
        if old < limit:
            sys.setrecursionlimit(old)


def normalize_db(t: tuple, fuel: int = DEFAULT_FUEL) -> tuple:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    with _deep_recursion():
        return _Reducer(fuel).nf(t)


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Beta/`!`/iota normal form, or `FuelExhausted` after `fuel` contractions."""
    return from_db(normalize_db(to_db(t), fuel))


def count_steps(t: Term, fuel: int = DEFAULT_FUEL) -> int:
    r = _Reducer(fuel)
    with _deep_recursion():
        r.nf(to_db(t))
    return r.steps


def _strip_hints(t: tuple) -> tuple:
    tag = t[0]
    if tag in ("L", "BL"):
        return (tag, _strip_hints(t[1]), None)
    if tag == "A":
        return ("A", _strip_hints(t[1]), _strip_hints(t[2]))
    if tag == "B":
        return ("B", _strip_hints(t[1]))
    if tag == "R":
        return ("R", _strip_hints(t[1]), t[2], _strip_hints(t[3]))
    if tag == "S":
        return ("S", _strip_hints(t[1]), t[2])
    return t


def canonical(t: Term) -> tuple:
    """Alpha-invariant key."""
    return to_db(t, hints=False)


def alpha_equal(t: Term, u: Term) -> bool:
    return canonical(t) == canonical(u)


def normal_key(t: Term, fuel: int = DEFAULT_FUEL) -> tuple:
    """Alpha-invariant key of the normal form."""
    with _deep_recursion():
        return _strip_hints(normalize_db(to_db(t, hints=False), fuel))


def alpha_beta_equal(t: Term, u: Term, fuel: int = DEFAULT_FUEL) -> bool:
    return normal_key(t, fuel) == normal_key(u, fuel)


# ---------------------------------------------------------------------------
# Printing (concrete syntax accepted by `linimp.syntax.parse_term`)


def _atomic(t: Term) -> bool:
    return isinstance(t, (Var, EmptyRecord, RecordExt, Param, Select)) or (
        isinstance(t, Bang) and _atomic(t.body)
    )


def show(t: Term) -> str:
    with _deep_recursion():
        return _show(t)


def _show(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Param):
        return f"#{t.ident}"
    if isinstance(t, EmptyRecord):
        return "<>"
    if isinstance(t, RecordExt):
        return f"<{_show(t.base)}; {t.label}={_show(t.field)}>"
    if isinstance(t, Select):
        base = _show(t.base)
        if not isinstance(t.base, (Var, Param, EmptyRecord, RecordExt, Select)):
            base = f"({base})"
        return f"{base}.{t.label}"
    if isinstance(t, Lam):
        return f"\\{t.binder}.{_show(t.body)}"
    if isinstance(t, BangLam):
        return f"\\!{t.binder}.{_show(t.body)}"
    if isinstance(t, Bang):
        inner = _show(t.body)
        return "!" + (inner if _atomic(t.body) else f"({inner})")
    if isinstance(t, App):
        f = _show(t.fun)
        if isinstance(t.fun, (Lam, BangLam)):
            f = f"({f})"
        a = _show(t.arg)
        if not _atomic(t.arg):
            a = f"({a})"
        return f"{f} {a}"
    raise TypeError(t)
