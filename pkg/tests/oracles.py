"""Independent brute-force reference implementations used by the tests.

Nothing here imports the evaluation machinery of the package under test;
terms are plain tuples so the oracle cannot share bugs with the library.
"""

from __future__ import annotations

from itertools import count, product

from linimp import terms as T

# -- plain lambda terms as tuples: ("v", x) | ("a", f, u) | ("l", x, body)


def from_term(t: T.Term) -> tuple:
    if isinstance(t, T.Var):
        return ("v", t.name)
    if isinstance(t, T.App):
        return ("a", from_term(t.fun), from_term(t.arg))
    if isinstance(t, T.Lam):
        return ("l", t.binder, from_term(t.body))
    raise TypeError(f"oracle handles plain lambda terms only: {t!r}")


def fv(t: tuple) -> set[str]:
    if t[0] == "v":
        return {t[1]}
    if t[0] == "a":
        return fv(t[1]) | fv(t[2])
    return fv(t[2]) - {t[1]}


_fresh = count()


def subst(t: tuple, x: str, u: tuple) -> tuple:
    if t[0] == "v":
        return u if t[1] == x else t
    if t[0] == "a":
        return ("a", subst(t[1], x, u), subst(t[2], x, u))
    y, body = t[1], t[2]
    if y == x:
        return t
    if y in fv(u):
        z = f"_o{next(_fresh)}"
        body, y = subst(body, y, ("v", z)), z
    return ("l", y, subst(body, x, u))


def step(t: tuple):
    """One leftmost-outermost beta step, or None at normal form."""
    if t[0] == "a":
        f, u = t[1], t[2]
        if f[0] == "l":
            return subst(f[2], f[1], u)
        s = step(f)
        if s is not None:
            return ("a", s, u)
        s = step(u)
        return None if s is None else ("a", f, s)
    if t[0] == "l":
        s = step(t[2])
        return None if s is None else ("l", t[1], s)
    return None


def normalise(t: tuple, fuel: int = 10_000) -> tuple:
    for _ in range(fuel):
        s = step(t)
        if s is None:
            return t
        t = s
    raise RuntimeError("oracle ran out of fuel")


def nameless(t: tuple, bound: tuple = ()) -> tuple:
    if t[0] == "v":
        return ("v", bound.index(t[1])) if t[1] in bound else ("f", t[1])
    if t[0] == "a":
        return ("a", nameless(t[1], bound), nameless(t[2], bound))
    return ("l", nameless(t[2], (t[1],) + bound))


def beta_eq(t: T.Term, u: T.Term) -> bool:
    return nameless(normalise(from_term(t))) == nameless(normalise(from_term(u)))


# -- finite orders


def meet_brute(leq, a, b):
    lower = [c for c in range(len(leq)) if leq[c][a] and leq[c][b]]
    best = [c for c in lower if all(leq[d][c] for d in lower)]
    return best[0] if best else None


def join_brute(leq, a, b):
    upper = [c for c in range(len(leq)) if leq[a][c] and leq[b][c]]
    best = [c for c in upper if all(leq[c][d] for d in upper)]
    return best[0] if best else None


def meet_all(leq, xs):
    xs = list(xs)
    n = len(leq)
    lower = [c for c in range(n) if all(leq[c][x] for x in xs)]
    best = [c for c in lower if all(leq[d][c] for d in lower)]
    return best[0]


def variance_brute(leq, imp) -> bool:
    n = range(len(leq))
    return all(
        leq[imp[a][b]][imp[a2][b2]]
        for a, a2, b, b2 in product(n, repeat=4)
        if leq[a2][a] and leq[b][b2]
    )
