"""Seeded random terms for property suites."""

from __future__ import annotations

import random

from . import terms as T


def _min_size(k: int) -> int:
    return 2 if k == 0 else 2 * k - 1


def random_linear_term(rng: random.Random, max_size: int = 30, free: list[str] | None = None) -> T.Term:
    """A linear lambda term of size <= max_size whose free variables are exactly `free`."""
    free = list(free or [])
    budget = rng.randint(_min_size(len(free)), max(max_size, _min_size(len(free))))
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"v{counter[0]}"

    def gen(vs: list[str], budget: int) -> T.Term:
        options = []
        if len(vs) == 1:
            options.append("var")
        if budget >= 1 + _min_size(len(vs) + 1):
            options.append("lam")
        if budget >= 1 + 2 * _min_size(0) or (vs and budget >= 1 + _min_size(len(vs)) + _min_size(0)) or len(vs) >= 2:
            options.append("app")
        while True:
            choice = rng.choice(options)
            if choice == "var":
                return T.Var(vs[0])
            if choice == "lam":
                x = fresh()
                return T.Lam(x, gen(vs + [x], budget - 1))
            shuffled = vs[:]
            rng.shuffle(shuffled)
            cut = rng.randint(0, len(shuffled))
            left, right = shuffled[:cut], shuffled[cut:]
            rest = budget - 1 - _min_size(len(left)) - _min_size(len(right))
            if rest < 0:
                if options == ["app"]:
                    continue
                options = [o for o in options if o != "app"] or options
                continue
            share = rng.randint(0, rest)
            return T.App(gen(left, _min_size(len(left)) + share), gen(right, _min_size(len(right)) + rest - share))

    return gen(free, budget)


def random_bang_term(rng: random.Random, max_size: int = 16) -> T.Term:
    """A closed linear `!`-term (plain binders used once, never under `!`)."""
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"v{counter[0]}"

    def gen(lin: list[str], bangs: list[str], budget: int) -> T.Term:
        if budget < 3 and len(lin) != 1:
            # out of room: spend the pending linear variables in a spine
            if lin:
                return T.app(*map(T.Var, lin))
            return T.Var(rng.choice(bangs)) if bangs else T.Lam("z", T.Var("z"))
        options = []
        if len(lin) == 1:
            options.append("var")
        if not lin and bangs:
            options.append("bvar")
        if budget >= 3:
            options += ["lam", "blam"]
            if not lin:
                options.append("bang")
        if budget >= 3 and (len(lin) >= 2 or budget >= 5):
            options.append("app")
        choice = rng.choice(options)
        if choice == "var":
            return T.Var(lin[0])
        if choice == "bvar":
            return T.Var(rng.choice(bangs))
        if choice == "lam":
            x = fresh()
            return T.Lam(x, gen(lin + [x], bangs, budget - 1))
        if choice == "blam":
            x = fresh()
            return T.BangLam(x, gen(lin, bangs + [x], budget - 1))
        if choice == "bang":
            return T.Bang(gen([], bangs, budget - 1))
        shuffled = lin[:]
        rng.shuffle(shuffled)
        cut = rng.randint(0, len(shuffled))
        half = max(1, (budget - 1) // 2)
        return T.App(gen(shuffled[:cut], bangs, half), gen(shuffled[cut:], bangs, budget - 1 - half))

    return gen([], [], max_size)
