"""Shipped fixture structures and seeded random ones."""

from __future__ import annotations

import random
from itertools import combinations

from .structures import FinLattice, ImpStructure, heyting_arrow


def _heyting(name: str, L: FinLattice, bang: str | None = "identity") -> ImpStructure:
    A = ImpStructure(L, heyting_arrow(L), name=name)
    if bang == "identity":
        A = A.with_bang(list(L.elements))
    elif bang == "top":
        A = A.with_bang([L.top] * L.n)
    return A


def bool2_lattice() -> FinLattice:
    return FinLattice.from_pairs(["0", "1"], [(0, 1)])


def chain4_lattice() -> FinLattice:
    return FinLattice.from_pairs(["0", "1", "2", "3"], [(0, 1), (1, 2), (2, 3)])


def m2_lattice() -> FinLattice:
    return FinLattice.from_pairs(["bot", "a", "b", "top"], [(0, 1), (0, 2), (1, 3), (2, 3)])


def powerset3_lattice() -> FinLattice:
    names = ["{" + "".join(c for i, c in enumerate("xyz") if m >> i & 1) + "}" for m in range(8)]
    return FinLattice.from_pairs(names, [(a, b) for a in range(8) for b in range(8) if a & b == a])


def bool2(bang: str | None = "identity") -> ImpStructure:
    return _heyting("bool2", bool2_lattice(), bang)


def chain4(bang: str | None = "identity") -> ImpStructure:
    return _heyting("chain4", chain4_lattice(), bang)


def m2(bang: str | None = "identity") -> ImpStructure:
    return _heyting("m2", m2_lattice(), bang)


def powerset3(bang: str | None = "identity") -> ImpStructure:
    return _heyting("powerset3", powerset3_lattice(), bang)


def powerset3_records() -> dict[str, list[int]]:
    """Both labels keep a set containing x at the top; otherwise l tags it {y}, r tags it {z}."""
    left = [7 if a & 1 else 0b010 for a in range(8)]
    right = [7 if a & 1 else 0b100 for a in range(8)]
    return {"l": left, "r": right}


def constant_top_records(A: ImpStructure) -> dict[str, list[int]]:
    return {"l": [A.top] * A.n, "r": [A.top] * A.n}


def named_fixtures() -> list[ImpStructure]:
    return [bool2(), chain4(), m2(), powerset3()]


def fixture(name: str) -> ImpStructure:
    table = {"bool2": bool2, "chain4": chain4, "m2": m2, "powerset3": powerset3}
    if name not in table:
        raise KeyError(f"unknown fixture {name!r}")
    return table[name]()


# ---------------------------------------------------------------------------
# Random complete lattices


def dedekind_macneille(n: int, leq: list[list[bool]]) -> FinLattice:
    """Completion of a finite poset: the sets X with lower(upper(X)) = X."""
    pts = range(n)

    def upper(xs):
        return frozenset(u for u in pts if all(leq[x][u] for x in xs))

    def lower(us):
        return frozenset(d for d in pts if all(leq[d][u] for u in us))

    cuts = {lower(upper(frozenset(xs))) for k in range(n + 1) for xs in combinations(pts, k)}
    cuts = sorted(cuts, key=lambda c: (len(c), sorted(c)))
    names = []
    for c in cuts:
        principal = [p for p in pts if lower(upper({p})) == c]
        names.append(f"p{principal[0]}" if principal else "{" + ",".join(map(str, sorted(c))) + "}")
    names = [nm if names.count(nm) == 1 else f"{nm}_{i}" for i, nm in enumerate(names)]
    rel = [[a <= b for b in cuts] for a in cuts]
    return FinLattice(names, rel)


def random_lattice(rng: random.Random, max_size: int = 8) -> FinLattice:
    """Random poset on a few points completed to a lattice of at most max_size elements."""
    while True:
        k = rng.randint(2, 5)
        density = rng.random()
        rel = [[i == j for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < density:
                    rel[i][j] = True
        for m in range(k):
            for i in range(k):
                if rel[i][m]:
                    for j in range(k):
                        if rel[m][j]:
                            rel[i][j] = True
        L = dedekind_macneille(k, rel)
        if 2 <= L.n <= max_size:
            return L


def random_application(rng: random.Random, L: FinLattice, triples: int | None = None) -> list[list[int]]:
    """a.b = join{q : (p, b0, q) chosen, a not<= p, b0 <= b}.

    Join-preserving in a (a not<= p iff some joinand is not) and monotone in b.
    """
    count = triples if triples is not None else rng.randint(1, 2 * L.n)
    chosen = [(rng.randrange(L.n), rng.randrange(L.n), rng.randrange(L.n)) for _ in range(count)]
    return [
        [L.join_all(q for p, b0, q in chosen if not L.leq[a][p] and L.leq[b0][b]) for b in L.elements]
        for a in L.elements
    ]


def random_monotone_map(rng: random.Random, L: FinLattice) -> list[int]:
    f = [rng.randrange(L.n) for _ in L.elements]
    return [L.join_all(f[b] for b in L.downset(a)) for a in L.elements]


def random_structure(rng: random.Random, max_size: int = 8, index: int = 0) -> ImpStructure:
    from .structures import AppStructure, imp_of_app

    L = random_lattice(rng, max_size)
    A = imp_of_app(AppStructure(L, random_application(rng, L), name=f"random{index}"))
    return A.with_bang(random_monotone_map(rng, L))


def random_structures(seed: int, count: int = 20, max_size: int = 8) -> list[ImpStructure]:
    rng = random.Random(seed)
    return [random_structure(rng, max_size, i) for i in range(count)]
