from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from linimp.formats import DATA_DIR
from linimp.linreal import (
    CapExceeded,
    HypothesisError,
    Situation,
    SituationError,
    as_implicative,
    battery,
    closure_check,
    cocycle_situation,
    enumerate_types,
    jacobi_check,
    load_situation,
    mask,
    members,
    parse_situation,
    print_situation,
    product_cocycles,
    trivial_situation,
    type_report,
    verify_situation,
)
from linimp.report import FAIL, PASS
from linimp.structures import verify_implicative

Z2 = cocycle_situation("Z2", [0, 1], (1,), 2)


# -- an independent model of projects as (alpha, program) pairs


class Brute:
    def __init__(self, S):
        self.S = S
        self.projects = [(a, p) for a in range(S.k) for p in range(S.n_programs)]

    def meas(self, x, y):
        return (x[0] + y[0] + self.S.m[x[1]][y[1]]) % self.S.k

    def ex(self, x, y):
        return (self.meas(x, y), self.S.ex[x[1]][y[1]])

    def orth(self, X):
        return frozenset(y for y in self.projects if all(self.meas(x, y) in self.S.pole for x in X))

    def types(self):
        out = set()
        for r in range(len(self.projects) + 1):
            for X in combinations(self.projects, r):
                out.add(self.orth(X))
        return out

    def lolli(self, A, B):
        return frozenset(x for x in self.projects if all(self.ex(x, a) in B for a in A))

    def tensor(self, A, B):
        return self.orth(self.orth({self.ex(a, b) for a in A for b in B}))

    def to_mask(self, X):
        return mask(self.S.project(*x) for x in X)


def test_verify_examples():
    assert verify_situation(trivial_situation("Z2")).ok
    rep = verify_situation(Z2)
    assert rep.get("trefoil").status == PASS
    broken = load_situation("situations/broken-assoc.sit")
    assert verify_situation(broken).get("ex-associative").status == FAIL


def test_tau_laws_reported_separately():
    rep = verify_situation(load_situation("situations/broken-assoc.sit"))
    assert rep.get("tau-swap-outer").status == FAIL
    assert rep.get("tau-swap-inner").status == FAIL
    assert verify_situation(Z2).get("tau-swap-inner").status == PASS


def test_broken_trefoil_fixture():
    S = load_situation("situations/broken-trefoil.sit")
    rep = verify_situation(S)
    assert rep.get("trefoil").status == FAIL
    assert not jacobi_check(S).ok
    with pytest.raises(HypothesisError):
        as_implicative(S)


def test_cocycle_examples_verify():
    for S in (cocycle_situation("Z2", [0, 1], (1,)),
              cocycle_situation("Z3", [0, 1, 2], (0,), 3),
              cocycle_situation("Z2xZ2", None, (1,))):
        assert verify_situation(S).ok


def test_non_homomorphism_is_refused():
    with pytest.raises(SituationError):
        cocycle_situation("Z2xZ2", [0, 1, 2, 3], (1,), 4)


def test_project_arithmetic():
    assert Z2.ex_proj((0, 1), (0, 1)) == (1, 0)
    assert Z2.meas_proj((1, 0), (0, 0)) == 1
    for x in range(Z2.n_projects):
        assert Z2.project(*Z2.ex_proj((0, 0), x)) == x


def test_orthogonal_examples():
    assert Z2.orthogonal(0) == Z2.full
    allpole = cocycle_situation("Z2", [0, 1], (0, 1))
    assert allpole.orthogonal(mask([0, 3])) == allpole.full
    X = mask([Z2.project(0, 0)])
    assert Z2.show_set(Z2.orthogonal(X)) == "{1.0, 1.1}"


def test_z2_cocycle_has_ten_types():
    assert len(enumerate_types(Z2)) == 10


def test_trivial_situation_with_empty_pole():
    S = trivial_situation("Z2", ())
    types = enumerate_types(S)
    assert S.closure(0) in types and S.full in types
    assert types == [0, S.full]


def test_cap_is_enforced():
    with pytest.raises(CapExceeded):
        enumerate_types(Z2, cap=3)


SMALL = [
    Z2,
    trivial_situation("Z2"),
    cocycle_situation("Z3", [0, 1, 2], (0,), 3),
    cocycle_situation("Z2xZ2", None, (1,)),
    cocycle_situation("Z2", [0, 1], (), 2),
    cocycle_situation("Z2", [0, 2], (1, 2), 4),
]


@pytest.mark.parametrize("S", SMALL, ids=lambda S: S.name)
def test_types_match_brute_force(S):
    B = Brute(S)
    brute = {B.to_mask(X) for X in B.types()}
    assert set(enumerate_types(S)) == brute


@pytest.mark.parametrize("S", SMALL, ids=lambda S: S.name)
def test_connectives_match_brute_force(S):
    B = Brute(S)
    types = B.types()
    for X, Y in product(types, repeat=2):
        assert S.lolli(B.to_mask(X), B.to_mask(Y)) == B.to_mask(B.lolli(X, Y))
        assert S.tensor(B.to_mask(X), B.to_mask(Y)) == B.to_mask(B.tensor(X, Y))


@pytest.mark.parametrize("S", SMALL, ids=lambda S: S.name)
def test_closure_laws(S):
    assert closure_check(S, cap=12).ok
    assert type_report(S, enumerate_types(S)).ok


@pytest.mark.parametrize("S", SMALL, ids=lambda S: S.name)
def test_jacobi_matches_brute(S):
    B = Brute(S)
    holds = all(B.meas(B.ex(x, y), z) == B.meas(x, B.ex(y, z)) for x, y, z in product(B.projects, repeat=3))
    assert jacobi_check(S).ok == holds


def test_bridge_on_z2_cocycle():
    br = as_implicative(Z2)
    assert verify_implicative(br.structure).ok
    assert br.report.ok
    assert len(br.types) == 10
    assert len(br.report.checks) == 30


def test_bridge_on_trivial_situation():
    assert as_implicative(trivial_situation("Z2")).report.ok


def test_situation_without_id_is_refused():
    S = Situation(["e", "g"], [[0, 1], [1, 0]], [[0, 0], [0, 0]], 2, frozenset({1}), None, 0)
    with pytest.raises(HypothesisError):
        as_implicative(S)


def test_full_pole_makes_the_separator_inconsistent():
    S = cocycle_situation("Z2", [0, 1], (0, 1))
    br = as_implicative(S)
    assert br.types == [S.full]
    assert br.report.get("separator-consistent").status == FAIL


def test_empty_pole_is_consistent():
    br = as_implicative(cocycle_situation("Z2", [0, 1], ()))
    assert br.report.get("separator-consistent").status == PASS


def test_product_cocycles_are_homomorphisms():
    assert product_cocycles("Z2", 2) == [[0, 1]]
    # phi = [0, 2] is the only non-zero hom into Z/4 and its product m vanishes
    assert product_cocycles("Z2", 4) == []
    assert product_cocycles("Z3", 3) == [[0, 1, 2]]
    assert product_cocycles("Z3", 2) == []


def test_battery_size_and_hypotheses():
    situations = battery()
    assert len(situations) == 84
    assert len({S.name for S in situations}) == 84
    for S in situations:
        assert verify_situation(S).ok
        assert S.n_projects <= 16


@pytest.mark.parametrize("path", sorted((DATA_DIR / "situations").glob("*.sit")), ids=lambda p: p.stem)
def test_situation_files_round_trip(path):
    S = load_situation(path)
    T = parse_situation(print_situation(S), S.name)
    assert (T.programs, T.ex, T.m, T.k, T.pole, T.id, T.tau) == (S.programs, S.ex, S.m, S.k, S.pole, S.id, S.tau)


@given(st.integers(0, 2**8 - 1), st.integers(0, 2**8 - 1))
def test_orthogonal_is_antitone(X, Y):
    S = cocycle_situation("Z2xZ2", None, (1,))
    Xs, Ys = X & S.full, (X | Y) & S.full
    assert S.orthogonal(Ys) & ~S.orthogonal(Xs) == 0
    assert S.closure(Xs) & Xs == Xs
    assert members(Xs) == sorted(members(Xs))
