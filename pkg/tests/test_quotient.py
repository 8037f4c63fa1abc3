from itertools import product

import pytest
from hypothesis import given, strategies as st

from linimp import terms as T
from linimp.fixtures import bool2, m2, named_fixtures, random_structures
from linimp.quotient import WITNESSES, build_quotient, entails, residuated_suite
from linimp.separators import core, generate


def brute_classes(A, S):
    S = set(S)
    rel = lambda a, b: A.imp[a][b] in S  # noqa: E731
    seen, classes = set(), []
    for a in A.elements:
        if a not in seen:
            cls = tuple(b for b in A.elements if rel(a, b) and rel(b, a))
            seen |= set(cls)
            classes.append(cls)
    return classes


def test_entailment_examples():
    A = bool2()
    ent = entails(A, {1})
    assert ent(0, 1) and ent(1, 1) and not ent(1, 0)


def test_bool2_quotient_keeps_both_classes():
    A = bool2()
    Q = build_quotient(A, {1})
    assert Q.size == 2
    assert Q.entail == [[True, True], [False, True]]
    assert Q.report.ok


@pytest.mark.parametrize("A", named_fixtures(), ids=lambda A: A.name)
def test_full_carrier_collapses_to_one_class(A):
    Q = build_quotient(A, set(A.elements))
    assert Q.size == 1 and Q.report.ok


def test_m2_core_quotient():
    A = m2()
    Q = build_quotient(A, core(A).carrier)
    assert Q.report.ok
    assert Q.classes == brute_classes(A, core(A).carrier)
    assert residuated_suite(Q).ok


def test_witnesses_are_linear():
    for name, term in WITNESSES.items():
        assert T.is_linear(term), name


def _pairs(A):
    seen = []
    for a in A.elements:
        S = generate({a}, A).carrier
        if S not in seen:
            seen.append(S)
    return seen


@pytest.mark.parametrize("A", named_fixtures(), ids=lambda A: A.name)
def test_laws_on_every_generated_separator(A):
    for S in _pairs(A):
        Q = build_quotient(A, S)
        assert Q.classes == brute_classes(A, S)
        assert Q.report.ok
        laws = residuated_suite(Q)
        assert laws.ok, [c for c in laws.failures()]


@given(st.integers(0, 10**9))
def test_laws_on_random_structures(seed):
    (A,) = random_structures(seed, 1, 7)
    for S in _pairs(A):
        Q = build_quotient(A, S)
        assert Q.report.ok
        assert residuated_suite(Q).ok


def test_operations_do_not_depend_on_representatives():
    A = m2()
    S = core(A).carrier
    Q = build_quotient(A, S)
    for a, b in product(A.elements, repeat=2):
        x, y = Q.class_of[a], Q.class_of[b]
        assert Q.class_of[A.imp[a][b]] == Q.class_imp[x][y]
        assert Q.class_of[A.tensor(a, b)] == Q.class_tensor[x][y]


def test_joins_reported_when_present():
    Q = build_quotient(bool2(), {1})
    assert Q.join(0, 1) == 1
    assert "all binary joins exist" in residuated_suite(Q).get("joins").detail
