import random
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from linimp.combinators import base_term
from linimp.fixtures import bool2, m2, named_fixtures, random_structures
from linimp.report import FAIL
from linimp.separators import (
    SeparatorError,
    all_separators,
    core,
    deduction_check,
    deduction_suite,
    generate,
    intuitionistic_transfer_check,
    is_consistent,
    lambda_closure_check,
    minimality_check,
    verify,
)
from linimp.structures import app_of_imp, interpret

FIXTURES = named_fixtures()
GENERATORS = {"linear": ("I", "B", "C"), "intuitionistic": ("K", "S")}


def brute_separators(A, kind="linear"):
    """Every subset that is upward closed, application closed and holds the generators."""
    app = app_of_imp(A).app
    gens = {interpret(base_term(g), A) for g in GENERATORS[kind]}
    out = []
    for r in range(A.n + 1):
        for subset in combinations(A.elements, r):
            S = frozenset(subset)
            if not gens <= S:
                continue
            if any(A.le(a, b) and b not in S for a in S for b in A.elements):
                continue
            if any(app(a, b) not in S for a in S for b in S):
                continue
            out.append(S)
    return out


def brute_generate(X, A, kind="linear"):
    result = frozenset(A.elements)
    for S in brute_separators(A, kind):
        if set(X) <= S:
            result &= S
    return result


def test_verify_examples():
    A = bool2()
    assert verify({1}, A).ok
    assert verify({0, 1}, A).ok and not is_consistent({0, 1}, A)
    assert verify({0}, A).get("upward-closed").status == FAIL


def test_consistency_examples():
    A = bool2()
    assert is_consistent({1}, A)
    assert not is_consistent(set(A.elements), A)
    assert is_consistent(core(A), A)


def test_generate_examples():
    A = bool2()
    assert generate((), A).carrier == {1}
    assert generate((), A, "exponential").carrier == {1}
    for B in FIXTURES:
        assert generate({B.bottom}, B).carrier == set(B.elements)


def test_unknown_kind_is_refused():
    with pytest.raises(SeparatorError):
        generate((), bool2(), "classical")


def test_bang_kinds_need_a_bang_table():
    with pytest.raises(SeparatorError):
        generate((), bool2(None), "exponential")


@pytest.mark.parametrize("A", FIXTURES + random_structures(0, 8, 6), ids=lambda A: A.name)
def test_generate_is_the_least_separator(A):
    for a in A.elements:
        assert generate({a}, A).carrier == brute_generate({a}, A)
    assert generate((), A).carrier == brute_generate((), A)


@pytest.mark.parametrize("A", FIXTURES, ids=lambda A: A.name)
def test_all_separators_match_brute_force(A):
    assert sorted(map(sorted, all_separators(A))) == sorted(map(sorted, brute_separators(A)))


@pytest.mark.parametrize("A", [bool2(), m2()], ids=lambda A: A.name)
def test_generate_is_monotone_and_idempotent(A):
    subsets = [frozenset(c) for r in range(A.n + 1) for c in combinations(A.elements, r)]
    for X, Y in product(subsets, repeat=2):
        gx = generate(X, A).carrier
        assert generate(gx, A).carrier == gx
        if X <= Y:
            assert gx <= generate(Y, A).carrier
    for X in subsets:
        assert verify(generate(X, A).carrier, A).ok
        assert minimality_check(X, A).ok


@pytest.mark.parametrize("A", FIXTURES, ids=lambda A: A.name)
def test_intuitionistic_separators_are_linear(A):
    for S in brute_separators(A, "intuitionistic"):
        assert verify(S, A, "linear").ok


@pytest.mark.parametrize("A", FIXTURES, ids=lambda A: A.name)
def test_lambda_closure_of_core(A):
    assert lambda_closure_check(core(A), A, samples=100).ok


def test_swap_term_with_core_parameters():
    from linimp.syntax import parse_term

    A = m2()
    S = core(A).carrier
    for p in S:
        assert interpret(parse_term(r"\x.\y.y x"), A) in S
        assert interpret(parse_term(r"\y.y p"), A, {"p": p}) in S


def test_deduction_examples():
    A = bool2()
    assert deduction_check({1}, A, 1, 1)
    assert deduction_check({1}, A, 0, 0)


@pytest.mark.parametrize("A", FIXTURES, ids=lambda A: A.name)
def test_deduction_on_every_pair(A):
    assert deduction_suite(core(A), A).ok


@given(st.integers(0, 10**9))
def test_deduction_on_random_structures(seed):
    (A,) = random_structures(seed, 1, 6)
    S = generate({random.Random(seed).choice(list(A.elements))}, A).carrier
    assert deduction_suite(S, A).ok


@pytest.mark.parametrize("A", [bool2(), m2()], ids=lambda A: A.name)
def test_intuitionistic_transfer(A):
    assert intuitionistic_transfer_check(A, {A.top}).ok


def test_transfer_refused_for_constant_top_bang():
    A = bool2("top")
    rep = intuitionistic_transfer_check(A, {A.top})
    assert rep.get("precondition").status == FAIL
    assert rep.get("exponential.contains-D").status == FAIL
