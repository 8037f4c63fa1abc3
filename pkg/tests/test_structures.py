import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from linimp.combinators import EXPONENTIAL_BASES, base_term
from linimp.fixtures import (
    bool2,
    chain4,
    m2,
    named_fixtures,
    powerset3,
    random_lattice,
    random_structures,
)
from linimp.formats import load_lattice
from linimp.report import FAIL, PASS
from linimp.structures import (
    DepthLimitExceeded,
    FinLattice,
    ImpStructure,
    InterpretError,
    app_of_imp,
    check_typing,
    closed_form_value,
    combinator_value,
    combinator_value_check,
    imp_of_app,
    interpret,
    kleisli,
    monotony_check,
    reduction_soundness_check,
    roundtrip_check,
    typing_rule_suite,
    verify_applicative,
    verify_implicative,
    verify_lattice,
)
from linimp.syntax import parse_term as P

import oracles

FIXTURES = named_fixtures()


def status(report, name):
    return report.get(name).status


# -- lattices


@pytest.mark.parametrize("A", [bool2(), m2(), chain4(), powerset3()], ids=lambda A: A.name)
def test_fixture_lattices_verify(A):
    assert verify_lattice(A.lattice).ok


def test_broken_lattice_reports_missing_meet():
    L, _ = load_lattice("fixtures/broken.lat")
    rep = verify_lattice(L)
    assert status(rep, "binary-meets") == FAIL
    assert "witness" in rep.get("binary-meets").detail


@given(st.integers(0, 10**9))
def test_meet_and_join_tables_match_brute_force(seed):
    L = random_lattice(random.Random(seed), 8)
    for a, b in product(L.elements, repeat=2):
        assert L.meet_table[a][b] == oracles.meet_brute(L.leq, a, b)
        assert L.join_table[a][b] == oracles.join_brute(L.leq, a, b)


@given(st.integers(0, 10**9))
def test_random_lattices_are_complete(seed):
    L = random_lattice(random.Random(seed), 8)
    assert verify_lattice(L).ok
    assert L.n <= 8


# -- implicative and applicative axioms


def test_heyting_bool2_is_implicative():
    assert verify_implicative(bool2()).ok


def test_constant_bottom_arrow_fails_empty_meet():
    A = ImpStructure(bool2().lattice, [[0, 0], [0, 0]])
    assert status(verify_implicative(A), "empty-meet") == FAIL


@given(st.integers(0, 10**9))
def test_implicative_checks_match_brute_force(seed):
    rng = random.Random(seed)
    L = random_lattice(rng, 5)
    imp = [[rng.randrange(L.n) for _ in L.elements] for _ in L.elements]
    rep = verify_implicative(ImpStructure(L, imp))
    assert (status(rep, "variance") == PASS) == oracles.variance_brute(L.leq, imp)
    meets = all(
        imp[a][oracles.meet_brute(L.leq, b, c)] == oracles.meet_brute(L.leq, imp[a][b], imp[a][c])
        for a, b, c in product(L.elements, repeat=3)
    )
    assert (status(rep, "binary-meet") == PASS) == meets
    assert (status(rep, "empty-meet") == PASS) == all(imp[a][L.top] == L.top for a in L.elements)


def test_application_of_heyting_bool2():
    P_ = app_of_imp(bool2())
    assert P_.app(1, 1) == 1
    assert P_.app(1, 0) == 0
    assert P_.app(0, 0) == 0 and P_.app(0, 1) == 0


def test_imp_of_app_recovers_heyting_arrow():
    A = bool2()
    back = imp_of_app(app_of_imp(A))
    assert back.imp == A.imp
    assert back.imp[0][0] == 1 and back.imp[1][0] == 0


@pytest.mark.parametrize("A", FIXTURES, ids=lambda A: A.name)
def test_roundtrip_and_adjunction(A):
    assert roundtrip_check(A).ok
    assert verify_applicative(app_of_imp(A)).ok


def test_application_matches_defining_meet():
    for A in FIXTURES:
        P_ = app_of_imp(A)
        for a, b in product(A.elements, repeat=2):
            want = oracles.meet_all(A.lattice.leq, [c for c in A.elements if A.le(a, A.imp[b][c])])
            assert P_.app(a, b) == want


def test_broken_application_table_is_caught():
    A = bool2()
    P_ = app_of_imp(A)
    broken = type(P_)(A.lattice, [[0, 0], [1, 0]])
    assert not verify_applicative(broken).ok or not roundtrip_check(broken).ok


# -- interpretation


def test_interpret_examples():
    A = bool2()
    assert interpret(P(r"\x.x"), A) == 1
    assert interpret(P("#0"), A) == 0
    assert interpret(P(r"\x.\y.x"), A) == 1


def _brute_k(A):
    return oracles.meet_all(A.lattice.leq, [A.arrow(a, b, a) for a, b in product(A.elements, repeat=2)])


@pytest.mark.parametrize("A", FIXTURES, ids=lambda A: A.name)
def test_interpret_k_is_the_exhaustive_meet(A):
    assert interpret(P(r"\x.\y.x"), A) == _brute_k(A)


def test_combinator_value_examples():
    assert combinator_value("I", bool2()) == (1, 1, True)
    assert combinator_value("K!", bool2())[0] == 1
    value, closed, agree = combinator_value("D", bool2("top"))
    assert (value, closed, agree) == (0, 0, True)


@pytest.mark.parametrize("A", FIXTURES + random_structures(0, 20, 8), ids=lambda A: A.name)
def test_closed_forms_equal_interpretations(A):
    assert combinator_value_check(A).ok


def test_closed_form_d_brute():
    for A in FIXTURES:
        want = oracles.meet_all(A.lattice.leq, [A.imp[A.bang[a]][a] for a in A.elements])
        assert closed_form_value("D", A) == want


def test_check_typing_examples():
    A = bool2()
    for a in A.elements:
        assert check_typing([("x", a)], P("x"), a, A)
    assert check_typing([], P(r"\x.x"), A.imp[0][0], A)
    assert not check_typing([], P(r"\x.x"), A.imp[1][0], A)


def test_typing_rejects_unbound_variables():
    assert not check_typing([], P("y"), 1, bool2())


def test_interpret_requires_bang_table():
    with pytest.raises(InterpretError):
        interpret(P(r"\!x.x"), bool2(None))


def test_depth_cap_is_enforced():
    # the cap counts binders a body actually refers to
    wide = P(r"\a b c d e.a b c d e")
    with pytest.raises(DepthLimitExceeded):
        interpret(wide, bool2(), cap=3)
    assert interpret(wide, bool2(), cap=5) == 1
    assert interpret(P(r"\a b c d e f g h.a"), bool2(), cap=3) == 1


@pytest.mark.parametrize("A", FIXTURES, ids=lambda A: A.name)
def test_semantic_rules_and_monotony(A):
    assert typing_rule_suite(A).ok
    assert monotony_check(A).ok
    assert reduction_soundness_check(A).ok


# -- kleisli


def test_kleisli_identity_bang_keeps_arrow():
    A = bool2()
    assert kleisli(A).imp == A.imp


def test_kleisli_constant_top_bang():
    A = bool2("top")
    K = kleisli(A)
    assert K.imp == ((0, 1), (0, 1))
    assert verify_implicative(K).ok


def test_kleisli_m2_verifies():
    assert verify_implicative(kleisli(m2())).ok


def test_literal_promotion_template_needs_digging():
    # on chain-4 with a non-idempotent bang, promotion without delta is unsound
    A = chain4().with_bang([0, 0, 1, 2])
    rep = typing_rule_suite(A)
    literal = rep.get("bang.promotion-F-literal")
    assert literal.status == FAIL and "!a <= !!a fails" in literal.detail
    assert rep.get("bang.promotion-F-delta").status == PASS
