import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from linimp.fixtures import bool2, constant_top_records, random_structures
from linimp.formats import load_structure
from linimp.records import (
    additive_core,
    additive_suite,
    adjunction_check,
    compatible,
    demorgan_check,
    exponential_from_fixpoint_check,
    extract_table,
    fixpoint_bang,
    fixpoint_bang_table,
    fixpoint_report,
    fixpoint_trace,
    fixpoint_whynot,
    pair_of,
    verify_additive_separator,
    verify_record,
)
from linimp.report import FAIL
from linimp.structures import StructureError

import oracles

P3 = load_structure("fixtures/powerset3-records.lat")
DEGENERATE = load_structure("fixtures/bool2-toprecords.lat")


def named(A, *xs):
    return [A.lattice.id(x) for x in xs]


def test_verify_record_examples():
    A = bool2()
    assert verify_record([0, 1], A).ok
    assert verify_record([1, 1], A).ok
    assert verify_record([1, 0], A).get("empty-meet").status == FAIL


def test_extract_examples():
    A = bool2()
    assert extract_table([0, 1], A) == [0, 1]
    assert extract_table([1, 1], A) == [0, 0]


def test_compatibility_examples():
    A = bool2()
    ok, wit = compatible([0, 1], [0, 1], A)
    assert not ok and wit[1:] == (1, 0)
    assert compatible([1, 1], [1, 1], A) == (True, None)
    assert pair_of(P3).compatible() == (True, None)


def test_missing_record_label():
    with pytest.raises(StructureError):
        pair_of(bool2())


def test_with_and_oplus_examples():
    p = pair_of(P3)
    assert p.with_(P3.top, P3.top) == P3.top
    y, z = named(P3, "{y}", "{z}")
    assert p.with_(y, z) == P3.bottom
    assert p.oplus(y, z) == P3.bottom
    d = pair_of(DEGENERATE)
    assert all(d.with_(a, b) == DEGENERATE.top for a, b in product(DEGENERATE.elements, repeat=2))


@pytest.mark.parametrize("A", [P3, DEGENERATE], ids=lambda A: A.name)
def test_oplus_is_the_defining_meet(A):
    p = pair_of(A)
    imp, leq = A.imp, A.lattice.leq
    for a, b in product(A.elements, repeat=2):
        want = oracles.meet_all(leq, [imp[oracles.meet_brute(leq, p.l[imp[a][c]], p.r[imp[b][c]])][c]
                                      for c in A.elements])
        assert p.oplus(a, b) == want


@pytest.mark.parametrize("A", [P3, DEGENERATE], ids=lambda A: A.name)
def test_record_laws_on_shipped_fixtures(A):
    for table in A.records.values():
        assert verify_record(table, A).ok
        assert adjunction_check(table, A).ok
    assert demorgan_check(pair_of(A)).ok


def test_additive_laws_on_powerset_pair():
    p = pair_of(P3)
    core = additive_core(p).carrier
    assert sorted(P3.lattice.names[a] for a in core) == ["{xyz}", "{xy}", "{xz}", "{x}"]
    assert verify_additive_separator(core, p).ok
    assert additive_suite(P3, p).ok


def greatest_fixpoint(A, f):
    """Knaster-Tarski: join of all post-fixpoints."""
    post = [a for a in A.elements if A.le(a, f(a))]
    return oracles.meet_all([[A.le(b, a) for b in A.elements] for a in A.elements], post)


def least_fixpoint(A, f):
    pre = [a for a in A.elements if A.le(f(a), a)]
    return oracles.meet_all(A.lattice.leq, pre)


@pytest.mark.parametrize("A", [P3, DEGENERATE], ids=lambda A: A.name)
def test_fixpoints_match_knaster_tarski(A):
    from linimp.records import bang_step, whynot_step

    p = pair_of(A)
    for X in A.elements:
        assert fixpoint_bang(X, A) == greatest_fixpoint(A, bang_step(p, X))
        assert fixpoint_whynot(X, A) == least_fixpoint(A, whynot_step(p, X))


def test_powerset_fixpoint_tables():
    names = P3.lattice.names
    assert [names[v] for v in fixpoint_bang_table(P3)] == ["{z}", "{xyz}"] * 4
    assert [names[fixpoint_whynot(x, P3)] for x in P3.elements] == ["{}", "{x}"] * 4
    assert fixpoint_trace(0, pair_of(P3))[0] == P3.top
    assert fixpoint_report(P3).ok


def test_degenerate_pair_gives_constant_top_bang():
    assert fixpoint_bang_table(DEGENERATE) == [DEGENERATE.top] * 2
    rep = exponential_from_fixpoint_check(DEGENERATE, S={DEGENERATE.top})
    assert rep.get("fixpoint.contains-D").status == FAIL
    assert rep.get("identity-baseline.contains-D").status != FAIL


def test_powerset_fixpoint_exponential_verifies():
    assert exponential_from_fixpoint_check(P3).ok


def test_constant_top_records_helper():
    A = bool2()
    recs = constant_top_records(A)
    assert all(t == [A.top] * A.n or list(t) == [A.top] * A.n for t in recs.values())


@given(st.integers(0, 10**9))
def test_implication_rows_are_records(seed):
    # b |-> a -> b preserves all meets, so every row of the arrow is a record
    rng = random.Random(seed)
    (A,) = random_structures(seed, 1, 7)
    a = rng.choice(list(A.elements))
    table = [A.imp[a][b] for b in A.elements]
    assert verify_record(table, A).ok
    assert adjunction_check(table, A).ok


@given(st.integers(0, 10**9))
def test_verify_record_matches_brute_force(seed):
    rng = random.Random(seed)
    (A,) = random_structures(seed, 1, 6)
    table = [rng.choice(list(A.elements)) for _ in A.elements]
    leq = A.lattice.leq
    preserves = table[A.top] == A.top and all(
        table[oracles.meet_brute(leq, a, b)] == oracles.meet_brute(leq, table[a], table[b])
        for a, b in product(A.elements, repeat=2)
    )
    assert verify_record(table, A).ok == preserves
