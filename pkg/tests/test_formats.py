import random

import pytest
from hypothesis import given, strategies as st

from linimp.fixtures import random_structures
from linimp.formats import DATA_DIR, load_lattice, parse_lattice, print_lattice
from linimp.linreal import parse_situation
from linimp.sequent import load_proof, parse_proof, print_proof
from linimp.structures import heyting_arrow
from linimp.syntax import ParseError

LATTICES = sorted((DATA_DIR / "fixtures").glob("*.lat"))


def _same(L1, A1, L2, A2):
    assert L1.names == L2.names and L1.leq == L2.leq
    assert (A1 is None) == (A2 is None)
    if A1 is not None:
        assert A1.imp == A2.imp and A1.bang == A2.bang and A1.records == A2.records


@pytest.mark.parametrize("path", LATTICES, ids=lambda p: p.name)
def test_lattice_files_round_trip(path):
    L, A = load_lattice(path)
    L2, A2 = parse_lattice(print_lattice(L, A))
    _same(L, A, L2, A2)


@pytest.mark.parametrize("path", sorted((DATA_DIR / "proofs").glob("*.proof")), ids=lambda p: p.stem)
def test_proof_files_round_trip(path):
    p = load_proof(path)
    assert parse_proof(print_proof(p)) == p


@given(st.integers(0, 10**9))
def test_random_structures_round_trip(seed):
    (A,) = random_structures(seed, 1, 8)
    L2, A2 = parse_lattice(print_lattice(A.lattice, A))
    _same(A.lattice, A, L2, A2)


def test_heyting_keyword_derives_the_arrow():
    L, A = parse_lattice("elements: 0 a b 1\nleq: 0<=a 0<=b a<=1 b<=1\nimp: heyting\n")
    assert A.imp == heyting_arrow(L)


def test_leq_is_closed_reflexively_and_transitively():
    L, _ = parse_lattice("elements: a b c\nleq: a<=b b<=c\n")
    assert L.le(0, 2) and L.le(1, 1) and not L.le(2, 0)


@pytest.mark.parametrize("text, line", [
    ("elements: a b\nleq: a<b\n", 2),
    ("elements: a b\nleq: a<=c\n", 2),
    ("elements: a b\nfrobnicate: 1\n", 2),
    ("elements: a a\n", 1),
    ("elements: a b\nleq: a<=b\nimp: a b c\n", 3),
])
def test_lattice_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_lattice(text)
    assert err.value.line == line


def test_incomplete_implication_table_is_rejected():
    with pytest.raises(ParseError):
        parse_lattice("elements: a b\nleq: a<=b\nimp: a a -> b\n")


@pytest.mark.parametrize("text", [
    "theta: Z2\nprograms: e\nex: e e -> e\n",
    "theta: Z/2\nprograms: e g\nex: e e -> e\n",
    "theta: Z/2\nprograms: e\nex: e e -> x\n",
    "programs: e\nex: e e -> e\n",
])
def test_situation_parse_errors(text):
    with pytest.raises(ParseError):
        parse_situation(text)
