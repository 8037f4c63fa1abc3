from itertools import product

import pytest
from hypothesis import given, strategies as st

from linimp import terms as T
from linimp.fixtures import bool2, m2, named_fixtures, random_structures
from linimp.sequent import (
    ONE,
    InvalidProof,
    Par,
    Proof,
    check_proof,
    corpus_paths,
    extract,
    interpret_formula,
    is_imell,
    load_proof,
    parse_formula,
    parse_proof,
    parse_sequent,
    print_proof,
    show_formula,
    soundness_check,
    target_core,
)
from linimp.syntax import ParseError, parse_term as P

import oracles

CORPUS = {p.stem: load_proof(p) for p in corpus_paths()}


def proof(text):
    return parse_proof(text)


def test_axiom_is_valid():
    assert check_proof(proof('(ax "[A] |- A")'))


def test_tensor_right_is_valid():
    assert check_proof(proof('(tensorR "[A, B] |- A * B" (ax "[A] |- A") (ax "[B] |- B"))'))


def test_tensor_right_with_overlapping_contexts_is_invalid():
    res = check_proof(proof('(tensorR "[A] |- A * A" (ax "[A] |- A") (ax "[A] |- A"))'))
    assert not res
    assert res.path == ()


def test_failing_node_path_points_below_root():
    bad = proof('(lolliR "[] |- A * B -o A * B" (tensorL "[A * B] |- A * B" (ax "[A, B] |- A * B")))')
    res = check_proof(bad)
    assert not res and res.path == (0, 0)
    with pytest.raises(InvalidProof):
        extract(bad)


def test_promotion_needs_banged_context():
    assert not check_proof(proof('(!R "[A] |- !A" (ax "[A] |- A"))'))
    assert check_proof(proof('(!R "[!A] |- !A" (!dL "[!A] |- A" (ax "[A] |- A")))'))


def test_extract_identity():
    t = extract(proof('(lolliR "[] |- A -o A" (ax "[A] |- A"))'))
    assert T.alpha_equal(t, P(r"\x.x"))


def test_extract_tensor_right_template():
    t = extract(proof('(tensorR "[A, B] |- A * B" (ax "[A] |- A") (ax "[B] |- B"))'), ["x", "y"])
    assert T.alpha_equal(t, P(r"\z.z x y"))


def test_extract_tensor_commutation():
    t = extract(CORPUS["tensor-comm"])
    assert oracles.beta_eq(t, P(r"\x.x (\a b y.y b a)"))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_extraction_is_linear(name):
    p = CORPUS[name]
    assert check_proof(p)
    t = extract(p)
    assert (T.is_linear_bang(t) if is_imell(p) else T.is_linear(t))
    assert not T.free_variables(t)


def test_corpus_has_fifty_proofs():
    assert len(CORPUS) >= 50


def test_dereliction_needs_the_exponential_core():
    assert target_core(CORPUS["dereliction"]) == "exponential"
    assert target_core(CORPUS["tensor-comm"]) == "linear"
    assert target_core(CORPUS["weakening"]) == "elementary"


def test_interpret_formula_examples():
    A = bool2()
    assert interpret_formula(parse_formula("X -o X"), {"X": 0}, A) == 1
    assert interpret_formula(parse_formula("X * X"), {"X": 1}, A) == 1
    assert interpret_formula(ONE, {}, A) == 1


@pytest.mark.parametrize("A", named_fixtures(), ids=lambda A: A.name)
def test_connectives_match_their_defining_meets(A):
    leq, imp = A.lattice.leq, A.imp
    for a, b in product(A.elements, repeat=2):
        tensor = oracles.meet_all(leq, [imp[imp[a][imp[b][c]]][c] for c in A.elements])
        par = oracles.meet_all(leq, [imp[imp[a][c]][imp[imp[b][c]][c]] for c in A.elements])
        val = {"a": a, "b": b}
        assert interpret_formula(parse_formula("a * b"), val, A) == tensor
        assert interpret_formula(Par(parse_formula("a"), parse_formula("b")), val, A) == par


def test_formula_printing_round_trips():
    for text in ["A -o B -o C", "(A -o B) -o C", "!A * B", "!(A * B) -o C", "A | B -o C"]:
        f = parse_formula(text)
        assert parse_formula(show_formula(f)) == f


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_proof_files_round_trip(name):
    p = CORPUS[name]
    assert parse_proof(print_proof(p)) == p


def test_proof_parse_errors_have_positions():
    with pytest.raises(ParseError) as err:
        parse_proof('(ax "[A] |- A"\n  (bogus "[] |- A"))')
    assert "2:" in str(err.value)
    with pytest.raises(ParseError):
        parse_sequent("[A, ] |- A")


@pytest.mark.parametrize("name", ["identity", "tensor-comm"])
@pytest.mark.parametrize("A", [bool2(), m2()], ids=lambda A: A.name)
def test_soundness_examples(name, A):
    assert soundness_check(CORPUS[name], A).ok


@given(st.integers(0, 10**9), st.sampled_from(sorted(CORPUS)))
def test_soundness_on_random_structures(seed, name):
    (A,) = random_structures(seed, 1, 6)
    assert soundness_check(CORPUS[name], A).ok
