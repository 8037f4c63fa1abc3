import random

import pytest
from hypothesis import given, strategies as st

from linimp import terms as T
from linimp.generators import random_linear_term
from linimp.syntax import ParseError, parse_term as P

import oracles


def test_free_variables():
    assert T.free_variables(P(r"\x.x y z")) == {"y", "z"}
    assert T.free_variables(P(r"\x.\y.x y")) == frozenset()
    assert T.free_variables(P(r"\!x.x u")) == {"u"}


@pytest.mark.parametrize("src, linear", [
    (r"\x.x", True),
    (r"\x.\y.x", False),
    (r"\x.\y.(x y) y", False),
    (r"\x.\y.\z.x (y z)", True),
    (r"\x.\y.y x", True),
])
def test_is_linear(src, linear):
    assert bool(T.is_linear(P(src))) is linear


def test_is_linear_reports_the_offending_binder():
    diag = T.is_linear(P(r"\x.\y.x")).diagnostics
    assert any("y" in d and "0" in d for d in diag)


def test_is_linear_refuses_bang_terms():
    with pytest.raises(T.NotPlainLambda):
        T.is_linear(P(r"\!x.x"))


@pytest.mark.parametrize("src, ok", [
    (r"\!x.x", True),
    (r"\x.!x", False),
    (r"\x.\!y.x !y !y", True),
    (r"\!x.\!y.!(x y)", True),
    (r"\!x.!!x", True),
    (r"\x.\!y.x", True),
])
def test_is_linear_bang(src, ok):
    assert bool(T.is_linear_bang(P(src))) is ok


def test_substitution_avoids_capture():
    out = T.substitute(P(r"\y.x y"), "x", P("y"))
    assert T.alpha_equal(out, P(r"\w.y w"))
    assert out.binder != "y"


@pytest.mark.parametrize("src, nf", [
    (r"(\!x.x) !u", "u"),
    (r"<<>; l = u>.l", "u"),
    (r"<<<>; l = a>; l = b>.l", "b"),
    (r"<<<>; l = a>; r = b>.l", "a"),
    (r"(\x.\y.y x) a b", "b a"),
])
def test_reductions(src, nf):
    assert T.alpha_equal(T.normalize(P(src)), P(nf))


def test_normal_form_has_no_redex():
    t = T.normalize(P(r"(\x.\y.x y) (\z.z) w"))
    assert T.find_redex(t) is None
    assert T.reduce_step(t) is T.NormalForm


def test_fuel_exhaustion_is_an_error():
    omega = P(r"(\x.x x) (\x.x x)")
    with pytest.raises(T.FuelExhausted):
        T.normalize(omega, fuel=50)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        P(r"\x.(x")
    assert ":" in str(err.value)


@given(st.integers(0, 10**9), st.integers(3, 30))
def test_normaliser_agrees_with_naive_oracle(seed, size):
    t = random_linear_term(random.Random(seed), size)
    expected = oracles.nameless(oracles.normalise(oracles.from_term(t)))
    got = oracles.nameless(oracles.from_term(T.normalize(t)))
    assert got == expected


@given(st.integers(0, 10**9))
def test_print_parse_round_trip(seed):
    t = random_linear_term(random.Random(seed), 25)
    assert P(T.show(t)) == t


@given(st.integers(0, 10**9))
def test_linear_terms_stay_linear_under_reduction(seed):
    t = random_linear_term(random.Random(seed), 25)
    assert T.is_linear(t)
    while (s := T.reduce_step(t)) is not T.NormalForm:
        t = s
        assert T.is_linear(t)


@given(st.integers(0, 10**9))
def test_substitution_lemma(seed):
    # M[x:=N][y:=L] = M[y:=L][x:=N[y:=L]] when x not in fv(L)
    rng = random.Random(seed)
    M = random_linear_term(rng, 12, free=["x", "y"])
    N = random_linear_term(rng, 8, free=["y"])
    L = random_linear_term(rng, 8)
    lhs = T.substitute(T.substitute(M, "x", N), "y", L)
    rhs = T.substitute(T.substitute(M, "y", L), "x", T.substitute(N, "y", L))
    assert T.alpha_equal(lhs, rhs)


@given(st.integers(0, 10**9))
def test_linear_normalisation_fits_quadratic_fuel(seed):
    t = random_linear_term(random.Random(seed), 30)
    assert T.count_steps(t, fuel=10 * T.size(t) ** 2) <= 10 * T.size(t) ** 2
