import random
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from linimp import terms as T
from linimp.combinators import (
    EXPONENTIAL_BASES,
    FamilyIndexError,
    LINEAR_BASES,
    NonLinearInput,
    Permutation,
    abstract_exponential,
    abstract_linear,
    abstract_multi,
    all_permutations,
    base_term,
    bases_used,
    capp,
    comb_free_vars,
    family,
    is_linear_combinatory,
    perm_term,
    perm_to_comb,
    show_comb,
    to_term,
    B,
    CApp,
    Comb,
    CVar,
)
from linimp.generators import random_linear_term
from linimp.syntax import parse_term as P

import oracles


def test_base_terms():
    assert T.show(base_term("I")) == r"\x.x"
    assert T.alpha_equal(base_term("C"), P(r"\a b c.a c b"))
    assert T.show(base_term("F")) == r"\!x.\!y.!(x y)"


def test_perm_term_of_three_cycle():
    sigma = Permutation.from_cycles((1, 2, 3))
    assert T.alpha_equal(perm_term(sigma), P(r"\x y1 y2 y3.x y3 y1 y2"))


def test_transposition_is_c():
    assert show_comb(perm_to_comb(Permutation.from_cycles((1, 2)))) == "C"


def _perm_oracle(images):
    """Build lambda x y1..yn. x y_{inv(1)} .. y_{inv(n)} straight from images."""
    n = len(images)
    inv = {v: i for i, v in enumerate(images, start=1)}
    args = " ".join(f"y{inv[j]}" for j in range(1, n + 1))
    binders = " ".join(f"y{j}" for j in range(1, n + 1))
    return P(rf"\x {binders}.x {args}") if n else P(r"\x.x")


@pytest.mark.parametrize("images", list(permutations(range(1, 5))))
def test_perm_to_comb_reduces_to_its_permutation(images):
    sigma = Permutation(images)
    word = perm_to_comb(sigma)
    assert bases_used(word) <= set(LINEAR_BASES)
    target = _perm_oracle(images[: sigma.degree])
    assert oracles.beta_eq(to_term(word), target)


def test_b_composition_over_s3():
    perms = all_permutations(3)
    for s in perms:
        for t in perms:
            word = capp(B, perm_to_comb(s), perm_to_comb(t))
            n = max(s.degree, t.degree)
            target = _perm_oracle(t.compose(s).images + tuple(range(t.compose(s).degree + 1, n + 1)))
            assert oracles.beta_eq(to_term(word), target), (str(s), str(t))


def test_compose_is_function_composition():
    s, t = Permutation.from_cycles((1, 2)), Permutation.from_cycles((2, 3))
    st_ = s.compose(t)
    assert [st_(i) for i in (1, 2, 3)] == [s(t(i)) for i in (1, 2, 3)]


FAMILY_TARGETS = {
    ("I_n", 1): r"\x1.x1",
    ("I_n", 3): r"\x1 x2 x3.x1 x2 x3",
    ("B_n", 2): r"\x1 x2 y z.x1 x2 (y z)",
    ("C_n", 2): r"\x1 x2 y z.x1 x2 z y",
    ("A_kn", 1, 2): r"\x y z1 z2.x z1 (y z2)",
    ("B_kn", 2, 4): r"\x y1 y2 y3 y4.x y1 (y2 y3 y4)",
}

# C_lk targets the cycle (k+1 k ... l); images of that cycle written out by hand.
CYCLE_IMAGES = {
    (1, 1): (2, 1),
    (1, 3): (4, 1, 2, 3),
    (2, 3): (1, 4, 2, 3),
    (3, 3): (1, 2, 4, 3),
    (2, 4): (1, 5, 2, 3, 4),
}


@pytest.mark.parametrize("key", list(FAMILY_TARGETS))
def test_family_normal_forms(key):
    word = family(key[0], *key[1:])
    assert oracles.beta_eq(to_term(word), P(FAMILY_TARGETS[key]))


@pytest.mark.parametrize("lk", list(CYCLE_IMAGES))
def test_c_lk_normal_forms(lk):
    assert oracles.beta_eq(to_term(family("C_lk", *lk)), _perm_oracle(CYCLE_IMAGES[lk]))


def test_family_indices_are_validated():
    with pytest.raises(FamilyIndexError):
        family("B_kn", 3, 2)
    with pytest.raises(FamilyIndexError):
        family("Q_n", 1)


def test_abstract_multi_single_variable_is_identity():
    assert show_comb(abstract_multi(P("x"), ["x"])) == "I"


def test_abstract_composition_is_b():
    assert show_comb(abstract_linear(P(r"\x.\y.\z.x (y z)"))) == "B"


def test_abstract_linear_rejects_non_linear_terms():
    with pytest.raises(NonLinearInput):
        abstract_linear(P(r"\x.\y.x"))


@pytest.mark.parametrize("name", EXPONENTIAL_BASES)
def test_abstract_exponential_round_trips_base_terms(name):
    word = abstract_exponential(base_term(name))
    assert T.normal_key(to_term(word)) == T.normal_key(base_term(name))


@pytest.mark.parametrize("src, expected", [
    (r"\!x.x", "D"),
    (r"\x.\!y.x", "K!"),
    (r"\!x.!!x", "δ"),
])
def test_abstract_exponential_named_examples(src, expected):
    assert show_comb(abstract_exponential(P(src))) == expected


@given(st.integers(0, 10**9), st.integers(1, 30))
def test_bracket_abstraction_is_complete(seed, size):
    t = random_linear_term(random.Random(seed), size)
    c = abstract_linear(t)
    assert is_linear_combinatory(c)
    assert bases_used(c) <= set(LINEAR_BASES)
    assert not comb_free_vars(c)
    assert oracles.beta_eq(to_term(c), t)


@st.composite
def linear_combinatory_terms(draw):
    """Random application trees where each variable appears exactly once."""
    names = draw(st.lists(st.sampled_from("uvwxyz"), min_size=1, max_size=4, unique=True))
    leaves = [CVar(v) for v in names]
    leaves += draw(st.lists(st.sampled_from([Comb(b) for b in LINEAR_BASES]), max_size=3))
    leaves = draw(st.permutations(leaves))
    while len(leaves) > 1:
        i = draw(st.integers(0, len(leaves) - 2))
        leaves[i:i + 2] = [CApp(leaves[i], leaves[i + 1])]
    order = draw(st.permutations(names))
    return leaves[0], list(order)


def test_abstract_multi_examples():
    xy = CApp(CVar("x"), CVar("y"))
    assert oracles.beta_eq(to_term(abstract_multi(xy, ["x", "y"])), P(r"\x y.x y"))
    assert oracles.beta_eq(to_term(abstract_multi(xy, ["y", "x"])), P(r"\y x.x y"))


@given(linear_combinatory_terms())
def test_abstract_multi_normalises_to_the_abstraction(case):
    body, names = case
    c = abstract_multi(body, names)
    assert is_linear_combinatory(c)
    assert not comb_free_vars(c)
    assert oracles.beta_eq(to_term(c), T.lams(names, to_term(body)))
