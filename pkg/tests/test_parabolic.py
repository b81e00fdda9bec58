from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from oracles import CoxeterOracle
from tnncells.coxeter import weyl_group
from tnncells.errors import InvalidWordError
from tnncells.parabolic import (
    ParabolicContext, coset_factorize, longest_parabolic, max_coset_reps, min_coset_reps,
    parabolic, parabolic_elements,
)

CASES = [(name, J) for name in ["A2", "B2", "G2", "A3", "B3"]
         for k in range(len(weyl_group(name).index_set) + 1)
         for J in combinations(weyl_group(name).index_set, k)]


@pytest.mark.parametrize("name, J", CASES)
def test_cosets_against_oracle(name, J):
    ctx = parabolic(name, J)
    o = CoxeterOracle(name)
    W_J, minr, maxr = o.parabolic(J)
    words = lambda xs: sorted(o.words[g] for g in xs)
    assert sorted(w.word for w in ctx.W_J) == words(W_J)
    assert sorted(w.word for w in ctx.min_reps) == words(minr)
    assert sorted(w.word for w in ctx.max_reps) == words(maxr)
    assert len(ctx.min_reps) * len(ctx.W_J) == ctx.group.order()


@pytest.mark.parametrize("name, J", CASES)
def test_factorization_is_unique_and_additive(name, J):
    ctx = parabolic(name, J)
    seen = set()
    for w in ctx.group.elements():
        a, b = ctx.factorize(w)
        assert a * b == w and a.length + b.length == w.length
        assert ctx.is_min_rep(a) and ctx.in_W_J(b)
        seen.add((a, b))
    assert len(seen) == ctx.group.order()


@pytest.mark.parametrize("name, J", CASES)
def test_max_reps_are_min_reps_times_longest(name, J):
    ctx = parabolic(name, J)
    wJ = ctx.longest
    assert all(ctx.in_W_J(u) and u.length <= wJ.length for u in ctx.W_J)
    for a in ctx.min_reps:
        x = a * wJ
        assert x.length == a.length + wJ.length and ctx.is_max_rep(x)


def test_examples_a2():
    W = weyl_group("A2")
    ctx = parabolic("A2", (1,))
    assert [str(w) for w in ctx.W_J] == ["e", "s1"]
    assert [str(w) for w in ctx.min_reps] == ["e", "s2", "s1 s2"]
    assert [str(w) for w in ctx.max_reps] == ["s1", "s2 s1", "s1 s2 s1"]
    a, b = ctx.factorize(W.longest_element())
    assert (str(a), str(b)) == ("s1 s2", "s1")
    assert parabolic("A2", ()).longest == W.identity
    assert parabolic("A2", (1, 2)).longest == W.longest_element()


def test_functional_surface_and_caching():
    W = weyl_group("A3")
    ctx = parabolic("A3", (2, 1))
    assert ctx is parabolic(W.cartan, (1, 2))
    assert ctx.J == (1, 2)
    assert len(parabolic_elements(W, (1, 2))) == 6
    assert len(min_coset_reps("A3", (1, 2))) == 4
    assert len(max_coset_reps(ctx)) == 4
    assert longest_parabolic(ctx) == W.from_word((1, 2, 1))
    assert coset_factorize(W.longest_element(), ctx) == ctx.factorize(W.longest_element())


def test_rejects_indices_outside_the_diagram():
    with pytest.raises(InvalidWordError):
        ParabolicContext(weyl_group("A2"), (3,))
    with pytest.raises(InvalidWordError):
        parabolic("A2", (0,))


@given(st.sampled_from(CASES), st.lists(st.integers(1, 3), max_size=10))
def test_factorize_matches_descent_characterization(case, word):
    name, J = case
    ctx = parabolic(name, J)
    w = ctx.group.from_word(i for i in word if i <= ctx.group.rank)
    a, b = ctx.factorize(w)
    # a is the unique shortest element of the coset w W_J
    assert min((w * u for u in ctx.W_J), key=lambda x: x.length) == a
