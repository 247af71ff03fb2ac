import random

import pytest
from hypothesis import given, settings, strategies as st

from posetclf.errors import DimensionMismatch, SpaceTooLarge
from posetclf.generators import random_element, random_space
from posetclf.poset import make_chain
from posetclf.product import (
    ProductSpace,
    brute_force_max_independent,
    brute_force_min_independent,
    downward_closure,
    is_antichain,
    maximal,
    minimal,
    product_leq,
    upward_closure,
)

seeds = st.integers(0, 2**32 - 1)


def test_componentwise_order(c3x3, cube2):
    assert product_leq(c3x3, (0, 1), (1, 1))
    assert not product_leq(c3x3, (1, 0), (0, 1)) and not product_leq(c3x3, (0, 1), (1, 0))
    assert product_leq(c3x3, (2, 1), (2, 1))
    assert all(product_leq(cube2, (0, 0), x) for x in cube2.elements())


def test_dimension_mismatch(c3x3):
    with pytest.raises(DimensionMismatch):
        product_leq(c3x3, (0,), (1, 1))


def test_upward_closure_examples(cube2, c3x3):
    assert upward_closure(cube2, [(1, 0), (0, 1)]) == {(1, 0), (0, 1), (1, 1)}
    assert upward_closure(cube2, []) == set()
    assert upward_closure(c3x3, [(1, 1)]) == {(1, 1), (1, 2), (2, 1), (2, 2)}


def test_downward_closure_example(c3x3):
    assert downward_closure(c3x3, [(1, 1)]) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_oracle_bound():
    big = ProductSpace((make_chain(range(10)),) * 7)
    with pytest.raises(SpaceTooLarge):
        upward_closure(big, [(0,) * 7])
    with pytest.raises(SpaceTooLarge):
        brute_force_max_independent(big, [])


def test_max_independent_examples(cube2, c3x3):
    assert brute_force_max_independent(cube2, [(1, 0), (0, 1)]) == [(0, 0)]
    assert brute_force_max_independent(c3x3, [(1, 1)]) == [(0, 2), (2, 0)]
    assert brute_force_max_independent(c3x3, [(2, 0), (0, 2)]) == [(1, 1)]
    assert brute_force_max_independent(c3x3, []) == [(2, 2)]


def test_min_independent_example(c3x3):
    assert brute_force_min_independent(c3x3, [(1, 1)]) == [(0, 2), (2, 0)]
    assert brute_force_min_independent(c3x3, [(0, 2), (2, 0)]) == [(1, 1)]


def test_literal_duality_statement_fails(cube2):
    # I(R-) = {} but I({}+) = {(1,1)} differs from I(R+)
    R = [(1, 1)]
    q = brute_force_min_independent(cube2, R)
    assert q == []
    assert brute_force_max_independent(cube2, q) != brute_force_max_independent(cube2, R)


def _instance(seed):
    rng = random.Random(seed)
    sp = random_space(rng)
    R = [random_element(rng, sp) for _ in range(rng.randint(0, 12))]
    return sp, R


@given(seeds)
def test_independent_sets_are_antichains(seed):
    sp, R = _instance(seed)
    up = brute_force_max_independent(sp, R)
    down = brute_force_min_independent(sp, R)
    assert is_antichain(sp, up) and is_antichain(sp, down)
    assert up == sorted(up)


@given(seeds)
def test_max_independent_dominates_complement(seed):
    sp, R = _instance(seed)
    closed = upward_closure(sp, R)
    top = brute_force_max_independent(sp, R)
    assert not set(top) & closed
    for x in sp.elements():
        if x not in closed:
            assert any(sp.leq(x, y) for y in top)


@settings(max_examples=150)
@given(seeds)
def test_duality_involution(seed):
    sp, R = _instance(seed)
    assert brute_force_min_independent(sp, brute_force_max_independent(sp, R)) == minimal(sp, R)
    assert brute_force_max_independent(sp, brute_force_min_independent(sp, R)) == maximal(sp, R)
