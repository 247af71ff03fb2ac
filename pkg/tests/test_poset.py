import random

import pytest
from hypothesis import given, strategies as st

from posetclf.errors import CycleDetected, NonImmediateCover, NotACover, ValidationError
from posetclf.generators import random_poset
from posetclf.poset import TOP, build_poset, complete, make_antichain, make_chain, strip_top

seeds = st.integers(0, 2**32 - 1)


def test_chain_construction(c3):
    assert c3.leq(0, 2) and c3.leq(0, 1) and not c3.leq(2, 1)
    assert c3.greatest == 2


def test_diamond(diamond):
    assert diamond.greatest == 3
    assert not diamond.leq(1, 2) and not diamond.leq(2, 1)


def test_two_cycle_rejected():
    with pytest.raises(CycleDetected):
        build_poset([0, 1], [(0, 1), (1, 0)])


def test_longer_cycle_rejected():
    with pytest.raises(CycleDetected):
        build_poset("abc", [(0, 1), (1, 2), (2, 0)])


def test_transitive_edge_rejected():
    with pytest.raises(NonImmediateCover):
        build_poset([0, 1, 2], [(0, 1), (1, 2), (0, 2)])


@pytest.mark.parametrize("labels, edges", [
    ([], []),
    ([1, 1], []),
    ([0, 1], [(0, 5)]),
    ([0, 1], [(0, 1), (0, 1)]),
])
def test_malformed(labels, edges):
    with pytest.raises(ValidationError):
        build_poset(labels, edges)


def test_leq_chain(c3):
    assert c3.leq(1, 2)
    assert not c3.leq(2, 1)
    assert all(c3.leq(x, x) for x in range(3))


def test_index_validation(c3):
    with pytest.raises(IndexError):
        c3.leq(0, 3)


def test_upper_covers(c3, diamond):
    assert c3.upper_covers(0) == [1]
    assert c3.upper_covers(2) == []
    assert diamond.upper_covers(0) == [1, 2]


def test_q2_chain(c3):
    assert c3.q2(0, 1) == [1]


def test_q2_diamond(diamond):
    assert diamond.q2(0, 1) == [1]


def test_q2_five_elements():
    # 0<1, 0<2, 1<3, 2<3, e<3
    p = build_poset([0, 1, 2, 3, "e"], [(0, 1), (0, 2), (1, 3), (2, 3), (4, 3)])
    assert {p.elements[a] for a in p.q2(1, 3)} == {2, 3, "e"}


def test_q2_requires_cover(c3):
    with pytest.raises(NotACover):
        c3.q2(0, 2)


def test_reversed_chain(c3):
    r = c3.reversed()
    assert r.leq(2, 1) and r.leq(1, 0)
    assert r.greatest == 0


def test_reversed_diamond(diamond):
    r = diamond.reversed()
    assert r.greatest == 0
    assert r.least == 3


def test_reversed_without_unique_least():
    p = complete(make_antichain("rgb"))
    assert p.reversed().greatest is None


def test_make_chain_and_antichain():
    ch = make_chain(["low", "med", "high"])
    assert ch.leq(0, 2) and ch.greatest == 2
    ac = make_antichain(["r", "g", "b"])
    assert not any(ac.leq(a, b) for a in range(3) for b in range(3) if a != b)
    assert ac.greatest is None
    assert make_chain(["x"]).leq_table == make_antichain(["x"]).leq_table
    assert make_chain(["x"]).greatest == 0


def test_complete_and_strip():
    ac = make_antichain("rgb")
    done = complete(ac)
    assert done.elements[-1] == TOP and done.greatest == 3
    assert complete(done) == done
    assert strip_top(done) == ac
    assert complete(make_chain([0, 1, 2])) == make_chain([0, 1, 2])


def _brute_leq(p):
    """Reachability recomputed from the cover edges by Floyd-Warshall."""
    k = len(p)
    r = [[a == b for b in range(k)] for a in range(k)]
    for a, b in p.cover_edges:
        r[a][b] = True
    for m in range(k):
        for a in range(k):
            for b in range(k):
                r[a][b] = r[a][b] or (r[a][m] and r[m][b])
    return r


@given(seeds)
def test_partial_order_axioms(seed):
    p = random_poset(random.Random(seed), 8)
    t = p.leq_table
    k = len(p)
    assert t == _brute_leq(p)
    for a in range(k):
        assert t[a][a]
        for b in range(k):
            if a != b and t[a][b]:
                assert not t[b][a]
            for c in range(k):
                if t[a][b] and t[b][c]:
                    assert t[a][c]


@given(seeds)
def test_covers_match_definition(seed):
    p = random_poset(random.Random(seed), 8)
    k = len(p)
    for x in range(k):
        brute = [y for y in range(k) if p.lt(x, y) and not any(p.lt(x, c) and p.lt(c, y) for c in range(k))]
        assert p.upper_covers(x) == brute


@given(seeds)
def test_q2_matches_definition(seed):
    p = random_poset(random.Random(seed), 8)
    for x in range(len(p)):
        for y in p.upper_covers(x):
            brute = [a for a in range(len(p)) if not p.leq(a, x) and p.leq(a, y)]
            assert p.q2(x, y) == brute
            assert y in brute


@given(seeds)
def test_reversal_is_involution(seed):
    p = random_poset(random.Random(seed), 8)
    r = p.reversed()
    assert r.reversed() == p
    assert r.elements == p.elements
    assert all(r.leq(a, b) == p.leq(b, a) for a in range(len(p)) for b in range(len(p)))


@given(seeds)
def test_greatest_element(seed):
    p = random_poset(random.Random(seed), 8)
    k = len(p)
    tops = [g for g in range(k) if all(p.leq(y, g) for y in range(k))]
    assert p.greatest == (tops[0] if tops else None)
