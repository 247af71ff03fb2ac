"""Seeded random posets, product spaces and instances for oracle checks."""

from __future__ import annotations

import random

from .poset import Poset, build_poset, complete, make_antichain, make_chain
from .product import ProductSpace

FACTOR_KINDS = ("chain", "antichain", "diamond", "random")


def random_poset(rng: random.Random, max_size: int = 4) -> Poset:
    """Random poset on ``1..max_size`` elements from a random DAG, reduced to its covers."""
    k = rng.randint(1, max_size)
    order = list(range(k))
    rng.shuffle(order)
    rank = {v: i for i, v in enumerate(order)}
    rel = {(a, b) for a in range(k) for b in range(k) if rank[a] < rank[b] and rng.random() < 0.5}
    # transitive closure, then keep only immediate pairs
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    covers = [(a, b) for a, b in rel if not any((a, c) in rel and (c, b) in rel for c in range(k))]
    return build_poset(list(range(k)), covers)


def random_factor(rng: random.Random, max_size: int = 4, kinds=FACTOR_KINDS) -> Poset:
    """A factor with a greatest element and at most ``max_size`` elements."""
    kind = rng.choice(kinds)
    if kind == "chain":
        return make_chain(list(range(rng.randint(1, max_size))))
    if kind == "antichain":
        return complete(make_antichain(list(range(rng.randint(1, max(1, max_size - 1))))))
    if kind == "diamond" and max_size >= 4:
        return build_poset(["bot", "a", "b", "top"], [(0, 1), (0, 2), (1, 3), (2, 3)])
    if kind == "diamond":
        return make_chain(list(range(max_size)))
    p = random_poset(rng, max(1, max_size - 1))
    return complete(p)


def random_space(rng: random.Random, max_factors: int = 4, max_size: int = 4, kinds=FACTOR_KINDS) -> ProductSpace:
    n = rng.randint(1, max_factors)
    return ProductSpace(tuple(random_factor(rng, max_size, kinds) for _ in range(n)))


def random_element(rng: random.Random, sp: ProductSpace):
    return tuple(rng.randrange(len(p)) for p in sp.factors)


def random_instance(rng: random.Random, max_factors: int = 4, max_size: int = 4, max_rows: int = 12, kinds=FACTOR_KINDS):
    sp = random_space(rng, max_factors, max_size, kinds)
    rows = [random_element(rng, sp) for _ in range(rng.randint(0, max_rows))]
    return sp, rows
