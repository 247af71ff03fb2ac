"""Products of finite posets and exhaustive reference computations.

The brute-force routines scan the whole product and exist to validate the
dualization enumerator, so they refuse spaces above ``ORACLE_BOUND``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NoGreatestElement, SpaceTooLarge, ValidationError
from .poset import Poset

ORACLE_BOUND = 10**6

Element = tuple[int, ...]


@dataclass(frozen=True)
class ProductSpace:
    factors: tuple[Poset, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValidationError("a product space needs at least one factor")

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> int:
        return math.prod(len(p) for p in self.factors)

    def check(self, x: Sequence[int]) -> Element:
        if len(x) != self.n:
            raise DimensionMismatch(f"element {tuple(x)} has {len(x)} components, space has {self.n}")
        for i, (v, p) in enumerate(zip(x, self.factors)):
            if not 0 <= v < len(p):
                raise ValidationError(f"component {i} of {tuple(x)} out of range")
        return tuple(x)

    def leq(self, x: Sequence[int], y: Sequence[int]) -> bool:
        self.check(x)
        self.check(y)
        return all(p.up_mask(a) >> b & 1 for p, a, b in zip(self.factors, x, y))

    def lt(self, x, y) -> bool:
        return tuple(x) != tuple(y) and self.leq(x, y)

    def greatest(self) -> Element:
        tops = tuple(p.greatest for p in self.factors)
        if None in tops:
            raise NoGreatestElement(f"factor {tops.index(None)} has no greatest element")
        return tops

    def reversed(self) -> "ProductSpace":
        return ProductSpace(tuple(p.reversed() for p in self.factors))

    def labels(self, x: Sequence[int]) -> tuple:
        return tuple(p.elements[v] for p, v in zip(self.factors, x))

    def elements(self, bound: int | None = ORACLE_BOUND) -> Iterable[Element]:
        if bound is not None and self.size > bound:
            raise SpaceTooLarge(f"product has {self.size} elements, oracle bound is {bound}")
        return itertools.product(*(range(len(p)) for p in self.factors))


def product_leq(sp: ProductSpace, x, y) -> bool:
    return sp.leq(x, y)


def _fast_leq(factors, x, y):
    return all(p.up_mask(a) >> b & 1 for p, a, b in zip(factors, x, y))


def upward_closure(sp: ProductSpace, R: Iterable[Sequence[int]], bound=ORACLE_BOUND) -> set[Element]:
    R = [sp.check(r) for r in R]
    f = sp.factors
    return {x for x in sp.elements(bound) if any(_fast_leq(f, r, x) for r in R)}


def downward_closure(sp: ProductSpace, R: Iterable[Sequence[int]], bound=ORACLE_BOUND) -> set[Element]:
    R = [sp.check(r) for r in R]
    f = sp.factors
    return {x for x in sp.elements(bound) if any(_fast_leq(f, x, r) for r in R)}


def maximal(sp: ProductSpace, X: Iterable[Sequence[int]]) -> list[Element]:
    """Maximal elements of a finite subset, in canonical order."""
    X = sorted({tuple(x) for x in X})
    f = sp.factors
    return [x for x in X if not any(y != x and _fast_leq(f, x, y) for y in X)]


def minimal(sp: ProductSpace, X: Iterable[Sequence[int]]) -> list[Element]:
    X = sorted({tuple(x) for x in X})
    f = sp.factors
    return [x for x in X if not any(y != x and _fast_leq(f, y, x) for y in X)]


def brute_force_max_independent(sp: ProductSpace, R, bound=ORACLE_BOUND) -> list[Element]:
    """Maximal elements of ``P \\ R+`` by exhaustive scan."""
    closed = upward_closure(sp, R, bound)
    return maximal(sp, (x for x in sp.elements(bound) if x not in closed))


def brute_force_min_independent(sp: ProductSpace, R, bound=ORACLE_BOUND) -> list[Element]:
    """Minimal elements of ``P \\ R-`` by exhaustive scan."""
    closed = downward_closure(sp, R, bound)
    return minimal(sp, (x for x in sp.elements(bound) if x not in closed))


def is_antichain(sp: ProductSpace, X) -> bool:
    X = [tuple(x) for x in X]
    return not any(x != y and sp.leq(x, y) for x in X for y in X)
