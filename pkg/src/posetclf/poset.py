"""Finite partially ordered sets given by their Hasse diagram.

Elements are identified by position; labels are for presentation only.
Order queries are answered from bitmasks: ``up[a]`` has bit ``b`` set iff
``a <= b``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import CycleDetected, NonImmediateCover, NotACover, ValidationError

TOP = "__top__"


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Poset:
    """Immutable finite poset.

    Use :func:`build_poset`, :func:`make_chain` or :func:`make_antichain`
    rather than calling the constructor directly; the constructor trusts
    its inputs.
    """

    __slots__ = ("elements", "cover_edges", "_up", "_down", "_covers", "greatest", "_index")

    def __init__(self, elements, cover_edges, up, down):
        self.elements = tuple(elements)
        self.cover_edges = tuple(sorted(cover_edges))
        self._up = tuple(up)
        self._down = tuple(down)
        covers = [0] * len(self.elements)
        for a, b in self.cover_edges:
            covers[a] |= 1 << b
        self._covers = tuple(covers)
        full = (1 << len(self.elements)) - 1
        self.greatest = next((g for g, d in enumerate(self._down) if d == full), None)
        self._index = {lab: i for i, lab in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        edges = ", ".join(f"{self.elements[a]}<{self.elements[b]}" for a, b in self.cover_edges)
        return f"Poset([{', '.join(map(str, self.elements))}]; {edges})"

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.cover_edges == other.cover_edges

    def __hash__(self):
        return hash((self.elements, self.cover_edges))

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of {self!r}") from None

    def _check(self, *xs):
        k = len(self.elements)
        for x in xs:
            if not 0 <= x < k:
                raise IndexError(f"element index {x} out of range for poset of size {k}")

    def leq(self, a: int, b: int) -> bool:
        self._check(a, b)
        return bool(self._up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def up_mask(self, a: int) -> int:
        """Bitmask of all elements ``b`` with ``a <= b``."""
        return self._up[a]

    def down_mask(self, a: int) -> int:
        """Bitmask of all elements ``b`` with ``b <= a``."""
        return self._down[a]

    @property
    def leq_table(self) -> list[list[bool]]:
        k = len(self.elements)
        return [[bool(self._up[a] >> b & 1) for b in range(k)] for a in range(k)]

    @property
    def least(self):
        full = (1 << len(self.elements)) - 1
        return next((g for g, u in enumerate(self._up) if u == full), None)

    def maximal_elements(self) -> list[int]:
        return [a for a in range(len(self.elements)) if self._up[a] == 1 << a]

    def upper_covers(self, x: int) -> list[int]:
        """Elements that immediately follow ``x`` (empty iff ``x`` is maximal)."""
        self._check(x)
        return _bits(self._covers[x])

    def q2(self, x: int, y: int) -> list[int]:
        """Elements that do not precede ``x`` but precede the cover ``y`` of ``x``."""
        self._check(x, y)
        if not self._covers[x] >> y & 1:
            raise NotACover(f"{self.elements[y]!r} does not cover {self.elements[x]!r}")
        return _bits(self._down[y] & ~self._down[x])

    def q2_mask(self, x: int, y: int) -> int:
        return self._down[y] & ~self._down[x]

    def is_chain(self) -> bool:
        k = len(self.elements)
        return all(self._up[a] >> b & 1 or self._up[b] >> a & 1 for a in range(k) for b in range(a))

    def reversed(self) -> "Poset":
        return Poset(self.elements, [(b, a) for a, b in self.cover_edges], self._down, self._up)

    def with_top(self, label) -> "Poset":
        """Return a copy with a new element ``label`` placed above every maximal element."""
        if label in self._index:
            raise ValidationError(f"label {label!r} already present")
        t = len(self.elements)
        edges = list(self.cover_edges) + [(m, t) for m in self.maximal_elements()]
        return build_poset(list(self.elements) + [label], edges)

    def without(self, x: int) -> "Poset":
        """Remove a maximal element ``x``; the remaining covers are unchanged."""
        if self._up[x] != 1 << x:
            raise ValidationError("only maximal elements can be removed")
        keep = [i for i in range(len(self.elements)) if i != x]
        pos = {old: new for new, old in enumerate(keep)}
        edges = [(pos[a], pos[b]) for a, b in self.cover_edges if b != x]
        return build_poset([self.elements[i] for i in keep], edges)


def build_poset(elements: Sequence, cover_edges: Iterable[tuple[int, int]]) -> Poset:
    """Validate a Hasse diagram and derive its reachability relation.

    Raises CycleDetected if the edges do not describe a partial order and
    NonImmediateCover if some edge is implied by a longer path.
    """
    elements = list(elements)
    k = len(elements)
    if k < 1:
        raise ValidationError("a poset needs at least one element")
    if len(set(elements)) != k:
        raise ValidationError("element labels must be distinct")
    edges = []
    for e in cover_edges:
        a, b = e
        if not (0 <= a < k and 0 <= b < k):
            raise ValidationError(f"cover edge {e} out of range")
        if a == b:
            raise CycleDetected(f"self loop on {elements[a]!r}")
        edges.append((a, b))
    if len(set(edges)) != len(edges):
        raise ValidationError("duplicate cover edge")

    succ = [[] for _ in range(k)]
    for a, b in edges:
        succ[a].append(b)

    # Reachability by DFS from each node; k is small.
    up = []
    for s in range(k):
        seen = 1 << s
        stack = [s]
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w == s:
                    raise CycleDetected(f"cycle through {elements[s]!r}")
                if not seen >> w & 1:
                    seen |= 1 << w
                    stack.append(w)
        up.append(seen)

    for a, b in edges:
        for c in succ[a]:
            if c != b and up[c] >> b & 1:
                raise NonImmediateCover(
                    f"edge {elements[a]!r}<{elements[b]!r} is implied via {elements[c]!r}")

    down = [0] * k
    for a in range(k):
        for b in _bits(up[a]):
            down[b] |= 1 << a
    return Poset(elements, edges, up, down)


def make_chain(labels: Sequence) -> Poset:
    """Chain ordered by list position: ``labels[0] < labels[1] < ...``."""
    return build_poset(labels, [(i, i + 1) for i in range(len(labels) - 1)])


def make_antichain(labels: Sequence) -> Poset:
    return build_poset(labels, [])


def complete(p: Poset) -> Poset:
    """Add the reserved element ``__top__`` above everything unless ``p`` has a greatest element."""
    if p.greatest is not None:
        return p
    return p.with_top(TOP)


def strip_top(p: Poset) -> Poset:
    """Undo :func:`complete`; posets without a synthetic top are returned unchanged."""
    if TOP in p.elements and p.greatest == p.index(TOP):
        return p.without(p.index(TOP))
    return p
