"""Dualization over products of posets in matrix form.

Maximal independent elements of ``R`` correspond one-to-one to ordered
irredundant sigma-coverings of the matrix whose rows are the elements of
``R``: the element is recovered by putting ``sigma`` on the selected
columns and the greatest element everywhere else.

The enumerator is a backtracking search over (column, value) pairs in the
spirit of MMCS for minimal hypergraph transversals.  A pair ``(t, v)``
"kills" row ``r`` when ``r[t]`` does not precede ``v``; a covering kills
every row (condition 2).  Each upper cover ``y`` of a chosen value needs a
witness row (condition 1): one that is killed by column ``t`` alone and
would come back to life if ``v`` were raised to ``y``.  Witness sets only
shrink as the search descends, so an empty one prunes the branch.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .errors import NoGreatestElement, ValidationError
from .product import Element, ProductSpace


class SigmaCovering(NamedTuple):
    columns: tuple[int, ...]
    sigma: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class CoveringMatrix:
    space: ProductSpace
    rows: tuple[Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.space.check(r) for r in self.rows))


def check_covering(sp: ProductSpace, c: SigmaCovering) -> None:
    cols, sigma = c
    if len(cols) != len(sigma):
        raise ValidationError("columns and sigma differ in length")
    if any(b <= a for a, b in zip(cols, cols[1:])):
        raise ValidationError(f"columns {cols} must be strictly increasing")
    for j, s in zip(cols, sigma):
        if not 0 <= j < sp.n:
            raise ValidationError(f"column {j} out of range")
        p = sp.factors[j]
        if not 0 <= s < len(p):
            raise ValidationError(f"value {s} out of range for column {j}")
        if s == p.greatest:
            raise ValidationError(f"sigma value for column {j} is the greatest element")


def covering_to_element(sp: ProductSpace, c: SigmaCovering) -> Element:
    x = []
    chosen = dict(zip(c.columns, c.sigma))
    for j, p in enumerate(sp.factors):
        if j in chosen:
            x.append(chosen[j])
        elif p.greatest is None:
            raise NoGreatestElement(f"factor {j} has no greatest element; complete it first")
        else:
            x.append(p.greatest)
    return tuple(x)


def element_to_covering(sp: ProductSpace, x: Sequence[int]) -> SigmaCovering:
    x = sp.check(x)
    cols = tuple(j for j, (v, p) in enumerate(zip(x, sp.factors)) if v != p.greatest)
    return SigmaCovering(cols, tuple(x[j] for j in cols))


def canonical_key(c: SigmaCovering):
    return (c.columns, c.sigma)


# -- definition-level checks -------------------------------------------------

def _submatrix(m: CoveringMatrix, cols):
    return [tuple(r[j] for j in cols) for r in m.rows]


def _precedes_except(factors, cols, beta, sigma, skip):
    return all(
        factors[j].leq(b, s) for t, (j, b, s) in enumerate(zip(cols, beta, sigma)) if t != skip
    )


def condition_one(m: CoveringMatrix, c: SigmaCovering) -> bool:
    """Witness condition: every cover of every sigma value has a witness row."""
    f = m.space.factors
    cols, sigma = c
    sub = _submatrix(m, cols)
    for i, (j, s) in enumerate(zip(cols, sigma)):
        for y in f[j].upper_covers(s):
            q2 = set(f[j].q2(s, y))
            if not any(b[i] in q2 and _precedes_except(f, cols, b, sigma, i) for b in sub):
                return False
    return True


def condition_one_chain(m: CoveringMatrix, c: SigmaCovering) -> bool:
    """Witness condition for products of chains: the row with ``sigma_i + 1`` must exist.

    Uses the position of each value in its chain instead of covers, so it
    does not share code with :func:`condition_one`.
    """
    f = m.space.factors
    cols, sigma = c
    sub = _submatrix(m, cols)
    for i, (j, s) in enumerate(zip(cols, sigma)):
        p = f[j]
        if not p.is_chain():
            raise ValidationError(f"factor {j} is not a chain")
        order = sorted(range(len(p)), key=lambda a: bin(p.down_mask(a)).count("1"))
        pos = order.index(s)
        if pos == len(order) - 1:
            continue
        nxt = order[pos + 1]
        if not any(b[i] == nxt and _precedes_except(f, cols, b, sigma, i) for b in sub):
            return False
    return True


def condition_two(m: CoveringMatrix, c: SigmaCovering) -> bool:
    """Independence condition: no row of the submatrix precedes sigma (equality included)."""
    f = m.space.factors
    cols, sigma = c
    return not any(_precedes_except(f, cols, b, sigma, -1) for b in _submatrix(m, cols))


def is_ordered_irredundant_covering(m: CoveringMatrix, c: SigmaCovering) -> bool:
    check_covering(m.space, c)
    return condition_two(m, c) and condition_one(m, c)


# -- enumeration -------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


class _Search:
    """Precomputed bitmask tables for one matrix.

    Rows are deduplicated; bit ``i`` of a row mask refers to ``self.rows[i]``.
    """

    def __init__(self, m: CoveringMatrix, max_rank: int | None = None):
        sp = m.space
        for j, p in enumerate(sp.factors):
            if p.greatest is None:
                raise NoGreatestElement(f"factor {j} has no greatest element; complete it first")
        self.max_rank = sp.n if max_rank is None else min(max_rank, sp.n)
        self.rows = sorted(set(m.rows))
        rows = self.rows
        self.all_rows = (1 << len(rows)) - 1

        # leq_rows[t][v]: rows whose component t precedes v
        self.leq_rows = []
        for t, p in enumerate(sp.factors):
            masks = []
            for v in range(len(p)):
                down = p.down_mask(v)
                masks.append(sum(1 << i for i, r in enumerate(rows) if down >> r[t] & 1))
            self.leq_rows.append(masks)

        # Candidate pairs: every non-greatest value of every column.
        self.pairs = [(t, v) for t, p in enumerate(sp.factors) for v in range(len(p)) if v != p.greatest]
        self.col_pairs = [0] * sp.n
        for k, (t, _) in enumerate(self.pairs):
            self.col_pairs[t] |= 1 << k
        self.killers = []
        for r in rows:
            mask = 0
            for k, (t, v) in enumerate(self.pairs):
                if not sp.factors[t].down_mask(v) >> r[t] & 1:
                    mask |= 1 << k
            self.killers.append(mask)
        # q2_rows[k]: for pair k, one row mask per upper cover of its value
        self.q2_rows = []
        for t, v in self.pairs:
            p = sp.factors[t]
            self.q2_rows.append([
                sum(1 << i for i, r in enumerate(rows) if p.q2_mask(v, y) >> r[t] & 1)
                for y in p.upper_covers(v)
            ])
        self.all_pairs = (1 << len(self.pairs)) - 1

    def root(self):
        return ((), self.all_rows, (), self.all_pairs)

    def _pick_row(self, alive: int, cand: int):
        best, best_count = None, None
        a = alive
        killers = self.killers
        while a:
            low = a & -a
            i = low.bit_length() - 1
            a ^= low
            c = _popcount(killers[i] & cand)
            if c == 0:
                return None, 0
            if best_count is None or c < best_count:
                best, best_count = i, c
                if c == 1:
                    break
        return best, best_count

    def children(self, state):
        """Yield child states of ``state`` in branching order."""
        chosen, alive, reqs, cand = state
        if alive == 0 or len(chosen) >= self.max_rank:
            return
        r, count = self._pick_row(alive, cand)
        if r is None:
            return
        branch = self.killers[r] & cand
        while branch:
            low = branch & -branch
            k = low.bit_length() - 1
            branch ^= low
            t, v = self.pairs[k]
            leq = self.leq_rows[t][v]
            new_reqs = []
            ok = True
            for w in reqs:
                w &= leq
                if not w:
                    ok = False
                    break
                new_reqs.append(w)
            if ok:
                for q in self.q2_rows[k]:
                    w = q & alive
                    if not w:
                        ok = False
                        break
                    new_reqs.append(w)
            if ok:
                yield (chosen + (k,), alive & leq, tuple(new_reqs), cand & ~self.col_pairs[t])
            cand &= ~low

    def solution(self, chosen) -> SigmaCovering:
        ps = sorted(self.pairs[k] for k in chosen)
        return SigmaCovering(tuple(t for t, _ in ps), tuple(v for _, v in ps))

    def run(self, state) -> Iterator[SigmaCovering]:
        if state[1] == 0:
            yield self.solution(state[0])
            return
        stack = [self.children(state)]
        while stack:
            child = next(stack[-1], None)
            if child is None:
                stack.pop()
                continue
            if child[1] == 0:
                yield self.solution(child[0])
            else:
                stack.append(self.children(child))


def enumerate_coverings(
    m: CoveringMatrix, max_rank: int | None = None, canonical: bool = False
) -> Iterator[SigmaCovering]:
    """Stream every ordered irredundant sigma-covering of ``m`` of rank <= ``max_rank``.

    Solutions are produced as they are found; ``canonical=True`` collects
    them and yields in (columns, sigma) order instead.
    """
    search = _Search(m, max_rank)
    it = search.run(search.root())
    if canonical:
        return iter(sorted(it, key=canonical_key))
    return it


def partitions(m: CoveringMatrix, max_rank: int | None = None) -> int:
    """Number of disjoint top-level subtrees of the search.

    A matrix without rows has a single trivial partition.
    """
    search = _Search(m, max_rank)
    root = search.root()
    if root[1] == 0:
        return 1
    return sum(1 for _ in search.children(root))


def enumerate_partition(m: CoveringMatrix, index: int, max_rank: int | None = None) -> list[SigmaCovering]:
    search = _Search(m, max_rank)
    root = search.root()
    if root[1] == 0:
        return list(search.run(root)) if index == 0 else []
    child = next(itertools.islice(search.children(root), index, None))
    return list(search.run(child))


def enumerate_coverings_partitioned(
    m: CoveringMatrix, max_rank: int | None = None, workers: int | None = None
) -> list[SigmaCovering]:
    """Explore top-level subtrees in separate processes; result is canonically sorted."""
    count = partitions(m, max_rank)
    if workers == 1 or count <= 1:
        out = [c for i in range(count) for c in enumerate_partition(m, i, max_rank)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = ex.map(enumerate_partition, itertools.repeat(m), range(count), itertools.repeat(max_rank))
            out = [c for part in parts for c in part]
    return sorted(out, key=canonical_key)


def max_independent(m: CoveringMatrix, max_rank: int | None = None) -> list[Element]:
    """Maximal independent elements of the matrix rows, in canonical element order."""
    return sorted(covering_to_element(m.space, c) for c in enumerate_coverings(m, max_rank))


def min_independent(m: CoveringMatrix, max_rank: int | None = None) -> list[Element]:
    """Minimal independent elements, computed on the reversed product."""
    rev = CoveringMatrix(m.space.reversed(), m.rows)
    return max_independent(rev, max_rank)


# -- Boolean cross-check -----------------------------------------------------

def irreducible_boolean_coverings(rows: Sequence[Sequence[int]], n_cols: int | None = None) -> list[frozenset[int]]:
    """Irreducible coverings of a 0/1 matrix by subset scan.

    A column set covers the matrix when every row has a 1 in one of its
    columns, and is irreducible when no proper subset covers.  Coverings are
    returned as 0-based column sets ordered by size, then lexicographically.
    """
    rows = [tuple(r) for r in rows]
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    if any(x not in (0, 1) for r in rows for x in r):
        raise ValidationError("entries must be 0 or 1")

    def covers(cols):
        return all(any(r[j] for j in cols) for r in rows)

    found = []
    for size in range(n_cols + 1):
        for cols in itertools.combinations(range(n_cols), size):
            if not covers(cols):
                continue
            # covering is upward closed, so removing single columns suffices
            if all(not covers(cols[:i] + cols[i + 1:]) for i in range(size)):
                found.append(frozenset(cols))
    return found
