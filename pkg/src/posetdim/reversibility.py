"""Reversible sets of incomparable pairs and the extensions they induce.

A set S of incomparable pairs is reversible exactly when one linear
extension puts b below a for every (a, b) in S, equivalently when the
digraph on S with an arc (a,b) -> (a',b') whenever a <= b' is acyclic.
Cycle detection on that digraph is the workhorse here; a shortest cycle is
automatically strict, which yields the antichain witnesses.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from posetdim.core import (
    BipartitePoset,
    Poset,
    PosetError,
    inc0,
    inc_pairs,
)


class NotReversible(PosetError):
    """The pair set admits an alternating cycle; no single extension works."""


class NotIncomparable(PosetError):
    """The designated pair is comparable, so there is nothing to reverse."""


class InvalidExtension(PosetError):
    """A supplied family member is not a linear extension of the poset."""


@dataclass(frozen=True)
class AlternatingCycle:
    """Pairs ((a_1,b_1),..,(a_k,b_k)) with a_i <= b_{i+1} cyclically."""

    pairs: tuple[tuple[int, int], ...]
    strict: bool

    def validate(self, p: Poset) -> None:
        k = len(self.pairs)
        if k < 2:
            raise ValueError("alternating cycle needs k >= 2")
        for a, b in self.pairs:
            if not p.incomparable(a, b):
                raise ValueError(f"pair ({a}, {b}) is comparable")
        for i, (a, _) in enumerate(self.pairs):
            if not p.leq(a, self.pairs[(i + 1) % k][1]):
                raise ValueError(f"a_{i} <= b_{i + 1} fails")
        if self.strict:
            for i, (a, _) in enumerate(self.pairs):
                for j, (_, b) in enumerate(self.pairs):
                    if p.leq(a, b) != (j == (i + 1) % k):
                        raise ValueError("cycle is not strict")


def _check_inc(p: Poset, s: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    pairs = sorted(set(s))
    for a, b in pairs:
        if not (0 <= a < p.n and 0 <= b < p.n) or not p.incomparable(a, b):
            raise ValueError(f"({a}, {b}) is not an incomparable pair")
    return pairs


def pair_arcs(p: Poset, pairs: Sequence[tuple[int, int]]) -> list[int]:
    """arcs[i] = bitmask of pair indices j with a_i <= b_j (i != j)."""
    arcs = []
    for i, (a, _) in enumerate(pairs):
        m = 0
        for j, (_, b) in enumerate(pairs):
            if i != j and p.leq(a, b):
                m |= 1 << j
        arcs.append(m)
    return arcs


def find_strict_alternating_cycle(
    p: Poset, s: Iterable[tuple[int, int]]
) -> AlternatingCycle | None:
    """A strict alternating cycle inside s, or None.

    A shortest directed cycle of the pair digraph has no chords, hence is
    strict; we take the overall shortest via BFS from every pair.
    """
    pairs = _check_inc(p, s)
    arcs = pair_arcs(p, pairs)
    k = len(pairs)
    best: list[int] | None = None
    for start in range(k):
        # BFS over arcs looking for the shortest path back to start
        parent = {start: -1}
        frontier = [start]
        found = None
        while frontier and found is None:
            nxt = []
            for u in frontier:
                m = arcs[u]
                while m:
                    low = m & -m
                    v = low.bit_length() - 1
                    m ^= low
                    if v == start:
                        found = u
                        break
                    if v not in parent:
                        parent[v] = u
                        nxt.append(v)
                if found is not None:
                    break
            frontier = nxt
        if found is not None:
            path = [found]
            while path[-1] != start:
                path.append(parent[path[-1]])
            path.reverse()
            if best is None or len(path) < len(best):
                best = path
    if best is None:
        return None
    cyc = AlternatingCycle(tuple(pairs[i] for i in best), strict=True)
    cyc.validate(p)
    return cyc


def has_alternating_cycle(p: Poset, s: Iterable[tuple[int, int]]) -> bool:
    """Cycle detection on the pair digraph (any alternating cycle)."""
    pairs = _check_inc(p, s)
    arcs = pair_arcs(p, pairs)
    k = len(pairs)
    state = [0] * k  # 0 white, 1 on stack, 2 done

    def dfs(u: int) -> bool:
        state[u] = 1
        m = arcs[u]
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if state[v] == 1 or (state[v] == 0 and dfs(v)):
                return True
        state[u] = 2
        return False

    return any(state[u] == 0 and dfs(u) for u in range(k))


def is_reversible(p: Poset, s: Iterable[tuple[int, int]]) -> bool:
    return not has_alternating_cycle(p, s)


def extension_from_reversible_set(
    p: Poset,
    s: Iterable[tuple[int, int]],
    active: Iterable[int] | None = None,
) -> tuple[int, ...]:
    """One linear extension reversing every pair of s (b placed below a).

    Topologically sorts the relation of p augmented with b -> a arcs, ties
    broken by least element first.  ``active`` restricts to an induced
    subposet but keeps original element ids.  Raises NotReversible when the
    augmented relation acquires a cycle.
    """
    ground = sorted(set(active)) if active is not None else list(range(p.n))
    gset = set(ground)
    succ: dict[int, set[int]] = {x: set() for x in ground}
    indeg = {x: 0 for x in ground}

    def add_arc(u: int, v: int) -> None:
        if v not in succ[u]:
            succ[u].add(v)
            indeg[v] += 1

    for x in ground:
        for y in ground:
            if x != y and p.lt(x, y):
                add_arc(x, y)
    for a, b in set(s):
        if a not in gset or b not in gset:
            raise ValueError(f"pair ({a}, {b}) outside the active ground set")
        if not p.incomparable(a, b):
            raise ValueError(f"({a}, {b}) is not an incomparable pair")
        add_arc(b, a)

    heap = [x for x in ground if indeg[x] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        x = heapq.heappop(heap)
        order.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(heap, y)
    if len(order) != len(ground):
        raise NotReversible("augmented relation has a cycle; set is not reversible")
    return tuple(order)


def mixpair_set(bp: BipartitePoset, a: int, b: int) -> frozenset[tuple[int, int]]:
    """Pairs reversed by L(a, b, P): a with all of B, all of A with b."""
    base = bp.base
    out = {(a, v) for v in bp.b_side if base.incomparable(a, v)}
    out |= {(u, b) for u in bp.a_side if base.incomparable(u, b)}
    return frozenset(out)


@dataclass(frozen=True)
class MixpairExtension:
    extension: tuple[int, ...]
    extra_reversed: bool | None  # None when no extra pair was requested


def mixpair_extension(
    bp: BipartitePoset,
    a: int,
    b: int,
    extra: tuple[int, int] | None = None,
    active: Iterable[int] | None = None,
) -> MixpairExtension:
    """The canonical extension reversing a with B and A with b.

    When ``extra`` is supplied and joins the base set reversibly it is
    reversed too; otherwise the extension is still produced and the miss is
    flagged, so callers can probe feasibility.
    """
    base = bp.base
    if active is not None:
        act = frozenset(active)
        if a not in act or b not in act:
            raise ValueError("designated pair outside the active set")
        a_side = bp.a_side & act
        b_side = bp.b_side & act
    else:
        act = None
        a_side, b_side = bp.a_side, bp.b_side
    if a not in a_side or b not in b_side or not base.incomparable(a, b):
        raise NotIncomparable(f"({a}, {b}) is not an Inc_0 pair")
    s = {(a, v) for v in b_side if base.incomparable(a, v)}
    s |= {(u, b) for u in a_side if base.incomparable(u, b)}
    extra_flag: bool | None = None
    if extra is not None:
        with_extra = s | {extra}
        if is_reversible(base, with_extra):
            s = with_extra
            extra_flag = True
        else:
            extra_flag = False
    ext = extension_from_reversible_set(base, s, active=act)
    return MixpairExtension(ext, extra_flag)


def reversed_pairs(order: Sequence[int], pairs: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    pos = {e: i for i, e in enumerate(order)}
    return {(a, b) for a, b in pairs if pos[a] > pos[b]}


def _validate_family(
    p: Poset, fam: Sequence[Sequence[int]], ground: frozenset[int] | None = None
) -> list[tuple[int, ...]]:
    from posetdim.core import is_linear_extension

    out = []
    for ext in fam:
        ext = tuple(ext)
        if ground is not None:
            if sorted(ext) != sorted(ground):
                raise InvalidExtension(f"extension {ext} has wrong ground set")
        elif not is_linear_extension(p, ext):
            raise InvalidExtension(f"{ext} is not a linear extension")
        out.append(ext)
    return out


def verify_realizer(p: Poset, fam: Sequence[Sequence[int]]) -> bool:
    """True iff the family reverses every ordered incomparable pair."""
    fam = _validate_family(p, fam)
    if p.n <= 1:
        return len(fam) >= 1 if p.n == 1 else True
    todo = set(inc_pairs(p))
    if not todo:
        return len(fam) >= 1
    for ext in fam:
        todo -= reversed_pairs(ext, todo)
        if not todo:
            return True
    return False


def verify_reversing_family(bp: BipartitePoset, fam: Sequence[Sequence[int]]) -> bool:
    """True iff the family reverses every Inc_0 pair of the bipartite poset."""
    fam = _validate_family(bp.base, fam)
    todo = set(inc0(bp))
    for ext in fam:
        todo -= reversed_pairs(ext, todo)
        if not todo:
            return True
    return not todo
