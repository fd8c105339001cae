"""Finite posets as immutable, bitset-backed structures.

Elements are dense integers ``0..n-1``.  The strict order is stored as its
full transitive closure, so every comparability query is a single bit test;
cover relations are recomputed on demand for pretty-printing.  All values are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class PosetError(Exception):
    """Base class for errors raised by this package."""


class CycleError(PosetError):
    """The input relation has a directed cycle, so no poset exists."""


class TooLarge(PosetError):
    """Requested enumeration exceeds the supported size."""


class CapExceeded(PosetError):
    """An enumeration produced more items than the caller's cap allows."""

    def __init__(self, cap: int, message: str | None = None):
        super().__init__(message or f"enumeration exceeded cap of {cap}")
        self.cap = cap


class NotMaximalAntichain(PosetError):
    """The supplied element set is not a maximal antichain."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


class Poset:
    """An immutable finite strict partial order on ``0..n-1``.

    ``up[x]`` / ``down[x]`` are bitmasks of the elements strictly above /
    below ``x`` in the transitive closure.  Use :func:`build_poset` to
    construct one from an arbitrary generating relation.
    """

    def __init__(
        self,
        n: int,
        up: Sequence[int],
        labels: Sequence[str] | None = None,
        name: str | None = None,
    ):
        if n < 0:
            raise ValueError("element count must be non-negative")
        if len(up) != n:
            raise ValueError("up-set table has wrong length")
        self.n = n
        self._up = tuple(up)
        down = [0] * n
        for x in range(n):
            for y in bits(self._up[x]):
                down[y] |= 1 << x
        self._down = tuple(down)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError("label table has wrong length")
        self.labels = labels
        self.name = name
        self._validate()

    def _validate(self) -> None:
        full = (1 << self.n) - 1
        for x in range(self.n):
            ux = self._up[x]
            if ux >> self.n:
                raise ValueError("relation mentions element outside ground set")
            if ux >> x & 1:
                raise CycleError(f"element {x} is below itself")
            for y in bits(ux):
                if self._up[y] >> x & 1:
                    raise CycleError(f"antisymmetry violated on ({x}, {y})")
                if self._up[y] & ~ux & full:
                    raise ValueError(f"relation not transitively closed at ({x}, {y})")

    # -- basic queries ---------------------------------------------------

    def lt(self, x: int, y: int) -> bool:
        return bool(self._up[x] >> y & 1)

    def leq(self, x: int, y: int) -> bool:
        return x == y or self.lt(x, y)

    def incomparable(self, x: int, y: int) -> bool:
        return x != y and not self.lt(x, y) and not self.lt(y, x)

    def up_mask(self, x: int) -> int:
        return self._up[x]

    def down_mask(self, x: int) -> int:
        return self._down[x]

    def up_set(self, x: int) -> frozenset[int]:
        return frozenset(bits(self._up[x]))

    def down_set(self, x: int) -> frozenset[int]:
        return frozenset(bits(self._down[x]))

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    @cached_property
    def minimals(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if not self._down[x])

    @cached_property
    def maximals(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if not self._up[x])

    @cached_property
    def relation(self) -> frozenset[tuple[int, int]]:
        """All strict-order pairs (x, y) with x < y."""
        return frozenset((x, y) for x in range(self.n) for y in bits(self._up[x]))

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs (x, y): x < y with nothing strictly between."""
        out = []
        for x in range(self.n):
            for y in bits(self._up[x]):
                if not self._up[x] & self._down[y]:
                    out.append((x, y))
        return out

    def topological_order(self) -> tuple[int, ...]:
        """A fixed linear extension: sort by down-set size, then index."""
        return tuple(sorted(range(self.n), key=lambda x: (self._down[x].bit_count(), x)))

    @cached_property
    def height(self) -> int:
        if self.n == 0:
            return 0
        depth = [1] * self.n
        for x in self.topological_order():
            d = self._down[x]
            if d:
                depth[x] = 1 + max(depth[y] for y in bits(d))
        return max(depth)

    # -- width machinery (Dilworth via bipartite matching) ----------------

    @cached_property
    def width(self) -> int:
        if self.n == 0:
            return 0
        return self.n - _max_matching_size(self.n, self._up)

    @cached_property
    def max_antichain(self) -> frozenset[int]:
        """One maximum antichain; lexicographically least as a sorted set."""
        w = self.width
        chosen: list[int] = []
        chosen_inc = (1 << self.n) - 1  # elements incomparable to all chosen
        for x in range(self.n):
            if len(chosen) == w:
                break
            if not chosen_inc >> x & 1:
                continue
            inc_x = chosen_inc & ~(self._up[x] | self._down[x]) & ~(1 << x)
            free = inc_x & ~((1 << (x + 1)) - 1)
            if len(chosen) + 1 + self._width_of(free) == w:
                chosen.append(x)
                chosen_inc = inc_x
        return frozenset(chosen)

    def _width_of(self, mask: int) -> int:
        elems = list(bits(mask))
        if not elems:
            return 0
        pos = {e: i for i, e in enumerate(elems)}
        sub_up = [mask_of(pos[y] for y in bits(self._up[e] & mask)) for e in elems]
        return len(elems) - _max_matching_size(len(elems), sub_up)

    # -- structural transforms --------------------------------------------

    def dual(self) -> "Poset":
        return Poset(self.n, self._down, labels=self.labels, name=self.name)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.n == other.n and self._up == other._up

    def __hash__(self) -> int:
        return hash((self.n, self._up))

    def __repr__(self) -> str:
        rels = " ".join(f"{x}<{y}" for x, y in sorted(self.covers()))
        return f"Poset(n={self.n}, covers=[{rels}])"


def _max_matching_size(n: int, up: Sequence[int]) -> int:
    """Maximum matching of the comparability DAG, for min chain cover."""
    match_of_right: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for v in bits(up[u]):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_of_right or augment(match_of_right[v], seen):
                match_of_right[v] = u
                return True
        return False

    size = 0
    for u in range(n):
        if augment(u, set()):
            size += 1
    return size


class BipartitePoset:
    """A poset with a declared partition A ∪ B, A ⊆ minimals, B ⊆ maximals.

    Loose elements (both minimal and maximal) may sit on either side, so the
    partition is part of the data, not derived.
    """

    def __init__(self, base: Poset, a_side: Iterable[int], b_side: Iterable[int]):
        self.base = base
        self.a_side = frozenset(a_side)
        self.b_side = frozenset(b_side)
        a_mask = mask_of(self.a_side)
        b_mask = mask_of(self.b_side)
        full = (1 << base.n) - 1
        if a_mask & b_mask:
            raise ValueError("bipartite sides overlap")
        if (a_mask | b_mask) != full:
            raise ValueError("bipartite sides do not cover the ground set")
        min_mask = mask_of(base.minimals)
        max_mask = mask_of(base.maximals)
        if a_mask & ~min_mask:
            raise ValueError("a-side contains a non-minimal element")
        if b_mask & ~max_mask:
            raise ValueError("b-side contains a non-maximal element")
        for b in self.b_side:
            if base.up_mask(b) & a_mask:
                raise ValueError("relation from b-side into a-side")

    @property
    def n(self) -> int:
        return self.base.n

    def inc0(self) -> frozenset[tuple[int, int]]:
        return inc0(self)

    def subposet(self, keep: Iterable[int]) -> tuple["BipartitePoset", tuple[int, ...]]:
        """Induced bipartite subposet with inherited sides, plus index map."""
        sub, kept = subposet(self.base, keep)
        pos = {e: i for i, e in enumerate(kept)}
        return (
            BipartitePoset(
                sub,
                [pos[e] for e in kept if e in self.a_side],
                [pos[e] for e in kept if e in self.b_side],
            ),
            kept,
        )

    def dual(self) -> "BipartitePoset":
        return BipartitePoset(self.base.dual(), self.b_side, self.a_side)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BipartitePoset)
            and self.base == other.base
            and self.a_side == other.a_side
            and self.b_side == other.b_side
        )

    def __hash__(self) -> int:
        return hash((self.base, self.a_side, self.b_side))

    def __repr__(self) -> str:
        return (
            f"BipartitePoset(A={sorted(self.a_side)}, B={sorted(self.b_side)}, "
            f"base={self.base!r})"
        )


# -- construction ----------------------------------------------------------


def build_poset(
    n: int,
    relations: Iterable[tuple[int, int]],
    labels: Sequence[str] | None = None,
    name: str | None = None,
) -> Poset:
    """Transitive closure of any generating relation on ``0..n-1``.

    Raises CycleError if the closure would violate antisymmetry.
    """
    up = [0] * n
    for x, y in relations:
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"relation ({x}, {y}) outside ground set of size {n}")
        if x == y:
            raise CycleError(f"element {x} related to itself")
        up[x] |= 1 << y
    changed = True
    while changed:
        changed = False
        for x in range(n):
            acc = up[x]
            for y in bits(up[x]):
                acc |= up[y]
            if acc != up[x]:
                up[x] = acc
                changed = True
    for x in range(n):
        if up[x] >> x & 1:
            raise CycleError(f"directed cycle through element {x}")
    return Poset(n, up, labels=labels, name=name)


def dual(p: Poset) -> Poset:
    return p.dual()


def subposet(p: Poset, keep: Iterable[int]) -> tuple[Poset, tuple[int, ...]]:
    """Induced subposet on ``keep``; returns it with the old-index map.

    Element ``i`` of the result corresponds to ``map[i]`` in ``p``.
    """
    kept = tuple(sorted(set(keep)))
    for e in kept:
        if not 0 <= e < p.n:
            raise ValueError(f"element {e} outside ground set")
    pos = {e: i for i, e in enumerate(kept)}
    keep_mask = mask_of(kept)
    up = [mask_of(pos[y] for y in bits(p.up_mask(e) & keep_mask)) for e in kept]
    labels = tuple(p.label(e) for e in kept) if p.labels is not None else None
    return Poset(len(kept), up, labels=labels, name=p.name), kept


def inc_pairs(p: Poset) -> frozenset[tuple[int, int]]:
    """All ordered incomparable pairs (both orientations of each)."""
    out = []
    for x in range(p.n):
        for y in range(p.n):
            if x != y and p.incomparable(x, y):
                out.append((x, y))
    return frozenset(out)


def inc0(bp: BipartitePoset) -> frozenset[tuple[int, int]]:
    """Incomparable pairs oriented from the a-side into the b-side."""
    return frozenset(
        (a, b) for a in bp.a_side for b in bp.b_side if bp.base.incomparable(a, b)
    )


def neighborhoods(
    p: Poset, x: int, q: Iterable[int] | None = None
) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """(down, up, incomparable) neighborhoods of ``x`` restricted to ``q``."""
    if not 0 <= x < p.n:
        raise ValueError(f"element {x} outside ground set")
    q_mask = (1 << p.n) - 1 if q is None else mask_of(q)
    down = p.down_mask(x) & q_mask
    up = p.up_mask(x) & q_mask
    inc = q_mask & ~down & ~up & ~(1 << x)
    return frozenset(bits(down)), frozenset(bits(up)), frozenset(bits(inc))


def height(p: Poset) -> int:
    return p.height


def width(p: Poset) -> int:
    return p.width


def max_antichain(p: Poset) -> frozenset[int]:
    return p.max_antichain


def antichain_split(p: Poset, a: Iterable[int]) -> tuple[frozenset[int], frozenset[int]]:
    """Split P - A into the down part D(A) and up part U(A).

    ``a`` must be a maximal antichain, so the two parts partition P - A.
    """
    a_set = frozenset(a)
    for x, y in itertools.combinations(sorted(a_set), 2):
        if not p.incomparable(x, y):
            raise NotMaximalAntichain(f"elements {x}, {y} are comparable")
    a_mask = mask_of(a_set)
    down, up = 0, 0
    for x in range(p.n):
        if a_mask >> x & 1:
            continue
        if p.up_mask(x) & a_mask:
            down |= 1 << x
        elif p.down_mask(x) & a_mask:
            up |= 1 << x
        else:
            raise NotMaximalAntichain(f"element {x} incomparable to the whole antichain")
    return frozenset(bits(down)), frozenset(bits(up))


# -- linear extensions -------------------------------------------------------


def is_linear_extension(p: Poset, order: Sequence[int]) -> bool:
    """True iff ``order`` is a permutation of the ground set respecting p."""
    if len(order) != p.n or set(order) != set(range(p.n)):
        return False
    pos = [0] * p.n
    for i, e in enumerate(order):
        pos[e] = i
    return all(pos[x] < pos[y] for x, y in p.relation)


def enumerate_linear_extensions(p: Poset, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """All linear extensions, lexicographically by the permutation.

    Raises CapExceeded (carrying the cap) once more than ``cap`` exist.
    """
    full = (1 << p.n) - 1
    prefix: list[int] = []
    count = 0

    def rec(remaining: int) -> Iterator[tuple[int, ...]]:
        nonlocal count
        if not remaining:
            count += 1
            if cap is not None and count > cap:
                raise CapExceeded(cap)
            yield tuple(prefix)
            return
        for x in bits(remaining):
            if not p.down_mask(x) & remaining:
                prefix.append(x)
                yield from rec(remaining & ~(1 << x))
                prefix.pop()

    return rec(full)


def count_linear_extensions(p: Poset, cap: int | None = None) -> int:
    return sum(1 for _ in enumerate_linear_extensions(p, cap))


# -- enumeration of all posets up to isomorphism ----------------------------

_ENUM_LIMIT = 7
_reps_cache: dict[int, tuple[Poset, ...]] = {}


def canonical_key(p: Poset) -> tuple[int, int]:
    """Isomorphism-invariant key: minimum relation encoding over the
    permutations compatible with iterated degree refinement."""
    n = p.n
    if n == 0:
        return (0, 0)
    colors: list = [(p.down_mask(x).bit_count(), p.up_mask(x).bit_count()) for x in range(n)]
    while True:
        refined = [
            (
                colors[x],
                tuple(sorted(colors[y] for y in bits(p.down_mask(x)))),
                tuple(sorted(colors[y] for y in bits(p.up_mask(x)))),
            )
            for x in range(n)
        ]
        ranking = {c: i for i, c in enumerate(sorted(set(refined)))}
        new_colors = [ranking[c] for c in refined]
        if new_colors == colors:
            break
        colors = new_colors

    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(colors[x], []).append(x)
    ordered_classes = [classes[c] for c in sorted(classes)]

    best = None
    for perm_parts in itertools.product(
        *(itertools.permutations(cls) for cls in ordered_classes)
    ):
        order = [x for part in perm_parts for x in part]
        pos = [0] * n
        for i, e in enumerate(order):
            pos[e] = i
        enc = 0
        for i, e in enumerate(order):
            row = 0
            for y in bits(p.up_mask(e)):
                row |= 1 << pos[y]
            enc |= row << (i * n)
        if best is None or enc < best:
            best = enc
    return (n, best)


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return canonical_key(p) == canonical_key(q)


def _down_sets(p: Poset) -> Iterator[int]:
    """All downward-closed subsets of p, as bitmasks."""
    for mask in range(1 << p.n):
        if all(not (p.down_mask(x) & ~mask) for x in bits(mask)):
            yield mask


def enumerate_posets(n: int) -> Iterator[Poset]:
    """One representative per isomorphism class of n-element posets.

    Built recursively: every poset arises from an (n-1)-element poset by
    adding a new maximal element above a down-set.  Capped at n = 7; the
    8-element count (~16999 classes) is feasible but unneeded here.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > _ENUM_LIMIT:
        raise TooLarge(f"poset enumeration capped at n = {_ENUM_LIMIT}")
    return iter(_poset_reps(n))


def _poset_reps(n: int) -> tuple[Poset, ...]:
    if n in _reps_cache:
        return _reps_cache[n]
    if n == 0:
        reps: tuple[Poset, ...] = (Poset(0, []),)
    elif n == 1:
        reps = (Poset(1, [0]),)
    else:
        seen: dict[tuple[int, int], Poset] = {}
        for base in _poset_reps(n - 1):
            for dmask in _down_sets(base):
                up = list(base._up)
                new = n - 1
                for x in bits(dmask):
                    up[x] |= 1 << new
                up.append(0)
                cand = Poset(n, up)
                key = canonical_key(cand)
                if key not in seen:
                    seen[key] = cand
        reps = tuple(seen[k] for k in sorted(seen))
    _reps_cache[n] = reps
    return reps
