"""Exact dimension, interval dimension, bound oracles, and standard-example
search for finite posets.

Dimension is computed as the least number of reversible sets partitioning
the critical pairs (pairs (x, y) with D(x) ⊆ D(y) and U(y) ⊆ U(x)); every
incomparable pair is dominated by a critical pair, so a family reversing the
critical pairs is already a realizer.  The branch-and-bound colours pairs in
index order, keeps each colour class acyclic in the pair digraph, and breaks
symmetry by never opening more than one new class at a time, so the returned
certificate comes from the lexicographically least feasible assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from posetdim.core import (
    BipartitePoset,
    Poset,
    PosetError,
    antichain_split,
    bits,
    inc0,
    inc_pairs,
    mask_of,
    subposet,
)
from posetdim.reversibility import (
    extension_from_reversible_set,
    pair_arcs,
    verify_realizer,
    verify_reversing_family,
)

DEFAULT_BUDGET = 20_000_000


class BudgetExceeded(PosetError):
    """Search node budget ran out; carries the best bracket [lo, hi]."""

    def __init__(self, lo: int, hi: int):
        super().__init__(f"search budget exceeded; value in [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi


class InvalidEmbedding(PosetError):
    """A supplied standard-example embedding does not satisfy its invariants."""


@dataclass(frozen=True)
class DimensionCertificate:
    value: int
    realizer: tuple[tuple[int, ...], ...]
    lower_witness: str  # exhausted-search | standard-example(d) | width-argument

    def __iter__(self):
        return iter((self.value, self.realizer))


@dataclass(frozen=True)
class StandardExampleEmbedding:
    """Index pairs realizing an embedded S_d: a_i < b_j in the host iff i != j."""

    d: int
    mins: tuple[int, ...]
    maxs: tuple[int, ...]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.mins, self.maxs))

    def elements(self) -> frozenset[int]:
        return frozenset(self.mins) | frozenset(self.maxs)

    def validate(self, host: Poset) -> None:
        if not (self.d == len(self.mins) == len(self.maxs)):
            raise InvalidEmbedding("index lists disagree with d")
        if len(self.elements()) != 2 * self.d:
            raise InvalidEmbedding("embedding elements are not distinct")
        for i, a in enumerate(self.mins):
            for j, b in enumerate(self.maxs):
                if i == j:
                    if not host.incomparable(a, b):
                        raise InvalidEmbedding(f"a_{i} and b_{i} must be incomparable")
                elif not host.lt(a, b):
                    raise InvalidEmbedding(f"a_{i} < b_{j} fails")


# -- critical pairs ----------------------------------------------------------


def critical_pairs(p: Poset) -> tuple[tuple[int, int], ...]:
    """Ordered pairs (x, y), x ∥ y, with D(x) ⊆ D(y) and U(y) ⊆ U(x)."""
    out = []
    for x in range(p.n):
        dx, ux = p.down_mask(x), p.up_mask(x)
        for y in range(p.n):
            if x == y or not p.incomparable(x, y):
                continue
            if not dx & ~p.down_mask(y) and not p.up_mask(y) & ~ux:
                out.append((x, y))
    return tuple(sorted(out))


def dominating_critical_pair(p: Poset, x: int, y: int) -> tuple[int, int]:
    """A critical pair (x', y') with x' <= x and y <= y'.

    Any extension reversing (x', y') then reverses (x, y) as well.
    """
    if not p.incomparable(x, y):
        raise ValueError(f"({x}, {y}) is not incomparable")
    cand_x = [z for z in range(p.n) if p.leq(z, x) and p.incomparable(z, y)]
    xp = min(z for z in cand_x if not any(p.lt(w, z) for w in cand_x))
    cand_y = [z for z in range(p.n) if p.leq(y, z) and p.incomparable(z, xp)]
    yp = min(z for z in cand_y if not any(p.lt(z, w) for w in cand_y))
    return xp, yp


# -- reversible-partition branch and bound -----------------------------------


class _SearchBudget:
    __slots__ = ("left",)

    def __init__(self, budget: int):
        self.left = budget

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _decide_partition(
    arcs: Sequence[int], k: int, budget: _SearchBudget
) -> list[int] | None:
    """First (lexicographically least) assignment of pairs to < k acyclic
    classes, pairs taken in index order; None if impossible."""
    m = len(arcs)
    if m == 0:
        return []
    assign = [-1] * m
    class_masks = [0] * k

    def creates_cycle(i: int, cmask: int) -> bool:
        relevant = cmask | (1 << i)
        reach = arcs[i] & relevant
        seen = 0
        while reach & ~seen:
            if reach >> i & 1:
                return True
            new = reach & ~seen
            seen |= reach
            nxt = 0
            for j in bits(new):
                nxt |= arcs[j]
            reach = nxt & relevant
        return False

    def dfs(i: int, used: int) -> bool:
        if i == m:
            return True
        if not budget.spend():
            raise BudgetExceeded(0, 0)  # caller rewrites the bracket
        limit = min(used + 1, k)
        for c in range(limit):
            if not creates_cycle(i, class_masks[c]):
                assign[i] = c
                class_masks[c] |= 1 << i
                if dfs(i + 1, max(used, c + 1)):
                    return True
                class_masks[c] &= ~(1 << i)
                assign[i] = -1
        return False

    return assign if dfs(0, 0) else None


def min_reversible_partition(
    p: Poset,
    pairs: Sequence[tuple[int, int]],
    lo: int,
    hi: int,
    budget: int = DEFAULT_BUDGET,
) -> tuple[int, list[list[tuple[int, int]]]]:
    """Least k with a partition of ``pairs`` into k reversible sets.

    Tries k = lo.. upward; every k below the answer is searched to closure.
    Raises BudgetExceeded with the proven bracket when the node budget runs
    out.
    """
    pairs = sorted(pairs)
    if not pairs:
        return 0, []
    arcs = pair_arcs(p, pairs)
    tracker = _SearchBudget(budget)
    lo = max(lo, 1)
    hi = min(hi, len(pairs))
    for k in range(lo, hi + 1):
        try:
            assign = _decide_partition(arcs, k, tracker)
        except BudgetExceeded:
            raise BudgetExceeded(k, hi) from None
        if assign is not None:
            classes: list[list[tuple[int, int]]] = [[] for _ in range(max(assign) + 1)]
            for idx, c in enumerate(assign):
                classes[c].append(pairs[idx])
            return len(classes), classes
    raise AssertionError("partition into one class per pair always exists")


def _pairwise_conflict_clique(p: Poset, pairs: Sequence[tuple[int, int]]) -> int:
    """Greedy clique of pairwise 2-cycle conflicts: a cheap lower bound."""
    arcs = pair_arcs(p, pairs)
    n = len(pairs)
    best = 0
    for seed in range(n):
        clique = [seed]
        cand = [
            j
            for j in range(n)
            if j != seed and (arcs[seed] >> j & 1) and (arcs[j] >> seed & 1)
        ]
        for j in cand:
            if all((arcs[j] >> c & 1) and (arcs[c] >> j & 1) for c in clique):
                clique.append(j)
        best = max(best, len(clique))
    return best


# -- bound oracles (the seven comprehensive inequalities) ---------------------


def _all_maximal_antichains(p: Poset) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []

    def grow(start: int, chosen: int, cand: int) -> None:
        extendable = False
        for x in bits(cand & ~((1 << start) - 1)):
            extendable = True
            grow(
                x + 1,
                chosen | 1 << x,
                cand & ~(p.up_mask(x) | p.down_mask(x) | 1 << x),
            )
        if not extendable:
            # maximal among candidates, but must be maximal in P
            full = 0
            for y in range(p.n):
                if not chosen >> y & 1 and not (
                    (p.up_mask(y) | p.down_mask(y)) & chosen
                ):
                    full |= 1 << y
            if not full:
                out.append(frozenset(bits(chosen)))

    grow(0, 0, (1 << p.n) - 1)
    return out


def _cheap_bound(p: Poset) -> int:
    """Best non-recursive upper bound: rules 1, 3, 3-dual, 4, 5."""
    if p.n == 0:
        return 0
    if not inc_pairs(p):
        return 1
    vals = [p.width]
    for q in (p, p.dual()):
        keep = [x for x in range(q.n) if q.down_mask(x)]
        sub, _ = subposet(q, keep)
        vals.append(max(2, 1 + sub.width))
    a = p.max_antichain
    rest, _ = subposet(p, set(range(p.n)) - a)
    vals.append(max(2, p.n - len(a)))
    vals.append(max(2, 1 + 2 * rest.width))
    return min(vals)


def dim_upper_bounds(p: Poset) -> list[tuple[int, str]]:
    """Evaluate the seven classical inequalities (and dual forms).

    Each entry is (bound, rule-id); recursive rules use the cheap
    non-recursive bound on the smaller poset, never exact dimension.
    """
    out: list[tuple[int, str]] = []
    if p.n == 0:
        return [(0, "empty")]
    if not inc_pairs(p):
        return [(1, "chain")]
    out.append((p.width, "width"))
    if p.n >= 2:
        best = min(1 + _cheap_bound(subposet(p, set(range(p.n)) - {x})[0]) for x in range(p.n))
        out.append((best, "point-removal"))
    for q, tag in ((p, "above-minimals"), (p.dual(), "below-maximals")):
        keep = [x for x in range(q.n) if q.down_mask(x)]
        sub, _ = subposet(q, keep)
        out.append((max(2, 1 + sub.width), tag))
    antichains = _all_maximal_antichains(p) if p.n <= 20 else [p.max_antichain]
    out.append(
        (min(max(2, p.n - len(a)) for a in antichains), "antichain-complement")
    )
    out.append(
        (
            min(
                max(2, 1 + 2 * subposet(p, set(range(p.n)) - a)[0].width)
                for a in antichains
            ),
            "antichain-width",
        )
    )
    for q, tag in ((p, "downset-split"), (p.dual(), "downset-split-dual")):
        best = None
        for a in (_all_maximal_antichains(q) if q.n <= 20 else [q.max_antichain]):
            d_part, u_part = antichain_split(q, a)
            d_sub, _ = subposet(q, d_part | a)
            u_sub, _ = subposet(q, u_part)
            v = _cheap_bound(d_sub) + u_sub.width
            best = v if best is None else min(best, v)
        if best is not None:
            out.append((best, tag))
    removable = [
        (a, b)
        for a in p.minimals
        for b in p.maximals
        if p.incomparable(a, b)
    ]
    if removable:
        # max(2, .) guard: the bare inequality fails on the 2-antichain,
        # whose removal pair leaves the empty poset.
        best = min(
            max(2, 1 + _cheap_bound(subposet(p, set(range(p.n)) - {a, b})[0]))
            for a, b in removable
        )
        out.append((best, "minmax-pair-removal"))
    return out


# -- maximum standard example -------------------------------------------------


def max_standard_example(p: Poset, budget: int = DEFAULT_BUDGET) -> StandardExampleEmbedding:
    """A maximum-size embedded standard example, via max clique over
    cross-comparable incomparable pairs."""
    cand = sorted(
        (a, b)
        for a in range(p.n)
        for b in range(p.n)
        if p.incomparable(a, b)
    )
    m = len(cand)
    if m == 0:
        return StandardExampleEmbedding(0, (), ())
    compat = [0] * m
    for i, (a, b) in enumerate(cand):
        for j, (a2, b2) in enumerate(cand):
            if i == j:
                continue
            if len({a, b, a2, b2}) == 4 and p.lt(a, b2) and p.lt(a2, b):
                compat[i] |= 1 << j
    tracker = _SearchBudget(budget)
    best: list[int] = []

    def greedy_color_bound(mask: int) -> int:
        colors: list[int] = []
        for v in bits(mask):
            for ci in range(len(colors)):
                if not compat[v] & colors[ci]:
                    colors[ci] |= 1 << v
                    break
            else:
                colors.append(1 << v)
        return len(colors)

    def expand(clique: list[int], cand_mask: int) -> None:
        nonlocal best
        if not tracker.spend():
            raise BudgetExceeded(len(best), len(best) + greedy_color_bound(cand_mask))
        if not cand_mask:
            if len(clique) > len(best):
                best = clique[:]
            return
        if len(clique) + greedy_color_bound(cand_mask) <= len(best):
            return
        v = cand_mask.bit_length() - 1  # iterate high to keep pruning tight
        expand(clique, cand_mask & ~(1 << v))
        clique.append(v)
        expand(clique, cand_mask & compat[v])
        clique.pop()

    expand([], (1 << m) - 1)
    chosen = sorted(best, key=lambda i: cand[i])
    emb = StandardExampleEmbedding(
        len(chosen),
        tuple(cand[i][0] for i in chosen),
        tuple(cand[i][1] for i in chosen),
    )
    emb.validate(p)
    return emb


# -- exact dimension ----------------------------------------------------------


def dim_exact(p: Poset, budget: int = DEFAULT_BUDGET) -> DimensionCertificate:
    """Exact dimension with a verifying realizer.

    The search is exhaustive at value-1 (no partition exists), so the value
    is certified from both sides.
    """
    if p.n == 0:
        return DimensionCertificate(0, (), "width-argument")
    crit = critical_pairs(p)
    if not crit:
        return DimensionCertificate(1, (p.topological_order(),), "width-argument")
    se = max_standard_example(p, budget=budget)
    lo = max(2, se.d, _pairwise_conflict_clique(p, crit))
    hi = min(v for v, _ in dim_upper_bounds(p))
    value, classes = min_reversible_partition(p, crit, lo, hi, budget=budget)
    realizer = tuple(extension_from_reversible_set(p, cls) for cls in classes)
    if not verify_realizer(p, realizer):
        raise AssertionError("constructed realizer failed verification")
    if value == se.d:
        witness = f"standard-example({se.d})"
    elif value == 2:
        witness = "width-argument"
    else:
        witness = "exhausted-search"
    return DimensionCertificate(value, realizer, witness)


def idim_exact(bp: BipartitePoset, budget: int = DEFAULT_BUDGET) -> DimensionCertificate:
    """Interval dimension of a bipartite poset: least partition of Inc_0
    into reversible sets (0 when Inc_0 is empty)."""
    pairs = sorted(inc0(bp))
    if not pairs:
        return DimensionCertificate(0, (), "width-argument")
    p = bp.base
    lo = max(1, _pairwise_conflict_clique(p, pairs))
    hi = len(_greedy_maximal_matching(bp))
    value, classes = min_reversible_partition(p, pairs, lo, hi, budget=budget)
    family = tuple(extension_from_reversible_set(p, cls) for cls in classes)
    if not verify_reversing_family(bp, family):
        raise AssertionError("constructed reversing family failed verification")
    witness = "exhausted-search" if value > 1 else "width-argument"
    return DimensionCertificate(value, family, witness)


def _greedy_maximal_matching(bp: BipartitePoset) -> list[tuple[int, int]]:
    used: set[int] = set()
    out = []
    for a, b in sorted(inc0(bp)):
        if a not in used and b not in used:
            out.append((a, b))
            used.update((a, b))
    return out


# -- interval orders ----------------------------------------------------------


def is_interval_order(p: Poset) -> bool:
    """True iff no four elements induce S_2 (= 2+2)."""
    rel = sorted(p.relation)
    for a, b in rel:
        for c, d in rel:
            if len({a, b, c, d}) == 4:
                if (
                    p.incomparable(a, c)
                    and p.incomparable(a, d)
                    and p.incomparable(b, c)
                    and p.incomparable(b, d)
                ):
                    return False
    return True


# -- Hall augmentation of standard examples -----------------------------------


@dataclass(frozen=True)
class AugmentResult:
    """Either a full matching of t2-pairs into t-pairs, or a strictly
    larger embedding obtained by the exchange argument."""

    matching: dict[int, int] | None = None
    enlarged: StandardExampleEmbedding | None = None


def _is_s2_quadruple(p: Poset, w: int, z: int, a: int, b: int) -> bool:
    sub, kept = subposet(p, {w, z, a, b})
    if sub.n != 4:
        return False
    rel = sub.relation
    if len(rel) != 2:
        return False
    (u1, v1), (u2, v2) = sorted(rel)
    return len({u1, v1, u2, v2}) == 4


def augment_standard_example(
    p: Poset,
    t_emb: StandardExampleEmbedding,
    t2_emb: StandardExampleEmbedding,
) -> AugmentResult:
    """Hall-match t2 pairs to compatible t pairs, or enlarge t.

    Edge u_i -> v_j exists when the quadruple {w_i, z_i, a_j, b_j} is not
    S_2.  If no full matching exists, a Hall violator S gives the exchange:
    drop the t-pairs matched by N(S) and adopt the pairs of S, yielding an
    embedding of size d - |N(S)| + |S| > d.
    """
    t_emb.validate(p)
    t2_emb.validate(p)
    if t_emb.elements() & t2_emb.elements():
        raise InvalidEmbedding("embeddings must be disjoint")
    tp = t_emb.pairs()
    sp = t2_emb.pairs()
    adj = [
        [j for j, (a, b) in enumerate(tp) if not _is_s2_quadruple(p, w, z, a, b)]
        for (w, z) in sp
    ]
    match_of_v: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_of_v or try_augment(match_of_v[v], seen):
                match_of_v[v] = u
                return True
        return False

    for u in range(len(sp)):
        if not try_augment(u, set()):
            # Hall violator: u-side vertices reachable by alternating paths
            s_side = {u}
            n_side: set[int] = set()
            frontier = [u]
            while frontier:
                nxt = []
                for uu in frontier:
                    for v in adj[uu]:
                        if v not in n_side:
                            n_side.add(v)
                            if v in match_of_v and match_of_v[v] not in s_side:
                                s_side.add(match_of_v[v])
                                nxt.append(match_of_v[v])
                frontier = nxt
            keep = [j for j in range(len(tp)) if j not in n_side]
            mins = [tp[j][0] for j in keep] + [sp[i][0] for i in sorted(s_side)]
            maxs = [tp[j][1] for j in keep] + [sp[i][1] for i in sorted(s_side)]
            enlarged = StandardExampleEmbedding(len(mins), tuple(mins), tuple(maxs))
            enlarged.validate(p)
            if enlarged.d <= t_emb.d:
                raise AssertionError("exchange failed to enlarge the embedding")
            return AugmentResult(enlarged=enlarged)
    return AugmentResult(matching={u: v for v, u in match_of_v.items()})
