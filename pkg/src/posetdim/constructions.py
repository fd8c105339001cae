"""Constructive realizer algorithms, each emitting an explicit family of
linear extensions that meets its stated size bound and passes independent
verification.

All machinery works on induced subposets through ``active`` element sets,
keeping original element ids throughout, so families built on a fragment
lift to the full poset without reindexing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from posetdim.core import (
    BipartitePoset,
    Poset,
    PosetError,
    antichain_split,
    inc0,
    inc_pairs,
)
from posetdim.dimension import StandardExampleEmbedding, max_standard_example
from posetdim.reversibility import (
    extension_from_reversible_set,
    mixpair_extension,
    reversed_pairs,
    verify_realizer,
    verify_reversing_family,
)


class ContainsSm(PosetError):
    """The bipartite poset contains S_m, so the saving bound cannot hold."""


class NoValidLabeling(PosetError):
    """No admissible last label exists; carries the forced S_m witness."""

    def __init__(self, witness: StandardExampleEmbedding):
        super().__init__("every candidate label is blocked; poset contains S_m")
        self.witness = witness


class HypothesisViolated(PosetError):
    """The instance does not satisfy the construction's hypotheses."""


class NotReversingRest(PosetError):
    """The supplied family does not reverse the complement subposet."""


@dataclass(frozen=True)
class Matching:
    """Disjoint incomparable min-max pairs of a balanced subposet."""

    pairs: tuple[tuple[int, int], ...]

    def validate(self, bp: BipartitePoset) -> None:
        seen: set[int] = set()
        for u, v in self.pairs:
            if u not in bp.a_side or v not in bp.b_side:
                raise ValueError(f"pair ({u}, {v}) does not go from A to B")
            if not bp.base.incomparable(u, v):
                raise ValueError(f"matched pair ({u}, {v}) is comparable")
            if u in seen or v in seen:
                raise ValueError("matching elements are not distinct")
            seen.update((u, v))

    def elements(self) -> frozenset[int]:
        return frozenset(e for pr in self.pairs for e in pr)


def greedy_maximal_matching(
    bp: BipartitePoset, active: Iterable[int] | None = None
) -> Matching:
    """Lexicographically greedy maximal matching of incomparable A-B pairs."""
    act = frozenset(active) if active is not None else None
    used: set[int] = set()
    out = []
    for a, b in sorted(inc0(bp)):
        if act is not None and (a not in act or b not in act):
            continue
        if a not in used and b not in used:
            out.append((a, b))
            used.update((a, b))
    return Matching(tuple(out))


def insert_lowest_legal(p: Poset, seq: Sequence[int], element: int) -> tuple[int, ...]:
    """Insert ``element`` right above the last of its strict predecessors."""
    pos = 0
    for i, e in enumerate(seq):
        if p.lt(e, element):
            pos = i + 1
    return tuple(seq[:pos]) + (element,) + tuple(seq[pos:])


def _lift(p: Poset, seq: Sequence[int], missing: Iterable[int]) -> tuple[int, ...]:
    out = tuple(seq)
    for e in sorted(missing):
        out = insert_lowest_legal(p, out, e)
    return out


def _reverses_inc0_subset(
    bp: BipartitePoset, fam: Sequence[Sequence[int]], elements: frozenset[int]
) -> bool:
    todo = {
        (a, b)
        for a, b in inc0(bp)
        if a in elements and b in elements
    }
    for ext in fam:
        if sorted(ext) != sorted(elements):
            return False
        todo -= reversed_pairs(ext, todo)
    return not todo


def realize_matching_reduction(
    bp: BipartitePoset,
    m: Matching,
    rest_family: Sequence[Sequence[int]],
    active: Iterable[int] | None = None,
) -> list[tuple[int, ...]]:
    """Reversing family of size |m| + |rest|: lift the rest family over the
    matched elements, then add one mixpair extension per matched pair.

    ``rest_family`` must reverse the bipartite poset minus the matched
    elements (it may be empty when the matching is maximal).
    """
    act = frozenset(active) if active is not None else frozenset(range(bp.n))
    m.validate(bp)
    matched = m.elements()
    if matched - act:
        raise ValueError("matching uses elements outside the active set")
    complement = act - matched
    if not _reverses_inc0_subset(bp, rest_family, complement):
        raise NotReversingRest("rest family does not reverse the complement")
    out = [_lift(bp.base, seq, matched) for seq in rest_family]
    for u, v in m.pairs:
        out.append(mixpair_extension(bp, u, v, active=act).extension)
    return out


def realize_save_one(bp: BipartitePoset) -> list[tuple[int, ...]]:
    """A reversing family of size m - 1, m = min(|A|, |B|) >= 2, valid as
    long as the poset does not contain the standard example S_m.

    The m-1 extensions have the block structure

        A - {a_i, a_m} < I(a_i) ∩ I(a_m) < a_m < I(a_i) ∩ U(a_m) < a_i < U(a_i)

    where the last label a_m is chosen so that no b in B is incomparable to
    a_m yet above every other a_i.
    """
    m = min(len(bp.a_side), len(bp.b_side))
    if m < 2:
        raise ValueError("saving construction needs min side size >= 2")
    if max_standard_example(bp.base).d >= m:
        raise ContainsSm(f"poset contains S_{m}")
    if len(bp.a_side) > len(bp.b_side):
        dual_fam = realize_save_one(bp.dual())
        return [tuple(reversed(ext)) for ext in dual_fam]

    base = bp.base
    a_all = sorted(bp.a_side)
    b_all = sorted(bp.b_side)
    last = None
    for a in a_all:
        blocked = any(
            base.incomparable(b, a)
            and all(base.lt(a2, b) for a2 in a_all if a2 != a)
            for b in b_all
        )
        if not blocked:
            last = a
            break
    if last is None:
        # every candidate is blocked by some witness b; those (a, b_a) pairs
        # form an S_m, contradicting the gate above
        pairs = []
        for a in a_all:
            b_a = next(
                b
                for b in b_all
                if base.incomparable(b, a)
                and all(base.lt(a2, b) for a2 in a_all if a2 != a)
            )
            pairs.append((a, b_a))
        witness = StandardExampleEmbedding(
            len(pairs), tuple(a for a, _ in pairs), tuple(b for _, b in pairs)
        )
        witness.validate(base)
        raise NoValidLabeling(witness)

    others = [a for a in a_all if a != last]
    fam = []
    for a_i in others:
        inc_i = {b for b in b_all if base.incomparable(a_i, b)}
        inc_m = {b for b in b_all if base.incomparable(last, b)}
        up_m = {b for b in b_all if base.lt(last, b)}
        up_i = {b for b in b_all if base.lt(a_i, b)}
        blocks = [
            sorted(set(a_all) - {a_i, last}),
            sorted(inc_i & inc_m),
            [last],
            sorted(inc_i & up_m),
            [a_i],
            sorted(up_i),
        ]
        fam.append(tuple(itertools.chain.from_iterable(blocks)))
    if not verify_reversing_family(bp, fam):
        raise AssertionError("saving construction failed verification")
    return fam


# -- two disjoint standard examples (the 9s bound) ---------------------------


@dataclass(frozen=True)
class TwoStandardInstance:
    """Balanced bipartite poset of size 20s covered by two disjoint copies
    of S_{5s}, with no matched quadruple inducing S_2."""

    host: BipartitePoset
    s: int
    t_emb: StandardExampleEmbedding
    t2_emb: StandardExampleEmbedding

    @property
    def t(self) -> int:
        return 5 * self.s

    def validate(self) -> None:
        t = self.t
        if self.s < 1:
            raise HypothesisViolated("need s >= 1")
        if self.host.n != 4 * t:
            raise HypothesisViolated("host must have exactly 4t elements")
        if self.t_emb.d != t or self.t2_emb.d != t:
            raise HypothesisViolated("both embeddings must have size t = 5s")
        base = self.host.base
        self.t_emb.validate(base)
        self.t2_emb.validate(base)
        if self.t_emb.elements() & self.t2_emb.elements():
            raise HypothesisViolated("embeddings overlap")
        if self.t_emb.elements() | self.t2_emb.elements() != frozenset(range(base.n)):
            raise HypothesisViolated("embeddings must cover the host")
        for emb in (self.t_emb, self.t2_emb):
            if not set(emb.mins) <= self.host.a_side or not set(emb.maxs) <= self.host.b_side:
                raise HypothesisViolated("embedding sides disagree with the partition")
        for i in range(t):
            a, b = self.t_emb.mins[i], self.t_emb.maxs[i]
            w, z = self.t2_emb.mins[i], self.t2_emb.maxs[i]
            if base.lt(a, z) and base.lt(w, b):
                raise HypothesisViolated(f"quadruple {i} induces S_2")


def realize_two_standard(inst: TwoStandardInstance) -> list[tuple[int, ...]]:
    """Reversing family of size at most 9s for a TwoStandardInstance."""
    inst.validate()
    bp, s, t = inst.host, inst.s, inst.t
    base = bp.base
    a = inst.t_emb.mins
    b = inst.t_emb.maxs
    w = inst.t2_emb.mins
    z = inst.t2_emb.maxs

    # largest system of index pairs (i, j) with a_i || z_j and b_i || w_j,
    # distinct i's and distinct j's: a maximum bipartite matching
    adj = [
        [j for j in range(t) if base.incomparable(a[i], z[j]) and base.incomparable(b[i], w[j])]
        for i in range(t)
    ]
    match_of_j: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_of_j or augment(match_of_j[j], seen):
                match_of_j[j] = i
                return True
        return False

    s1 = sum(1 for i in range(t) if augment(i, set()))
    system = sorted((i, j) for j, i in match_of_j.items())

    if s1 >= s:
        q1_elems = frozenset(
            e for i, j in system for e in (a[i], b[i], w[j], z[j])
        )
        f1 = []
        for i, j in system:
            mr = mixpair_extension(bp, a[i], b[i], extra=(w[j], z[j]), active=q1_elems)
            if mr.extra_reversed is not True:
                raise HypothesisViolated("paired extra reversal failed in Q1")
            f1.append(mr.extension)
        rest_pairs = sorted(
            [(a[i], b[i]) for i in range(t) if i not in {i0 for i0, _ in system}]
            + [(w[j], z[j]) for j in range(t) if j not in {j0 for _, j0 in system}]
        )
        family = realize_matching_reduction(bp, Matching(tuple(rest_pairs)), f1)
    else:
        exclude = {i for i, _ in system} | {j for _, j in system}
        low = sorted(set(range(t)) - exclude)[: 3 * s]
        for i in low:
            c1 = base.incomparable(a[i], z[i]) and base.lt(w[i], b[i])
            c2 = base.incomparable(w[i], b[i]) and base.lt(a[i], z[i])
            if c1 == c2:
                raise HypothesisViolated(
                    f"index {i} does not satisfy the exactly-one property"
                )

        def edge_condition(i: int, j: int) -> int | None:
            if base.incomparable(a[i], z[j]) and base.incomparable(b[i], w[i]):
                return 1
            if base.incomparable(b[i], w[j]) and base.incomparable(a[i], z[i]):
                return 2
            return None

        covered: set[int] = set()
        edges: list[tuple[int, int, int]] = []
        for i, j in itertools.permutations(low, 2):
            if i in covered or j in covered:
                continue
            cond = edge_condition(i, j)
            if cond is not None:
                edges.append((i, j, cond))
                covered.update((i, j))
        r = len(edges)

        q2_elems = frozenset(e for i in low for e in (a[i], b[i], w[i], z[i]))
        q3_elems = frozenset(e for i in covered for e in (a[i], b[i], w[i], z[i]))

        if r >= s:
            f3 = []
            for i, j, cond in edges:
                if cond == 1:
                    picks = [(a[i], z[j]), (w[i], b[i]), (a[j], b[j])]
                else:
                    picks = [(w[j], b[i]), (a[i], z[i]), (a[j], b[j])]
                for u, v in picks:
                    f3.append(mixpair_extension(bp, u, v, active=q3_elems).extension)
            comp_pairs = sorted(
                [(a[i], b[i]) for i in low if i not in covered]
                + [(w[i], z[i]) for i in low if i not in covered]
            )
            q2_family = realize_matching_reduction(
                bp, Matching(tuple(comp_pairs)), f3, active=q2_elems
            )
        else:
            q4_elems = q2_elems - q3_elems
            f4 = []
            for i in low:
                if i in covered:
                    continue
                if base.incomparable(a[i], z[i]):
                    f4.append(
                        mixpair_extension(bp, a[i], z[i], active=q4_elems).extension
                    )
                else:
                    f4.append(
                        mixpair_extension(bp, w[i], b[i], active=q4_elems).extension
                    )
            q3_pairs = sorted(
                [(a[i], b[i]) for i in sorted(covered)]
                + [(w[i], z[i]) for i in sorted(covered)]
            )
            q2_family = realize_matching_reduction(
                bp, Matching(tuple(q3_pairs)), f4, active=q2_elems
            )
        outer_pairs = sorted(
            [(a[i], b[i]) for i in range(t) if i not in low]
            + [(w[i], z[i]) for i in range(t) if i not in low]
        )
        family = realize_matching_reduction(bp, Matching(tuple(outer_pairs)), q2_family)

    if len(family) > 9 * s:
        raise AssertionError(f"family size {len(family)} exceeds 9s = {9 * s}")
    if not verify_reversing_family(bp, family):
        raise AssertionError("two-standard construction failed verification")
    return family


# -- sandwich posets (maximal antichain between two antichains) --------------


@dataclass(frozen=True)
class SandwichInstance:
    """Poset A ∪ X ∪ Y: A a maximal antichain, X = D(A) and Y = U(A) both
    antichains, |X| <= |Y|."""

    host: Poset
    antichain: frozenset[int]
    down: frozenset[int]
    up: frozenset[int]

    def validate(self) -> None:
        d, u = antichain_split(self.host, self.antichain)
        if (d, u) != (self.down, self.up):
            raise HypothesisViolated("down/up parts disagree with the split")
        for part in (self.down, self.up):
            for x in part:
                for y in part:
                    if x != y and not self.host.incomparable(x, y):
                        raise HypothesisViolated("side parts must be antichains")
        if not self.down and not self.up:
            raise HypothesisViolated("host must not be an antichain")


def _sandwich_core(
    p: Poset,
    a_elems: list[int],
    xs: list[int],
    ys: list[int],
) -> list[tuple[int, ...]]:
    """Realizer of A ∪ X ∪ Y with |X| = |Y| = s >= 0, every x below every y,
    of size 1 + ceil(4s/3) (s >= 1) or 2 (s = 0, antichain handled by caller
    when X and Y are empty)."""
    s = len(xs)
    assert s == len(ys) or not xs

    # skeleton = (x_seq, y_seq); its focus sequence interleaves A-blocks
    skeletons: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    group_of: list[list[int]] = []  # skeleton indices per duty group
    if not xs:
        # X empty: one low-placement skeleton per y, final descent on top
        for i, y in enumerate(ys):
            skeletons.append(((), (y,)))
            group_of.append([i])
    r, rho = (0, 0) if not xs else divmod(s, 3)
    for j in range(r):
        xa, xb, xc = xs[3 * j], xs[3 * j + 1], xs[3 * j + 2]
        ya, yb, yc = ys[3 * j], ys[3 * j + 1], ys[3 * j + 2]
        start = len(skeletons)
        skeletons.extend(
            [
                ((xb, xc, xa), (ya, yb, yc)),
                ((xc, xb, xa), (yb, ya, yc)),
                ((xa, xc, xb), (yc, ya, yb)),
                ((xa, xb, xc), (yc, yb, ya)),
            ]
        )
        group_of.append(list(range(start, start + 4)))
    if rho == 1:
        x_t, y_t = xs[-1], ys[-1]
        start = len(skeletons)
        skeletons.extend([((x_t,), (y_t,)), ((x_t,), (y_t,))])
        group_of.append([start, start + 1])
    elif rho == 2:
        x1, x2 = xs[-2], xs[-1]
        y1, y2 = ys[-2], ys[-1]
        start = len(skeletons)
        skeletons.extend(
            [
                ((x1, x2), (y1, y2)),
                ((x1, x2), (y2, y1)),
                ((x2, x1), (y2, y1)),
            ]
        )
        group_of.append([start, start + 1, start + 2])

    # block placement per A-element per skeleton: block b sits after the
    # first b focus elements; legal range [lo, hi]
    def focus(sk: tuple[tuple[int, ...], tuple[int, ...]]) -> tuple[int, ...]:
        return sk[0] + sk[1]

    def legal_range(sk, elem) -> tuple[int, int]:
        foc = focus(sk)
        lo = 0
        hi = len(foc)
        for posn, f in enumerate(foc):
            if p.lt(f, elem):
                lo = max(lo, posn + 1)
            if p.lt(elem, f):
                hi = min(hi, posn)
        return lo, hi

    placement: dict[tuple[int, int], int] = {}  # (skeleton index, element) -> block
    for elem in a_elems:
        for grp in group_of:
            duties_x = set()
            duties_y = set()
            for sk_i in grp:
                x_seq, y_seq = skeletons[sk_i]
                duties_x.update(x for x in x_seq if p.incomparable(x, elem))
                duties_y.update(y for y in y_seq if p.incomparable(y, elem))
            ranges = [legal_range(skeletons[sk_i], elem) for sk_i in grp]
            k = len(grp)
            candidates = [("lo",) + ("hi",) * (k - 1)] + list(
                itertools.product(("lo", "hi"), repeat=k)
            )
            chosen = None
            for cand in candidates:
                blocks = [
                    ranges[q][0] if cand[q] == "lo" else ranges[q][1]
                    for q in range(k)
                ]
                got_x = set()
                got_y = set()
                for q, sk_i in enumerate(grp):
                    x_seq, y_seq = skeletons[sk_i]
                    foc = focus(skeletons[sk_i])
                    for posn, f in enumerate(foc):
                        if f in duties_x and posn >= blocks[q]:
                            got_x.add(f)
                        if f in duties_y and posn < blocks[q]:
                            got_y.add(f)
                if got_x >= duties_x and got_y >= duties_y:
                    chosen = blocks
                    break
            if chosen is None:
                raise HypothesisViolated(
                    "no push-up/push-down placement covers all pairs"
                )
            for q, sk_i in enumerate(grp):
                placement[(sk_i, elem)] = chosen[q]

    # within-A order: any pair strictly block-separated everywhere must be
    # allowed to flip in the final descending extension
    forced: dict[int, set[int]] = {e: set() for e in a_elems}
    for e1 in a_elems:
        for e2 in a_elems:
            if e1 != e2 and all(
                placement[(i, e1)] < placement[(i, e2)] for i in range(len(skeletons))
            ):
                forced[e1].add(e2)
    sigma: list[int] = []
    pending = set(a_elems)
    indeg = {e: sum(1 for e2 in a_elems if e in forced[e2]) for e in a_elems}
    while pending:
        nxt = min(e for e in pending if indeg[e] == 0)
        sigma.append(nxt)
        pending.remove(nxt)
        for e2 in forced[nxt]:
            indeg[e2] -= 1
    sigma_rank = {e: i for i, e in enumerate(sigma)}

    family = []
    for sk_i, sk in enumerate(skeletons):
        x_seq, y_seq = sk
        foc = focus(sk)
        blocks: list[list[int]] = [[] for _ in range(len(foc) + 1)]
        for elem in a_elems:
            blocks[placement[(sk_i, elem)]].append(elem)
        for blk in blocks:
            blk.sort(key=lambda e: sigma_rank[e])
        seq = sorted(set(xs) - set(x_seq))
        for posn, f in enumerate(foc):
            seq.extend(blocks[posn])
            seq.append(f)
        seq.extend(blocks[len(foc)])
        seq.extend(sorted(set(ys) - set(y_seq)))
        family.append(tuple(seq))

    final = (
        tuple(sorted(xs))
        + tuple(sorted(a_elems, key=lambda e: -sigma_rank[e]))
        + tuple(sorted(ys))
    )
    family.append(final)
    return family


def realize_sandwich(inst: SandwichInstance) -> list[tuple[int, ...]]:
    """Realizer of a sandwich poset of size at most 1 + t + ceil(4s/3).

    Handles |X| > |Y| by dualizing, peels Y down to |X| adding one
    extension per peel, peels incomparable X-Y pairs likewise, then runs
    the grouped block construction on the comparably-stacked core.
    """
    inst.validate()
    p = inst.host
    xs0, ys0 = sorted(inst.down), sorted(inst.up)
    if len(xs0) > len(ys0):
        dual_inst = SandwichInstance(p.dual(), inst.antichain, inst.up, inst.down)
        return [tuple(reversed(ext)) for ext in realize_sandwich(dual_inst)]
    s, t = len(xs0), len(ys0) - len(xs0)

    active = set(range(p.n))
    xs, ys = list(xs0), list(ys0)
    ops: list[tuple[str, tuple[int, ...]]] = []
    if xs:
        while len(ys) > len(xs):
            y = ys.pop(0)
            active.remove(y)
            ops.append(("tpeel", (y,)))
        while True:
            bad = sorted(
                (x, y) for x in xs for y in ys if p.incomparable(x, y)
            )
            if not bad:
                break
            x, y = bad[0]
            xs.remove(x)
            ys.remove(y)
            active -= {x, y}
            ops.append(("pairpeel", (x, y)))

    a_elems = sorted(inst.antichain)
    if not xs and not ys:
        if len(a_elems) == 1:
            family = [tuple(a_elems)]
        else:
            family = [tuple(a_elems), tuple(reversed(a_elems))]
    else:
        family = _sandwich_core(p, a_elems, xs, ys)

    for kind, payload in reversed(ops):
        if kind == "tpeel":
            (y,) = payload
            active.add(y)
            fresh = extension_from_reversible_set(
                p,
                {(u, y) for u in active if p.incomparable(u, y)},
                active=active,
            )
            family = [ext + (y,) for ext in family]
            family.append(fresh)
        else:
            x, y = payload
            active.update((x, y))
            fresh = extension_from_reversible_set(
                p,
                {(x, u) for u in active if p.incomparable(x, u)}
                | {(v, y) for v in active if p.incomparable(v, y)},
                active=active,
            )
            family = [(x,) + ext + (y,) for ext in family]
            family.append(fresh)

    bound = 1 + t + -(-4 * s // 3)
    if len(family) > bound:
        raise AssertionError(f"family size {len(family)} exceeds bound {bound}")
    if not verify_realizer(p, family):
        raise AssertionError("sandwich construction failed verification")
    return family
