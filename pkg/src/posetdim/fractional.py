"""Exact fractional dimension via rational LP over enumerated extensions.

Everything here is exact arithmetic on fractions.Fraction: the LP is solved
by a two-phase dense-tableau simplex with Bland's rule (guaranteeing
termination under degeneracy) and every certificate is verified before it
is returned, so primal total = dual total is an identity, not a tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from posetdim.core import (
    BipartitePoset,
    Poset,
    PosetError,
    enumerate_linear_extensions,
    inc0,
    inc_pairs,
)
from posetdim.constructions import SandwichInstance, realize_sandwich
from posetdim.dimension import critical_pairs
from posetdim.reversibility import (
    InvalidExtension,
    extension_from_reversible_set,
    mixpair_extension,
    reversed_pairs,
)
from posetdim.core import is_linear_extension


class NotCovering(PosetError):
    """The weighted family misses a required covering constraint."""


@dataclass(frozen=True)
class WeightedFamily:
    """Linear extensions with non-negative rational weights."""

    members: tuple[tuple[tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        for _, w in self.members:
            if w < 0:
                raise ValueError("weights must be non-negative")

    @property
    def total(self) -> Fraction:
        return sum((w for _, w in self.members), Fraction(0))

    def extended(self, extra: Iterable[tuple[tuple[int, ...], Fraction]]) -> "WeightedFamily":
        return WeightedFamily(self.members + tuple(extra))


@dataclass(frozen=True)
class FracCertificate:
    value: Fraction
    primal: WeightedFamily
    dual: dict[tuple[int, int], Fraction]

    def dual_total(self) -> Fraction:
        return sum(self.dual.values(), Fraction(0))


def verify_weighted_family(
    p: Poset,
    w: WeightedFamily,
    constraints: Iterable[tuple[int, int]],
) -> bool:
    """Exact check that every constrained pair carries weight >= 1."""
    for ext, _ in w.members:
        if not is_linear_extension(p, ext):
            raise InvalidExtension(f"{ext} is not a linear extension")
    need = {pair: Fraction(0) for pair in constraints}
    for ext, wt in w.members:
        pos = {e: i for i, e in enumerate(ext)}
        for (a, b) in need:
            if pos[a] > pos[b]:
                need[(a, b)] += wt
    return all(v >= 1 for v in need.values())


# -- exact rational simplex ---------------------------------------------------

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _solve_covering_lp(
    masks: Sequence[int], nrows: int
) -> tuple[Fraction, dict[int, Fraction], list[Fraction]]:
    """min sum(x) s.t. for each row i: sum of x_j over masks with bit i >= 1.

    Returns (value, primal {column: weight}, dual prices per row), all
    exact.  Bland's rule throughout.
    """
    ncols = len(masks)
    m = nrows
    # columns: 0..ncols-1 real, then m surplus, then m artificial
    surplus0 = ncols
    art0 = ncols + m
    width = ncols + 2 * m

    rows: list[list[Fraction]] = []
    for i in range(m):
        row = [_ONE if mask >> i & 1 else _ZERO for mask in masks]
        row += [_ZERO] * (2 * m)
        row[surplus0 + i] = -_ONE
        row[art0 + i] = _ONE
        row.append(_ONE)  # rhs
        rows.append(row)
    basis = [art0 + i for i in range(m)]

    def rebuild_obj(costs: list[Fraction]) -> list[Fraction]:
        obj = costs[:] + [_ZERO]
        for i, row in enumerate(rows):
            cb = costs[basis[i]]
            if cb:
                for j in range(width + 1):
                    if row[j]:
                        obj[j] -= cb * row[j]
        return obj

    def pivot(obj: list[Fraction], pr: int, pc: int) -> None:
        prow = rows[pr]
        inv = _ONE / prow[pc]
        if inv != 1:
            for j in range(width + 1):
                if prow[j]:
                    prow[j] *= inv
        for r in itertools.chain(rows, (obj,)):
            if r is prow:
                continue
            f = r[pc]
            if f:
                for j in range(width + 1):
                    if prow[j]:
                        r[j] -= f * prow[j]
        basis[pr] = pc

    def run(obj: list[Fraction], allowed: range | list[int]) -> None:
        while True:
            enter = -1
            for j in allowed:
                if obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return
            best_ratio = None
            leave = -1
            for i, row in enumerate(rows):
                if row[enter] > 0:
                    ratio = row[width] / row[enter]
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leave])
                    ):
                        best_ratio = ratio
                        leave = i
            if leave < 0:
                raise AssertionError("covering LP cannot be unbounded")
            pivot(obj, leave, enter)

    # phase 1: drive out artificials
    costs1 = [_ZERO] * width
    for j in range(art0, art0 + m):
        costs1[j] = _ONE
    obj = rebuild_obj(costs1)
    run(obj, range(art0))  # artificials never re-enter
    if -obj[width] != 0:
        raise AssertionError("covering LP must be feasible")
    for i in range(m):
        if basis[i] >= art0:
            pc = next((j for j in range(art0) if rows[i][j] != 0), None)
            if pc is not None:
                pivot(obj, i, pc)

    # phase 2: true objective (artificials excluded from pricing)
    costs2 = [_ZERO] * width
    for j in range(ncols):
        costs2[j] = _ONE
    obj = rebuild_obj(costs2)
    run(obj, range(art0))

    value = _ZERO
    primal: dict[int, Fraction] = {}
    for i, bj in enumerate(basis):
        if bj < ncols and rows[i][width]:
            primal[bj] = rows[i][width]
            value += rows[i][width]
    duals = [-obj[art0 + i] for i in range(m)]
    # certificate checks: dual feasibility and strong duality, exactly
    for y in duals:
        if y < 0:
            raise AssertionError("negative dual price")
    for mask in masks:
        tot = sum((duals[i] for i in range(m) if mask >> i & 1), _ZERO)
        if tot > 1:
            raise AssertionError("dual constraint violated")
    if sum(duals, _ZERO) != value:
        raise AssertionError("strong duality failed")
    return value, primal, duals


def _distinct_reversal_masks(
    p: Poset, rows: Sequence[tuple[int, int]], cap: int
) -> tuple[list[int], list[tuple[int, ...]]]:
    idx = {pair: i for i, pair in enumerate(rows)}
    reps: dict[int, tuple[int, ...]] = {}
    for ext in enumerate_linear_extensions(p, cap):
        pos = {e: i for i, e in enumerate(ext)}
        mask = 0
        for (a, b), i in idx.items():
            if pos[a] > pos[b]:
                mask |= 1 << i
        if mask not in reps:
            reps[mask] = ext
    masks = sorted(reps)
    return masks, [reps[msk] for msk in masks]


def _solve_extension_lp(
    p: Poset, rows: Sequence[tuple[int, int]], cap: int
) -> FracCertificate:
    masks, reps = _distinct_reversal_masks(p, rows, cap)
    value, primal, duals = _solve_covering_lp(masks, len(rows))
    members = tuple(
        (reps[j], wt) for j, wt in sorted(primal.items()) if wt > 0
    )
    dual = {pair: duals[i] for i, pair in enumerate(rows) if duals[i]}
    return FracCertificate(value, WeightedFamily(members), dual)


def fdim_exact(p: Poset, cap: int = 10**6) -> FracCertificate:
    """Fractional dimension: the minimum-total weighting of all linear
    extensions covering every incomparable pair with weight >= 1.

    By convention the chain has value 1 and the empty poset 0 (the LP with
    no constraints has optimum 0; duality is asserted at the LP layer).
    Covering the critical pairs suffices: every incomparable pair is
    dominated by a critical one, and the certificate is verified against
    all of Inc(P) before returning.
    """
    if p.n == 0:
        return FracCertificate(_ZERO, WeightedFamily(()), {})
    rows = critical_pairs(p)
    if not rows:
        fam = WeightedFamily(((p.topological_order(), _ONE),))
        return FracCertificate(_ONE, fam, {})
    cert = _solve_extension_lp(p, rows, cap)
    if not verify_weighted_family(p, cert.primal, inc_pairs(p)):
        raise AssertionError("fractional primal fails full coverage")
    if cert.primal.total != cert.value:
        raise AssertionError("primal total disagrees with LP value")
    return cert


def idim_star_exact(bp: BipartitePoset, cap: int = 10**6) -> FracCertificate:
    """Fractional interval dimension; zero when Inc_0 is empty."""
    rows = sorted(inc0(bp))
    if not rows:
        return FracCertificate(_ZERO, WeightedFamily(()), {})
    cert = _solve_extension_lp(bp.base, rows, cap)
    if not verify_weighted_family(bp.base, cert.primal, rows):
        raise AssertionError("fractional interval primal fails coverage")
    return cert


def fracdim_from_idimstar(bp: BipartitePoset, w: WeightedFamily) -> WeightedFamily:
    """Extend an Inc_0-covering family to cover all of Inc(P) at +2 weight.

    Adds L with A < B (both sides ascending) and its blockwise reverse L'
    (both sides descending), each at weight 1.
    """
    if not verify_weighted_family(bp.base, w, inc0(bp)):
        raise NotCovering("input family does not witness Inc_0 coverage")
    a_sorted = sorted(bp.a_side)
    b_sorted = sorted(bp.b_side)
    low = tuple(a_sorted) + tuple(b_sorted)
    high = tuple(reversed(a_sorted)) + tuple(reversed(b_sorted))
    out = w.extended([(low, _ONE), (high, _ONE)])
    if not verify_weighted_family(bp.base, out, inc_pairs(bp.base)):
        raise AssertionError("augmented family fails full coverage")
    return out


# -- the constructive weighted decomposition ----------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Report of the incomparability-graph decomposition behind the family."""

    cycle_vertices: int  # 2s
    cycles: tuple[tuple[tuple[int, int], ...], ...]  # per cycle: its edges
    paths: tuple[tuple[int, int, int, int], ...]  # (u1, v1, u2, v2) per path
    matching: tuple[tuple[int, int], ...]
    leftovers: tuple[int, ...]

    @property
    def s(self) -> int:
        return self.cycle_vertices // 2

    @property
    def r(self) -> int:
        return len(self.paths)

    @property
    def d(self) -> int:
        return len(self.matching)

    @property
    def q(self) -> int:
        return len(self.leftovers)

    def weight_formula(self) -> Fraction:
        return (
            Fraction(2 * self.s, 3)
            + Fraction(3 * self.r, 2)
            + Fraction(self.d)
            + Fraction(self.q, 2)
        )


def _simple_cycles(edges: set[tuple[int, int]], vertices: list[int]) -> list[tuple[tuple[int, int], ...]]:
    """All simple cycles of the bipartite incomparability graph, each as an
    edge tuple, canonicalized (least vertex first, lesser neighbour next)."""
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for v in adj:
        adj[v].sort()
    cycles = []
    seen: set[frozenset[tuple[int, int]]] = set()

    def dfs(start: int, current: int, path: list[int]) -> None:
        for nxt in adj[current]:
            if nxt == start and len(path) >= 4:
                cyc_edges = []
                for i in range(len(path)):
                    u, v = path[i], path[(i + 1) % len(path)]
                    cyc_edges.append((u, v) if (u, v) in edges else (v, u))
                key = frozenset(cyc_edges)
                if key not in seen:
                    seen.add(key)
                    cycles.append(tuple(sorted(cyc_edges)))
            elif nxt > start and nxt not in path:
                path.append(nxt)
                dfs(start, nxt, path)
                path.pop()

    for v in vertices:
        dfs(v, v, [v])
    return sorted(set(cycles))


def _max_cycle_packing(
    cycles: list[tuple[tuple[int, int], ...]],
) -> list[tuple[tuple[int, int], ...]]:
    """Vertex-disjoint cycle collection maximizing covered vertices."""
    verts = [frozenset(v for e in cyc for v in e) for cyc in cycles]
    best: tuple[int, list[int]] = (0, [])

    def rec(i: int, used: frozenset[int], chosen: list[int], covered: int) -> None:
        nonlocal best
        if covered > best[0]:
            best = (covered, chosen[:])
        if i == len(cycles):
            return
        remaining = sum(len(verts[j]) for j in range(i, len(cycles)))
        if covered + remaining <= best[0]:
            return
        if not verts[i] & used:
            chosen.append(i)
            rec(i + 1, used | verts[i], chosen, covered + len(verts[i]))
            chosen.pop()
        rec(i + 1, used, chosen, covered)

    rec(0, frozenset(), [], 0)
    return [cycles[i] for i in best[1]]


def _max_path_packing(
    bp: BipartitePoset, pool_a: list[int], pool_b: list[int]
) -> list[tuple[int, int, int, int]]:
    """Max disjoint collection of matched 4-vertex paths (u1,v1,u2,v2) with
    u1 || v1, u2 || v2 and u1 || v2."""
    base = bp.base
    quads = [
        (u1, v1, u2, v2)
        for u1 in pool_a
        for v1 in pool_b
        for u2 in pool_a
        for v2 in pool_b
        if u1 != u2
        and v1 != v2
        and base.incomparable(u1, v1)
        and base.incomparable(u2, v2)
        and base.incomparable(u1, v2)
    ]
    best: tuple[int, list[int]] = (0, [])

    def rec(i: int, used: frozenset[int], chosen: list[int]) -> None:
        nonlocal best
        if len(chosen) > best[0]:
            best = (len(chosen), chosen[:])
        if i == len(quads) or len(chosen) + (len(quads) - i) <= best[0]:
            return
        q = quads[i]
        if not used & frozenset(q):
            chosen.append(i)
            rec(i + 1, used | frozenset(q), chosen)
            chosen.pop()
        rec(i + 1, used, chosen)

    rec(0, frozenset(), [])
    return [quads[i] for i in best[1]]


def weighted_family_bipartite(bp: BipartitePoset) -> tuple[WeightedFamily, Decomposition]:
    """The four-stage weighted covering family for a bipartite poset.

    Decomposes the incomparability graph into: a maximum union of disjoint
    cycles (each cycle edge contributes a mixpair extension at weight 1/3),
    a maximum packing of matched 4-vertex paths on the acyclic remainder
    (three extensions each at 1/2), a maximum matching of what is left
    (weight-1 mixpair extensions), and one-sided weight-1/2 extensions for
    the leftover vertices.  The total equals 2s/3 + 3r/2 + d + q/2.
    """
    base = bp.base
    edges = {(a, b) for (a, b) in inc0(bp)}
    vertices = sorted(bp.a_side | bp.b_side)

    cycles = _max_cycle_packing(_simple_cycles(edges, vertices))
    cyc_vertices = {v for cyc in cycles for e in cyc for v in e}

    pool_a = [a for a in sorted(bp.a_side) if a not in cyc_vertices]
    pool_b = [b for b in sorted(bp.b_side) if b not in cyc_vertices]
    paths = _max_path_packing(bp, pool_a, pool_b)
    path_vertices = {v for q in paths for v in q}

    rem_a = [a for a in pool_a if a not in path_vertices]
    rem_b = [b for b in pool_b if b not in path_vertices]
    match_of: dict[int, int] = {}

    def aug(a: int, seen: set[int]) -> bool:
        for b in rem_b:
            if b in seen or not base.incomparable(a, b):
                continue
            seen.add(b)
            if b not in match_of or aug(match_of[b], seen):
                match_of[b] = a
                return True
        return False

    for a in rem_a:
        aug(a, set())
    matching = tuple(sorted((a, b) for b, a in match_of.items()))
    matched_vertices = {v for pr in matching for v in pr}
    leftovers = tuple(
        v for v in vertices if v not in cyc_vertices | path_vertices | matched_vertices
    )

    members: list[tuple[tuple[int, ...], Fraction]] = []
    for cyc in cycles:
        for a, b in cyc:
            members.append((mixpair_extension(bp, a, b).extension, Fraction(1, 3)))
    for u1, v1, u2, v2 in paths:
        for a, b in ((u1, v1), (u2, v2), (u1, v2)):
            members.append((mixpair_extension(bp, a, b).extension, Fraction(1, 2)))
    for a, b in matching:
        members.append((mixpair_extension(bp, a, b).extension, _ONE))
    for v in leftovers:
        if v in bp.a_side:
            s = {(v, b) for b in bp.b_side if base.incomparable(v, b)}
        else:
            s = {(a, v) for a in bp.a_side if base.incomparable(a, v)}
        members.append((extension_from_reversible_set(base, s), Fraction(1, 2)))

    fam = WeightedFamily(tuple(members))
    report = Decomposition(
        cycle_vertices=len(cyc_vertices),
        cycles=tuple(cycles),
        paths=tuple(paths),
        matching=matching,
        leftovers=leftovers,
    )
    if fam.total != report.weight_formula():
        raise AssertionError("family total disagrees with the decomposition formula")
    if edges and not verify_weighted_family(base, fam, edges):
        raise AssertionError("weighted family fails Inc_0 coverage")
    return fam, report


def fdim_sandwich_bound(inst: SandwichInstance) -> Fraction:
    """The fractional form of the sandwich bound, checked constructively.

    Returns 1 + t + ceil(4s/3) after confirming the integer construction
    achieves it as a weight-1 family covering all of Inc."""
    inst.validate()
    s = min(len(inst.down), len(inst.up))
    t = abs(len(inst.up) - len(inst.down))
    bound = Fraction(1 + t + -(-4 * s // 3))
    family = realize_sandwich(inst)
    fam = WeightedFamily(tuple((tuple(ext), _ONE) for ext in family))
    if not verify_weighted_family(inst.host, fam, inc_pairs(inst.host)):
        raise AssertionError("sandwich family fails coverage")
    if Fraction(len(family)) > bound:
        raise AssertionError("sandwich family exceeds the fractional bound")
    return bound
