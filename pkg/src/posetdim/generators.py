"""Constructors for the named poset families used throughout the package.

Every generator returns a fully validated Poset or BipartitePoset with
labels describing the structure (geometry points/lines are labelled
explicitly to keep the two senses of "point" apart).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from posetdim.core import BipartitePoset, Poset, PosetError, build_poset


class NotPrime(PosetError):
    """Projective-plane order must be prime (prime powers unsupported)."""


@dataclass(frozen=True)
class PlaneIncidence:
    """Incidence structure of PG(2, q): the witness behind the plane poset."""

    q: int
    points: tuple[tuple[int, int, int], ...]
    lines: tuple[tuple[int, int, int], ...]
    incidence: tuple[tuple[bool, ...], ...]  # incidence[i][j]: point i on line j

    def points_on_line(self, j: int) -> list[int]:
        return [i for i in range(len(self.points)) if self.incidence[i][j]]

    def lines_through_point(self, i: int) -> list[int]:
        return [j for j in range(len(self.lines)) if self.incidence[i][j]]


def gen_chain(n: int) -> Poset:
    return build_poset(n, [(i, i + 1) for i in range(n - 1)], name=f"chain-{n}")


def gen_antichain(n: int) -> Poset:
    return build_poset(n, [], name=f"antichain-{n}")


def gen_standard_example(d: int) -> BipartitePoset:
    """The standard example S_d: a_i < b_j exactly when i != j.

    Minimals are 0..d-1, maximals d..2d-1.  S_1 is the two-element
    incomparable pair (meaningful in the bipartite setting).
    """
    if d < 1:
        raise ValueError("standard example needs d >= 1")
    labels = [f"a{i + 1}" for i in range(d)] + [f"b{j + 1}" for j in range(d)]
    rels = [(i, d + j) for i in range(d) for j in range(d) if i != j]
    base = build_poset(2 * d, rels, labels=labels, name=f"S{d}")
    return BipartitePoset(base, range(d), range(d, 2 * d))


def gen_subsets12(n: int) -> Poset:
    """1- and 2-element subsets of {1..n} ordered by containment."""
    if n < 3:
        raise ValueError("subset poset needs n >= 3")
    singles = [(i,) for i in range(1, n + 1)]
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    elems = singles + pairs
    index = {s: k for k, s in enumerate(elems)}
    rels = []
    for i, j in pairs:
        rels.append((index[(i,)], index[(i, j)]))
        rels.append((index[(j,)], index[(i, j)]))
    labels = ["{" + ",".join(map(str, s)) + "}" for s in elems]
    return build_poset(len(elems), rels, labels=labels, name=f"P(1,2;{n})")


def gen_canonical_interval(n: int) -> Poset:
    """Intervals with distinct integer endpoints in {1..n}; (a,b) < (c,d) iff b < c."""
    if n < 2:
        raise ValueError("canonical interval order needs n >= 2")
    ivals = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    rels = []
    for x, (a, b) in enumerate(ivals):
        for y, (c, d) in enumerate(ivals):
            if b < c:
                rels.append((x, y))
    labels = [f"[{a},{b}]" for a, b in ivals]
    return build_poset(len(ivals), rels, labels=labels, name=f"I({n})")


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def plane_incidence(q: int) -> PlaneIncidence:
    """PG(2, q) from homogeneous coordinates over GF(q), q prime."""
    if not _is_prime(q):
        raise NotPrime(f"projective plane order must be prime, got {q}")
    reps = []
    for x in range(q):
        for y in range(q):
            for z in range(q):
                v = (x, y, z)
                if v == (0, 0, 0):
                    continue
                first = x if x else (y if y else z)
                if first == 1:
                    reps.append(v)
    points = tuple(reps)
    lines = tuple(reps)
    incidence = tuple(
        tuple((p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0 for l in lines)
        for p in points
    )
    return PlaneIncidence(q, points, lines, incidence)


def gen_projective_plane(q: int) -> tuple[BipartitePoset, PlaneIncidence]:
    """Height-2 poset of PG(2, q): point below exactly the lines NOT through it."""
    geom = plane_incidence(q)
    m = len(geom.points)
    rels = [
        (i, m + j)
        for i in range(m)
        for j in range(m)
        if not geom.incidence[i][j]
    ]
    labels = [f"pt({x}:{y}:{z})" for x, y, z in geom.points] + [
        f"ln[{a}:{b}:{c}]" for a, b, c in geom.lines
    ]
    base = build_poset(2 * m, rels, labels=labels, name=f"plane-q{q}")
    return BipartitePoset(base, range(m), range(m, 2 * m)), geom


def gen_random_bipartite(n: int, p: float, seed: int) -> BipartitePoset:
    """Antichains A, B of size n; each A-B pair related with probability p.

    Mersenne-Twister (random.Random) seeded with ``seed``, pairs drawn in
    row-major order, so outputs are byte-reproducible across runs.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability out of range")
    rng = random.Random(seed)
    rels = []
    for i in range(n):
        for j in range(n):
            if rng.random() < p:
                rels.append((i, n + j))
    labels = [f"a{i + 1}" for i in range(n)] + [f"b{j + 1}" for j in range(n)]
    base = build_poset(2 * n, rels, labels=labels, name=f"randbip-{n}-{seed}")
    return BipartitePoset(base, range(n), range(n, 2 * n))


def gen_stacked(m: int, q: int) -> Poset:
    """Projective-plane poset coupled with a fresh S_m.

    The 2m new points form a standard example; its minimals sit below all
    lines of the plane and its maximals sit above all geometry points.  The
    result still has height 2, but its largest embedded standard example is
    m plus that of the plane poset.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    plane, geom = gen_projective_plane(q)
    np = len(geom.points)
    total = 2 * m + 2 * np
    # layout: a_1..a_m, b_1..b_m, then points, then lines
    rels = [(i, m + j) for i in range(m) for j in range(m) if i != j]
    pt0, ln0 = 2 * m, 2 * m + np
    for i in range(np):
        for j in range(np):
            if not geom.incidence[i][j]:
                rels.append((pt0 + i, ln0 + j))
    for i in range(m):
        for j in range(np):
            rels.append((i, ln0 + j))  # S_m minimals below all lines
            rels.append((pt0 + j, m + i))  # geometry points below S_m maximals
    labels = (
        [f"a{i + 1}" for i in range(m)]
        + [f"b{i + 1}" for i in range(m)]
        + [plane.base.label(x) for x in range(2 * np)]
    )
    return build_poset(total, rels, labels=labels, name=f"stacked-m{m}-q{q}")
