"""Finite-cover primitives: exact 2^{-n} covers, ball intersection
decisions, and clopen partition enumeration.

Every decision here is exact rational arithmetic.  Coverage is verified
by subtracting closed balls from a component's hull and deciding whether
any leftover region still meets the component; the same region test
answers whether two balls intersect inside the set.

Ball centers are rationals in the set.  Interval components use dyadic
grid centers; Cantor components use the endpoints of their level-k
pieces, which are triadic, so centers are stored as plain fractions.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .compactum import (
    Cantor,
    Component,
    Interval,
    Point,
    PointSeq,
    SymbolicCompactum,
    compactum_contains,
    component_contains,
)

# A region is a rational interval with independent endpoint closure flags.
Region = tuple[Fraction, Fraction, bool, bool]


@dataclass(frozen=True)
class Ball:
    center: Fraction
    radius: Fraction

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True)
class CoverCertificate:
    """A radius-2^{-n} cover; flagged pairs are ball indices whose open
    and closed intersection decisions disagree (tangencies), computed
    only when the cover is small enough to scan pairwise."""

    n: int
    balls: tuple[Ball, ...]
    flagged: tuple[tuple[int, int], ...] | None

    @property
    def h(self) -> int:
        return len(self.balls)


_FLAG_SCAN_LIMIT = 256


# ---------------------------------------------------------------------------
# Cover construction
# ---------------------------------------------------------------------------


def cover(s: SymbolicCompactum, n: int) -> CoverCertificate:
    """Greedy per-component cover by balls of radius exactly 2^{-n}."""
    if n < 0:
        raise ValueError("precision must be a natural number")
    r = Fraction(1, 2 ** n)
    balls: list[Ball] = []
    for comp in s.components:
        balls.extend(_component_balls(comp, r))
    flagged = None
    if len(balls) <= _FLAG_SCAN_LIMIT:
        # Equal radii: centers farther apart than 2r have an empty closed
        # overlap, so both decisions are False and the pair is never
        # flagged.  A sweep in center order keeps only the near pairs.
        order = sorted(range(len(balls)), key=lambda i: balls[i].center)
        two_r = 2 * r
        hulls = _component_hulls(s)
        found = []
        for a, i in enumerate(order):
            for j in order[a + 1 :]:
                d = balls[j].center - balls[i].center
                if d > two_r:
                    break
                if d < r:
                    # Both centers sit inside the open overlap, and centers
                    # are points of the set, so the decisions agree.
                    continue
                if d == two_r:
                    # The closed overlap is the single touch point; open is
                    # empty, so the pair is flagged exactly when the point
                    # belongs to the set.
                    touch = balls[i].center + r
                    disagree = _point_in_set(s, touch, hulls)
                elif _balls_meet(
                    s, balls[i], balls[j], closed=True, hulls=hulls
                ) != _balls_meet(s, balls[i], balls[j], closed=False, hulls=hulls):
                    disagree = True
                else:
                    disagree = False
                if disagree:
                    found.append((i, j) if i < j else (j, i))
        flagged = tuple(sorted(found))
    return CoverCertificate(n, tuple(balls), flagged)


def _component_balls(comp: Component, r: Fraction) -> list[Ball]:
    if isinstance(comp, Point):
        return [Ball(comp.pos.as_fraction(), r)]
    lo = comp.lo.as_fraction()
    hi = comp.hi.as_fraction()
    span = hi - lo
    if isinstance(comp, Interval):
        # step-r grid from lo; consecutive balls overlap by r
        k = (hi - lo) // r
        return [Ball(lo + i * r, r) for i in range(k + 1)]
    if isinstance(comp, Cantor):
        level = 0
        while span * Fraction(1, 3 ** level) >= r:
            level += 1
        out = []
        for word in range(2 ** level):
            a, length = lo, span
            for bit in range(level - 1, -1, -1):
                length /= 3
                if word >> bit & 1:
                    a += 2 * length
            out.append(Ball(a, r))
            out.append(Ball(a + length, r))
        return out
    # point sequence: one ball per early member; the last listed member is
    # within r of the limit, so its ball swallows the whole tail
    i = 0
    while span * Fraction(1, 2 ** i) >= r:
        i += 1
    return [Ball(comp.member(j).as_fraction(), r) for j in range(i + 1)]


# ---------------------------------------------------------------------------
# Exact region tests
# ---------------------------------------------------------------------------


def _region_nonempty(region: Region) -> bool:
    u, v, cu, cv = region
    return u < v or (u == v and cu and cv)


def _in_region(x: Fraction, region: Region) -> bool:
    u, v, cu, cv = region
    if x < u or (x == u and not cu):
        return False
    if x > v or (x == v and not cv):
        return False
    return True


def _subtract_closed(pieces: list[Region], a: Fraction, b: Fraction) -> list[Region]:
    out: list[Region] = []
    for u, v, cu, cv in pieces:
        if b < u or (b == u and not cu) or a > v or (a == v and not cv):
            out.append((u, v, cu, cv))
            continue
        if u < a:
            out.append((u, a, cu, False))
        if b < v:
            out.append((b, v, False, cv))
    return [p for p in out if _region_nonempty(p)]


def _region_meets_component(comp: Component, region: Region) -> bool:
    """Does the component's point set meet the region?  Exact."""
    if not _region_nonempty(region):
        return False
    u, v, cu, cv = region
    if u == v:
        return component_contains(comp, u)
    if isinstance(comp, Point):
        return _in_region(comp.pos.as_fraction(), region)
    lo = comp.lo.as_fraction()
    hi = comp.hi.as_fraction()
    if isinstance(comp, Interval):
        a, b = max(lo, u), min(hi, v)
        ca = cu if a == u else True
        cb = cv if b == v else True
        return _region_nonempty((a, b, ca, cb))
    if isinstance(comp, Cantor):
        return _cantor_piece_meets(lo, hi - lo, region)
    if _in_region(comp.limit.as_fraction(), region):
        return True
    return _seq_member_in_region(comp, region)


def _cantor_piece_meets(a: Fraction, length: Fraction, region: Region) -> bool:
    u, v, cu, cv = region
    b = a + length
    if b < u or (b == u and not cu) or a > v or (a == v and not cv):
        return False
    if (a > u or (a == u and cu)) and (b < v or (b == v and cv)):
        return True
    if _in_region(a, region) or _in_region(b, region):
        return True  # piece endpoints belong to the set
    third = length / 3
    return _cantor_piece_meets(a, third, region) or _cantor_piece_meets(
        a + 2 * third, third, region
    )


def _seq_member_in_region(comp: PointSeq, region: Region) -> bool:
    u, v, cu, cv = region
    limit = comp.limit.as_fraction()
    far = comp.far.as_fraction()
    span = abs(far - limit)
    # members sit at distance t = span * 2^{-i} from the limit
    if far > limit:
        t_lo, lo_strict = u - limit, not cu
        t_hi, hi_strict = v - limit, not cv
    else:
        t_lo, lo_strict = limit - v, not cv
        t_hi, hi_strict = limit - u, not cu
    if t_hi <= 0:
        return False
    if t_lo <= 0:
        return True  # distances shrink below any positive bound
    t = span
    while t > t_hi or (hi_strict and t == t_hi):
        t /= 2
    return t > t_lo or (not lo_strict and t == t_lo)


# ---------------------------------------------------------------------------
# Verification and intersection
# ---------------------------------------------------------------------------


def cover_is_valid(s: SymbolicCompactum, cert: CoverCertificate) -> bool:
    """Exact check: radii are 2^{-n}, centers lie in the set, and closed
    balls leave no component point uncovered."""
    r = Fraction(1, 2 ** cert.n)
    for ball in cert.balls:
        if ball.radius != r:
            return False
        if not compactum_contains(s, ball.center):
            return False
    centers = sorted(ball.center for ball in cert.balls)
    for comp in s.components:
        if isinstance(comp, Point):
            lo = hi = comp.pos.as_fraction()
        else:
            lo, hi = comp.lo.as_fraction(), comp.hi.as_fraction()
        pieces: list[Region] = [(lo, hi, True, True)]
        # Balls whose closed hull misses [lo, hi] subtract nothing.
        start = bisect.bisect_left(centers, lo - r)
        stop = bisect.bisect_right(centers, hi + r)
        for center in centers[start:stop]:
            pieces = _subtract_closed(pieces, center - r, center + r)
            if not pieces:
                break
        if any(_region_meets_component(comp, piece) for piece in pieces):
            return False
    return True


Hulls = tuple[list[Fraction], list[Fraction]]


def _component_hulls(s: SymbolicCompactum) -> Hulls:
    lows = [c.lo.as_fraction() for c in s.components]
    his = [c.hi.as_fraction() for c in s.components]
    return lows, his


def _point_in_set(s: SymbolicCompactum, x: Fraction, hulls: Hulls) -> bool:
    lows, his = hulls
    start = bisect.bisect_left(his, x)
    stop = bisect.bisect_right(lows, x)
    return any(
        component_contains(c, x) for c in s.components[start:stop]
    )


def _balls_meet(
    s: SymbolicCompactum, b1: Ball, b2: Ball, closed: bool, hulls: Hulls | None = None
) -> bool:
    u = max(b1.center - b1.radius, b2.center - b2.radius)
    v = min(b1.center + b1.radius, b2.center + b2.radius)
    region = (u, v, closed, closed)
    if not _region_nonempty(region):
        return False
    # Components are sorted and pairwise disjoint, so the ones whose hulls
    # meet [u, v] form a contiguous run.
    lows, his = _component_hulls(s) if hulls is None else hulls
    start = bisect.bisect_left(his, u)
    stop = bisect.bisect_right(lows, v)
    return any(
        _region_meets_component(c, region) for c in s.components[start:stop]
    )


def balls_intersect(
    s: SymbolicCompactum, b1: Ball, b2: Ball, closed: bool = False
) -> bool:
    """Decide exactly whether both balls meet a common point of the set.

    Open balls by default; pass closed=True for the closed variant.
    """
    for ball in (b1, b2):
        if not compactum_contains(s, ball.center):
            raise ValueError("ball center does not lie in the set")
    return _balls_meet(s, b1, b2, closed)


# ---------------------------------------------------------------------------
# Clopen partitions
# ---------------------------------------------------------------------------

# An atom is (glue-group index, refinement word); the word is nonempty only
# for groups hosted by a Cantor component, whose level-d pieces it names.
PartitionAtom = tuple[int, str]


def _group_host(s: SymbolicCompactum, group: tuple[int, ...]) -> Component:
    if len(group) == 1:
        return s.components[group[0]]
    for i in group:
        if not isinstance(s.components[i], PointSeq):
            return s.components[i]
    raise AssertionError("glue group without a host component")


def atoms_at_depth(s: SymbolicCompactum, depth: int) -> list[PartitionAtom]:
    """Finest clopen pieces at a given Cantor refinement depth.  A glued
    sequence rides with the piece holding its limit, so it never splits
    a group on its own."""
    atoms: list[PartitionAtom] = []
    for gid, group in enumerate(s.glue_groups()):
        host = _group_host(s, group)
        if isinstance(host, Cantor) and depth > 0:
            atoms.extend(
                (gid, format(w, f"0{depth}b")) for w in range(2 ** depth)
            )
        else:
            atoms.append((gid, ""))
    return atoms


def _rgs_strings(k: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings in lexicographic order: every set
    partition of k items exactly once, coarsest-first at the front."""
    if k == 0:
        yield ()
        return
    state = [0] * k
    while True:
        yield tuple(state)
        i = k - 1
        while i > 0:
            if state[i] <= max(state[:i]):
                state[i] += 1
                for j in range(i + 1, k):
                    state[j] = 0
                break
            state[i] = 0
            i -= 1
        else:
            return


def _parts_from_rgs(
    atoms: list[PartitionAtom], rgs: tuple[int, ...]
) -> tuple[frozenset[PartitionAtom], ...]:
    n_parts = max(rgs) + 1 if rgs else 0
    groups: list[set[PartitionAtom]] = [set() for _ in range(n_parts)]
    for atom_, part in zip(atoms, rgs):
        groups[part].add(atom_)
    return tuple(frozenset(g) for g in groups)


def _needs_full_depth(
    parts: tuple[frozenset[PartitionAtom], ...], depth: int
) -> bool:
    """True when some sibling pair of level-`depth` pieces is separated,
    so the partition does not factor through depth-1 atoms."""
    owner: dict[PartitionAtom, int] = {}
    for idx, part in enumerate(parts):
        for a in part:
            owner[a] = idx
    for (gid, word), idx in owner.items():
        if len(word) == depth and depth > 0 and word.endswith("0"):
            sibling = (gid, word[:-1] + "1")
            if owner.get(sibling, idx) != idx:
                return True
    return False


def clopen_partitions(
    s: SymbolicCompactum, depth: int
) -> Iterator[tuple[frozenset[PartitionAtom], ...]]:
    """All partitions into clopen parts, each part a union of atoms,
    Cantor components refined down to the given depth.

    Lazily enumerated grouped by effective depth, so the stream for depth
    d is a prefix of the stream for depth d+1.
    """
    for eff in range(depth + 1):
        atoms = atoms_at_depth(s, eff)
        for rgs in _rgs_strings(len(atoms)):
            parts = _parts_from_rgs(atoms, rgs)
            if eff == 0 or _needs_full_depth(parts, eff):
                yield parts


def atoms_intersect(a: PartitionAtom, b: PartitionAtom) -> bool:
    return a[0] == b[0] and (a[1].startswith(b[1]) or b[1].startswith(a[1]))


def parts_intersect(
    p: Iterable[PartitionAtom], q: Iterable[PartitionAtom]
) -> bool:
    """Exact intersection decision for parts, possibly from partitions of
    different depths."""
    return any(atoms_intersect(a, b) for a in p for b in q)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def print_cover(cert: CoverCertificate) -> str:
    lines = [f"cover n={cert.n}"]
    for ball in cert.balls:
        lines.append(f"ball {ball.center} {ball.radius}")
    return "\n".join(lines) + "\n"


def parse_cover(text: str) -> CoverCertificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("cover n="):
        raise ValueError("missing 'cover n=' header")
    n = int(lines[0].split("=", 1)[1])
    balls = []
    for line in lines[1:]:
        parts = line.split()
        if parts[0] != "ball" or len(parts) != 3:
            raise ValueError(f"unexpected line in cover file: {line!r}")
        balls.append(Ball(Fraction(parts[1]), Fraction(parts[2])))
    return CoverCertificate(n, tuple(balls), None)
