"""Symbolic closed subsets of [0,1] and their point-set analysis operators.

A compactum is a finite list of components: isolated points, closed
intervals, middle-thirds Cantor copies, and convergent point sequences
with a geometric schedule of ratio 1/2.  Components keep positive gaps
from each other, with one sanctioned exception: a sequence's limit may
coincide with an endpoint of a neighbouring interval or Cantor copy.
That glued shape is exactly the configuration the derivative-based
analysis has to detect and reject, so it must be representable.

Clopen subsets are selections of component indices; a selection is clopen
precisely when it never separates a glued pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .dyadic import Dyadic, ONE, ZERO, midpoint, parse_dyadic


@dataclass(frozen=True)
class Point:
    pos: Dyadic

    @property
    def lo(self) -> Dyadic:
        return self.pos

    @property
    def hi(self) -> Dyadic:
        return self.pos


@dataclass(frozen=True)
class Interval:
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("interval needs lo < hi")


@dataclass(frozen=True)
class Cantor:
    """Middle-thirds Cantor set scaled onto [lo, hi]."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("cantor copy needs lo < hi")


@dataclass(frozen=True)
class PointSeq:
    """Points limit + (far - limit) * 2^-i for i >= 0, plus the limit itself."""

    limit: Dyadic
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("sequence needs lo < hi")
        if self.limit not in (self.lo, self.hi):
            raise ValueError("sequence limit must sit at one end of its span")

    @property
    def far(self) -> Dyadic:
        return self.hi if self.limit == self.lo else self.lo

    def member(self, i: int) -> Dyadic:
        return self.limit + (self.far - self.limit).scaled_pow2(-i)


Component = Union[Point, Interval, Cantor, PointSeq]


def _glue_ok(left: Component, right: Component) -> bool:
    if isinstance(left, PointSeq) and left.limit == left.hi:
        return isinstance(right, (Interval, Cantor))
    if isinstance(right, PointSeq) and right.limit == right.lo:
        return isinstance(left, (Interval, Cantor))
    return False


@dataclass(frozen=True)
class SymbolicCompactum:
    components: tuple[Component, ...]

    def __post_init__(self) -> None:
        comps = tuple(sorted(self.components, key=lambda c: (c.lo, c.hi)))
        object.__setattr__(self, "components", comps)
        if comps:
            if comps[0].lo < ZERO or comps[-1].hi > ONE:
                raise ValueError("compactum must live inside [0,1]")
        for a, b in zip(comps, comps[1:]):
            if a.hi > b.lo:
                raise ValueError(
                    f"components overlap near {a.hi}: {a} and {b}"
                )
            if a.hi == b.lo and not _glue_ok(a, b):
                raise ValueError(
                    f"components touch at {a.hi} without a sequence limit "
                    f"sanctioning it: {a} and {b}"
                )

    def glue_groups(self) -> list[list[int]]:
        """Maximal runs of components chained by coinciding endpoints."""
        groups: list[list[int]] = []
        current: list[int] = []
        for i, comp in enumerate(self.components):
            if current and self.components[i - 1].hi == comp.lo:
                current.append(i)
            else:
                if current:
                    groups.append(current)
                current = [i]
        if current:
            groups.append(current)
        return groups

    def is_clopen(self, sel: frozenset[int]) -> bool:
        if any(i < 0 or i >= len(self.components) for i in sel):
            return False
        for group in self.glue_groups():
            inside = sum(1 for i in group if i in sel)
            if inside not in (0, len(group)):
                return False
        return True


EMPTY = SymbolicCompactum(())


def compactum(components: Iterable[Component]) -> SymbolicCompactum:
    return SymbolicCompactum(tuple(components))


def _require_clopen(s: SymbolicCompactum, sel: frozenset[int]) -> None:
    if not s.is_clopen(sel):
        raise ValueError(f"selector {sorted(sel)} is not clopen")


def select(s: SymbolicCompactum, sel: frozenset[int]) -> SymbolicCompactum:
    _require_clopen(s, sel)
    return compactum(s.components[i] for i in sorted(sel))


# ---------------------------------------------------------------------------
# Derivative, reduct, and the predicates on clopen selections
# ---------------------------------------------------------------------------


def _derivative_images(
    s: SymbolicCompactum,
) -> list[tuple[int, Component] | None]:
    """Per input component: its surviving image, or None if it vanishes.

    A sequence turns into its limit point; when the limit already lies on a
    neighbouring interval or Cantor copy, the point is absorbed there and
    the sequence contributes nothing of its own.
    """
    endpoints: set[Dyadic] = set()
    for comp in s.components:
        if isinstance(comp, (Interval, Cantor)):
            endpoints.add(comp.lo)
            endpoints.add(comp.hi)
    images: list[Component | None] = []
    for comp in s.components:
        if isinstance(comp, Point):
            images.append(None)
        elif isinstance(comp, PointSeq):
            images.append(None if comp.limit in endpoints else Point(comp.limit))
        else:
            images.append(comp)
    out: list[tuple[int, Component] | None] = []
    next_idx = 0
    for img in images:
        if img is None:
            out.append(None)
        else:
            out.append((next_idx, img))
            next_idx += 1
    return out


def cb_derivative(s: SymbolicCompactum) -> SymbolicCompactum:
    """Remove the isolated points; sequences collapse to their limits."""
    return compactum(img[1] for img in _derivative_images(s) if img is not None)


def derived_selector(s: SymbolicCompactum, sel: frozenset[int]) -> frozenset[int]:
    """Image of a clopen selection inside cb_derivative(s)."""
    _require_clopen(s, sel)
    images = _derivative_images(s)
    return frozenset(images[i][0] for i in sel if images[i] is not None)


def is_intom(s: SymbolicCompactum, sel: frozenset[int]) -> bool:
    """Clopen, connected, and more than one point: a single interval."""
    _require_clopen(s, sel)
    if len(sel) != 1:
        return False
    (i,) = sel
    return isinstance(s.components[i], Interval)


def cb_equiv(s: SymbolicCompactum, x: frozenset[int], y: frozenset[int]) -> bool:
    """Selections agreeing up to isolated points."""
    _require_clopen(s, x)
    _require_clopen(s, y)
    keep_x = {i for i in x if not isinstance(s.components[i], Point)}
    keep_y = {i for i in y if not isinstance(s.components[i], Point)}
    return keep_x == keep_y


def reduce_intoms(s: SymbolicCompactum) -> SymbolicCompactum:
    """Collapse every clopen interval component to its midpoint."""
    glued: set[int] = set()
    for group in s.glue_groups():
        if len(group) > 1:
            glued.update(group)
    out: list[Component] = []
    for i, comp in enumerate(s.components):
        if isinstance(comp, Interval) and i not in glued:
            out.append(Point(midpoint(comp.lo, comp.hi)))
        else:
            out.append(comp)
    return compactum(out)


def reduction(s: SymbolicCompactum) -> SymbolicCompactum:
    """Derivative followed by the interval-to-point reduct."""
    return reduce_intoms(cb_derivative(s))


def satisfies_inf(s: SymbolicCompactum, sel: frozenset[int]) -> bool:
    """Infinitely many distinct clopen splits inside the selection."""
    _require_clopen(s, sel)
    return any(
        isinstance(s.components[i], (Cantor, PointSeq)) for i in sel
    )


def is_atomless_after_derivative(s: SymbolicCompactum, sel: frozenset[int]) -> bool:
    """Derivative of the selection has only Cantor components."""
    _require_clopen(s, sel)
    derived = cb_derivative(s)
    image = derived_selector(s, sel)
    return all(isinstance(derived.components[i], Cantor) for i in image)


def check_property_in(s: SymbolicCompactum) -> bool:
    """No interval endpoint doubles as a sequence limit."""
    limits = {c.limit for c in s.components if isinstance(c, PointSeq)}
    for comp in s.components:
        if isinstance(comp, Interval) and (comp.lo in limits or comp.hi in limits):
            return False
    return True


def all_clopen_selectors(s: SymbolicCompactum) -> Iterable[frozenset[int]]:
    """Every clopen selection, enumerated via glue groups."""
    groups = s.glue_groups()
    n = len(groups)
    for mask in range(1 << n):
        sel: set[int] = set()
        for g in range(n):
            if mask >> g & 1:
                sel.update(groups[g])
        yield frozenset(sel)


# ---------------------------------------------------------------------------
# Canonical form under homeomorphism
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompactumForm:
    """Complete homeomorphism invariant for the shapes representable here.

    Two Cantor copies glue to one; a convergent sequence swallows any finite
    number of extra isolated points; glued groups are classified by their
    host kind and how many ends carry a sequence (mirror images coincide).
    """

    points: int
    intervals: int
    seqs: int
    cantor: bool
    glue: tuple[tuple[str, int], ...]


def canonical_form(s: SymbolicCompactum) -> CompactumForm:
    points = sum(1 for c in s.components if isinstance(c, Point))
    intervals = 0
    seqs = 0
    cantor = False
    glue: list[tuple[str, int]] = []
    for group in s.glue_groups():
        comps = [s.components[i] for i in group]
        if len(group) == 1:
            comp = comps[0]
            if isinstance(comp, Interval):
                intervals += 1
            elif isinstance(comp, PointSeq):
                seqs += 1
            elif isinstance(comp, Cantor):
                cantor = True
        else:
            host = next(c for c in comps if isinstance(c, (Interval, Cantor)))
            n_seqs = sum(1 for c in comps if isinstance(c, PointSeq))
            kind = "interval" if isinstance(host, Interval) else "cantor"
            glue.append((kind, n_seqs))
    if seqs or glue:
        points = 0  # a sequence absorbs any finite set of isolated points
    return CompactumForm(
        points=points,
        intervals=intervals,
        seqs=seqs,
        cantor=cantor,
        glue=tuple(sorted(glue)),
    )


# ---------------------------------------------------------------------------
# Exact membership
# ---------------------------------------------------------------------------


def in_cantor_unit(t: Fraction) -> bool:
    """Membership of a rational in the standard middle-thirds set."""
    seen: set[Fraction] = set()
    while True:
        if t < 0 or t > 1:
            return False
        if t == 0 or t == 1:
            return True
        if t in seen:
            return True  # periodic orbit avoiding the middle third forever
        seen.add(t)
        if 3 * t <= 1:
            t = 3 * t
        elif 3 * t >= 2:
            t = 3 * t - 2
        else:
            return False


def component_contains(comp: Component, x: Fraction) -> bool:
    if isinstance(comp, Point):
        return x == comp.pos.as_fraction()
    lo, hi = comp.lo.as_fraction(), comp.hi.as_fraction()
    if isinstance(comp, Interval):
        return lo <= x <= hi
    if isinstance(comp, Cantor):
        if not lo <= x <= hi:
            return False
        return in_cantor_unit((x - lo) / (hi - lo))
    limit = comp.limit.as_fraction()
    if x == limit:
        return True
    far = comp.far.as_fraction()
    ratio = (x - limit) / (far - limit)
    if ratio <= 0 or ratio > 1:
        return False
    return ratio.numerator == 1 and ratio.denominator & (ratio.denominator - 1) == 0


def compactum_contains(s: SymbolicCompactum, x: Fraction) -> bool:
    return any(component_contains(c, x) for c in s.components)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def print_compactum(s: SymbolicCompactum) -> str:
    lines = ["compactum v1"]
    for comp in s.components:
        if isinstance(comp, Point):
            lines.append(f"point {comp.pos}")
        elif isinstance(comp, Interval):
            lines.append(f"interval {comp.lo} {comp.hi}")
        elif isinstance(comp, Cantor):
            lines.append(f"cantor {comp.lo} {comp.hi}")
        else:
            lines.append(f"seq {comp.limit} {comp.lo} {comp.hi}")
    return "\n".join(lines) + "\n"


def parse_compactum(text: str) -> SymbolicCompactum:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "compactum v1":
        raise ValueError("missing 'compactum v1' header")
    comps: list[Component] = []
    for line in lines[1:]:
        parts = line.split()
        if parts[0] == "point" and len(parts) == 2:
            comps.append(Point(parse_dyadic(parts[1])))
        elif parts[0] == "interval" and len(parts) == 3:
            comps.append(Interval(parse_dyadic(parts[1]), parse_dyadic(parts[2])))
        elif parts[0] == "cantor" and len(parts) == 3:
            comps.append(Cantor(parse_dyadic(parts[1]), parse_dyadic(parts[2])))
        elif parts[0] == "seq" and len(parts) == 4:
            comps.append(
                PointSeq(
                    parse_dyadic(parts[1]),
                    parse_dyadic(parts[2]),
                    parse_dyadic(parts[3]),
                )
            )
        else:
            raise ValueError(f"unexpected line in compactum file: {line!r}")
    return compactum(comps)
