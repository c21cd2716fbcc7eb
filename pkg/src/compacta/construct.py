"""Turning labelled trees into closed sets, exactly and stage by stage.

The limit set of a tree assigns every node a region inside its nested
interval: a terminal leaf fills its whole interval, an eta leaf carries a
Cantor copy, and a split node drops isolated junk points: the midpoint of
its child-0 slot (the slot index 0 never names a tree node, so the spot
is free), plus one point per replacement on each side, at the midpoints
of the gaps separating the discarded child interval from its replacement.
All junk lands strictly outside the final children and never in the open
region between them.

The stage enumerator replays a script and emits points so that the point
set grows monotonically and its closure converges to the limit set.  A
child installed by an event that a later event will tombstone emits
nothing: the script is finite and known in full, so the enumerator may
consult the future.  That choice keeps every emitted point inside the
limit set, which makes the Hausdorff bound monotone for free.  Terminal
leaves densify their interval by one midpoint round per stage; eta leaves
refine their Cantor net one ternary level per stage, held symbolically
because level endpoints are triadic, not dyadic.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .compactum import (
    Cantor,
    Component,
    Interval,
    Point,
    PointSeq,
    SymbolicCompactum,
    compactum,
    component_contains,
)
from .dyadic import (
    Address,
    DyInterval,
    Dyadic,
    ONE,
    ZERO,
    dyadic_ceil,
    format_address,
    interval_of,
    midpoint,
)
from .trees import (
    ETA,
    FRESH,
    SPINE,
    SPLIT,
    TERMINAL,
    LabelledTree,
    StageScript,
    replay_script,
    split_children,
)


def seed_point(addr: Address) -> Dyadic:
    """The junk point every once-bare node drops: midpoint of its 0-slot."""
    return interval_of(addr + (0,)).mid


def replacement_bridges(addr: Address, j: int) -> tuple[Dyadic, Dyadic]:
    """Junk pair of the j-th replacement at addr, j >= 1.

    The discarded pair is (2j-1, 2j), the incoming pair (2j+1, 2j+2); the
    even child sits left of the center, the odd one right.  Each side gets
    the midpoint of the gap between the dead interval and the new one.
    """
    left = midpoint(
        interval_of(addr + (2 * j,)).hi, interval_of(addr + (2 * j + 2,)).lo
    )
    right = midpoint(
        interval_of(addr + (2 * j + 1,)).hi, interval_of(addr + (2 * j - 1,)).lo
    )
    return left, right


def junk_points(addr: Address, r: int, ever_terminal: bool) -> list[Dyadic]:
    """Isolated points a split node contributes: count ever_terminal + 2r."""
    out: list[Dyadic] = []
    if ever_terminal:
        out.append(seed_point(addr))
    for j in range(1, r + 1):
        out.extend(replacement_bridges(addr, j))
    return out


def construct_limit(tree: LabelledTree) -> SymbolicCompactum:
    comps: list[Component] = []
    for addr, node in tree.nodes.items():
        iv = interval_of(addr)
        if node.kind == TERMINAL:
            comps.append(Interval(iv.lo, iv.hi))
        elif node.kind == ETA:
            comps.append(Cantor(iv.lo, iv.hi))
        elif node.kind == SPLIT:
            comps.extend(
                Point(p) for p in junk_points(addr, node.r, node.ever_terminal)
            )
    return compactum(comps)


# ---------------------------------------------------------------------------
# Stage enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationState:
    """Points emitted by stage `stage`, plus symbolic Cantor nets.

    `points` holds every dyadic point, globally sorted.  `leaf_points`
    buckets the interior points of each terminal leaf for the densification
    schedule.  `nets` maps an eta leaf to (its interval, net level); the
    level-l net consists of both endpoints of all 2^l ternary pieces and is
    never materialized since those endpoints are triadic.
    """

    stage: int
    points: tuple[Dyadic, ...]
    leaf_points: dict[Address, tuple[Dyadic, ...]] = field(default_factory=dict)
    nets: dict[Address, tuple[DyInterval, int]] = field(default_factory=dict)


def enumerate_stage(script: StageScript, s: int) -> EnumerationState:
    if s < 0:
        raise ValueError("stage must be >= 0")
    if script.stop is not None and s > script.stop:
        raise ValueError(
            f"stage {s} exceeds the script's hard stop {script.stop}"
        )
    final = replay_script(script)
    survivors = set(final.alive)

    def role(addr: Address) -> str:
        kind = final.alive[addr]
        if kind != "open":
            return kind
        if addr in final.has_pair:
            return SPLIT
        return script.final_labels[addr]

    loose: list[Dyadic] = []  # junk points: node 0-slots and bridges
    leaves: dict[Address, list[Dyadic]] = {}
    leaf_created: dict[Address, int] = {}
    nets: dict[Address, int] = {}  # creation stage

    def emit_node(addr: Address, t: int) -> None:
        if addr not in survivors:
            return
        what = role(addr)
        if what == TERMINAL:
            leaves[addr] = [seed_point(addr)]
            leaf_created[addr] = t
        elif what == ETA:
            nets[addr] = t
        elif what == SPLIT:
            loose.append(seed_point(addr))

    initial = set(script.skeleton) | script.initial_open()
    for addr in sorted(initial):
        node = script.skeleton.get(addr)
        if node is None or node.kind != SPINE:
            emit_node(addr, 0)

    pair_index: dict[Address, int] = {}
    for t in range(1, s + 1):
        for addr, created in list(leaf_created.items()):
            if created < t:
                leaves[addr] = _densify(interval_of(addr), leaves[addr])
        if t <= len(script.events):
            ev = script.events[t - 1]
            if ev.kind == FRESH:
                pair_index[ev.addr] = 0
            else:
                j = pair_index[ev.addr] + 1
                pair_index[ev.addr] = j
                if ev.addr in survivors:
                    # Bridges of a pair that is itself torn down later never
                    # reach the limit set, so they are never emitted.
                    left, right = replacement_bridges(ev.addr, j)
                    loose.extend([left, right])
            for child in split_children(ev.addr, pair_index[ev.addr]):
                emit_node(child, t)

    pts: list[Dyadic] = sorted(loose)
    for bucket in leaves.values():
        pts.extend(bucket)
    pts.sort()
    return EnumerationState(
        stage=s,
        points=tuple(pts),
        leaf_points={a: tuple(b) for a, b in leaves.items()},
        nets={a: (interval_of(a), s - t0) for a, t0 in nets.items()},
    )


def _densify(iv: DyInterval, pts: list[Dyadic]) -> list[Dyadic]:
    """One midpoint round over the chain lo, p1, ..., pk, hi.

    The endpoints anchor the chain but are never emitted themselves; the
    emitted points still close up on the full interval since the largest
    gap halves every round.
    """
    chain = [iv.lo] + pts + [iv.hi]
    out = list(pts)
    for a, b in zip(chain, chain[1:]):
        out.append(midpoint(a, b))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Hausdorff certification
# ---------------------------------------------------------------------------

_CEIL_BITS = 80


def hausdorff_gap(state: EnumerationState, limit: SymbolicCompactum) -> Dyadic:
    """Exact dyadic upper bound on the Hausdorff distance to the limit set.

    Every point of the state must already belong to the limit set (that is
    what the enumerator guarantees); a stray point means the state and the
    limit came from different scripts and raises.  The returned bound is
    therefore the farthest any limit point can be from the emitted set,
    maximized per component, and it never increases as the stage grows.
    """
    pts = sorted(state.points)
    lows = [c.lo for c in limit.components]
    for p in pts:
        i = bisect.bisect_right(lows, p)
        candidates = limit.components[max(0, i - 2) : i + 1]
        if not any(
            c.lo <= p <= c.hi and component_contains(c, p.as_fraction())
            for c in candidates
        ):
            raise ValueError(
                f"state point {p} lies outside the limit set: "
                f"state and limit do not match"
            )
    if not limit.components:
        return ZERO
    net_levels = {
        (iv.lo, iv.hi): level for iv, level in state.nets.values()
    }
    bound = ZERO
    for comp in limit.components:
        if isinstance(comp, Point):
            d = _dist_to_points(comp.pos, pts)
        elif isinstance(comp, Interval):
            d = _interval_bound(comp.lo, comp.hi, pts)
        elif isinstance(comp, Cantor):
            level = net_levels.get((comp.lo, comp.hi))
            if level is None:
                d = _span_fallback(comp.lo, comp.hi, pts)
            else:
                span = comp.hi.as_fraction() - comp.lo.as_fraction()
                d = dyadic_ceil(span / 3 ** (level + 1), bits=_CEIL_BITS)
        else:
            d = _seq_bound(comp, pts)
        if d > bound:
            bound = d
    return bound


def _dist_to_points(q: Dyadic, pts: list[Dyadic]) -> Dyadic:
    i = bisect.bisect_left(pts, q)
    best = None
    for k in (i - 1, i):
        if 0 <= k < len(pts):
            d = abs(q - pts[k])
            if best is None or d < best:
                best = d
    return best if best is not None else ONE


def _interval_bound(lo: Dyadic, hi: Dyadic, pts: list[Dyadic]) -> Dyadic:
    inside = pts[bisect.bisect_left(pts, lo) : bisect.bisect_right(pts, hi)]
    if not inside:
        return _span_fallback(lo, hi, pts)
    best = max(inside[0] - lo, hi - inside[-1])
    for a, b in zip(inside, inside[1:]):
        half = (b - a).half()
        if half > best:
            best = half
    return best


def _span_fallback(lo: Dyadic, hi: Dyadic, pts: list[Dyadic]) -> Dyadic:
    """min over points of the worst distance to any spot in [lo, hi]."""
    best = None
    for p in pts:
        d = max(abs(p - lo), abs(p - hi))
        if best is None or d < best:
            best = d
    return best if best is not None else ONE


def _seq_bound(comp: PointSeq, pts: list[Dyadic]) -> Dyadic:
    """Worst distance from any sequence member (or the limit) to the points.

    Members with index beyond the cutoff sit within span * 2^-cutoff of the
    limit, so the limit's own distance plus that margin bounds the tail.
    """
    cutoff = 60
    span = comp.hi - comp.lo
    worst = _dist_to_points(comp.limit, pts) + span.scaled_pow2(-cutoff)
    for i in range(cutoff + 1):
        d = _dist_to_points(comp.member(i), pts)
        if d > worst:
            worst = d
    return worst


# ---------------------------------------------------------------------------
# Simulation report (used by the command line front end)
# ---------------------------------------------------------------------------


def print_state(state: EnumerationState, gap: Dyadic | None = None) -> str:
    lines = [f"stage {state.stage}"]
    for p in state.points:
        lines.append(f"point {p}")
    for addr in sorted(state.nets):
        _, level = state.nets[addr]
        lines.append(f"net {format_address(addr)} level={level}")
    if gap is not None:
        lines.append(f"gap {gap}")
    return "\n".join(lines) + "\n"
