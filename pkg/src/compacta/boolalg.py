"""Boolean algebras with a distinguished atom predicate.

An algebra here is a finite product of clusters.  A cluster carries some
atoms satisfying the predicate `in` (finitely many or a full omega
species), some plain junk atoms (likewise), and optionally an atomless
factor.  Elements select, per cluster, a finite or cofinite set from each
atom species plus a piece of the atomless factor, so all Boolean
operations, atom counts below an element, and the balance condition
relating the two species are exactly decidable.

The atomless piece is modelled as a finite union of dyadic prefixes
(binary strings), which keeps complements and meets total instead of
forcing a lossy three-valued abstraction.

The quotient operator divides by the ideal generated by the junk atoms.
A cluster with cofinitely many junk atoms leaves one residue class
behind (the class of its cofinite junk selections), which is why
quotients can gain an atom; a cluster with omega in-atoms keeps its
finite/cofinite shape.  Canonical forms make both isomorphism of labelled
algebras and isomorphism of their quotients decidable, and the
back-and-forth constructor realizes any quotient isomorphism as an
atom-level isomorphism once the balance and cardinality gates pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce, total_ordering
from typing import Iterable, Literal, Sequence

from .compactum import (
    Cantor,
    Interval,
    Point,
    PointSeq,
    SymbolicCompactum,
    compactum,
)
from .dyadic import interval_of
from .trees import ETA, TERMINAL, LabelledTree


# ---------------------------------------------------------------------------
# Symbolic cardinalities
# ---------------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class SymCard:
    """A natural number or omega (represented by value None)."""

    value: int | None

    def __post_init__(self) -> None:
        if self.value is not None and self.value < 0:
            raise ValueError("cardinality must be a natural number or omega")

    @property
    def is_omega(self) -> bool:
        return self.value is None

    def __add__(self, other: "SymCard | int") -> "SymCard":
        other = _card(other)
        if self.is_omega or other.is_omega:
            return OMEGA
        return SymCard(self.value + other.value)

    def __lt__(self, other: "SymCard | int") -> bool:
        other = _card(other)
        if self.is_omega:
            return False
        if other.is_omega:
            return True
        return self.value < other.value

    def __str__(self) -> str:
        return "w" if self.is_omega else str(self.value)


def _card(x: "SymCard | int") -> SymCard:
    return x if isinstance(x, SymCard) else SymCard(x)


OMEGA = SymCard(None)


def fin(n: int) -> SymCard:
    return SymCard(n)


def parse_symcard(text: str) -> SymCard:
    return OMEGA if text == "w" else SymCard(int(text))


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    n_in: SymCard
    n_junk: SymCard
    has_atomless: bool = False

    def __post_init__(self) -> None:
        if self.n_in == SymCard(0) and self.n_junk == SymCard(0) and not self.has_atomless:
            raise ValueError("cluster must carry at least one atom or an atomless part")


def cluster(n_in: int | None, n_junk: int | None, atomless: bool = False) -> Cluster:
    return Cluster(SymCard(n_in), SymCard(n_junk), atomless)


@dataclass(frozen=True)
class LabelledBA:
    clusters: tuple[Cluster, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clusters", tuple(self.clusters))

    def total_in(self) -> SymCard:
        return reduce(lambda a, c: a + c.n_in, self.clusters, SymCard(0))

    def total_junk(self) -> SymCard:
        return reduce(lambda a, c: a + c.n_junk, self.clusters, SymCard(0))

    def has_atomless(self) -> bool:
        return any(c.has_atomless for c in self.clusters)

    def omega_clusters(self) -> list[int]:
        return [
            i
            for i, c in enumerate(self.clusters)
            if c.n_in.is_omega or c.n_junk.is_omega
        ]


def algebra(*clusters: Cluster) -> LabelledBA:
    return LabelledBA(tuple(clusters))


# ---------------------------------------------------------------------------
# Elements: per-cluster finite/cofinite selections plus an atomless piece
# ---------------------------------------------------------------------------

IN = "in"
JUNK = "junk"


@dataclass(frozen=True)
class Selection:
    """Finite set of atom indices, or the complement of one (omega only)."""

    kind: Literal["fin", "cof"]
    ids: frozenset[int]

    def __post_init__(self) -> None:
        if self.kind not in ("fin", "cof"):
            raise ValueError(f"unknown selection kind {self.kind!r}")
        if any(i < 0 for i in self.ids):
            raise ValueError("atom indices are natural numbers")


EMPTY_SEL = Selection("fin", frozenset())


def take(k: int) -> Selection:
    """The first k atoms of a species."""
    return Selection("fin", frozenset(range(k)))


def cofinite(k: int) -> Selection:
    """All atoms of an omega species except the first k."""
    return Selection("cof", frozenset(range(k)))


def _sel_valid(sel: Selection, card: SymCard) -> bool:
    if sel.kind == "cof":
        return card.is_omega
    return card.is_omega or all(i < card.value for i in sel.ids)


def _sel_count(sel: Selection) -> SymCard:
    return OMEGA if sel.kind == "cof" else SymCard(len(sel.ids))


def _sel_complement(sel: Selection, card: SymCard) -> Selection:
    if card.is_omega:
        return Selection("cof" if sel.kind == "fin" else "fin", sel.ids)
    return Selection("fin", frozenset(range(card.value)) - sel.ids)


def _sel_meet(a: Selection, b: Selection) -> Selection:
    if a.kind == "fin" and b.kind == "fin":
        return Selection("fin", a.ids & b.ids)
    if a.kind == "cof" and b.kind == "cof":
        return Selection("cof", a.ids | b.ids)
    f, c = (a, b) if a.kind == "fin" else (b, a)
    return Selection("fin", f.ids - c.ids)


def _sel_join(a: Selection, b: Selection) -> Selection:
    if a.kind == "fin" and b.kind == "fin":
        return Selection("fin", a.ids | b.ids)
    if a.kind == "cof" and b.kind == "cof":
        return Selection("cof", a.ids & b.ids)
    f, c = (a, b) if a.kind == "fin" else (b, a)
    return Selection("cof", c.ids - f.ids)


def _sel_le(a: Selection, b: Selection) -> bool:
    return _sel_meet(a, b) == a


# Atomless pieces: antichains of binary strings, each naming a dyadic slice.

Piece = frozenset[str]

NO_PIECE: Piece = frozenset()
ALL_PIECE: Piece = frozenset({""})


def _piece_normalize(words: Iterable[str]) -> Piece:
    current = set(words)
    changed = True
    while changed:
        changed = False
        for w in sorted(current, key=len):
            if any(w != v and w.startswith(v) for v in current):
                current.discard(w)
                changed = True
                break
            if w and w[:-1] + ("1" if w[-1] == "0" else "0") in current:
                current.discard(w)
                current.discard(w[:-1] + ("1" if w[-1] == "0" else "0"))
                current.add(w[:-1])
                changed = True
                break
    return frozenset(current)


def _piece_meet(a: Piece, b: Piece) -> Piece:
    out = set()
    for x in a:
        for y in b:
            if x.startswith(y):
                out.add(x)
            elif y.startswith(x):
                out.add(y)
    return _piece_normalize(out)


def _piece_join(a: Piece, b: Piece) -> Piece:
    return _piece_normalize(set(a) | set(b))


def _piece_complement(a: Piece) -> Piece:
    out = ALL_PIECE
    for w in a:
        siblings = frozenset(
            w[:i] + ("1" if w[i] == "0" else "0") for i in range(len(w))
        )
        out = _piece_meet(out, _piece_normalize(siblings))
    return out


def _piece_le(a: Piece, b: Piece) -> bool:
    return _piece_meet(a, b) == a


@dataclass(frozen=True)
class ClusterPart:
    in_sel: Selection = EMPTY_SEL
    junk_sel: Selection = EMPTY_SEL
    atomless: Piece = NO_PIECE


@dataclass(frozen=True)
class Element:
    algebra: LabelledBA
    parts: tuple[ClusterPart, ...]

    def __post_init__(self) -> None:
        if len(self.parts) != len(self.algebra.clusters):
            raise ValueError("element must select from every cluster")
        for part, cl in zip(self.parts, self.algebra.clusters):
            if not _sel_valid(part.in_sel, cl.n_in):
                raise ValueError("in-selection exceeds the cluster")
            if not _sel_valid(part.junk_sel, cl.n_junk):
                raise ValueError("junk-selection exceeds the cluster")
            if part.atomless != NO_PIECE and not cl.has_atomless:
                raise ValueError("cluster has no atomless part to select from")


def bottom(b: LabelledBA) -> Element:
    return Element(b, tuple(ClusterPart() for _ in b.clusters))


def top(b: LabelledBA) -> Element:
    parts = []
    for cl in b.clusters:
        in_sel = cofinite(0) if cl.n_in.is_omega else take(cl.n_in.value)
        junk_sel = cofinite(0) if cl.n_junk.is_omega else take(cl.n_junk.value)
        parts.append(
            ClusterPart(in_sel, junk_sel, ALL_PIECE if cl.has_atomless else NO_PIECE)
        )
    return Element(b, tuple(parts))


def complement(x: Element) -> Element:
    parts = []
    for part, cl in zip(x.parts, x.algebra.clusters):
        parts.append(
            ClusterPart(
                _sel_complement(part.in_sel, cl.n_in),
                _sel_complement(part.junk_sel, cl.n_junk),
                _piece_complement(part.atomless) if cl.has_atomless else NO_PIECE,
            )
        )
    return Element(x.algebra, tuple(parts))


def _zip_parts(x: Element, y: Element) -> Iterable[tuple[ClusterPart, ClusterPart]]:
    if x.algebra != y.algebra:
        raise ValueError("elements live in different algebras")
    return zip(x.parts, y.parts)


def meet(x: Element, y: Element) -> Element:
    parts = tuple(
        ClusterPart(
            _sel_meet(p.in_sel, q.in_sel),
            _sel_meet(p.junk_sel, q.junk_sel),
            _piece_meet(p.atomless, q.atomless),
        )
        for p, q in _zip_parts(x, y)
    )
    return Element(x.algebra, parts)


def join(x: Element, y: Element) -> Element:
    parts = tuple(
        ClusterPart(
            _sel_join(p.in_sel, q.in_sel),
            _sel_join(p.junk_sel, q.junk_sel),
            _piece_join(p.atomless, q.atomless),
        )
        for p, q in _zip_parts(x, y)
    )
    return Element(x.algebra, parts)


def le(x: Element, y: Element) -> bool:
    return all(
        _sel_le(p.in_sel, q.in_sel)
        and _sel_le(p.junk_sel, q.junk_sel)
        and _piece_le(p.atomless, q.atomless)
        for p, q in _zip_parts(x, y)
    )


@dataclass(frozen=True)
class AtomRef:
    cluster: int
    species: str
    index: int


def atom(b: LabelledBA, ref: AtomRef) -> Element:
    cl = b.clusters[ref.cluster]
    card = cl.n_in if ref.species == IN else cl.n_junk
    if not card.is_omega and ref.index >= card.value:
        raise ValueError("atom index exceeds the species")
    parts = [ClusterPart() for _ in b.clusters]
    sel = Selection("fin", frozenset({ref.index}))
    if ref.species == IN:
        parts[ref.cluster] = ClusterPart(in_sel=sel)
    else:
        parts[ref.cluster] = ClusterPart(junk_sel=sel)
    return Element(b, tuple(parts))


def is_atom(x: Element) -> bool:
    singletons = 0
    for part in x.parts:
        if part.atomless != NO_PIECE:
            return False  # atomless pieces sit above no atom
        for sel in (part.in_sel, part.junk_sel):
            if sel.kind == "cof":
                return False
            singletons += len(sel.ids)
    return singletons == 1


def holds_in(x: Element) -> bool:
    """The distinguished predicate: true on in-species atoms only."""
    return is_atom(x) and any(len(p.in_sel.ids) == 1 for p in x.parts)


def in_atoms_below(x: Element) -> SymCard:
    """How many in-atoms the element bounds."""
    return reduce(lambda a, p: a + _sel_count(p.in_sel), x.parts, SymCard(0))


def junk_atoms_below(x: Element) -> SymCard:
    """How many junk atoms the element bounds."""
    return reduce(lambda a, p: a + _sel_count(p.junk_sel), x.parts, SymCard(0))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def interval_algebra(points: Sequence, in_labels: Iterable[int] = ()) -> LabelledBA:
    """Finite algebra of left-closed interval pieces over an ordered set.

    One atom per point (the piece from it to the next); atoms are junk
    unless their index is listed in in_labels.
    """
    pts = list(points)
    if not pts:
        raise ValueError("interval algebra needs at least one point")
    if any(not a < b for a, b in zip(pts, pts[1:])):
        raise ValueError("points must be strictly increasing")
    labelled = set(in_labels)
    if any(i < 0 or i >= len(pts) for i in labelled):
        raise ValueError("in-label index out of range")
    n_in = len(labelled)
    return algebra(cluster(n_in, len(pts) - n_in))


def clopen_algebra(s: SymbolicCompactum) -> LabelledBA:
    """Algebra of clopen subsets with intervals as the in-atoms.

    Unglued points and intervals land in one finite cluster.  Each Cantor
    copy is an atomless cluster.  An unglued sequence is a finite/cofinite
    cluster of junk atoms.  A glue group is one cluster: its sequences
    contribute omega junk atoms, its host contributes no atom at all
    (no clopen set isolates the host from the sequence tails), and a
    Cantor host keeps an atomless part.
    """
    n_in = 0
    n_junk = 0
    extra: list[Cluster] = []
    for group in s.glue_groups():
        comps = [s.components[i] for i in group]
        if len(group) == 1:
            comp = comps[0]
            if isinstance(comp, Point):
                n_junk += 1
            elif isinstance(comp, Interval):
                n_in += 1
            elif isinstance(comp, Cantor):
                extra.append(cluster(0, 0, True))
            elif isinstance(comp, PointSeq):
                extra.append(cluster(0, None))
        else:
            atomless = any(isinstance(c, Cantor) for c in comps)
            extra.append(Cluster(SymCard(0), OMEGA, atomless))
    clusters: list[Cluster] = []
    if n_in or n_junk:
        clusters.append(cluster(n_in, n_junk))
    clusters.extend(extra)
    return LabelledBA(tuple(clusters))


def tree_algebra(t: LabelledTree) -> LabelledBA:
    """The plain algebra a tree codes: one atom per terminal leaf, one
    atomless factor per eta leaf, no in-labels anywhere."""
    n_atoms = sum(1 for n in t.nodes.values() if n.kind == TERMINAL)
    n_eta = sum(1 for n in t.nodes.values() if n.kind == ETA)
    clusters: list[Cluster] = []
    if n_atoms:
        clusters.append(cluster(0, n_atoms))
    clusters.extend(cluster(0, 0, True) for _ in range(n_eta))
    if not clusters:
        raise ValueError("tree codes no algebra: no terminal or eta leaves")
    return LabelledBA(tuple(clusters))


def stone_space(t: LabelledTree) -> SymbolicCompactum:
    """Leaf skeleton of a tree as a compactum: isolated paths become the
    midpoints of their intervals, eta leaves become Cantor copies."""
    comps = []
    for addr, node in t.nodes.items():
        iv = interval_of(addr)
        if node.kind == TERMINAL:
            comps.append(Point(iv.mid))
        elif node.kind == ETA:
            comps.append(Cantor(iv.lo, iv.hi))
    return compactum(comps)


def quotient_by_junk(b: LabelledBA) -> LabelledBA:
    """Quotient by the ideal the junk atoms generate, forgetting in-labels.

    Finite junk dies outright.  A cluster with omega junk leaves one
    residue atom: the class of its cofinite junk selections, which no
    finite sum of junk atoms reaches.  When the in-species is omega too,
    that residue merges into the surviving finite/cofinite shape.  The
    resulting plain atoms are reported in the junk slot, since the in
    predicate fails everywhere after the quotient.
    """
    clusters: list[Cluster] = []
    for cl in b.clusters:
        if cl.n_in.is_omega:
            survivors: SymCard = OMEGA
        elif cl.n_junk.is_omega:
            survivors = SymCard(cl.n_in.value + 1)
        else:
            survivors = cl.n_in
        if survivors == SymCard(0) and not cl.has_atomless:
            continue
        clusters.append(Cluster(SymCard(0), survivors, cl.has_atomless))
    return LabelledBA(tuple(clusters))


def is_balanced(b: LabelledBA) -> bool:
    """Per cluster, the two species are finite together or omega together."""
    return all(c.n_in.is_omega == c.n_junk.is_omega for c in b.clusters)


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BAForm:
    """Complete isomorphism invariant for labelled cluster algebras.

    A finite batch of atoms merges into an omega block of its own species,
    and atomless factors collapse to one, so only block counts, residual
    finite counts, and atomless presence remain.
    """

    omega_in: int
    omega_junk: int
    fin_in: int
    fin_junk: int
    atomless: bool


def canonical_form(b: LabelledBA) -> BAForm:
    omega_in = sum(1 for c in b.clusters if c.n_in.is_omega)
    omega_junk = sum(1 for c in b.clusters if c.n_junk.is_omega)
    fin_in = sum(c.n_in.value for c in b.clusters if not c.n_in.is_omega)
    fin_junk = sum(c.n_junk.value for c in b.clusters if not c.n_junk.is_omega)
    return BAForm(
        omega_in=omega_in,
        omega_junk=omega_junk,
        fin_in=0 if omega_in else fin_in,
        fin_junk=0 if omega_junk else fin_junk,
        atomless=b.has_atomless(),
    )


# ---------------------------------------------------------------------------
# Quotient isomorphisms and the back-and-forth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientIso:
    """Pairing of the omega clusters of two algebras (the finite parts of
    the quotients match by counting, so the pairing is all that varies)."""

    omega_pairs: tuple[tuple[int, int], ...]

    def validate(self, b0: LabelledBA, b1: LabelledBA) -> None:
        if canonical_form(quotient_by_junk(b0)) != canonical_form(
            quotient_by_junk(b1)
        ):
            raise ValueError("quotients are not isomorphic")
        w0, w1 = b0.omega_clusters(), b1.omega_clusters()
        if sorted(i for i, _ in self.omega_pairs) != w0 or sorted(
            j for _, j in self.omega_pairs
        ) != w1:
            raise ValueError("pairing does not cover the omega clusters")


def derive_quotient_iso(b0: LabelledBA, b1: LabelledBA) -> QuotientIso:
    iso = QuotientIso(tuple(zip(b0.omega_clusters(), b1.omega_clusters())))
    iso.validate(b0, b1)
    return iso


@dataclass(frozen=True)
class BlockPair:
    """An omega species mapped onto another in index order, minus skips."""

    src: tuple[int, str]
    dst: tuple[int, str]
    skip_src: frozenset[int] = frozenset()
    skip_dst: frozenset[int] = frozenset()


@dataclass(frozen=True)
class AtomIso:
    atom_pairs: tuple[tuple[AtomRef, AtomRef], ...]
    block_pairs: tuple[BlockPair, ...]
    atomless_pair: tuple[tuple[int, ...], tuple[int, ...]] | None


def build_isomorphism(
    b0: LabelledBA, b1: LabelledBA, f: QuotientIso | None = None
) -> AtomIso:
    """Lift a quotient isomorphism to a label-preserving atom isomorphism.

    Gates: both algebras balanced; quotients isomorphic; atom totals
    compatible (both in-species infinite, or everything finite with equal
    totals per species).  Once the gates pass the construction cannot get
    stuck: finite atoms pair off species by species in a fixed order, any
    surplus is absorbed into the first omega block of the same species,
    and omega blocks follow the quotient pairing.
    """
    if not is_balanced(b0) or not is_balanced(b1):
        raise ValueError("balance condition fails: a cluster mixes finite "
                         "and omega species")
    if f is None:
        f = derive_quotient_iso(b0, b1)
    else:
        f.validate(b0, b1)
    t_in0, t_in1 = b0.total_in(), b1.total_in()
    if t_in0.is_omega != t_in1.is_omega:
        raise ValueError("one in-species is infinite, the other finite")
    if not t_in0.is_omega:
        if t_in0 != t_in1 or b0.total_junk() != b1.total_junk():
            raise ValueError("finite atom totals differ")
    if b0.has_atomless() != b1.has_atomless():
        raise ValueError("atomless parts do not match")

    atom_pairs: list[tuple[AtomRef, AtomRef]] = []
    block_pairs: list[BlockPair] = []
    for species in (IN, JUNK):
        fin0 = _finite_atoms(b0, species)
        fin1 = _finite_atoms(b1, species)
        shared = min(len(fin0), len(fin1))
        atom_pairs.extend(zip(fin0[:shared], fin1[:shared]))
        skips0: dict[int, set[int]] = {}
        skips1: dict[int, set[int]] = {}
        if len(fin0) > shared:
            host = f.omega_pairs[0][1]
            skips1[host] = set(range(len(fin0) - shared))
            for k, ref in enumerate(fin0[shared:]):
                atom_pairs.append((ref, AtomRef(host, species, k)))
        elif len(fin1) > shared:
            host = f.omega_pairs[0][0]
            skips0[host] = set(range(len(fin1) - shared))
            for k, ref in enumerate(fin1[shared:]):
                atom_pairs.append((AtomRef(host, species, k), ref))
        for c0, c1 in f.omega_pairs:
            block_pairs.append(
                BlockPair(
                    (c0, species),
                    (c1, species),
                    frozenset(skips0.get(c0, ())),
                    frozenset(skips1.get(c1, ())),
                )
            )
    atomless0 = tuple(i for i, c in enumerate(b0.clusters) if c.has_atomless)
    atomless1 = tuple(i for i, c in enumerate(b1.clusters) if c.has_atomless)
    iso = AtomIso(
        atom_pairs=tuple(atom_pairs),
        block_pairs=tuple(block_pairs),
        atomless_pair=(atomless0, atomless1) if atomless0 else None,
    )
    verify_isomorphism(b0, b1, iso)
    return iso


def _finite_atoms(b: LabelledBA, species: str) -> list[AtomRef]:
    refs = []
    for i, cl in enumerate(b.clusters):
        card = cl.n_in if species == IN else cl.n_junk
        if not card.is_omega:
            refs.extend(AtomRef(i, species, k) for k in range(card.value))
    return refs


def verify_isomorphism(b0: LabelledBA, b1: LabelledBA, iso: AtomIso) -> bool:
    """Check bijectivity on atoms, label preservation, and block coverage."""
    for a, b in iso.atom_pairs:
        if a.species != b.species:
            raise ValueError("pairing does not preserve the atom label")
        _check_ref(b0, a)
        _check_ref(b1, b)
    for bp in iso.block_pairs:
        if bp.src[1] != bp.dst[1]:
            raise ValueError("block pairing does not preserve the species")
        if not _species_card(b0, *bp.src).is_omega:
            raise ValueError("block source is not an omega species")
        if not _species_card(b1, *bp.dst).is_omega:
            raise ValueError("block target is not an omega species")
    _check_cover(b0, iso, side=0)
    _check_cover(b1, iso, side=1)
    has0 = b0.has_atomless()
    has1 = b1.has_atomless()
    if has0 != has1 or (has0 and iso.atomless_pair is None):
        raise ValueError("atomless parts not matched")
    return True


def _species_card(b: LabelledBA, c: int, species: str) -> SymCard:
    cl = b.clusters[c]
    return cl.n_in if species == IN else cl.n_junk


def _check_ref(b: LabelledBA, ref: AtomRef) -> None:
    card = _species_card(b, ref.cluster, ref.species)
    if not card.is_omega and ref.index >= card.value:
        raise ValueError("atom reference outside its species")


def _check_cover(b: LabelledBA, iso: AtomIso, side: int) -> None:
    explicit: dict[tuple[int, str], set[int]] = {}
    for pair in iso.atom_pairs:
        ref = pair[side]
        key = (ref.cluster, ref.species)
        ids = explicit.setdefault(key, set())
        if ref.index in ids:
            raise ValueError("an atom appears twice in the pairing")
        ids.add(ref.index)
    blocks: dict[tuple[int, str], BlockPair] = {}
    for bp in iso.block_pairs:
        key = bp.src if side == 0 else bp.dst
        if key in blocks:
            raise ValueError("an omega species appears in two block pairs")
        blocks[key] = bp
    for c, cl in enumerate(b.clusters):
        for species, card in ((IN, cl.n_in), (JUNK, cl.n_junk)):
            key = (c, species)
            used = explicit.get(key, set())
            if card.is_omega:
                bp = blocks.get(key)
                if bp is None:
                    raise ValueError("omega species not covered by a block")
                skip = bp.skip_src if side == 0 else bp.skip_dst
                if used != set(skip):
                    raise ValueError(
                        "block skips disagree with the explicit pairs"
                    )
            else:
                if key in blocks:
                    raise ValueError("finite species cannot form a block")
                if used != set(range(card.value)):
                    raise ValueError("finite species not fully paired")


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def print_ba(b: LabelledBA) -> str:
    lines = ["ba v1"]
    for cl in b.clusters:
        atomless = 1 if cl.has_atomless else 0
        lines.append(
            f"cluster in={cl.n_in} junk={cl.n_junk} atomless={atomless}"
        )
    return "\n".join(lines) + "\n"


def parse_ba(text: str) -> LabelledBA:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "ba v1":
        raise ValueError("missing 'ba v1' header")
    clusters = []
    for line in lines[1:]:
        parts = line.split()
        if parts[0] != "cluster" or len(parts) != 4:
            raise ValueError(f"unexpected line in algebra file: {line!r}")
        opts = dict(p.split("=", 1) for p in parts[1:])
        clusters.append(
            Cluster(
                parse_symcard(opts["in"]),
                parse_symcard(opts["junk"]),
                opts["atomless"] == "1",
            )
        )
    return LabelledBA(tuple(clusters))


def print_iso(iso: AtomIso) -> str:
    lines = []
    for a, b in iso.atom_pairs:
        lines.append(
            f"atom {a.cluster}.{a.species}.{a.index} -> "
            f"{b.cluster}.{b.species}.{b.index}"
        )
    for bp in iso.block_pairs:
        skip0 = ",".join(str(i) for i in sorted(bp.skip_src))
        skip1 = ",".join(str(i) for i in sorted(bp.skip_dst))
        suffix = ""
        if skip0 or skip1:
            suffix = f" skip {skip0 or '-'} -> {skip1 or '-'}"
        lines.append(
            f"bulk {bp.src[0]}.{bp.src[1]} -> {bp.dst[0]}.{bp.dst[1]}{suffix}"
        )
    if iso.atomless_pair is not None:
        lines.append("atomless")
    return "\n".join(lines) + "\n"
