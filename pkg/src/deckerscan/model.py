"""Core combinatorial types: triple points, germs, connection schemes.

A *germ* is one end of a double edge at a triple point.  Every triple point
carries six germs, two of each edge type.  The two germs of one edge type
lie on the same double curve passing straight through the triple point and
are told apart by ``slot``: slot 0 is the half-edge on the normal side of
the sheet transverse to the edge, slot 1 the half-edge on the other side.

A :class:`ConnectionScheme` is a perfect matching on germs, where germs
forced to end at branch points are matched with anonymous
:class:`BranchPoint` endpoints.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union


class ProfileError(ValueError):
    """Raised for malformed or inconsistent profiles."""


class EdgeType(enum.IntEnum):
    BM = 0
    BT = 1
    MT = 2

    @property
    def label(self) -> str:
        return _ETYPE_LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "EdgeType":
        key = text.strip().lower().replace("/", "")
        try:
            return {"bm": cls.BM, "bt": cls.BT, "mt": cls.MT}[key]
        except KeyError:
            raise ValueError(f"unknown edge type {text!r}") from None

    def mirrored(self) -> "EdgeType":
        # top and bottom trade places; the middle sheet stays put
        return {EdgeType.BM: EdgeType.MT, EdgeType.MT: EdgeType.BM}.get(self, self)


_ETYPE_LABELS = {EdgeType.BM: "b/m", EdgeType.BT: "b/t", EdgeType.MT: "m/t"}


class Policy(enum.Enum):
    MUST_TRIPLE = "MustTriple"
    MUST_BRANCH = "MustBranch"


@dataclass(frozen=True)
class TriplePointSpec:
    id: int
    sign: int
    numbering: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ProfileError(f"triple point {self.id}: sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True, order=True)
class Germ:
    tp: int
    etype: EdgeType
    slot: int

    def opposite(self) -> "Germ":
        return Germ(self.tp, self.etype, 1 - self.slot)

    def __str__(self) -> str:
        return f"T{self.tp}.{self.etype.name}.{self.slot}"


@dataclass(frozen=True, order=True)
class BranchPoint:
    bid: int

    def __str__(self) -> str:
        return f"B{self.bid}"


Endpoint = Union[Germ, BranchPoint]
Pair = Tuple[Endpoint, Endpoint]


def endpoint_key(e: Endpoint) -> tuple:
    if isinstance(e, Germ):
        return (0, e.tp, int(e.etype), e.slot)
    return (1, e.bid, 0, 0)


def ordered_pair(a: Endpoint, b: Endpoint) -> Pair:
    return (a, b) if endpoint_key(a) <= endpoint_key(b) else (b, a)


@dataclass(frozen=True)
class Profile:
    """Input data for an enumeration run.

    ``branch_policy`` only needs to list MustBranch entries; anything missing
    defaults to MustTriple.
    """

    genus: int
    triple_points: Tuple[TriplePointSpec, ...]
    branch_policy: Tuple[Tuple[Tuple[int, EdgeType], Policy], ...] = ()
    name: str = ""

    @cached_property
    def _policy_map(self) -> Dict[Tuple[int, EdgeType], Policy]:
        return dict(self.branch_policy)

    def policy(self, tp: int, etype: EdgeType) -> Policy:
        return self._policy_map.get((tp, etype), Policy.MUST_TRIPLE)

    def spec(self, tp: int) -> TriplePointSpec:
        for t in self.triple_points:
            if t.id == tp:
                return t
        raise KeyError(tp)

    @property
    def ids(self) -> List[int]:
        return [t.id for t in self.triple_points]

    def germs(self) -> List[Germ]:
        return [Germ(t.id, et, slot) for t in self.triple_points for et in EdgeType for slot in (0, 1)]

    def branch_germs(self) -> List[Germ]:
        return [g for g in self.germs() if self.policy(g.tp, g.etype) is Policy.MUST_BRANCH]

    def with_genus(self, genus: int) -> "Profile":
        return Profile(genus, self.triple_points, self.branch_policy, self.name)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "genus": self.genus,
            "triple_points": [
                {"id": t.id, "sign": t.sign, "numbering": t.numbering} for t in self.triple_points
            ],
            "must_branch": sorted(
                f"T{tp}.{et.label}" for (tp, et), pol in self.branch_policy if pol is Policy.MUST_BRANCH
            ),
        }


def make_profile(
    genus: int,
    triple_points: Iterable[Tuple[int, int, int]],
    must_branch: Iterable[Tuple[int, EdgeType]] = (),
    name: str = "",
) -> Profile:
    """Build a profile from ``(id, sign, numbering)`` triples."""
    tps = tuple(TriplePointSpec(i, s, n) for i, s, n in triple_points)
    policy = tuple(sorted(((tp, et), Policy.MUST_BRANCH) for tp, et in must_branch))
    return Profile(genus, tps, policy, name)


def main_profile(genus: int = 1) -> Profile:
    """Three triple points, signs (+, +, -), equal numbering; T3's b/t edges end at branch points."""
    return make_profile(
        genus,
        [(1, 1, 0), (2, 1, 0), (3, -1, 0)],
        must_branch=[(3, EdgeType.BT)],
        name=f"genus{genus}-n3",
    )


def validate_profile(p: Profile) -> Profile:
    """Check profile invariants and renumber triple points to 1..n in list order."""
    if p.genus < 0:
        raise ProfileError("genus must be non-negative")
    ids = [t.id for t in p.triple_points]
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        raise ProfileError(f"duplicate triple point ids: {dup}")
    known = set(ids)
    for (tp, _), _pol in p.branch_policy:
        if tp not in known:
            raise ProfileError(f"branch policy references unknown triple point {tp}")
    relabel = {old: new for new, old in enumerate(ids, start=1)}
    tps = tuple(TriplePointSpec(relabel[t.id], t.sign, t.numbering) for t in p.triple_points)
    policy = tuple(sorted(((relabel[tp], et), pol) for (tp, et), pol in p.branch_policy))
    return Profile(p.genus, tps, policy, p.name)


def is_main_profile(p: Profile) -> bool:
    """True when ``p`` has the shape forced on a t-minimal three-triple-point diagram."""
    if len(p.triple_points) != 3:
        return False
    t1, t2, t3 = (p.spec(i) for i in (1, 2, 3)) if p.ids == [1, 2, 3] else (None, None, None)
    if t1 is None:
        return False
    if not (t1.sign == t2.sign == -t3.sign):
        return False
    if not (t1.numbering == t2.numbering == t3.numbering):
        return False
    for tp in (1, 2, 3):
        for et in EdgeType:
            want = Policy.MUST_BRANCH if (tp == 3 and et is EdgeType.BT) else Policy.MUST_TRIPLE
            if p.policy(tp, et) is not want:
                return False
    return True


def mirror_profile(p: Profile) -> Profile:
    tps = tuple(TriplePointSpec(t.id, -t.sign, t.numbering) for t in p.triple_points)
    policy = tuple(sorted(((tp, et.mirrored()), pol) for (tp, et), pol in p.branch_policy))
    return Profile(p.genus, tps, policy, p.name + "-mirror" if p.name else "")


@dataclass(frozen=True)
class ConnectionScheme:
    """A perfect matching of germs (and branch endpoints), stored as sorted pairs."""

    pairs: Tuple[Pair, ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Endpoint, Endpoint]]) -> "ConnectionScheme":
        ordered = [ordered_pair(a, b) for a, b in pairs]
        ordered.sort(key=lambda pr: (endpoint_key(pr[0]), endpoint_key(pr[1])))
        return cls(tuple(ordered))

    @cached_property
    def partner(self) -> Dict[Endpoint, Endpoint]:
        out: Dict[Endpoint, Endpoint] = {}
        for a, b in self.pairs:
            if a in out or b in out:
                raise ValueError(f"endpoint used twice in scheme: {a if a in out else b}")
            out[a] = b
            out[b] = a
        return out

    def germs(self) -> List[Germ]:
        return sorted((e for e in self.partner if isinstance(e, Germ)), key=endpoint_key)

    def germ_pairs(self) -> List[Tuple[Germ, Germ]]:
        return [(a, b) for a, b in self.pairs if isinstance(a, Germ) and isinstance(b, Germ)]

    def key(self) -> tuple:
        return tuple((endpoint_key(a), endpoint_key(b)) for a, b in self.pairs)

    def map_endpoints(self, fn) -> "ConnectionScheme":
        return ConnectionScheme.from_pairs((fn(a), fn(b)) for a, b in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return scheme_text(self)


def validate_scheme(s: ConnectionScheme, p: Profile, connectable=None) -> None:
    """Raise ``ValueError`` unless ``s`` is a valid scheme over ``p``.

    ``connectable`` is an optional predicate on two germs; when given, every
    germ-germ pair must satisfy it.
    """
    partner = s.partner
    expected = set(p.germs())
    got = {e for e in partner if isinstance(e, Germ)}
    if got != expected:
        missing = sorted(expected - got, key=endpoint_key)
        extra = sorted(got - expected, key=endpoint_key)
        raise ValueError(f"not a perfect matching: missing={missing} extra={extra}")
    for a, b in s.pairs:
        if isinstance(a, BranchPoint) and isinstance(b, BranchPoint):
            raise ValueError("pair of two branch points")
        for g, other in ((a, b), (b, a)):
            if not isinstance(g, Germ):
                continue
            must_branch = p.policy(g.tp, g.etype) is Policy.MUST_BRANCH
            if must_branch != isinstance(other, BranchPoint):
                raise ValueError(f"{g} violates branch policy")
        if connectable is not None and isinstance(a, Germ) and isinstance(b, Germ):
            if not connectable(a, b):
                raise ValueError(f"pair {a}-{b} is not connectable")


# -- text form ---------------------------------------------------------------

def _edge_text(a: Endpoint, b: Endpoint, slots: bool) -> str:
    def tp(e):
        return str(e.tp) if isinstance(e, Germ) else "*"

    def lab(e):
        if isinstance(e, BranchPoint):
            return "*"
        return e.etype.label + (str(e.slot) if slots else "")

    return f"e{tp(a)}{tp(b)}({lab(a)},{lab(b)})"


def pair_text(a: Endpoint, b: Endpoint, slots: bool = True) -> str:
    a, b = ordered_pair(a, b)
    return _edge_text(a, b, slots)


def scheme_text(s: ConnectionScheme) -> str:
    """Canonical one-line text: ``e12(b/m0,b/t0) ...`` sorted, ``*`` for branch ends.

    The trailing digit on each edge type is the germ slot; without it the
    text would not determine the scheme.
    """
    return " ".join(sorted(pair_text(a, b) for a, b in s.pairs))


_EDGE_RE = re.compile(r"e([0-9*])([0-9*])\(([^,]+),([^)]+)\)")
_CIRCLE_EDGE_RE = re.compile(r"e(\d)(\d)\(\s*([bmt]/[bmt])\s*,\s*([bmt]/[bmt])\s*\)")


def parse_scheme_text(text: str) -> ConnectionScheme:
    """Inverse of :func:`scheme_text`.  Branch ids are assigned in reading order."""
    pairs = []
    bid = itertools.count()
    for tok in text.split():
        m = _EDGE_RE.fullmatch(tok)
        if not m:
            raise ValueError(f"bad edge token {tok!r}")
        ends = []
        for tp, lab in ((m.group(1), m.group(3)), (m.group(2), m.group(4))):
            if tp == "*":
                ends.append(BranchPoint(next(bid)))
            else:
                ends.append(Germ(int(tp), EdgeType.parse(lab[:-1]), int(lab[-1])))
        pairs.append(tuple(ends))
    return ConnectionScheme.from_pairs(pairs)


# -- double point curves -----------------------------------------------------

class CurveKind(enum.Enum):
    CIRCLE = "circle"
    ARC = "arc"


@dataclass(frozen=True)
class DoublePointCurve:
    """A double point curve as a sequence of oriented double edges.

    Consecutive edges meet at a straight passage: edge ``k`` ends at a germ
    whose opposite germ starts edge ``k + 1``.  For a circle the last edge
    passes back into the first; an arc starts and ends at branch points.
    """

    kind: CurveKind
    edges: Tuple[Pair, ...]

    def triple_passages(self) -> int:
        if not self.edges:
            return 0
        return len(self.edges) if self.kind is CurveKind.CIRCLE else len(self.edges) - 1

    def passages(self) -> List[Germ]:
        """Germ (as entered) at each straight passage."""
        out = [b for _, b in self.edges[:-1]]
        if self.kind is CurveKind.CIRCLE and self.edges:
            out.append(self.edges[-1][1])
        return out

    def text(self, slots: bool = False) -> str:
        return " ∪ ".join(_edge_text(a, b, slots) for a, b in self.edges)

    def type_sequence(self) -> Tuple[Tuple[int, EdgeType, int, EdgeType], ...]:
        """Edges as ``(tp, type, tp, type)``; circles only, since arcs end at branch points."""
        if self.kind is not CurveKind.CIRCLE:
            raise ValueError("type sequence is defined for circles only")
        return tuple((a.tp, a.etype, b.tp, b.etype) for a, b in self.edges)  # type: ignore[union-attr]


def curves_of(s: ConnectionScheme) -> List[DoublePointCurve]:
    """Partition the double edges of ``s`` into maximal double point curves.

    Arcs come first (ordered by their smallest germ), then circles; each
    circle starts at its smallest germ, read in the direction of that germ's
    pair.
    """
    partner = s.partner
    used: set = set()
    curves: List[DoublePointCurve] = []

    def walk(start: Endpoint) -> List[Pair]:
        # start is an endpoint from which we leave along its pair
        out = []
        cur = start
        while True:
            nxt = partner[cur]
            out.append((cur, nxt))
            used.add(cur)
            used.add(nxt)
            if isinstance(nxt, BranchPoint):
                return out
            cur = nxt.opposite()
            if cur == start or cur in used:
                return out

    branch_ends = sorted((e for e in partner if isinstance(e, BranchPoint)), key=endpoint_key)
    for b in branch_ends:
        if b in used:
            continue
        curves.append(DoublePointCurve(CurveKind.ARC, tuple(walk(b))))

    for g in sorted((e for e in partner if isinstance(e, Germ)), key=endpoint_key):
        if g in used:
            continue
        edges = walk(g)
        curves.append(DoublePointCurve(CurveKind.CIRCLE, tuple(edges)))
    return curves


def canonical_cycle_text(edges: Sequence[Tuple[int, EdgeType, int, EdgeType]]) -> str:
    """Type-level text of a circle, minimal over rotation and reversal."""
    n = len(edges)
    if n == 0:
        return ""
    rev = [(j, b, i, a) for (i, a, j, b) in reversed(edges)]
    best = None
    for seq in (list(edges), rev):
        for r in range(n):
            rot = seq[r:] + seq[:r]
            txt = " ∪ ".join(f"e{i}{j}({a.label},{b.label})" for i, a, j, b in rot)
            if best is None or txt < best:
                best = txt
    return best


def parse_circle_text(text: str) -> List[Tuple[int, EdgeType, int, EdgeType]]:
    """Parse ``e32(b/m,b/m) ∪ e23(b/m,m/t) ...`` into type-level edges."""
    out = []
    for m in _CIRCLE_EDGE_RE.finditer(text):
        out.append((int(m.group(1)), EdgeType.parse(m.group(3)), int(m.group(2)), EdgeType.parse(m.group(4))))
    return out


# -- symmetries ----------------------------------------------------------------

def mirror_scheme(s: ConnectionScheme) -> ConnectionScheme:
    """Scheme of the mirror diagram: b/m and m/t trade places, slots kept."""

    def f(e: Endpoint) -> Endpoint:
        if isinstance(e, Germ):
            return Germ(e.tp, e.etype.mirrored(), e.slot)
        return e

    return s.map_endpoints(f)


def relabel_scheme(s: ConnectionScheme, mapping: Mapping[int, int]) -> ConnectionScheme:
    def f(e: Endpoint) -> Endpoint:
        if isinstance(e, Germ):
            return Germ(mapping.get(e.tp, e.tp), e.etype, e.slot)
        return e

    return s.map_endpoints(f)


def flip_slots(s: ConnectionScheme) -> ConnectionScheme:
    def f(e: Endpoint) -> Endpoint:
        return e.opposite() if isinstance(e, Germ) else e

    return s.map_endpoints(f)


def relabel_branches(s: ConnectionScheme, perm: Mapping[int, int]) -> ConnectionScheme:
    def f(e: Endpoint) -> Endpoint:
        return BranchPoint(perm[e.bid]) if isinstance(e, BranchPoint) else e

    return s.map_endpoints(f)


@dataclass(frozen=True)
class SymmetryGroup:
    """Validity-preserving symmetries of the schemes of one profile.

    Generated by triple point relabelings that preserve sign, numbering and
    branch policy, the simultaneous slot flip at every germ (available when
    all numberings agree) and permutations of branch point labels.
    """

    tp_perms: Tuple[Tuple[Tuple[int, int], ...], ...]
    slot_flip: bool
    n_branch: int

    def order(self) -> int:
        n = 1
        for k in range(2, self.n_branch + 1):
            n *= k
        return len(self.tp_perms) * (2 if self.slot_flip else 1) * n

    def images(self, s: ConnectionScheme) -> Iterator[ConnectionScheme]:
        bids = sorted({e.bid for e in s.partner if isinstance(e, BranchPoint)})
        for perm in self.tp_perms:
            a = relabel_scheme(s, dict(perm))
            for flip in ((False, True) if self.slot_flip else (False,)):
                b = flip_slots(a) if flip else a
                if not bids:
                    yield b
                    continue
                for bp in itertools.permutations(bids):
                    yield relabel_branches(b, dict(zip(bids, bp)))


def symmetry_group(p: Profile) -> SymmetryGroup:
    ids = p.ids

    def signature(tp):
        t = p.spec(tp)
        return (t.sign, t.numbering, tuple(p.policy(tp, et) for et in EdgeType))

    perms = []
    for perm in itertools.permutations(ids):
        if all(signature(a) == signature(b) for a, b in zip(ids, perm)):
            perms.append(tuple(zip(ids, perm)))
    numberings = {t.numbering for t in p.triple_points}
    return SymmetryGroup(tuple(perms), len(numberings) <= 1, len(p.branch_germs()))


def canonical_form(s: ConnectionScheme, p: Optional[Profile] = None) -> ConnectionScheme:
    """Lexicographically least image of ``s`` under the profile's symmetry group."""
    group = symmetry_group(p if p is not None else main_profile())
    best = None
    best_key = None
    for img in group.images(s):
        k = img.key()
        if best_key is None or k < best_key:
            best, best_key = img, k
    return best


def anonymize_branches(s: ConnectionScheme) -> ConnectionScheme:
    """Renumber branch points 0, 1, ... in order of their partner germs."""
    order = [b for a, b in s.pairs if isinstance(b, BranchPoint)]
    return relabel_branches(s, {b.bid: i for i, b in enumerate(order)}) if order else s


def orbit(
    s: ConnectionScheme, p: Optional[Profile] = None, anonymous_branches: bool = False
) -> List[ConnectionScheme]:
    """Distinct images of ``s``; with ``anonymous_branches`` branch labels are ignored."""
    group = symmetry_group(p if p is not None else main_profile())
    seen: Dict[tuple, ConnectionScheme] = {}
    for img in group.images(s):
        if anonymous_branches:
            img = anonymize_branches(img)
        seen.setdefault(img.key(), img)
    return [seen[k] for k in sorted(seen)]


EMPTY_SCHEME = ConnectionScheme(())
