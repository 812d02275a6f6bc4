"""Local model of a triple point and the connection rules it implies.

Reference configuration (fixed once, everything is computed inside it)::

    top sheet     = plane x = 0,  normal n_T = +x
    middle sheet  = plane y = 0,  normal n_M = +y
    bottom sheet  = plane z = 0,  normal n_B = sign * z

so (n_T, n_M, n_B) is right-handed exactly when ``sign == +1``.  Octants are
labelled by the sign vector ``(sx, sy, sz)``.  Crossing a sheet towards its
normal raises the Alexander index by one, and the source octant (all
normals pointing away) carries the triple point's numbering.

A double edge is the intersection of two sheets and runs along the normal
axis of the third (transverse) sheet.  Slot 0 is the half-edge on the
normal side of the transverse sheet, slot 1 the other half.  The edge is
oriented so that (n_upper, n_lower, v) is positive.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from .model import EdgeType, Germ, Policy, Profile, ProfileError, is_main_profile

Vec = Tuple[int, int, int]
Octant = Tuple[int, int, int]

SHEETS = ("top", "middle", "bottom")

# sheet axis: the coordinate the sheet is normal to
_SHEET_AXIS = {"top": 0, "middle": 1, "bottom": 2}

# (upper sheet, lower sheet, transverse sheet) for each edge type
EDGE_SHEETS: Dict[EdgeType, Tuple[str, str, str]] = {
    EdgeType.BM: ("middle", "bottom", "top"),
    EdgeType.BT: ("top", "bottom", "middle"),
    EdgeType.MT: ("top", "middle", "bottom"),
}


class Direction(enum.Enum):
    OUT = "Outgoing"
    IN = "Incoming"

    def flipped(self) -> "Direction":
        return Direction.IN if self is Direction.OUT else Direction.OUT


def _unit(axis: int, sgn: int) -> Vec:
    v = [0, 0, 0]
    v[axis] = sgn
    return tuple(v)


def _det(a: Vec, b: Vec, c: Vec) -> int:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


@dataclass(frozen=True)
class OctantModel:
    sign: int
    numbering: int
    normals: Tuple[Tuple[str, Vec], ...]
    region_index: Tuple[Tuple[Octant, int], ...]

    def normal(self, sheet: str) -> Vec:
        return dict(self.normals)[sheet]

    def index(self, octant: Octant) -> int:
        return dict(self.region_index)[octant]

    def source_region(self) -> Octant:
        return min(self.region_index, key=lambda kv: kv[1])[0]

    def right_handed(self) -> bool:
        return _det(self.normal("top"), self.normal("middle"), self.normal("bottom")) > 0


def octant_model(sign: int, numbering: int = 0) -> OctantModel:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    normals = {
        "top": _unit(0, 1),
        "middle": _unit(1, 1),
        "bottom": _unit(2, sign),
    }
    regions = {}
    for octant in itertools.product((1, -1), repeat=3):
        idx = numbering
        for sheet, n in normals.items():
            axis = _SHEET_AXIS[sheet]
            if octant[axis] == n[axis]:
                idx += 1
        regions[octant] = idx
    return OctantModel(
        sign,
        numbering,
        tuple(sorted(normals.items())),
        tuple(sorted(regions.items())),
    )


@dataclass(frozen=True, order=True)
class GermSignature:
    min_index: int
    direction: Direction

    def __str__(self) -> str:
        return f"({self.min_index},{'O' if self.direction is Direction.OUT else 'I'})"


def half_edge(m: OctantModel, etype: EdgeType, slot: int) -> Vec:
    """Unit vector from the triple point along the germ."""
    transverse = EDGE_SHEETS[etype][2]
    n = m.normal(transverse)
    return n if slot == 0 else tuple(-c for c in n)


def germ_signature(m: OctantModel, g: Germ, profile: Optional[Profile] = None) -> GermSignature:
    if profile is not None:
        t = profile.spec(g.tp)
        if (t.sign, t.numbering) != (m.sign, m.numbering):
            raise ValueError(f"germ {g} does not belong to the modelled triple point")
    if g.slot not in (0, 1):
        raise ValueError(f"bad slot {g.slot}")
    h = half_edge(m, g.etype, g.slot)
    axis = next(i for i, c in enumerate(h) if c)
    adjacent = [idx for octant, idx in m.region_index if octant[axis] == h[axis]]
    upper, lower, _ = EDGE_SHEETS[g.etype]
    d = _det(m.normal(upper), m.normal(lower), h)
    # d > 0: the edge orientation points along h, i.e. away from the triple point
    return GermSignature(min(adjacent), Direction.OUT if d > 0 else Direction.IN)


def connectable(s1: GermSignature, s2: GermSignature) -> bool:
    return s1.min_index == s2.min_index and s1.direction is not s2.direction


def signature_table(p: Profile) -> Dict[Germ, GermSignature]:
    models = {t.id: octant_model(t.sign, t.numbering) for t in p.triple_points}
    return {g: germ_signature(models[g.tp], g) for g in p.germs()}


def connectable_germs(p: Profile):
    """Predicate on two germs of ``p`` (ignores branch policy)."""
    table = signature_table(p)

    def pred(a: Germ, b: Germ) -> bool:
        return a != b and connectable(table[a], table[b])

    return pred


def dead_germs(p: Profile) -> List[Germ]:
    """MustTriple germs with no MustTriple partner at all.

    Any such germ makes the scheme set empty for a purely local reason.
    """
    table = signature_table(p)
    live = [g for g in p.germs() if p.policy(g.tp, g.etype) is Policy.MUST_TRIPLE]
    out = []
    for g in live:
        if not any(h != g and connectable(table[g], table[h]) for h in live):
            out.append(g)
    return out


# -- the type-level connection table ----------------------------------------

BRANCH = "branch point"


def _tp_class(p: Profile, tp: int, merge: bool) -> str:
    if merge:
        return "T_k" if tp in (1, 2) else "T3"
    return f"T{tp}"


def derive_connection_table(p: Profile, strict: bool = True) -> Dict[Tuple[str, str], FrozenSet[str]]:
    """Group germ connectability by (triple point class, edge type).

    With the main profile, T1 and T2 collapse into one class ``T_k``.
    Germs under MustBranch connect to the branch point only.  ``strict``
    rejects profiles that are not of main-profile shape.
    """
    main = is_main_profile(p)
    if strict and not main:
        raise ProfileError("profile does not satisfy the three-triple-point constraints")
    merge = len(p.triple_points) == 3 and p.ids == [1, 2, 3]
    table = signature_table(p)
    out: Dict[Tuple[str, str], set] = {}
    for g in p.germs():
        key = (_tp_class(p, g.tp, merge), g.etype.label)
        row = out.setdefault(key, set())
        if p.policy(g.tp, g.etype) is Policy.MUST_BRANCH:
            row.add(BRANCH)
            continue
        for h in p.germs():
            if h == g or p.policy(h.tp, h.etype) is Policy.MUST_BRANCH:
                continue
            if connectable(table[g], table[h]):
                row.add(f"{_tp_class(p, h.tp, merge)} {h.etype.label}")
    return {k: frozenset(v) for k, v in out.items()}


def table_text(table: Mapping[Tuple[str, str], FrozenSet[str]]) -> str:
    lines = []
    for (cls, et) in sorted(table):
        partners = ", ".join(sorted(table[(cls, et)])) or "-"
        lines.append(f"{cls} {et}: {partners}")
    return "\n".join(lines) + "\n"


def parse_table_text(text: str) -> Dict[Tuple[str, str], FrozenSet[str]]:
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        cls, et = head.split()
        partners = [x.strip() for x in rest.split(",") if x.strip() and x.strip() != "-"]
        out[(cls, et)] = frozenset(partners)
    return out


def table_diff(derived, expected) -> List[str]:
    """Line-level differences, empty when the tables agree."""
    diff = []
    for key in sorted(set(derived) | set(expected)):
        a = derived.get(key)
        b = expected.get(key)
        if a == b:
            continue
        cls, et = key
        if a is None:
            diff.append(f"- {cls} {et}: missing from derived table")
        elif b is None:
            diff.append(f"+ {cls} {et}: not in reference table")
        else:
            for extra in sorted(a - b):
                diff.append(f"+ {cls} {et}: {extra}")
            for missing in sorted(b - a):
                diff.append(f"- {cls} {et}: {missing}")
    return diff


def signature_golden_text(sign: int = 1, numbering: int = 0) -> str:
    m = octant_model(sign, numbering)
    lines = [f"# sign={sign:+d} numbering={numbering}"]
    for et in EdgeType:
        for slot in (0, 1):
            sig = germ_signature(m, Germ(1, et, slot))
            lines.append(f"{et.label} slot{slot}: min_index={sig.min_index} {sig.direction.value}")
    return "\n".join(lines) + "\n"
