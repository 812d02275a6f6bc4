"""Double decker curve system of a connection scheme on the abstract surface.

Every triple point T has three preimages T^T, T^M, T^B, each a transverse
crossing of two decker strands::

    T^T : (b/t)^U  x  (m/t)^U
    T^M : (b/m)^U  x  (m/t)^L
    T^B : (b/m)^L  x  (b/t)^L

Each double edge contributes an upper and a lower decker arc.  At a branch
point the two arcs of the edge meet, so a branch vertex has degree two.

Intersection parity of two edge-disjoint closed curves counts the vertices
where both pass straight, necessarily along different strands.  A corner
uses two cyclically adjacent edge-ends, and so does the complementary
corner; they can be pushed apart::

         a1                      a1
         |                       |
    b2 --+-- b1   corner a1-b1   +-- b1     corner a2-b2   b2 --+
         |                                                       |
         a2                                                      a2
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .model import BranchPoint, ConnectionScheme, CurveKind, EdgeType, Germ, curves_of

LEVELS = ("U", "L")

# preimage sheet of each germ's upper / lower arc end
_END_SHEET = {
    (EdgeType.BM, "U"): "M",
    (EdgeType.BM, "L"): "B",
    (EdgeType.BT, "U"): "T",
    (EdgeType.BT, "L"): "B",
    (EdgeType.MT, "U"): "T",
    (EdgeType.MT, "L"): "M",
}

# the two strands at each preimage vertex, in a fixed order (bit 0, bit 1)
VERTEX_STRANDS = {
    "T": ("b/t^U", "m/t^U"),
    "M": ("b/m^U", "m/t^L"),
    "B": ("b/m^L", "b/t^L"),
}

BRANCH_STRAND = "branch"


class Pass(enum.Enum):
    STRAIGHT = "Straight"
    CORNER = "Corner"


class DeckerError(ValueError):
    pass


@dataclass(frozen=True)
class ArcEnd:
    vertex: int
    strand: str


@dataclass(frozen=True)
class DeckerArc:
    id: int
    pair: Tuple[object, object]
    level: str
    ends: Tuple[ArcEnd, ArcEnd]

    def other_end(self, i: int) -> ArcEnd:
        return self.ends[1 - i]


@dataclass(frozen=True)
class DeckerGraph:
    vertices: Tuple[tuple, ...]
    arcs: Tuple[DeckerArc, ...]
    scheme: ConnectionScheme

    def vertex_index(self, label: tuple) -> int:
        return self.vertices.index(label)

    def vertex_label(self, v: int) -> str:
        lab = self.vertices[v]
        if lab[0] == "T":
            return f"T{lab[1]}^{lab[2]}"
        return f"B{lab[1]}"

    def is_branch(self, v: int) -> bool:
        return self.vertices[v][0] == "B"

    def degree(self, v: int) -> int:
        return sum(1 for a in self.arcs for e in a.ends if e.vertex == v)

    def arcs_of_pair(self, a, b) -> List[DeckerArc]:
        return [arc for arc in self.arcs if set(arc.pair) == {a, b}]

    def arc(self, a, b, level: str) -> DeckerArc:
        for arc in self.arcs:
            if arc.level == level and set(arc.pair) == {a, b}:
                return arc
        raise KeyError((a, b, level))

    def strand_bit(self, v: int, strand: str) -> int:
        """Bit position of ``strand`` at triple vertex ``v`` (two bits per vertex)."""
        return 2 * v + VERTEX_STRANDS[self.vertices[v][2]].index(strand)

    def dump(self) -> str:
        """Adjacency listing with strand partitions."""
        lines = []
        for v, lab in enumerate(self.vertices):
            ends = []
            for arc in self.arcs:
                for i, e in enumerate(arc.ends):
                    if e.vertex == v:
                        ends.append((e.strand, arc.id, self.vertex_label(arc.other_end(i).vertex)))
            ends.sort()
            if lab[0] == "T":
                parts = []
                for strand in VERTEX_STRANDS[lab[2]]:
                    mine = [f"a{aid}->{w}" for s, aid, w in ends if s == strand]
                    parts.append(f"{strand}[{' '.join(mine)}]")
                lines.append(f"{self.vertex_label(v)}: " + " | ".join(parts))
            else:
                lines.append(f"{self.vertex_label(v)}: " + " ".join(f"a{aid}->{w}" for _, aid, w in ends))
        for arc in self.arcs:
            a, b = arc.pair
            lines.append(
                f"a{arc.id} {arc.level} {a}-{b}: "
                f"{self.vertex_label(arc.ends[0].vertex)} -- {self.vertex_label(arc.ends[1].vertex)}"
            )
        return "\n".join(lines) + "\n"


def _end_for(g, level: str, vindex: Dict[tuple, int]) -> ArcEnd:
    if isinstance(g, BranchPoint):
        return ArcEnd(vindex[("B", g.bid)], BRANCH_STRAND)
    sheet = _END_SHEET[(g.etype, level)]
    return ArcEnd(vindex[("T", g.tp, sheet)], f"{g.etype.label}^{level}")


def build_decker_graph(s: ConnectionScheme) -> DeckerGraph:
    tps = sorted({e.tp for e in s.partner if isinstance(e, Germ)})
    bids = sorted({e.bid for e in s.partner if isinstance(e, BranchPoint)})
    vertices = [("T", tp, sheet) for tp in tps for sheet in ("T", "M", "B")]
    vertices += [("B", b) for b in bids]
    vindex = {lab: i for i, lab in enumerate(vertices)}
    arcs = []
    for a, b in s.pairs:
        for level in LEVELS:
            arcs.append(DeckerArc(len(arcs), (a, b), level, (_end_for(a, level, vindex), _end_for(b, level, vindex))))
    return DeckerGraph(tuple(vertices), tuple(arcs), s)


@dataclass(frozen=True)
class Cycle:
    """Closed edge path.  ``passes[k]`` is the passage at ``vertices[k]``,
    between ``arcs[k-1]`` (arriving) and ``arcs[k]`` (leaving)."""

    arcs: Tuple[int, ...]
    vertices: Tuple[int, ...]
    passes: Tuple[Tuple[int, str, str], ...]

    def __len__(self) -> int:
        return len(self.arcs)

    def tag(self, k: int) -> Pass:
        _, sin, sout = self.passes[k]
        return Pass.STRAIGHT if sin == sout else Pass.CORNER

    def straight_visits(self) -> List[Tuple[int, str]]:
        return [(v, sin) for v, sin, sout in self.passes if sin == sout and sin != BRANCH_STRAND]

    def arc_set(self) -> frozenset:
        return frozenset(self.arcs)


def cycle_from_walk(g: DeckerGraph, walk: Sequence[Tuple[int, int]]) -> Cycle:
    """Build a cycle from ``(arc id, entry end)`` steps; arc leaves through the other end."""
    arcs, verts, passes = [], [], []
    n = len(walk)
    for k, (aid, end) in enumerate(walk):
        arc = g.arcs[aid]
        prev_aid, prev_end = walk[k - 1]
        prev_arc = g.arcs[prev_aid]
        arrive = prev_arc.other_end(prev_end)
        leave = arc.ends[end]
        if arrive.vertex != leave.vertex:
            raise DeckerError("walk is not closed/consecutive")
        arcs.append(aid)
        verts.append(leave.vertex)
        passes.append((leave.vertex, arrive.strand, leave.strand))
    if n == 0:
        raise DeckerError("empty walk")
    return Cycle(tuple(arcs), tuple(verts), tuple(passes))


def distinguished_cycle(g: DeckerGraph) -> Cycle:
    """Upper and lower decker curves of the unique double point arc, joined at its branch points."""
    arcs_ = [c for c in curves_of(g.scheme) if c.kind is CurveKind.ARC]
    if len(arcs_) != 1:
        raise DeckerError(f"expected exactly one double point arc, found {len(arcs_)}")
    edges = arcs_[0].edges
    walk = []
    # upper level forward from the first branch point, lower level back
    for level, seq in (("U", edges), ("L", [(b, a) for a, b in reversed(edges)])):
        for a, b in seq:
            arc = g.arc(a, b, level)
            entry = 0 if arc.pair[0] == a else 1
            walk.append((arc.id, entry))
    return cycle_from_walk(g, walk)


def simple_cycles(g: DeckerGraph, max_len: Optional[int] = None) -> List[Cycle]:
    """All vertex-simple cycles with at most ``max_len`` arcs.

    Each cycle is listed once (up to rotation and reversal), starting at its
    least vertex and leaving along the smaller of its two end arcs.
    """
    if max_len is None:
        max_len = len(g.arcs)
    if max_len <= 0:
        return []
    adj: Dict[int, List[Tuple[int, int, int]]] = {v: [] for v in range(len(g.vertices))}
    for arc in g.arcs:
        for i, e in enumerate(arc.ends):
            adj[e.vertex].append((arc.id, i, arc.other_end(i).vertex))
    for v in adj:
        adj[v].sort()

    out: List[Cycle] = []
    for s in range(len(g.vertices)):
        walk: List[Tuple[int, int]] = []
        used = set()
        on_path = {s}

        def dfs(v: int):
            for aid, end, w in adj[v]:
                if aid in used:
                    continue
                if w == s:
                    is_loop = g.arcs[aid].ends[0].vertex == g.arcs[aid].ends[1].vertex
                    if is_loop:
                        if walk or end != 0:
                            continue
                    elif len(walk) >= 1 and walk[0][0] > aid:
                        continue
                    elif not walk:
                        continue
                    out.append(cycle_from_walk(g, walk + [(aid, end)]))
                    continue
                if w < s or w in on_path or len(walk) + 1 >= max_len:
                    continue
                walk.append((aid, end))
                used.add(aid)
                on_path.add(w)
                dfs(w)
                on_path.discard(w)
                used.discard(aid)
                walk.pop()

        dfs(s)
    return out


def straight_pass_parity(g: DeckerGraph, c1: Cycle, c2: Cycle) -> int:
    if c1.arc_set() & c2.arc_set():
        raise DeckerError("cycles share an arc")
    return straight_mask_parity(straight_mask(g, c1), straight_mask(g, c2))


def straight_mask(g: DeckerGraph, c: Cycle) -> int:
    mask = 0
    for v, strand in c.straight_visits():
        mask ^= 1 << g.strand_bit(v, strand)
    return mask


def arc_mask(c: Cycle) -> int:
    mask = 0
    for a in c.arcs:
        mask |= 1 << a
    return mask


def swap_pairs(x: int) -> int:
    """Exchange bits 2i and 2i+1."""
    even = 0
    odd = 0
    i = 0
    while x >> i:
        if (x >> i) & 1:
            if i % 2:
                even |= 1 << (i - 1)
            else:
                odd |= 1 << (i + 1)
        i += 1
    return even | odd


def straight_mask_parity(m1: int, m2: int) -> int:
    return bin(m1 & swap_pairs(m2)).count("1") & 1
