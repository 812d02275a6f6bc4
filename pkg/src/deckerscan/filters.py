"""Exclusion filters and the enumeration-plus-filter pipeline."""

from __future__ import annotations

import hashlib
import json
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import __version__
from .decker import DeckerGraph, build_decker_graph
from .enumerator import EnumerationOptions, enumerate_schemes
from .homology import SymplecticSpace, decker_constraints, realizable
from .localrules import dead_germs
from .model import (
    ConnectionScheme,
    CurveKind,
    EdgeType,
    Profile,
    canonical_cycle_text,
    curves_of,
    parse_circle_text,
    scheme_text,
)

BM, BT, MT = EdgeType.BM, EdgeType.BT, EdgeType.MT

CHECKED = "CHECKED"
AXIOM = "AXIOM"


@dataclass(frozen=True)
class Kill:
    reason: str


@dataclass(frozen=True)
class Context:
    """Everything a filter may look at for one candidate."""

    scheme: ConnectionScheme
    profile: Profile
    _graph: List[DeckerGraph] = field(default_factory=list, compare=False)

    @property
    def graph(self) -> DeckerGraph:
        if not self._graph:
            self._graph.append(build_decker_graph(self.scheme))
        return self._graph[0]


@dataclass(frozen=True)
class Filter:
    name: str
    citation: str
    status: str
    predicate: Callable[[Context], Optional[Kill]]

    def __call__(self, s: ConnectionScheme, p: Profile) -> Optional[Kill]:
        return self.predicate(Context(s, p))


# -- predicates ----------------------------------------------------------------

def parity_filter(s: ConnectionScheme, p: Optional[Profile] = None) -> Optional[Kill]:
    for c in curves_of(s):
        if c.kind is CurveKind.CIRCLE and c.triple_passages() % 2:
            return Kill(f"circle with {c.triple_passages()} triple points: {c.text()}")
    return None


def loop_filter(s: ConnectionScheme, p: Optional[Profile] = None) -> Optional[Kill]:
    for a, b in s.germ_pairs():
        if a.tp == b.tp and a.etype != b.etype and BT in (a.etype, b.etype):
            return Kill(f"double point loop at T{a.tp}: {a}-{b}")
    return None


def _join_types(s: ConnectionScheme, t3: int = 3) -> Dict[Tuple[EdgeType, int], List[EdgeType]]:
    """(type at T3, other triple point) -> types at the other end, for edges leaving T3."""
    out: Dict[Tuple[EdgeType, int], List[EdgeType]] = {}
    for a, b in s.germ_pairs():
        for x, y in ((a, b), (b, a)):
            if x.tp == t3 and y.tp != t3:
                out.setdefault((x.etype, y.tp), []).append(y.etype)
    return out


def descendent_pair_filter(s: ConnectionScheme, p: Optional[Profile] = None) -> Optional[Kill]:
    joins = _join_types(s)
    for k in (1, 2):
        if BM in joins.get((BM, k), []) and MT in joins.get((MT, k), []):
            return Kill(f"b/m-b/m and m/t-m/t edges between T3 and T{k}")
    return None


BASE_EXCLUDED_CIRCLE = "e32(b/m,b/m) ∪ e23(b/m,m/t) ∪ e31(m/t,b/m) ∪ e13(b/m,b/m)"


def _circle_variants(text: str) -> frozenset:
    edges = parse_circle_text(text)
    out = set()
    for mirror in (False, True):
        for swap in (False, True):
            def tp(i):
                return {1: 2, 2: 1}.get(i, i) if swap else i

            def et(e):
                return e.mirrored() if mirror else e

            out.add(canonical_cycle_text([(tp(i), et(a), tp(j), et(b)) for i, a, j, b in edges]))
    return frozenset(out)


EXCLUDED_CIRCLES = _circle_variants(BASE_EXCLUDED_CIRCLE)


def excluded_circle_filter(s: ConnectionScheme, p: Optional[Profile] = None) -> Optional[Kill]:
    for c in curves_of(s):
        if c.kind is not CurveKind.CIRCLE:
            continue
        txt = canonical_cycle_text(c.type_sequence())
        if txt in EXCLUDED_CIRCLES:
            return Kill(f"excluded circle {txt}")
    return None


def homology_filter(s: ConnectionScheme, p: Profile, graph: Optional[DeckerGraph] = None) -> Optional[Kill]:
    if not any(c.kind is CurveKind.ARC for c in curves_of(s)):
        # no branch arc, so nothing is required to be nonzero
        return None
    g = graph if graph is not None else build_decker_graph(s)
    dc = decker_constraints(g)
    v = realizable(dc.system, SymplecticSpace(p.genus))
    if v.sat:
        return None
    return Kill(
        f"no GF(2) class assignment at genus {p.genus} "
        f"({len(dc.cycles)} cycles, rank {dc.system.rank}, {len(dc.system.pairs)} disjoint pairs)"
    )


FILTERS: "OrderedDict[str, Filter]" = OrderedDict(
    (f.name, f)
    for f in (
        Filter("parity", "double point circles pass an even number of triple points", CHECKED,
               lambda c: parity_filter(c.scheme)),
        Filter("loop", "no double point edge joins a b/t germ to another type at the same triple point", CHECKED, lambda c: loop_filter(c.scheme)),
        Filter("descendent_pair", "T3 has no b/m-b/m and m/t-m/t edge pair to the same T_k", CHECKED,
               lambda c: descendent_pair_filter(c.scheme)),
        Filter("excluded_circle", "the four-edge T3/T_k circle and its mirror are excluded (assumed, not checked here)", AXIOM,
               lambda c: excluded_circle_filter(c.scheme)),
        Filter("homology", "upper plus lower preimage of the branch arc is nonzero in H_1(F; GF(2))", CHECKED,
               lambda c: homology_filter(c.scheme, c.profile, c.graph)),
    )
)

DEFAULT_FILTERS = tuple(FILTERS)


def resolve_filters(names: Iterable[str]) -> List[Filter]:
    out = []
    for n in names:
        n = n.strip()
        if not n:
            continue
        if n not in FILTERS:
            raise KeyError(f"unknown filter {n!r}; known: {', '.join(FILTERS)}")
        out.append(FILTERS[n])
    return out


# -- pipeline ------------------------------------------------------------------

SURVIVOR = "survivor"


@dataclass(frozen=True)
class CandidateResult:
    scheme: ConnectionScheme
    text: str
    killed_by: Optional[str]
    reason: Optional[str]


@dataclass
class FilterReport:
    profile: Profile
    filters: List[str]
    options: EnumerationOptions
    candidates: List[CandidateResult]
    counts: Dict[str, int]
    dead_germs: List[str]

    @property
    def survivors(self) -> List[CandidateResult]:
        return [c for c in self.candidates if c.killed_by is None]

    @property
    def total(self) -> int:
        return len(self.candidates)

    def input_hash(self) -> str:
        payload = json.dumps(
            {
                "profile": self.profile.to_dict(),
                "filters": self.filters,
                "canonicalize": self.options.canonicalize,
                "limit": self.options.limit,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_json_dict(self) -> dict:
        return {
            "tool": "deckerscan",
            "version": __version__,
            "input_hash": self.input_hash(),
            "profile": self.profile.to_dict(),
            "filters": [
                {"name": n, "citation": FILTERS[n].citation, "status": FILTERS[n].status} for n in self.filters
            ],
            "canonicalize": self.options.canonicalize,
            "limit": self.options.limit,
            "dead_germs": self.dead_germs,
            "total_candidates": self.total,
            "kill_counts": {n: self.counts.get(n, 0) for n in self.filters},
            "survivor_count": len(self.survivors),
            "survivor_note": "survivors are not excluded by the filters; this is not a realizability claim",
            "survivors": [c.text for c in self.survivors],
            "candidates": [
                {"scheme": c.text, "killed_by": c.killed_by or SURVIVOR, "reason": c.reason}
                for c in self.candidates
            ],
        }


def run_pipeline(
    p: Profile,
    filters: Sequence[Filter] = tuple(FILTERS.values()),
    o: EnumerationOptions = EnumerationOptions(),
) -> FilterReport:
    results = []
    counts = {f.name: 0 for f in filters}
    for s in enumerate_schemes(p, o):
        ctx = Context(s, p)
        killed_by = reason = None
        for f in filters:
            k = f.predicate(ctx)
            if k is not None:
                killed_by, reason = f.name, k.reason
                counts[f.name] += 1
                break
        results.append(CandidateResult(s, scheme_text(s), killed_by, reason))
    results.sort(key=lambda r: r.text)
    return FilterReport(
        profile=p,
        filters=[f.name for f in filters],
        options=o,
        candidates=results,
        counts=counts,
        dead_germs=[str(g) for g in dead_germs(p)],
    )


def nontrivial_circles(s: ConnectionScheme):
    return [c for c in curves_of(s) if c.kind is CurveKind.CIRCLE and c.triple_passages() > 0]
