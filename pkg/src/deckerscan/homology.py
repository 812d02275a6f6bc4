"""Mod-2 homology realizability of decker curve systems.

The decker graph sits inside the closed surface, so inclusion induces a
linear map from the graph's cycle space to H_1(F; GF(2)).  Two
edge-disjoint closed curves then have mod-2 intersection number equal to
their straight-pass parity.  A scheme is excluded when no linear map into a
genus-g symplectic space reproduces every such parity while sending the
distinguished curve to a nonzero class.

UNSAT is a sound exclusion.  SAT only means "not excluded".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from ._pykernels import form
from .decker import (
    Cycle,
    DeckerGraph,
    arc_mask,
    distinguished_cycle,
    simple_cycles,
    straight_mask,
)

BRUTE_MAX_RANK = 8
BRUTE_MAX_GENUS = 2


@dataclass(frozen=True)
class SymplecticSpace:
    genus: int

    @property
    def dim(self) -> int:
        return 2 * self.genus

    @property
    def size(self) -> int:
        return 1 << self.dim

    def pair(self, u: int, v: int) -> int:
        return form(u, v)

    def vectors(self) -> range:
        return range(self.size)

    def a(self, i: int) -> int:
        return 1 << (2 * i)

    def b(self, i: int) -> int:
        return 1 << (2 * i + 1)

    def format(self, v: int) -> str:
        return format(v, f"0{self.dim}b")[::-1] if self.dim else ""


class MalformedSystem(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    """Cycles as coordinate vectors over a cycle-space basis of size ``rank``.

    ``pairs`` holds ``(i, j, parity)`` for declared cycle pairs; a cycle that
    is a GF(2) sum of others has the matching coordinate vector, so linear
    relations are carried by the coordinates themselves.
    """

    rank: int
    cycles: Tuple[int, ...]
    pairs: Tuple[Tuple[int, int, int], ...]
    required_nonzero: Optional[int] = None
    labels: Tuple[str, ...] = ()

    def check(self) -> None:
        if self.rank < 0:
            raise MalformedSystem("negative rank")
        limit = 1 << self.rank
        for k, v in enumerate(self.cycles):
            if v < 0 or v >= limit:
                raise MalformedSystem(f"cycle {k} has coordinates outside the basis")
        n = len(self.cycles)
        for i, j, p in self.pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise MalformedSystem(f"pair ({i}, {j}) refers to an unknown cycle")
            if p not in (0, 1):
                raise MalformedSystem("parity must be 0 or 1")
            if i == j and p:
                raise MalformedSystem("self-pairing must vanish")
        if self.required_nonzero is not None and not (0 <= self.required_nonzero < n):
            raise MalformedSystem("required_nonzero refers to an unknown cycle")

    def with_cycle(self, vector: int, parities: Dict[int, int], label: str = "") -> "ConstraintSystem":
        k = len(self.cycles)
        rank = max(self.rank, vector.bit_length())
        pairs = self.pairs + tuple((i, k, p) for i, p in sorted(parities.items()))
        labels = self.labels + (label,) if self.labels else ()
        return ConstraintSystem(rank, self.cycles + (vector,), pairs, self.required_nonzero, labels)


@dataclass(frozen=True)
class Verdict:
    sat: bool
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.sat


def _required_vector(cs: ConstraintSystem) -> Optional[int]:
    if cs.required_nonzero is None:
        return None
    return cs.cycles[cs.required_nonzero]


def realizable(cs: ConstraintSystem, space: SymplecticSpace) -> Verdict:
    """Backtracking search over basis classes, pruned by the reduced linear system."""
    cs.check()
    req = _required_vector(cs)
    if req == 0:
        return Verdict(False)
    pairs = [(i, j, p) for i, j, p in cs.pairs if i != j]
    rows = kernels.reduce_bilinear(list(cs.cycles), pairs)
    if rows is None:
        return Verdict(False)
    witness = kernels.search(cs.rank, space.genus, rows, req or 0)
    if witness is None:
        return Verdict(False)
    return Verdict(True, tuple(witness))


def check_witness(cs: ConstraintSystem, space: SymplecticSpace, witness: Sequence[int]) -> bool:
    def image(v):
        out = 0
        for a, c in enumerate(witness):
            if (v >> a) & 1:
                out ^= c
        return out

    if len(witness) != cs.rank or any(c >= space.size for c in witness):
        return False
    imgs = [image(v) for v in cs.cycles]
    for i, j, p in cs.pairs:
        if space.pair(imgs[i], imgs[j]) != p:
            return False
    req = _required_vector(cs)
    return req is None or image(req) != 0


def brute_force_realizable(cs: ConstraintSystem, space: SymplecticSpace) -> Verdict:
    """Try every assignment of basis classes, in blocks, with no pruning."""
    cs.check()
    if cs.rank > BRUTE_MAX_RANK or space.genus > BRUTE_MAX_GENUS:
        raise ValueError(f"brute force limited to rank <= {BRUTE_MAX_RANK}, genus <= {BRUTE_MAX_GENUS}")
    nvec = space.size
    rank = cs.rank
    total = nvec ** rank
    cycles = np.array(cs.cycles, dtype=np.int64)
    pairs = np.array([(i, j, p) for i, j, p in cs.pairs], dtype=np.int64).reshape(-1, 3)
    req = cs.required_nonzero
    block = 1 << 16
    for start in range(0, total, block):
        idx = np.arange(start, min(total, start + block), dtype=np.int64)
        # digit a of idx in base nvec is the class of basis vector a
        classes = np.empty((idx.size, rank), dtype=np.int64)
        rest = idx.copy()
        for a in range(rank):
            classes[:, a] = rest % nvec
            rest //= nvec
        images = np.zeros((idx.size, len(cycles)), dtype=np.int64)
        for k, v in enumerate(cycles):
            for a in range(rank):
                if (int(v) >> a) & 1:
                    images[:, k] ^= classes[:, a]
        ok = np.ones(idx.size, dtype=bool)
        for i, j, p in pairs:
            u = images[:, i]
            w = images[:, j]
            acc = np.zeros(idx.size, dtype=np.int64)
            for g in range(space.genus):
                ua = (u >> (2 * g)) & 1
                ub = (u >> (2 * g + 1)) & 1
                wa = (w >> (2 * g)) & 1
                wb = (w >> (2 * g + 1)) & 1
                acc ^= (ua & wb) ^ (ub & wa)
            ok &= acc == p
        if req is not None:
            ok &= images[:, req] != 0
        hits = np.flatnonzero(ok)
        if hits.size:
            return Verdict(True, tuple(int(c) for c in classes[hits[0]]))
    return Verdict(False)


# -- from decker graphs ------------------------------------------------------

@dataclass(frozen=True)
class CycleBasis:
    """Fundamental cycles of a spanning forest; coordinates are non-tree arcs."""

    rank: int
    coordinate: Dict[int, int]  # arc id -> basis index for non-tree arcs

    def vector(self, c: Cycle) -> int:
        v = 0
        for a in c.arcs:
            k = self.coordinate.get(a)
            if k is not None:
                v ^= 1 << k
        return v


def cycle_basis(g: DeckerGraph) -> CycleBasis:
    parent = list(range(len(g.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    coord = {}
    for arc in g.arcs:
        ra, rb = find(arc.ends[0].vertex), find(arc.ends[1].vertex)
        if ra == rb:
            coord[arc.id] = len(coord)
        else:
            parent[ra] = rb
    return CycleBasis(len(coord), coord)


def cycle_space_rank(g: DeckerGraph) -> int:
    """E - V + (number of connected components)."""
    parent = list(range(len(g.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for arc in g.arcs:
        ra, rb = find(arc.ends[0].vertex), find(arc.ends[1].vertex)
        if ra != rb:
            parent[ra] = rb
    components = len({find(v) for v in range(len(g.vertices))})
    return len(g.arcs) - len(g.vertices) + components


@dataclass(frozen=True)
class DeckerConstraints:
    system: ConstraintSystem
    cycles: Tuple[Cycle, ...]
    basis: CycleBasis


def decker_constraints(g: DeckerGraph, max_len: Optional[int] = None, require_distinguished: bool = True) -> DeckerConstraints:
    """Constraint system over all simple cycles plus the distinguished cycle."""
    cycles = list(simple_cycles(g, max_len))
    req = None
    if require_distinguished:
        dc = distinguished_cycle(g)
        for k, c in enumerate(cycles):
            if c.arc_set() == dc.arc_set():
                req = k
                break
        else:
            cycles.append(dc)
            req = len(cycles) - 1
    basis = cycle_basis(g)
    vectors = tuple(basis.vector(c) for c in cycles)
    pairs = kernels.disjoint_pairs([arc_mask(c) for c in cycles], [straight_mask(g, c) for c in cycles])
    labels = tuple(cycle_label(g, c) for c in cycles)
    system = ConstraintSystem(basis.rank, vectors, tuple(pairs), req, labels)
    return DeckerConstraints(system, tuple(cycles), basis)


def cycle_label(g: DeckerGraph, c: Cycle) -> str:
    return "-".join(f"{g.vertex_label(v)}" for v in c.vertices) + " [" + ",".join(f"a{a}" for a in c.arcs) + "]"
