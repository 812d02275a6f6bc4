"""Backtracking enumeration of connection schemes, plus a naive counting oracle."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence

from .localrules import dead_germs, signature_table, connectable
from .model import (
    BranchPoint,
    ConnectionScheme,
    EdgeType,
    Germ,
    Policy,
    Profile,
    canonical_form,
    endpoint_key,
)

log = logging.getLogger(__name__)

ORACLE_MAX_GERMS = 20


@dataclass(frozen=True)
class EnumerationOptions:
    canonicalize: bool = False
    limit: Optional[int] = None
    seed_order: Optional[Sequence[Germ]] = None


def _ordered_germs(p: Profile, o: EnumerationOptions) -> List[Germ]:
    germs = sorted(p.germs(), key=endpoint_key)
    if o.seed_order is None:
        return germs
    order = list(o.seed_order)
    if sorted(order, key=endpoint_key) != germs:
        raise ValueError("seed_order must be a permutation of the profile's germs")
    return order


def _iter_raw(p: Profile, germs: List[Germ]) -> Iterator[ConnectionScheme]:
    sig = signature_table(p)
    must_branch = {g for g in germs if p.policy(g.tp, g.etype) is Policy.MUST_BRANCH}
    pos = {g: i for i, g in enumerate(germs)}
    # candidates[g]: later germs in seed order that g may be paired with
    candidates: Dict[Germ, List[Germ]] = {}
    for g in germs:
        if g in must_branch:
            continue
        candidates[g] = [
            h for h in germs
            if pos[h] > pos[g] and h not in must_branch and connectable(sig[g], sig[h])
        ]

    matched = set()
    pairs: List[tuple] = []
    n_branch = [0]

    def first_free(start: int) -> int:
        i = start
        while i < len(germs) and germs[i] in matched:
            i += 1
        return i

    def rec(i: int):
        i = first_free(i)
        if i == len(germs):
            yield ConnectionScheme.from_pairs(pairs)
            return
        g = germs[i]
        matched.add(g)
        if g in must_branch:
            pairs.append((g, BranchPoint(n_branch[0])))
            n_branch[0] += 1
            yield from rec(i + 1)
            n_branch[0] -= 1
            pairs.pop()
        else:
            for h in candidates[g]:
                if h in matched:
                    continue
                matched.add(h)
                pairs.append((g, h))
                yield from rec(i + 1)
                pairs.pop()
                matched.discard(h)
        matched.discard(g)

    yield from rec(0)


def enumerate_schemes(p: Profile, o: EnumerationOptions = EnumerationOptions()) -> Iterator[ConnectionScheme]:
    """Yield every scheme consistent with the branch policy and connectability.

    With ``canonicalize`` each symmetry orbit is emitted once, as its
    canonical form, in order of first discovery.
    """
    dead = dead_germs(p)
    if dead:
        log.warning("germs with no connectable partner: %s", ", ".join(map(str, dead)))
    germs = _ordered_germs(p, o)
    emitted = 0
    seen = set()
    for s in _iter_raw(p, germs):
        if o.limit is not None and emitted >= o.limit:
            return
        if o.canonicalize:
            c = canonical_form(s, p)
            k = c.key()
            if k in seen:
                continue
            seen.add(k)
            s = c
        emitted += 1
        yield s


# -- oracle --------------------------------------------------------------------

def _oracle_outgoing(etype: EdgeType, slot: int, sign: int) -> bool:
    # closed form worked out by hand from the octant picture, kept apart
    # from the determinant computation used by the enumerator
    out = slot == 0
    if etype is EdgeType.BT:
        out = not out
    if sign < 0:
        out = not out
    return out


def count_schemes_oracle(p: Profile) -> int:
    """Count valid schemes by plain recursion over a list of germs."""
    germs = p.germs()
    if len(germs) > ORACLE_MAX_GERMS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_GERMS} germs, got {len(germs)}")
    specs = {t.id: t for t in p.triple_points}

    def level(g):
        return specs[g.tp].numbering + (1 if g.slot == 0 else 0)

    def out(g):
        return _oracle_outgoing(g.etype, g.slot, specs[g.tp].sign)

    def branch(g):
        return p.policy(g.tp, g.etype) is Policy.MUST_BRANCH

    def count(rest):
        if not rest:
            return 1
        g, others = rest[0], rest[1:]
        if branch(g):
            return count(others)
        total = 0
        for i, h in enumerate(others):
            if branch(h) or level(h) != level(g) or out(h) == out(g):
                continue
            total += count(others[:i] + others[i + 1:])
        return total

    return count(list(germs))
