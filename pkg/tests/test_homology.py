from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deckerscan.decker import build_decker_graph
from deckerscan.model import BranchPoint
from deckerscan.homology import (
    ConstraintSystem,
    MalformedSystem,
    SymplecticSpace,
    brute_force_realizable,
    check_witness,
    cycle_space_rank,
    decker_constraints,
    realizable,
)

from conftest import random_system


def test_form_is_alternating_and_nondegenerate():
    for g in range(3):
        sp = SymplecticSpace(g)
        for u in sp.vectors():
            assert sp.pair(u, u) == 0
            if u:
                assert any(sp.pair(u, v) for v in sp.vectors())
            for v in sp.vectors():
                assert sp.pair(u, v) == sp.pair(v, u)
        for i in range(g):
            assert sp.pair(sp.a(i), sp.b(i)) == 1
            assert all(sp.pair(sp.a(i), sp.b(j)) == 0 for j in range(g) if j != i)


def test_genus_zero_has_only_trivial_classes():
    cs = ConstraintSystem(1, (1,), (), required_nonzero=0)
    assert not realizable(cs, SymplecticSpace(0))
    assert realizable(cs, SymplecticSpace(1))


def test_odd_intersection_needs_genus_one():
    cs = ConstraintSystem(2, (1, 2), ((0, 1, 1),))
    assert not realizable(cs, SymplecticSpace(0))
    v = realizable(cs, SymplecticSpace(1))
    assert v and check_witness(cs, SymplecticSpace(1), v.witness)


def test_three_mutually_odd_curves_agree_with_brute_force():
    cs = ConstraintSystem(3, (1, 2, 4, 3), ((0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 0)), required_nonzero=3)
    for g in range(3):
        sp = SymplecticSpace(g)
        assert realizable(cs, sp).sat == brute_force_realizable(cs, sp).sat


def test_required_zero_vector_is_unsat():
    cs = ConstraintSystem(2, (0, 1), (), required_nonzero=0)
    assert not realizable(cs, SymplecticSpace(2))
    assert not brute_force_realizable(cs, SymplecticSpace(2))


def test_linear_relations_are_respected():
    # c2 = c0 + c1, so <c0, c2> = <c0, c1>
    cs = ConstraintSystem(2, (1, 2, 3), ((0, 1, 1), (0, 2, 0)))
    assert not realizable(cs, SymplecticSpace(2))
    assert not brute_force_realizable(cs, SymplecticSpace(2))


@pytest.mark.parametrize(
    "cs",
    [
        ConstraintSystem(-1, (), ()),
        ConstraintSystem(1, (2,), ()),
        ConstraintSystem(1, (1,), ((0, 3, 0),)),
        ConstraintSystem(1, (1,), ((0, 0, 1),)),
        ConstraintSystem(2, (1, 2), ((0, 1, 2),)),
        ConstraintSystem(1, (1,), (), required_nonzero=5),
    ],
)
def test_malformed_systems_raise(cs):
    with pytest.raises(MalformedSystem):
        realizable(cs, SymplecticSpace(1))


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_realizable(ConstraintSystem(9, (1,), ()), SymplecticSpace(1))


def test_realizable_matches_brute_force():
    rng = random.Random(20240917)
    sat = 0
    for _ in range(1000):
        cs, sp = random_system(rng)
        a = realizable(cs, sp)
        b = brute_force_realizable(cs, sp)
        assert a.sat == b.sat
        if a.sat:
            sat += 1
            assert check_witness(cs, sp, a.witness)
            assert check_witness(cs, sp, b.witness)
    assert 200 < sat < 800


@st.composite
def systems(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_system(random.Random(seed), max_rank=5, max_genus=1)


@settings(max_examples=150, deadline=None)
@given(systems())
def test_sat_is_monotone_in_genus(case):
    cs, sp = case
    if realizable(cs, sp):
        assert realizable(cs, SymplecticSpace(sp.genus + 1))


@settings(max_examples=150, deadline=None)
@given(systems())
def test_trivial_cycle_is_irrelevant(case):
    cs, sp = case
    extended = cs.with_cycle(0, {i: 0 for i in range(len(cs.cycles))})
    assert realizable(cs, sp).sat == realizable(extended, sp).sat


@settings(max_examples=150, deadline=None)
@given(systems())
def test_duplicate_constraints_are_irrelevant(case):
    cs, sp = case
    doubled = ConstraintSystem(cs.rank, cs.cycles, cs.pairs + cs.pairs, cs.required_nonzero)
    assert realizable(cs, sp).sat == realizable(doubled, sp).sat


def test_single_circle_system(single_circle):
    g = build_decker_graph(single_circle)
    dc = decker_constraints(g)
    assert dc.system.rank == cycle_space_rank(g) == 10
    assert len(dc.cycles) == 182
    assert len(dc.system.pairs) == 613
    req = dc.system.required_nonzero
    assert dc.cycles[req].arc_set() == frozenset(a.id for a in g.arcs if isinstance(a.pair[1], BranchPoint))
    assert not realizable(dc.system, SymplecticSpace(1))
    v = realizable(dc.system, SymplecticSpace(2))
    assert v and check_witness(dc.system, SymplecticSpace(2), v.witness)


def test_cycle_vectors_are_consistent(single_circle):
    # a cycle's coordinates are determined by its non-tree arcs; distinct simple cycles differ
    dc = decker_constraints(build_decker_graph(single_circle))
    vecs = dc.system.cycles
    assert len(set(vecs)) == len(vecs)
    assert 0 not in vecs


def test_required_curve_meeting_nothing_oddly():
    # g1 meets g2 oddly, g3 is required and meets both evenly
    cs = ConstraintSystem(3, (1, 2, 4), ((0, 1, 1), (0, 2, 0), (1, 2, 0)), required_nonzero=2)
    assert not realizable(cs, SymplecticSpace(1))
    assert realizable(cs, SymplecticSpace(2))
    assert realizable(ConstraintSystem(3, (1, 2, 4), (), required_nonzero=2), SymplecticSpace(1))


def _shear(v, i, j):
    return v ^ (1 << j) if v >> i & 1 else v


@settings(max_examples=150, deadline=None)
@given(systems(), st.randoms(use_true_random=False))
def test_invariant_under_reordering_and_basis_change(case, rnd):
    cs, sp = case
    vecs = list(cs.cycles)
    if cs.rank > 1:
        for _ in range(6):
            i, j = rnd.sample(range(cs.rank), 2)
            vecs = [_shear(v, i, j) for v in vecs]
    order = list(range(len(vecs)))
    rnd.shuffle(order)
    pos = {old: new for new, old in enumerate(order)}
    moved = ConstraintSystem(
        cs.rank,
        tuple(vecs[k] for k in order),
        tuple((pos[i], pos[j], p) for i, j, p in cs.pairs),
        None if cs.required_nonzero is None else pos[cs.required_nonzero],
    )
    assert realizable(cs, sp).sat == realizable(moved, sp).sat
