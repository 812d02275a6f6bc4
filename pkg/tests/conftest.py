from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

from deckerscan.enumerator import enumerate_schemes
from deckerscan.filters import run_pipeline
from deckerscan.model import EdgeType, main_profile, make_profile, parse_scheme_text

GOLDEN = Path(__file__).parent / "golden"

# the single non-trivial circle candidate, frozen from a hand check of its curves
SINGLE_CIRCLE_SCHEME = (
    "e12(b/m0,b/t0) e12(b/t0,m/t0) e12(b/t1,b/m1) e12(m/t1,b/t1) e13(b/m1,m/t1) "
    "e13(m/t0,b/m0) e23(b/m0,m/t0) e23(m/t1,b/m1) e3*(b/t0,*) e3*(b/t1,*)"
)
SINGLE_CIRCLE_TEXT = (
    "e12(b/m,b/t) ∪ e21(b/t,m/t) ∪ e13(m/t,b/m) ∪ e32(b/m,m/t) ∪ "
    "e21(m/t,b/t) ∪ e12(b/t,b/m) ∪ e23(b/m,m/t) ∪ e31(m/t,b/m)"
)


@pytest.fixture(scope="session")
def main():
    return main_profile()


@pytest.fixture(scope="session")
def all_schemes(main):
    return list(enumerate_schemes(main))


@pytest.fixture(scope="session")
def main_report(main):
    return run_pipeline(main)


@pytest.fixture(scope="session")
def single_circle():
    return parse_scheme_text(SINGLE_CIRCLE_SCHEME)


def random_profile(rng: random.Random, max_tps: int = 3, genus: int = 1):
    """Small random profile: up to three triple points, random signs, numberings and branch germs."""
    n = rng.randint(1, max_tps)
    tps = [(i, rng.choice((1, -1)), rng.randint(-1, 1)) for i in range(1, n + 1)]
    branch = [(i, et) for i in range(1, n + 1) for et in EdgeType if rng.random() < 0.15]
    return make_profile(genus, tps, branch, name=f"random-{n}")


def random_system(rng: random.Random, max_rank: int = 5, max_genus: int = 2):
    """Random constraint system; about half are planted from a hidden assignment so SAT cases occur."""
    from deckerscan.homology import ConstraintSystem, SymplecticSpace

    rank = rng.randint(0, max_rank)
    genus = rng.randint(0, max_genus)
    space = SymplecticSpace(genus)
    n = rng.randint(1, 7)
    cycles = tuple(rng.randrange(1 << rank) if rank else 0 for _ in range(n))
    planted = rng.random() < 0.5
    hidden = [rng.randrange(space.size) for _ in range(rank)]

    def image(v):
        out = 0
        for a in range(rank):
            if (v >> a) & 1:
                out ^= hidden[a]
        return out

    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.6:
                p = space.pair(image(cycles[i]), image(cycles[j])) if planted else rng.randint(0, 1)
                pairs.append((i, j, p))
    req = rng.randrange(n) if rng.random() < 0.7 else None
    return ConstraintSystem(rank, cycles, tuple(pairs), req), space


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
