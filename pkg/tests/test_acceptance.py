"""Acceptance checks, one PASS/FAIL line per criterion.

Run directly (``python tests/test_acceptance.py``) or through pytest; under
pytest the lines are repeated in the terminal summary.
"""

from __future__ import annotations

import json
import random
import sys
import tempfile
import time
from pathlib import Path
from typing import Callable, Dict, List, Tuple

sys.path.insert(0, str(Path(__file__).parent))

import pytest  # noqa: E402

from deckerscan.cli import main as cli_main  # noqa: E402
from deckerscan.enumerator import count_schemes_oracle, enumerate_schemes  # noqa: E402
from deckerscan.filters import (  # noqa: E402
    BASE_EXCLUDED_CIRCLE,
    DEFAULT_FILTERS,
    FILTERS,
    descendent_pair_filter,
    excluded_circle_filter,
    homology_filter,
    loop_filter,
    nontrivial_circles,
)
from deckerscan.homology import brute_force_realizable, realizable  # noqa: E402
from deckerscan.localrules import BRANCH, derive_connection_table, parse_table_text, table_diff  # noqa: E402
from deckerscan.model import (  # noqa: E402
    CurveKind,
    canonical_cycle_text,
    canonical_form,
    curves_of,
    main_profile,
    mirror_scheme,
    parse_circle_text,
    relabel_scheme,
    validate_profile,
)
from deckerscan.profiles import data_path  # noqa: E402

from conftest import SINGLE_CIRCLE_TEXT, random_profile, random_system  # noqa: E402

RESULTS: List[str] = []
Check = Callable[[], Tuple[bool, str]]


def c1_verify_main() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as d:
        out = Path(d) / "report.json"
        t0 = time.perf_counter()
        code = cli_main(["verify", "--profile", "genus1-n3.profile", "--filters",
                         "parity,loop,descendent_pair,excluded_circle,homology", "--out", str(out)])
        dt = time.perf_counter() - t0
        n = json.loads(out.read_text())["survivor_count"]
    return code == 0 and n == 0 and dt < 60, f"survivors={n} exit={code} time={dt:.2f}s (limit 60s)"


def c2_table() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as d:
        code = cli_main(["table", "--out", str(Path(d) / "t.md")])
    derived = derive_connection_table(main_profile())
    diff = table_diff(derived, parse_table_text(data_path("connection_table.txt").read_text()))
    bt = derived[("T3", "b/t")] == frozenset({BRANCH})
    return code == 0 and not diff and bt, f"diff lines={len(diff)} T3 b/t=branch point:{bt} exit={code}"


def c3_parity() -> Tuple[bool, str]:
    bad = 0
    n = 0
    for s in enumerate_schemes(main_profile()):
        n += 1
        bad += any(c.kind is CurveKind.CIRCLE and c.triple_passages() % 2 for c in curves_of(s))
    return bad == 0, f"{n} schemes, {bad} with an odd circle"


def c4_single_circle() -> Tuple[bool, str]:
    p = main_profile()
    found = [
        s for s in enumerate_schemes(p)
        if not loop_filter(s) and not descendent_pair_filter(s) and len(nontrivial_circles(s)) == 1
    ]
    reps = {canonical_form(s, p).key(): canonical_form(s, p) for s in found}
    if len(reps) != 1:
        return False, f"{len(found)} candidates, {len(reps)} orbits (want 1)"
    (rep,) = reps.values()
    (circle,) = nontrivial_circles(rep)
    matches = canonical_cycle_text(circle.type_sequence()) == canonical_cycle_text(parse_circle_text(SINGLE_CIRCLE_TEXT))
    killed1 = homology_filter(rep, p) is not None
    passes2 = homology_filter(rep, main_profile(2)) is None
    ok = matches and killed1 and passes2
    return ok, (f"{len(found)} candidates, 1 orbit, eight-edge circle match={matches}, "
                f"genus1 killed={killed1}, genus2 passes={passes2}")


def c5a_enumerator_oracle() -> Tuple[bool, str]:
    p = main_profile()
    main_ok = sum(1 for _ in enumerate_schemes(p)) == count_schemes_oracle(p)
    rng = random.Random(5)
    agree = nonzero = trials = 0
    # keep drawing until 20 profiles have at least one scheme; empty ones are checked too
    while nonzero < 20 and trials < 2000:
        q = validate_profile(random_profile(rng))
        n = count_schemes_oracle(q)
        agree += sum(1 for _ in enumerate_schemes(q)) == n
        nonzero += n > 0
        trials += 1
    ok = main_ok and agree == trials and nonzero >= 20
    return ok, f"main agrees={main_ok}, random profiles {agree}/{trials} ({nonzero} with schemes)"


def c5b_realizable_oracle() -> Tuple[bool, str]:
    rng = random.Random(55)
    n = 1000
    agree = 0
    for _ in range(n):
        cs, sp = random_system(rng, max_rank=5, max_genus=2)
        agree += realizable(cs, sp).sat == brute_force_realizable(cs, sp).sat
    return agree == n, f"{agree}/{n} random systems agree (rank<=5, genus<=2)"


def c6_symmetry() -> Tuple[bool, str]:
    p = main_profile()
    schemes = list(enumerate_schemes(p))
    swap = {1: 2, 2: 1}
    flips = 0
    for s in schemes:
        t = relabel_scheme(s, swap)
        for name in DEFAULT_FILTERS:
            f = FILTERS[name]
            flips += (f(s, p) is None) != (f(t, p) is None)
    involution = all(mirror_scheme(mirror_scheme(s)) == s for s in schemes)
    base = parse_circle_text(BASE_EXCLUDED_CIRCLE)
    mirrored = canonical_cycle_text([(i, a.mirrored(), j, b.mirrored()) for i, a, j, b in base])
    hits = [
        s for s in schemes
        if any(c.kind is CurveKind.CIRCLE and canonical_cycle_text(c.type_sequence()) == mirrored for c in curves_of(s))
    ]
    fires = bool(hits) and all(excluded_circle_filter(s) is not None for s in hits)
    ok = flips == 0 and involution and fires
    return ok, (f"swap verdict changes={flips}, mirror involution={involution}, "
                f"excluded_circle on mirror circle fires={fires} ({len(hits)} schemes)")


def c7_determinism() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as d:
        a, b = Path(d) / "a.json", Path(d) / "b.json"
        cli_main(["verify", "--out", str(a)])
        cli_main(["verify", "--out", str(b)])
        same = a.read_bytes() == b.read_bytes()
    return same, f"byte-identical={same}"


CRITERIA: Dict[str, Tuple[str, Check]] = {
    "1": ("verify bundled genus1-n3: 0 survivors within 60 s", c1_verify_main),
    "2": ("derived connection table equals the reference transcription", c2_table),
    "3": ("every main-profile scheme has only even circles", c3_parity),
    "4": ("single non-trivial circle candidates: one orbit, killed at genus 1 only", c4_single_circle),
    "5a": ("enumerator count equals naive oracle", c5a_enumerator_oracle),
    "5b": ("realizable equals brute force on 1000 systems", c5b_realizable_oracle),
    "6": ("T1/T2 invariance, mirror involution, mirror excluded circle", c6_symmetry),
    "7": ("two verify runs give byte-identical reports", c7_determinism),
}


def run_one(key: str) -> bool:
    desc, fn = CRITERIA[key]
    ok, detail = fn()
    line = f"{'PASS' if ok else 'FAIL'} [{key}] {desc}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(key):
    assert run_one(key)


if __name__ == "__main__":
    results = [run_one(k) for k in CRITERIA]
    sys.exit(0 if all(results) else 1)
