"""Reading and writing profile files (INI syntax)."""

from __future__ import annotations

import configparser
from importlib import resources
from pathlib import Path
from typing import Optional, Tuple

from .model import EdgeType, Policy, Profile, ProfileError, TriplePointSpec, validate_profile

BUNDLED = ("genus1-n3.profile",)


def data_path(name: str) -> Path:
    return Path(str(resources.files("deckerscan") / "data" / name))


def parse_profile(text: str, source: str = "<string>") -> Tuple[Profile, Optional[int]]:
    """Return the validated profile and the expected survivor count, if given."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ProfileError(f"{source}: {exc}") from None
    if not cp.has_section("profile"):
        raise ProfileError(f"{source}: missing [profile] section")
    sec = cp["profile"]
    try:
        genus = int(sec.get("genus", "1"))
        expect = sec.get("expect_survivors")
        expect = int(expect) if expect is not None else None
    except ValueError as exc:
        raise ProfileError(f"{source}: {exc}") from None

    tps = []
    if cp.has_section("triple_points"):
        for key, value in cp["triple_points"].items():
            parts = value.split()
            if len(parts) not in (1, 2):
                raise ProfileError(f"{source}: triple point {key}: expected '<sign> [numbering]'")
            try:
                tps.append(TriplePointSpec(int(key), int(parts[0]), int(parts[1]) if len(parts) > 1 else 0))
            except ValueError as exc:
                raise ProfileError(f"{source}: triple point {key}: {exc}") from None
    ids = [t.id for t in tps]
    if len(set(ids)) != len(ids):
        raise ProfileError(f"{source}: duplicate triple point ids")

    policy = []
    if cp.has_section("branch_policy"):
        for key, value in cp["branch_policy"].items():
            tp, _, et = key.partition(".")
            try:
                pol = {"mustbranch": Policy.MUST_BRANCH, "musttriple": Policy.MUST_TRIPLE}[value.strip().lower()]
                policy.append(((int(tp), EdgeType.parse(et)), pol))
            except (KeyError, ValueError):
                raise ProfileError(f"{source}: bad branch policy entry {key} = {value}") from None

    prof = Profile(genus, tuple(tps), tuple(sorted(policy)), sec.get("name", ""))
    return validate_profile(prof), expect


def load_profile(path: str) -> Tuple[Profile, Optional[int]]:
    """Load a profile file.  Bare names of bundled profiles resolve to the packaged copy."""
    p = Path(path)
    if not p.exists() and p.name == path and path in BUNDLED:
        p = data_path(path)
    if not p.exists():
        raise FileNotFoundError(path)
    return parse_profile(p.read_text(encoding="utf-8"), str(path))


def profile_text(p: Profile, expect_survivors: Optional[int] = None) -> str:
    lines = ["[profile]"]
    if p.name:
        lines.append(f"name = {p.name}")
    lines.append(f"genus = {p.genus}")
    if expect_survivors is not None:
        lines.append(f"expect_survivors = {expect_survivors}")
    lines += ["", "[triple_points]"]
    lines += [f"{t.id} = {t.sign:+d} {t.numbering}" for t in p.triple_points]
    if p.branch_policy:
        lines += ["", "[branch_policy]"]
        lines += [f"{tp}.{et.label} = {pol.value}" for (tp, et), pol in p.branch_policy]
    return "\n".join(lines) + "\n"
