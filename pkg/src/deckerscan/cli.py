"""Command line entry point: ``deckerscan verify | table | atlas``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .enumerator import EnumerationOptions, count_schemes_oracle, enumerate_schemes
from .filters import DEFAULT_FILTERS, SURVIVOR, FilterReport, resolve_filters, run_pipeline
from .localrules import derive_connection_table, parse_table_text, table_diff, table_text
from .model import Profile, ProfileError, curves_of
from .profiles import BUNDLED, data_path, load_profile

log = logging.getLogger("deckerscan")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_ORACLE = 3

DEFAULT_PROFILE = BUNDLED[0]
FORMATS = ("json", "markdown", "jsonl-atlas")


def _common(parser: argparse.ArgumentParser, default_filters: str, default_format: str) -> None:
    parser.add_argument("--profile", default=DEFAULT_PROFILE,
                        help=f"profile file; bare bundled names resolve to the packaged copy (default {DEFAULT_PROFILE})")
    parser.add_argument("--filters", default=default_filters,
                        help="comma separated filter names, or 'none' (default %(default)s)")
    parser.add_argument("--genus", type=int, default=None, help="override the profile genus")
    parser.add_argument("--format", choices=FORMATS, default=default_format)
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--canonicalize", action="store_true", help="one scheme per symmetry orbit")
    parser.add_argument("--limit", type=int, default=None, help="stop after this many schemes")
    parser.add_argument("--oracle", action="store_true", help="cross-check the scheme count against the naive counter")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deckerscan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="enumerate, filter, and compare the survivor count")
    _common(v, ",".join(DEFAULT_FILTERS), "json")
    v.add_argument("--expect-survivors", type=int, default=None,
                   help="expected survivor count (default: profile value, else 0)")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="derive the germ connection table and diff it against the reference")
    _common(t, "none", "markdown")
    t.add_argument("--reference", default=None, help="reference table file (default: bundled connection_table.txt)")
    t.set_defaults(func=cmd_table)

    a = sub.add_parser("atlas", help="stream schemes as JSON lines")
    _common(a, "none", "jsonl-atlas")
    a.add_argument("--with-killed", action="store_true", help="also emit schemes removed by a filter")
    a.set_defaults(func=cmd_atlas)
    return parser


def _load(args) -> Profile:
    profile, expect = load_profile(args.profile)
    if args.genus is not None:
        if args.genus < 0:
            raise ProfileError("genus must be non-negative")
        profile = profile.with_genus(args.genus)
    args.profile_expect = expect
    return profile


def _filters(names: str):
    if names.strip().lower() in ("", "none"):
        return []
    return resolve_filters(names.split(","))


def _options(args) -> EnumerationOptions:
    if args.limit is not None and args.limit < 0:
        raise ValueError("--limit must be non-negative")
    return EnumerationOptions(canonicalize=args.canonicalize, limit=args.limit)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8")


def _oracle_check(profile: Profile) -> dict:
    enumerated = sum(1 for _ in enumerate_schemes(profile))
    oracle = count_schemes_oracle(profile)
    return {"enumerated": enumerated, "oracle_count": oracle, "agree": enumerated == oracle}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- verify --------------------------------------------------------------------

def verify_report(profile: Profile, filters, options: EnumerationOptions, expected: int,
                  oracle: Optional[dict] = None) -> dict:
    rep = run_pipeline(profile, filters, options)
    doc = rep.to_json_dict()
    doc["expected_survivors"] = expected
    doc["expectation_met"] = len(rep.survivors) == expected
    doc["oracle"] = oracle
    return doc


def markdown_report(doc: dict) -> str:
    prof = doc["profile"]
    out = [f"# deckerscan verify: {prof['name'] or 'unnamed profile'}", ""]
    out.append(f"- input hash: `{doc['input_hash']}`")
    out.append(f"- genus: {prof['genus']}")
    out.append(f"- must branch: {', '.join(prof['must_branch']) or 'none'}")
    out.append(f"- canonicalize: {str(doc['canonicalize']).lower()}, limit: {doc['limit']}")
    out += ["", "| triple point | sign | numbering |", "|---|---|---|"]
    out += [f"| T{t['id']} | {t['sign']:+d} | {t['numbering']} |" for t in prof["triple_points"]]
    out += ["", "| filter | status | killed | citation |", "|---|---|---|---|"]
    for f in doc["filters"]:
        out.append(f"| {f['name']} | {f['status']} | {doc['kill_counts'][f['name']]} | {f['citation']} |")
    out += [
        "",
        f"Candidates: {doc['total_candidates']}. Survivors: {doc['survivor_count']} "
        f"(expected {doc['expected_survivors']}, {'met' if doc['expectation_met'] else 'NOT met'}).",
        "",
        f"_{doc['survivor_note']}_",
    ]
    if doc["oracle"] is not None:
        o = doc["oracle"]
        out += ["", f"Oracle: enumerated {o['enumerated']}, naive count {o['oracle_count']}, "
                    f"{'agree' if o['agree'] else 'DISAGREE'}."]
    if doc["survivors"]:
        out += ["", "## Survivors", ""]
        out += [f"- `{s}`" for s in doc["survivors"]]
    return "\n".join(out) + "\n"


def cmd_verify(args) -> int:
    if args.format not in ("json", "markdown"):
        print("verify supports --format json or markdown", file=sys.stderr)
        return EXIT_USAGE
    profile = _load(args)
    filters = _filters(args.filters)
    expected = args.expect_survivors
    if expected is None:
        expected = args.profile_expect if args.profile_expect is not None else 0
    oracle = _oracle_check(profile) if args.oracle else None
    doc = verify_report(profile, filters, _options(args), expected, oracle)
    _emit(_dumps(doc) if args.format == "json" else markdown_report(doc), args.out)
    log.info("%d candidates, %d survivors", doc["total_candidates"], doc["survivor_count"])
    if oracle is not None and not oracle["agree"]:
        return EXIT_ORACLE
    return EXIT_OK if doc["expectation_met"] else EXIT_MISMATCH


# -- table ---------------------------------------------------------------------

def cmd_table(args) -> int:
    if args.format not in ("json", "markdown"):
        print("table supports --format json or markdown", file=sys.stderr)
        return EXIT_USAGE
    profile = _load(args)
    ref_path = Path(args.reference) if args.reference else data_path("connection_table.txt")
    reference = parse_table_text(ref_path.read_text(encoding="utf-8"))
    derived = derive_connection_table(profile, strict=False)
    diff = table_diff(derived, reference)
    if args.format == "json":
        doc = {
            "profile": profile.to_dict(),
            "table": {f"{c} {e}": sorted(v) for (c, e), v in sorted(derived.items())},
            "diff": diff,
            "identical": not diff,
        }
        text = _dumps(doc)
    else:
        lines = ["# Derived connection table", "", "```", table_text(derived).rstrip("\n"), "```", "",
                 "## Diff against reference", ""]
        lines += ["```", *diff, "```"] if diff else ["identical"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if not diff else EXIT_MISMATCH


# -- atlas ---------------------------------------------------------------------

def atlas_lines(profile: Profile, filters, options: EnumerationOptions, with_killed: bool = False) -> List[str]:
    rep: FilterReport = run_pipeline(profile, filters, options)
    lines = []
    for c in rep.candidates:
        if c.killed_by is not None and not with_killed:
            continue
        entry = {
            "scheme": c.text,
            "killed_by": c.killed_by or SURVIVOR,
            "reason": c.reason,
            "curves": [cv.text() for cv in curves_of(c.scheme)],
        }
        lines.append(json.dumps(entry, sort_keys=True, ensure_ascii=False))
    return lines


def cmd_atlas(args) -> int:
    if args.format != "jsonl-atlas":
        print("atlas supports --format jsonl-atlas only", file=sys.stderr)
        return EXIT_USAGE
    profile = _load(args)
    lines = atlas_lines(profile, _filters(args.filters), _options(args), args.with_killed)
    _emit("".join(line + "\n" for line in lines), args.out)
    if args.oracle:
        o = _oracle_check(profile)
        if not o["agree"]:
            print(f"oracle mismatch: {o}", file=sys.stderr)
            return EXIT_ORACLE
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ProfileError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
