from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from deckerscan.cli import main
from deckerscan.profiles import data_path

ALL = "parity,loop,descendent_pair,excluded_circle,homology"

EQUAL_SIGNS = """[profile]
name = equal-signs
genus = 1
[triple_points]
1 = +1 0
2 = +1 0
3 = +1 0
[branch_policy]
3.b/t = MustBranch
"""

SHIFTED = """[profile]
name = shifted
genus = 1
[triple_points]
1 = +1 7
2 = +1 7
3 = -1 7
[branch_policy]
3.b/t = MustBranch
"""


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "deckerscan", *args], capture_output=True, text=True)


def test_verify_main_profile(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli("verify", "--profile", "genus1-n3.profile", "--filters", ALL, "--out", str(out))
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert doc["survivor_count"] == 0
    assert doc["total_candidates"] == 576
    assert [f["name"] for f in doc["filters"]] == ALL.split(",")
    assert doc["profile"]["name"] == "genus1-n3"
    jsonschema.validate(doc, json.loads(data_path("report_schema.json").read_text()))


def test_verify_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--out", str(a)]) == 0
    assert main(["verify", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_missing_profile_writes_nothing(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli("verify", "--profile", str(tmp_path / "missing.profile"), "--out", str(out))
    assert r.returncode != 0
    assert not out.exists()
    assert "not found" in r.stderr


def test_genus_two_survivors_flip_exit(tmp_path):
    assert main(["verify", "--genus", "2", "--out", str(tmp_path / "r.json")]) == 1
    assert main(["verify", "--genus", "2", "--expect-survivors", "38", "--out", str(tmp_path / "r.json")]) == 0


def test_unknown_filter_is_usage_error(tmp_path):
    assert main(["verify", "--filters", "parity,bogus", "--out", str(tmp_path / "r.json")]) == 2


def test_verify_markdown_and_oracle(tmp_path):
    out = tmp_path / "r.md"
    assert main(["verify", "--format", "markdown", "--oracle", "--out", str(out)]) == 0
    text = out.read_text()
    assert "Survivors: 0" in text
    assert "naive count 576, agree" in text


def test_verify_rejects_atlas_format(tmp_path):
    assert main(["verify", "--format", "jsonl-atlas", "--out", str(tmp_path / "x")]) == 2


def test_table_identical(tmp_path):
    out = tmp_path / "t.md"
    assert main(["table", "--out", str(out)]) == 0
    text = out.read_text()
    assert "T3 b/t: branch point" in text
    assert "identical" in text


def test_table_equal_signs_differs(tmp_path):
    prof = tmp_path / "eq.profile"
    prof.write_text(EQUAL_SIGNS)
    out = tmp_path / "t.json"
    assert main(["table", "--profile", str(prof), "--format", "json", "--out", str(out)]) == 1
    doc = json.loads(out.read_text())
    assert doc["diff"] and not doc["identical"]


def test_table_shifted_numbering_identical(tmp_path):
    prof = tmp_path / "shift.profile"
    prof.write_text(SHIFTED)
    out = tmp_path / "t.json"
    assert main(["table", "--profile", str(prof), "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["diff"] == []


def _atlas(tmp_path, *args):
    out = tmp_path / "atlas.jsonl"
    assert main(["atlas", "--out", str(out), *args]) == 0
    return [json.loads(line) for line in out.read_text().splitlines()]


def test_atlas_limit(tmp_path):
    lines = _atlas(tmp_path, "--limit", "10")
    assert len(lines) == 10
    for entry in lines:
        assert entry["killed_by"] == "survivor"
        assert entry["scheme"].startswith("e")


def test_atlas_counts(tmp_path):
    assert len(_atlas(tmp_path)) == 576
    assert len(_atlas(tmp_path, "--canonicalize")) == 156
    assert _atlas(tmp_path, "--filters", ALL) == []


def test_atlas_with_killed_attribution(tmp_path):
    lines = _atlas(tmp_path, "--filters", ALL, "--with-killed", "--oracle")
    assert len(lines) == 576
    kinds = {e["killed_by"] for e in lines}
    assert kinds == {"loop", "descendent_pair", "excluded_circle", "homology"}


@pytest.mark.parametrize("sub", ["verify", "table", "atlas"])
def test_help(sub, capsys):
    with pytest.raises(SystemExit) as exc:
        main([sub, "--help"])
    assert exc.value.code == 0
    assert "--profile" in capsys.readouterr().out
