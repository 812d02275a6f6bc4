from __future__ import annotations

import pytest

from deckerscan.model import ProfileError, main_profile
from deckerscan.profiles import data_path, load_profile, parse_profile, profile_text


def test_bundled_profile_is_main():
    p, expect = load_profile("genus1-n3.profile")
    assert p == main_profile(1)
    assert expect == 0


def test_bundled_path_is_a_real_file():
    assert data_path("genus1-n3.profile").is_file()


def test_roundtrip():
    p = main_profile(3)
    q, expect = parse_profile(profile_text(p, 5))
    assert q == p and expect == 5


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        load_profile("no/such.profile")


@pytest.mark.parametrize(
    "text",
    [
        "[triple_points]\n1 = +1 0\n",
        "[profile]\ngenus = x\n",
        "[profile]\ngenus = 1\n[triple_points]\n1 = 2 0\n",
        "[profile]\ngenus = 1\n[triple_points]\n1 = +1 0\n1 = -1 0\n",
        "[profile]\ngenus = 1\n[triple_points]\n1 = +1 0 9\n",
        "[profile]\ngenus = 1\n[triple_points]\n1 = +1 0\n[branch_policy]\n4.b/t = MustBranch\n",
        "[profile]\ngenus = 1\n[triple_points]\n1 = +1 0\n[branch_policy]\n1.b/t = Sometimes\n",
        "[profile]\ngenus = 1\n[triple_points]\n1 = +1 0\n[branch_policy]\n1.q/r = MustBranch\n",
        "[profile]\ngenus = -2\n",
    ],
)
def test_malformed_profiles(text):
    with pytest.raises(ProfileError):
        parse_profile(text)


def test_empty_triple_point_list_accepted():
    p, _ = parse_profile("[profile]\ngenus = 1\n[triple_points]\n")
    assert p.germs() == []


def test_numbering_defaults_to_zero():
    p, _ = parse_profile("[profile]\ngenus = 1\n[triple_points]\n5 = -1\n")
    assert p.spec(1).sign == -1 and p.spec(1).numbering == 0
