import io
import json

import pytest

from ccseed.cli import main

P1 = "!a.(b.0|a.c.0)|!a.(c.0|a.b.0)"
P2 = "!a.b.0|!a.c.0"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_golden_pair(capsys):
    code, out, _ = run(capsys, "check", P1, P2)
    assert code == 0
    assert out.splitlines()[0] == "bisimilar"
    assert "seed: !a.b.0 | !a.c.0" in out


def test_check_trivial(capsys):
    code, out, _ = run(capsys, "check", "0", "0")
    assert code == 0
    assert "bisimilar" in out


def test_check_not_bisimilar_exit_and_distinguisher(capsys):
    code, out, _ = run(capsys, "check", "!a.b.0", "!a.c.0")
    assert code == 1
    assert "not bisimilar" in out
    assert "distinguisher (depth 2):" in out


def test_check_json_document(capsys):
    code, out, _ = run(capsys, "check", P1, P2, "--json", "--oracle",
                       "--trace")
    assert code == 0
    doc = json.loads(out)
    assert doc["verb"] == "check"
    assert doc["equivalent"] is True
    assert doc["seed"] == "!a.b.0 | !a.c.0"
    assert doc["oracle"]["agrees"] is True
    assert isinstance(doc["trace"]["left"], list)
    step = doc["trace"]["left"][0]
    assert set(step) >= {"axiom", "before", "after", "path"}


def test_check_json_negative_has_distinguisher(capsys):
    code, out, _ = run(capsys, "check", "a.b.0", "a.0", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["equivalent"] is False
    assert doc["distinguisher"]["depth"] == 2
    sides = {mv["side"] for mv in doc["distinguisher"]["moves"]}
    assert sides <= {"left", "right"}


def test_check_oracle_agreement_line(capsys):
    code, out, _ = run(capsys, "check", P1, P2, "--oracle")
    assert code == 0
    assert "oracle (depth 6): equivalent up to depth, agrees" in out


def test_seed_golden(capsys):
    code, out, _ = run(capsys, "seed", "!a.(b.0|a.b.0)")
    assert code == 0
    assert out.strip() == "!a.b.0"


def test_seed_trace_json(capsys):
    code, out, _ = run(capsys, "seed", "!a.(b.0|a.b.0)", "--json", "--trace")
    doc = json.loads(out)
    assert doc["seed"] == "!a.b.0"
    assert doc["sizeBefore"] == 4
    assert doc["sizeAfter"] == 2
    assert len(doc["trace"]) == 1
    assert doc["trace"][0]["axiom"] in ("B1", "B2")


def test_normalize_golden(capsys):
    code, out, _ = run(capsys, "normalize", "a.(b.0|a.b.0)")
    assert code == 0
    assert out.strip() == "a.b.0 | a.b.0"


def test_lts_depth_one(capsys):
    code, out, _ = run(capsys, "lts", "!a.b.0", "--depth", "1")
    assert code == 0
    assert out.splitlines() == ["state: !a.b.0", "  a -> !a.b.0 | b.0"]


def test_lts_json(capsys):
    code, out, _ = run(capsys, "lts", "a.0|~a.0", "--sync", "--depth", "1",
                       "--json")
    doc = json.loads(out)
    labels = {tr["label"] for tr in doc["transitions"]}
    assert labels == {"a", "~a", "tau"}
    assert doc["states"][0] == "a.0 | ~a.0"


def test_lts_depth_cap(capsys):
    code, _out, err = run(capsys, "lts", "a.0", "--depth", "13")
    assert code == 2
    assert "cap" in err


def test_parse_error_exits_2(capsys):
    code, _out, err = run(capsys, "check", "a.(", "a.0")
    assert code == 2
    assert "error:" in err


def test_structure_error_exits_2(capsys):
    code, _out, err = run(capsys, "seed", "a.!b.0")
    assert code == 2
    assert "replication" in err


def test_sync_flag_required_for_outputs(capsys):
    code, _out, err = run(capsys, "normalize", "~a.0")
    assert code == 2
    code, out, _ = run(capsys, "normalize", "~a.0", "--sync")
    assert code == 0
    assert out.strip() == "~a.0"


def test_unknown_verb_exits_2(capsys):
    assert run(capsys, "bogus")[0] == 2


def test_missing_argument_exits_2(capsys):
    assert run(capsys, "check", "a.0")[0] == 2


def test_stdin_terms(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("a.a.0\na.0|a.0\n"))
    code, out, _ = run(capsys, "check", "-", "-")
    assert code == 0
    assert "bisimilar" in out


def test_stdin_single_term(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("  a.(b.0|a.b.0)  \n"))
    code, out, _ = run(capsys, "normalize", "-")
    assert code == 0
    assert out.strip() == "a.b.0 | a.b.0"


def test_stdin_empty_is_parse_error(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    code, _out, err = run(capsys, "seed", "-")
    assert code == 2
    assert "stdin" in err


def test_fuzz_clean_run(capsys):
    code, out, _ = run(capsys, "fuzz", "--rounds", "12", "--shards", "2",
                       "--seed", "3")
    assert code == 0
    assert out.splitlines()[-1] == "ok"
    assert "seed_decision_matches_game" in out


def test_fuzz_json(capsys):
    code, out, _ = run(capsys, "fuzz", "--rounds", "8", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["verb"] == "fuzz"
    assert doc["ok"] is True
    for stats in doc["properties"].values():
        assert stats["counterexamples"] == []


def test_fuzz_max_size_cap(capsys):
    code, _out, err = run(capsys, "fuzz", "--max-size", "9")
    assert code == 2
    assert "cap" in err


def test_output_deterministic(capsys):
    first = run(capsys, "check", P1, P2, "--json", "--oracle", "--trace")
    second = run(capsys, "check", P1, P2, "--json", "--oracle", "--trace")
    assert first == second
    f1 = run(capsys, "fuzz", "--rounds", "10", "--seed", "7", "--json")
    f2 = run(capsys, "fuzz", "--rounds", "10", "--seed", "7", "--json")
    assert f1 == f2
