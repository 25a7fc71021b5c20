import json

import pytest

from conftest import DATA
from conetype.cli import main

EX7 = str(DATA / "ex7.json")
EX7MIN = str(DATA / "ex7min.json")
ROSE2 = str(DATA / "rose2.json")
SIGMA = str(DATA / "sigma.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_act_plain(capsys):
    code, out, _ = run(capsys, "act", "--automaton", EX7, "--portrait", SIGMA, "--word", "baacdc", "--plain")
    assert code == 0 and out == "aaaccd\n"


def test_act_json(capsys):
    assert run_json(capsys, "act", "--automaton", EX7, "--portrait", SIGMA, "--word", "baacdc") == {"word": "aaaccd"}


def test_act_trace(capsys):
    code, out, _ = run(
        capsys, "act", "--automaton", EX7, "--portrait", SIGMA, "--word", "baacdc", "--trace", "--plain"
    )
    assert code == 0
    assert out.splitlines() == [
        "Step 1: P(baacdc) = a2 b2 b1 b2 b2 b2",
        "Step 2: g(a2 b2 b1 b2 b2 b2) = a1 b1 b1 b2 b1 b2",
        "Step 3: P^-1(a1 b1 b1 b2 b1 b2) = aaaccd",
    ]


def test_minimize_rose_is_unchanged(capsys):
    payload = run_json(capsys, "minimize", "--automaton", ROSE2)
    assert payload["reduced"] is False
    assert payload["partition"] == [["r"]]
    q = payload["quotient"]
    assert q["states"] == ["r"] and q["root"] == "r"
    assert sorted((e["src"], e["dst"]) for e in q["edges"]) == [("r", "r"), ("r", "r")]
    assert payload["morphism"]["vertex_map"] == {"r": "r"}


def test_minimize_example(capsys):
    payload = run_json(capsys, "minimize", "--automaton", EX7)
    assert payload["partition"] == [["W", "X", "Y", "Z"], ["eps"]]
    assert len(payload["quotient"]["edges"]) == 6


def test_order(capsys):
    code, out, _ = run(capsys, "order", "--automaton", EX7MIN, "--level", "1", "--plain")
    assert code == 0 and out == "384\n"
    payload = run_json(capsys, "order", "--automaton", EX7MIN, "--level", "1")
    assert payload["truncated_order"] == "384" and payload["level_order"] == "16"
    assert payload["minimized"] is False


def test_order_auto_minimizes(capsys):
    payload = run_json(capsys, "order", "--automaton", EX7, "--level", "0")
    assert payload["minimized"] is True and payload["truncated_order"] == "24"


def test_strict_refuses_non_minimal(capsys):
    code, out, err = run(capsys, "order", "--automaton", EX7, "--level", "1", "--strict")
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "NotMinimal"


def test_is_minimal_and_finite(capsys):
    assert run_json(capsys, "is-minimal", "--automaton", EX7) == {"minimal": False}
    assert run_json(capsys, "is-minimal", "--automaton", EX7MIN) == {"minimal": True}
    code, out, _ = run(capsys, "is-finite", "--automaton", EX7, "--plain")
    assert out == "infinite\n"


def test_classical_minimize(capsys):
    code, out, _ = run(capsys, "classical-minimize", "--automaton", EX7, "--plain")
    assert out.split() == ["W", "X", "Y+Z", "eps"]


def test_validate_and_levels(capsys):
    assert run_json(capsys, "validate", "--automaton", EX7) == {"valid": True, "states": 5, "edges": 12}
    assert run_json(capsys, "levels", "--automaton", EX7, "--level", "1")["words"] == ["a", "b", "c", "d"]


def test_push_and_lift(capsys):
    assert run_json(capsys, "push", "--automaton", EX7, "--word", "baacdc")["word"] == "a2 b2 b1 b2 b2 b2"
    assert run_json(capsys, "lift", "--automaton", EX7, "--word", "a1 b1 b1 b2 b1 b2")["word"] == "aaaccd"


def test_generators(capsys):
    payload = run_json(capsys, "generators", "--automaton", EX7MIN, "--max-len", "0")
    assert payload["count"] == len(payload["generators"]) > 0
    assert all(g["word"] == "" for g in payload["generators"])


def test_verify_portrait(capsys):
    assert run_json(capsys, "verify-portrait", "--automaton", EX7, "--portrait", SIGMA)["ok"] is True


def test_cone_eq(capsys):
    payload = run_json(capsys, "cone-eq", "--automaton", EX7, "--states", "W", "X")
    assert payload == {"equivalent": True, "depth": 36}
    payload = run_json(capsys, "cone-eq", "--automaton", EX7, "--states", "W", "eps", "--depth", "1")
    assert payload["equivalent"] is False


def test_output_is_byte_identical(capsys):
    argv = ["minimize", "--automaton", EX7]
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)


@pytest.mark.parametrize(
    "argv",
    [
        ["order", "--automaton", EX7MIN],
        ["act", "--automaton", EX7, "--word", "ab"],
        ["order", "--automaton", EX7MIN, "--level", "-1"],
        ["frobnicate", "--automaton", EX7],
        ["validate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "--automaton", str(tmp_path / "missing.json"))
    assert code == 1 and json.loads(err)["error"] == "IOError"


def test_word_not_accepted(capsys):
    code, _, err = run(capsys, "push", "--automaton", EX7, "--word", "da")
    assert code == 1 and json.loads(err)["error"] == "WordNotAccepted"


def test_bad_automaton(capsys, tmp_path):
    path = tmp_path / "dup.json"
    path.write_text(json.dumps({
        "alphabet": ["a"], "states": ["r", "s"], "root": "r",
        "edges": [{"id": "x", "src": "r", "dst": "s", "label": "a"}, {"id": "y", "src": "r", "dst": "r", "label": "a"}],
    }))
    code, _, err = run(capsys, "validate", "--automaton", str(path))
    assert code == 1 and json.loads(err)["error"] == "DuplicateOutLabel"


def test_subprocess_entry_point():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-m", "conetype.cli", "order", "--automaton", EX7MIN, "--level", "1", "--plain"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and out.stdout == "384\n"
