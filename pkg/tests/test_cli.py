import json
import subprocess
import sys

import pytest

from conftest import DATA
from sinkstable.cli import SCHEMA, VERBS, run

SQUARE, FAN, CUBE = (str(DATA / f) for f in ("square.json", "fan.json", "cube.json"))


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def strong(tmp_path):
    # a 4-cycle with one chord
    return _write(tmp_path, "strong.json", {"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0], [0, 2]]})


@pytest.fixture
def chain(tmp_path):
    return _write(tmp_path, "chain.json", {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]})


@pytest.fixture
def square_back(tmp_path):
    return _write(tmp_path, "back.json", {"n": 4, "names": list("abcd"), "edges": [["a", "b"], ["b", "c"], ["d", "c"], ["d", "a"]]})


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if code == 0 and out.strip().startswith("{") else out), err


def test_square_pair(capsys):
    code, out, _ = call(capsys, "check-sink-stable", SQUARE, "--set", "a,c", "--verify")
    assert code == 0
    assert out["kind"] == "violating_circuit" and out["schema"] == SCHEMA
    assert out["verified"] is True and out["eta"] == 1


def test_fan_max(capsys):
    code, out, _ = call(capsys, "max-sink-stable", FAN)
    assert code == 0 and out["value"] == 3
    assert out["primal"]["set"] == ["b", "c", "d"]


def test_cube_clar(capsys):
    code, out, _ = call(capsys, "clar", CUBE)
    assert code == 0 and out["clar"] == 2


def test_every_verb_verifies(capsys, strong, chain, square_back):
    runs = {
        "check-sink-stable": [SQUARE, "--set", "a"],
        "partition-k": [SQUARE, "--set", "a,c"],
        "check-f-stable": [strong, "--set", "0", "--edge-set", "3"],
        "flat-transversal": [strong],
        "dicut-union": [SQUARE, "--edge-set", "c>d,a>d"],
        "dicut-equiv": [SQUARE, square_back],
        "source-sequence": [square_back, SQUARE],
        "cyclic-order": [strong],
        "check-cyclic-stable": [strong, "--set", "1"],
        "max-sink-stable": [FAN],
        "max-f-stable": [strong, "--edge-set", "3"],
        "k-union-max": [SQUARE, "--sink"],
        "cover-dicircuits": [strong],
        "chromatic-bound": [strong],
        "clar": [CUBE],
        "k-resonant": [CUBE, "--k", "2"],
        "greene-kleitman": [chain, "--k", "2"],
    }
    assert set(runs) | {"oracle"} == set(VERBS)
    for verb, args in runs.items():
        code, out, err = call(capsys, verb, *args, "--verify")
        assert code == 0, (verb, err)
        assert out["verb"] == verb and out["verified"] is True, verb


def test_oracle_agrees(capsys):
    code, out, _ = call(capsys, "oracle", SQUARE, "--set", "a,c", "--k", "2")
    assert code == 0 and out["agree"] is True


def test_oracle_size_guard(capsys):
    code, _, err = call(capsys, "oracle", SQUARE, "--oracle-max-n", "3")
    assert code == 2 and "oracle-max-n" in err


def test_deterministic(capsys):
    first = call(capsys, "k-resonant", CUBE, "--k", "3")[1]
    assert call(capsys, "k-resonant", CUBE, "--k", "3")[1] == first


def test_text_format(capsys):
    code, out, _ = call(capsys, "max-sink-stable", FAN, "--format", "text")
    assert code == 0 and "value: 3" in out


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "out.json"
    assert run(["flat-transversal", SQUARE, "-o", str(dest)]) == 0
    assert json.loads(dest.read_text())["edges"] == []


def test_adjacent_set_is_an_error(capsys):
    code, _, err = call(capsys, "check-sink-stable", SQUARE, "--set", "a,b")
    assert code == 2 and json.loads(err)["error"]


def test_unknown_node(capsys):
    code, _, err = call(capsys, "check-sink-stable", SQUARE, "--set", "z")
    assert code == 2


def test_unknown_verb(capsys):
    assert run(["frobnicate", SQUARE]) == 2


def test_parse_error_has_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2,\n "edges": [[0, 1],]}')
    code, _, err = call(capsys, "flat-transversal", str(bad))
    info = json.loads(err)
    assert code == 2 and info["line"] == 2 and "column" in info


def test_missing_file(capsys, tmp_path):
    code, _, _ = call(capsys, "flat-transversal", str(tmp_path / "nope.json"))
    assert code == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "sinkstable.cli", "check-sink-stable", SQUARE, "--set", "a"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kind"] == "dicut_family"
