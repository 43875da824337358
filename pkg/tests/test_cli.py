import json
import subprocess
import sys
from pathlib import Path

import pytest

from orliksolomon.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"


def d(name):
    return str(DATA / name)


def test_chromatic(capsys):
    assert run(["chromatic", d("k3.json")]) == 0
    assert capsys.readouterr().out.strip() == "t^3 - 3t^2 + 2t"


def test_zaslavsky(capsys):
    assert run(["zaslavsky", d("coords3.json")]) == 0
    assert capsys.readouterr().out.strip() == "f = (1, 6, 12, 8)"


def test_betti(capsys):
    assert run(["betti", d("cp1.json"), d("k2.json")]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "Betti (1, 0, 1), collapse: guaranteed"


def test_json_output_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        assert run(["--format", "json", "betti", d("elliptic.json"), d("k2.json")]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["betti"] == [1, 4, 5, 2]


@pytest.mark.parametrize("argv", [
    ["bond-lattice", "k3.json"], ["os-dims", "k4.json"], ["os-dims", "braid3.json"],
    ["e1-poly", "s1.json", "k2.json"], ["poincare-z2", "r2.json", "k4.json"],
    ["presentation", "s1xr.json", "c4.json"], ["complex-poincare", "braid3.json"],
    ["e2", "b2_poset.json", "b2_const.json"],
])
def test_subcommands_succeed(argv, capsys):
    args = [argv[0]] + [d(a) for a in argv[1:]]
    assert run(args) == 0
    assert capsys.readouterr().out.strip()


def test_flags_before_or_after_the_subcommand(capsys):
    assert run(["--field", "GF2", "betti", d("cp1.json"), d("k3.json")]) == 0
    first = capsys.readouterr().out
    assert run(["betti", d("cp1.json"), d("k3.json"), "--field", "GF2"]) == 0
    assert capsys.readouterr().out == first
    assert "Betti (1, 1, 1, 1)" in first


def test_exit_codes(capsys, tmp_path):
    assert run(["bogus"]) == 1
    assert run(["chromatic"]) == 1
    assert run(["chromatic", d("k3.json"), "--unknown"]) == 1
    assert run(["chromatic", str(tmp_path / "missing.json")]) == 1
    assert run(["poincare-z2", d("cp1.json"), d("k2.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"real_dim": 2, "basis": [{"name": "1", "deg": 0}, {"name": "w", "deg": 2}],
                               "diagonal_class": [[1, "w", "1"]], "projective_complex": True}))
    assert run(["betti", str(bad), d("k2.json")]) == 2
    assert "certificate" in capsys.readouterr().err


def test_check_suite(capsys):
    assert run(["check", "--suite", "hyperplane"]) == 0
    assert capsys.readouterr().out.startswith("PASS hyperplane")
    assert run(["check", "--suite", "nope"]) == 1


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "orliksolomon.cli", "chromatic", d("k3.json")],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "t^3 - 3t^2 + 2t"
