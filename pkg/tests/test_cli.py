import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from algebroids.cli import run
from oracles import matmul

GOLDEN = Path(__file__).parent / "golden"


def cli(capsys, *argv):
    code = run([str(GOLDEN / a) if a.endswith(".json") else a for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv, expected, code", [
    (["check-algebroid", "so3.json"], "check_so3.out", 0),
    (["check-algebroid", "so3_bad.json"], "check_so3_bad.out", 1),
    (["--json", "check-algebroid", "so3.json"], "check_so3_json.out", 0),
    (["star", "so3.json", "xi1", "xi2"], "star_so3.out", 0),
    (["normal-form", "so3.json", "e2*e1*e1"], "nf_so3.out", 0),
    (["symbol", "tangent_R1.json", "e1*x1"], "symbol_t1.out", 0),
    (["groupoid", "convolve", "pair4.json", "k1.json", "k2.json"], "convolve_pair4.out", 0),
    (["groupoid", "check", "pair4_bad.json"], "check_pair4_bad.out", 1),
    (["groupoid", "rep", "z3_on_6.json", "kz.json", "bundle.json", "section.json"],
     "rep_z3.out", 0),
])
def test_golden(capsys, argv, expected, code):
    got_code, out, _ = cli(capsys, *argv)
    assert got_code == code
    assert out == (GOLDEN / expected).read_text(encoding="utf-8")


def test_golden_values():
    assert (GOLDEN / "check_so3.out").read_text() == \
        "antisymmetry: PASS\nanchor: PASS\njacobi: PASS\n"
    assert (GOLDEN / "star_so3.out").read_text() == "xi1*xi2 + (1/2)*t*xi3\n"
    assert (GOLDEN / "nf_so3.out").read_text() == "(1)·e1^2·e2 + (-2)·e1·e3 + (-1)·e2\n"
    assert (GOLDEN / "check_so3_bad.out").read_text().endswith("jacobi: FAIL at (1,2,3)\n")


def test_convolve_matches_matrix_product(capsys):
    _, out, _ = cli(capsys, "groupoid", "convolve", "pair4.json", "k1.json", "k2.json")
    k = {g: Fraction(v[0][0]) for g, v in json.loads(out).items()}

    def load(name):
        d = json.loads((GOLDEN / name).read_text())
        return [[Fraction(d[f"({x},{y})"][0][0]) for y in range(1, 5)] for x in range(1, 5)]

    M = matmul(load("k1.json"), load("k2.json"))
    assert [[k[f"({x},{y})"] for y in range(1, 5)] for x in range(1, 5)] == M


def test_output_is_bit_stable(capsys):
    first = cli(capsys, "groupoid", "convolve", "pair4.json", "k1.json", "k2.json")
    second = cli(capsys, "groupoid", "convolve", "pair4.json", "k1.json", "k2.json")
    assert first == second


def test_poisson_and_bracket(capsys):
    assert cli(capsys, "poisson", "so3.json", "xi2", "xi3")[1] == "xi1\n"
    assert cli(capsys, "bracket", "so3.json", "e1", "e2")[1] == "xi3\n"
    assert cli(capsys, "--json", "poisson", "so3.json", "xi1", "xi2")[1] == \
        '{\n  "command": "poisson",\n  "ok": true,\n  "result": "xi3"\n}\n'


def test_adiabatic_output_reloads(capsys, tmp_path):
    code, out, _ = cli(capsys, "adiabatic", "so3.json")
    assert code == 0
    path = tmp_path / "so3_t.json"
    path.write_text(out)
    assert cli(capsys, "check-algebroid", str(path))[0] == 0
    assert cli(capsys, "normal-form", str(path), "e2*e1")[1] == "(1)·e1·e2 + (-t)·e3\n"
    assert cli(capsys, "adiabatic", str(path))[0] == 2


def test_kernel_roundtrip(capsys):
    code, out, _ = cli(capsys, "groupoid", "kernel-roundtrip", "z3_on_6.json", "kz.json")
    assert (code, out) == (0, "invariance: PASS\nroundtrip: PASS\n")


@pytest.mark.parametrize("argv", [
    ["poisson", "so3.json", "xi1", "x1"],      # x1 outside a rank-3 Lie algebra
    ["poisson", "so3.json", "xi1 +", "xi2"],
    ["star", "so3.json", "xi1/xi2", "xi2"],
    ["check-algebroid", "missing.json"],
    ["check-algebroid", "k1.json"],
    ["groupoid", "convolve", "pair4.json", "k1.json", "so3.json"],
    ["groupoid", "check", "so3.json"],
    ["frobnicate"],
    [],
])
def test_malformed_input_exits_2(capsys, argv):
    code, out, err = cli(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.strip()


def test_bad_input_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert run(["check-algebroid", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_catalog_list(capsys):
    code, out, _ = cli(capsys, "catalog", "list")
    assert code == 0
    assert "so3\talgebroid\tbase_dim=0 rank=3\n" in out
    assert "z3_on_6\tgroupoid\tunits=6 arrows=18\n" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "algebroids", "star", str(GOLDEN / "so3.json"),
                           "xi2", "xi3"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "xi2*xi3 + (1/2)*t*xi1\n"
