import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from schrodinger_appell import cli
from schrodinger_appell.series import rising_factorial


def run(*argv):
    return cli.run(list(argv))


def test_verify_lie():
    code, out, err = run("verify", "--suite", "lie")
    assert code == 0 and err == ""
    report = json.loads(out)
    brackets = [c for c in report["checks"] if c["id"].startswith("lie.bracket.")]
    assert len(brackets) == 36
    assert all(c["status"] == "pass" for c in brackets)


def test_verify_csv():
    code, out, _ = run("verify", "--suite", "diffreal", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[0].keys() == {"id", "status", "detail", "anchor"}


def test_gram_ab_diagonal():
    code, out, _ = run("gram", "--m", "1", "--c", "3/4", "--cutoff", "8", "--basis", "ab")
    data = json.loads(out)
    assert code == 0 and data["off_diagonal_nonzero"] == 0
    for row in data["diagonal"]:
        a, b = row["a"], row["b"]
        want = rising_factorial(Fraction(1, 4), a) * _fact(a) * _fact(b)
        assert Fraction(row["value"]) == want


def test_gram_jk_csv():
    code, out, _ = run("gram", "--m", "2", "--c", "1", "--cutoff", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["j", "k", "j'", "k'", "value"]
    assert ["0", "1", "0", "1", "2"] in rows


def test_appell_json():
    code, out, _ = run("appell", "--m", "1", "--c", "3/4", "--beta", "2", "--order", "2")
    polys = {(p["j"], p["k"]): p["terms"] for p in json.loads(out)["polynomials"]}
    assert polys[(1, 0)] == [{"x1": 0, "x2": 0, "coefficient": "-3/2"}, {"x1": 1, "x2": 0, "coefficient": "1"}]


def test_evolve():
    code, out, _ = run("evolve", "--a", "0", "--b", "2", "--m", "3", "--c", "1", "--tau", "1/3")
    data = json.loads(out)
    assert code == 0
    assert data["tau_coefficients"][1]["state"] == [{"j": 0, "k": 0, "value": "9"}]
    assert {"j": 0, "k": 0, "value": "3", "decimal": 3.0} in data["at_tau"]


def test_density_modes():
    code, out, _ = run("density", "--m", "1", "--beta", "1", "--c", "3/2", "--eval", "1", "0")
    assert code == 0 and json.loads(out)["density"] > 0
    code, out, _ = run("density", "--c", "3/2", "--moments", "1", "2")
    moments = {(r["j"], r["k"]): r["value"] for r in json.loads(out)["moments"]}
    assert moments[(1, 0)] == "3/2" and moments[(0, 2)] == "1"
    code, out, _ = run("density", "--sample", "4", "--seed", "9")
    lines = out.splitlines()
    assert lines[0] == "x1,x2" and len(lines) == 5


def test_output_is_deterministic():
    args = ("density", "--sample", "50", "--seed", "2", "--c", "5/4")
    assert run(*args) == run(*args)
    assert run("verify", "--suite", "lie", "--seed", "1") == run("verify", "--suite", "lie", "--seed", "1")


@pytest.mark.parametrize(
    "argv, code",
    [
        (["density", "--m", "1", "--beta", "1", "--c", "1/2", "--eval", "1", "0"], 3),
        (["gram", "--m", "0"], 3),
        (["density", "--m", "-1", "--moments", "1", "1"], 3),
        (["gram", "--m", "1/0"], 2),
        (["gram", "--c", "0.75"], 2),
        (["gram", "--wat"], 2),
        (["frobnicate"], 2),
        (["density", "--m", "1"], 2),
        (["density", "--sample", "0"], 2),
        (["verify", "--suite", "nope"], 2),
    ],
)
def test_error_exit_codes(argv, code):
    got, out, err = cli.run(argv)
    assert got == code
    assert out == ""
    assert err.count("\n") == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "schrodinger_appell", "density", "--c", "1/2", "--eval", "1", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
    assert proc.stderr.startswith("domain error")


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
