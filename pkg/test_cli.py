"""
Command-line tests: output lines, the structured result file and exit codes.
"""

import json
import sys
from io import StringIO
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from app.cli import EXIT_CAPACITY, EXIT_OK, EXIT_USAGE, run
from app.config import get_settings


def _run(*argv):
    out, err = StringIO(), StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify():
    code, out, _ = _run("classify", "--rho", "3/4")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "rho = 3/4"
    assert "V(P4@2) * M(5,g)" in out
    assert "maximal" in lines[1]


def test_classify_empty():
    code, out, _ = _run("classify", "--rho", "14/15")
    assert code == EXIT_OK
    assert "empty: denominator has two distinct odd primes" in out


def test_classify_groups():
    code, out, _ = _run("classify", "--rho", "2/3", "--groups")
    assert code == EXIT_OK
    assert "Z(3^m) (family)" in out
    assert "Z2^2 x Z3^2" in out


def test_classify_writes_json(tmp_path):
    path = tmp_path / "out.json"
    code, _, _ = _run("classify", "--rho", "2/3", "--expand-max-order", "30", "--json", str(path))
    assert code == EXIT_OK
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["version"] == 1
    assert data["rho"] == "2/3"
    assert [d["template"] for d in data["descriptors"]] == [
        "M(3^m,g)",
        "V((x-g)^2@3)",
        "V(P2@2) * V(P2@3)",
    ]
    assert len(data["descriptors"][0]["instances"]) == 9


def test_lambda():
    code, out, _ = _run("lambda", "--group", "Z2 x Z4")
    assert code == EXIT_OK
    assert out.splitlines() == ["Z2 x Z4: lambda = 1/2"]
    code, out, _ = _run("lambda", "--spec", "M(9,2)")
    assert out.splitlines() == ["M(9,2): lambda = 2/3", "Lambda = 6", "cycles = 1^1 2^1 6^1"]
    code, out, _ = _run("lambda", "--group", "Z4", "--affine")
    assert out.splitlines() == ["Z4: lambda_aff = 1"]


def test_decimal_rendering():
    code, out, _ = _run("lambda", "--spec", "M(9,2)", "--decimal", "3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "M(9,2): lambda = 0.666"


def test_poly():
    code, out, _ = _run("poly", "order", "x^4+x^3+x^2+x+1@2")
    assert code == EXIT_OK
    assert "order: 5" in out.splitlines()
    code, out, _ = _run("poly", "enumerate", "2", "4")
    assert out.splitlines() == ["x^4+x+1@2", "x^4+x^3+1@2"]


def test_bounds():
    code, out, _ = _run("bounds", "--certify", "rho0", "--decimal", "9")
    assert code == EXIT_OK
    assert "digits = 0.504307524" in out


def test_prng():
    code, out, _ = _run("prng", "lcg", "16", "5", "3", "0", "--count", "4", "--certify", "--period", "100")
    assert code == EXIT_OK
    assert out.splitlines() == [
        "lcg(m=16, a=5, c=3, seed=0)",
        "0",
        "3",
        "2",
        "13",
        "full period: yes",
        "certified period: 16",
        "measured period: 16",
    ]


def test_oracle():
    code, out, _ = _run("oracle", "--max-order", "8")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "PASS"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["classify"],
        ["classify", "--rho", "1/3"],
        ["lambda", "--group", "Q8"],
        ["prng", "lcg", "10", "2", "1", "0"],
        ["poly", "enumerate", "2"],
    ],
)
def test_usage_errors(argv):
    code, _, _ = _run(*argv)
    assert code == EXIT_USAGE


def test_capacity_exit(monkeypatch):
    monkeypatch.setenv("LAMBDA_ORBIT_CAPACITY", "8")
    get_settings.cache_clear()
    try:
        code, _, err = _run("lambda", "--spec", "V(x^4+1@2)")
    finally:
        monkeypatch.delenv("LAMBDA_ORBIT_CAPACITY")
        get_settings.cache_clear()
    assert code == EXIT_CAPACITY
    assert "exceeds capacity 8" in err
