import json
import subprocess
import sys

import pytest

from rayinv.cli import PRECISION_ENV, main, render_json, resolve_precision
from rayinv.errors import RayInvError

from conftest import MINUS40_LEVEL6_POLY


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, out, json.loads(out)


def test_class_group_text(capsys):
    code, out, _ = run(capsys, "class-group", "--disc", "-40")
    assert code == 0
    assert "[1,0,10]" in out and "[2,0,5]" in out and "h = 2" in out


def test_class_group_json(capsys):
    code, raw, data = run_json(capsys, "class-group", "--disc", "-19", "--precision", "60")
    assert code == 0
    assert data["result"]["class_number"] == 1
    assert data["result"]["forms"][0]["form"] == [1, 1, 5]
    assert set(data) == {"inputs", "result", "checks", "timing_ms"}


def test_bad_discriminant(capsys):
    code, _, err = run(capsys, "class-group", "--disc", "-5")
    assert code == 1 and "fundamental" in err
    code, _, data = run_json(capsys, "class-group", "--disc", "-5")
    assert code == 1 and data["result"] is None
    assert data["checks"][-1]["name"] == "error" and not data["checks"][-1]["passed"]


def test_minpoly_example(capsys):
    code, out, _ = run(capsys, "minpoly", "--disc", "-40", "--level", "6", "--exp", "12")
    assert code == 0
    assert out.startswith("X^16 - 56227499765918216689444911216*X^15 + ")
    assert out.strip().endswith("- 29812156397602328057777202393119664*X + 282429536481")


def test_minpoly_json_round_trip(capsys):
    code, raw, data = run_json(capsys, "minpoly", "--disc", "-40", "--level", "6", "--exp", "12")
    assert code == 0
    coeffs = [int(c) for c in data["result"]["coefficients"]]
    assert coeffs == list(reversed(MINUS40_LEVEL6_POLY))
    assert all(isinstance(c, str) for c in data["result"]["coefficients"])
    assert render_json(json.loads(raw)) + "\n" == raw
    assert all(c["passed"] for c in data["checks"])


def test_minpoly_errors(capsys):
    code, _, err = run(capsys, "minpoly", "--disc", "-40", "--level", "6", "--exp", "10")
    assert code == 1 and "multiple of 12" in err
    code, _, err = run(capsys, "minpoly", "--disc", "-15", "--level", "4", "--exp", "48", "--precision", "60")
    assert code == 1 and "HypothesisError" in err
    code, _, err = run(capsys, "minpoly", "--disc", "-40", "--level", "6")
    assert code == 1 and "--exp" in err


def test_minpoly_prime_power_hint(capsys):
    code, _, err = run(capsys, "minpoly", "--disc", "-19", "--level", "3", "--exp", "12")
    assert code == 1 and "--precision" in err and "--normalize" in err
    code, out, _ = run(capsys, "minpoly", "--disc", "-19", "--level", "3", "--exp", "12", "--normalize")
    assert code == 0 and out.startswith("X^4 ")


def test_conjugates(capsys):
    code, _, data = run_json(capsys, "conjugates", "--disc", "-40", "--level", "6", "--precision", "80")
    assert code == 0
    assert data["result"]["exponent"] == 12
    assert len(data["result"]["conjugates"]) == 16
    assert data["result"]["conjugates"][0]["alpha"] == "(1,0;0,1)"


def test_verify_minus_forty(capsys):
    code, out, _ = run(capsys, "verify", "--disc", "-40", "--level", "6", "--precision", "80")
    assert code == 0
    assert "[PASS] inequality1" in out and "[PASS] inequality2" in out


def test_verify_routing(capsys):
    code, _, data = run_json(capsys, "verify", "--disc", "-11", "--level", "3", "--precision", "80")
    names = [c["name"] for c in data["checks"]]
    assert code == 0 and "inequality2" in names and "inequality1" not in names


def test_verify_exceptional(capsys):
    code, _, data = run_json(capsys, "verify", "--disc", "-3", "--level", "5")
    assert code == 0
    assert data["result"]["exceptional_sign"] in (1, -1)
    assert {c["name"] for c in data["checks"]} == {"exceptional_identity", "g3_squared_over_delta", "j_zero"}


def test_normal_basis(capsys):
    code, _, data = run_json(capsys, "normal-basis", "--disc", "-40", "--level", "6", "--precision", "60")
    assert code == 0
    assert data["result"]["degree"] == 16 and data["result"]["exponent"] == 346
    code, out, _ = run(capsys, "normal-basis", "--disc", "-19", "--level", "3", "--precision", "60")
    assert code == 0 and "[K_(3):K] = 4" in out
    code, _, err = run(capsys, "normal-basis", "--disc", "-15", "--level", "3", "--precision", "60")
    assert code == 1 and "HypothesisError" in err


def test_precision_resolution(capsys, monkeypatch):
    assert resolve_precision(None, {}) == 256
    assert resolve_precision(None, {PRECISION_ENV: "90"}) == 90
    assert resolve_precision(70, {PRECISION_ENV: "90"}) == 70
    with pytest.raises(RayInvError):
        resolve_precision(None, {PRECISION_ENV: "lots"})
    monkeypatch.setenv(PRECISION_ENV, "77")
    _, _, data = run_json(capsys, "class-group", "--disc", "-23")
    assert data["inputs"]["precision"] == 77
    _, _, data = run_json(capsys, "class-group", "--disc", "-23", "--precision", "65")
    assert data["inputs"]["precision"] == 65


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rayinv", "class-group", "--disc", "-47", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["class_number"] == 5
