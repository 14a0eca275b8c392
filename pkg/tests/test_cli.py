import json
import math
import subprocess
import sys

import pytest

from tensor_radius import suites
from tensor_radius.cli import main, render_text
from tensor_radius.suites import Check

H_JSON = {
    "matrix": [["1/2", "1/2"], ["1/2", "-1/2"]],
    "domain": {"type": "lp", "n": 2, "p": "inf"},
    "codomain": {"type": "lp", "n": 2, "p": 1},
}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def results(out):
    return {r["name"]: r for r in json.loads(out)["results"]}


def test_nuclear_of_hadamard(files, capsys):
    code, out, _ = run(["norm", "--kind", "nuclear", "--op", files("H.json", H_JSON), "--json"], capsys)
    assert code == 0
    row = results(out)["nuclear"]
    assert row["value"] == 2 and row["exact"] == "2" and row["label"] == "certified"


def test_injective_of_rank_one(files, capsys):
    z = {"factors": [{"type": "lp", "n": 2, "p": 1}, {"type": "lp", "n": 3, "p": "inf"}], "coeffs": [[2, -4, 0], [1, -2, 0]]}
    code, out, _ = run(["norm", "--kind", "injective", "--tensor", files("z.json", z), "--json"], capsys)
    # (2, 1) (x) (1, -2, 0): ||.||_1 = 3, ||.||_inf = 2
    assert code == 0 and results(out)["injective"]["value"] == 6


def test_projective_over_l1_cube(files, capsys):
    z = {"factors": [{"type": "lp", "n": 2, "p": 1}] * 3, "coeffs": [[[1, -2], [0, 3]], [[-1, 1], [2, 0]]]}
    code, out, _ = run(["norm", "--kind", "projective", "--tensor", files("z.json", z), "--json"], capsys)
    assert code == 0 and results(out)["projective"]["value"] == 10


def test_tau_interval_for_hadamard(files, capsys):
    code, out, _ = run(["radius", "tau", "--op", files("H.json", H_JSON), "--kmax", "4", "--json"], capsys)
    assert code == 0
    row = results(out)["tau_infty"]
    assert row["lower"] == pytest.approx(math.sqrt(2), abs=1e-8)
    assert row["upper"] == pytest.approx(math.sqrt(2), abs=1e-8)
    assert row["exact"] == "sqrt(2)"


@pytest.mark.parametrize("space, expected", [({"type": "lp", "n": 2, "p": 1}, math.sqrt(2)), ({"type": "lp", "n": 3, "p": 2}, 3.0)])
def test_rho_closed_forms(files, capsys, space, expected):
    code, out, _ = run(["radius", "rho", "--space", files("X.json", space), "--json"], capsys)
    assert code == 0
    assert results(out)["rho_infty"]["value"] == pytest.approx(expected, rel=1e-12)


def test_gap_and_not_certifiable(files, capsys):
    code, out, _ = run(["radius", "gap", "--op", files("H.json", H_JSON), "--json"], capsys)
    assert code == 0 and results(out)["ntp_gap"]["gap_certified"] is True
    rank_one = dict(H_JSON, matrix=[[1, 2], [2, 4]], domain={"type": "lp", "n": 2, "p": 1})
    code, _, err = run(["radius", "gap", "--op", files("R.json", rank_one)], capsys)
    assert code == 5 and "NotCertifiable" in err


def test_ellipsoid_and_bm_text_output(files, capsys):
    sq = files("sq.json", {"type": "lp", "n": 2, "p": "inf"})
    code, out, _ = run(["ellipsoid", "--space", sq], capsys)
    assert code == 0 and "john" in out and "loewner" in out and out.rstrip().splitlines()[-1].startswith("elapsed")
    code, out, _ = run(["bm", "--space", sq, "--csv"], capsys)
    assert code == 0 and out.splitlines()[0].startswith("name")
    assert "sqrt(2)" in out


def test_exit_code_for_bad_json(files, capsys):
    code, _, err = run(["norm", "--kind", "nuclear", "--op", files("bad.json", "{not json")], capsys)
    assert code == 2 and "error" in err


def test_exit_code_for_missing_file(capsys, tmp_path):
    code, _, _ = run(["radius", "rho", "--space", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_exit_code_for_shape_error(files, capsys):
    bad = dict(H_JSON, matrix=[[1, 2, 3]])
    code, _, _ = run(["norm", "--kind", "operator", "--op", files("bad.json", bad)], capsys)
    assert code == 2


def test_exit_code_for_cap(files, capsys, monkeypatch):
    monkeypatch.setenv("TRL_CAPS", "tensor_size=4")
    z = {"factors": [{"type": "lp", "n": 2, "p": 1}] * 3, "coeffs": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}
    code, _, err = run(["norm", "--kind", "projective", "--tensor", files("z.json", z)], capsys)
    assert code == 3 and "cap" in err


def test_exit_code_for_golden_mismatch(capsys, monkeypatch):
    monkeypatch.setitem(suites.SUITES, "example-1.5", lambda **_: [Check("broken", 1.0, "2", False, True, None)])
    code, out, _ = run(["reproduce", "example-1.5"], capsys)
    assert code == 1 and "FAIL" in out


def test_heuristic_values_are_labelled(files, capsys):
    op = {"matrix": [[1.0, 0.3], [0.2, -0.7]], "domain": {"type": "lp", "n": 2, "p": 4}, "codomain": {"type": "lp", "n": 2, "p": 3}}
    path = files("op.json", op)
    code, out, _ = run(["radius", "tau", "--op", path, "--kmax", "2", "--json"], capsys)
    assert code == 0
    rows = json.loads(out)["results"]
    for row in rows:
        assert row["label"] == ("certified" if row["certified"] else "heuristic")
    assert any(not row["certified"] for row in rows)
    assert "heuristic" in render_text(rows, None)


def test_rational_flag_makes_floats_exact(files, capsys):
    op = dict(H_JSON, matrix=[[0.5, 0.5], [0.5, -0.5]])
    code, out, _ = run(["norm", "--kind", "nuclear", "--op", files("H.json", op), "--rational", "--json"], capsys)
    assert code == 0 and results(out)["nuclear"]["exact"] == "2"


def test_json_is_byte_identical(files, capsys):
    path = files("H.json", H_JSON)
    argv = ["radius", "tau", "--op", path, "--kmax", "3", "--seed", "7", "--json"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tensor_radius", "reproduce", "section-6.1", "--json"], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    rows = json.loads(proc.stdout)["results"]
    assert rows and all(r["status"] == "pass" for r in rows)
