import csv
import io
import json
from fractions import Fraction as F

import pytest
from click.testing import CliRunner

from alcove.cli import main
from alcove.coverage import xy_volume_formula
from alcove.gates import SWAP, matrix_to_json


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)

    return invoke


def test_help(run):
    r = run("--help")
    assert r.exit_code == 0
    for cmd in ["coverage", "depth", "approx", "volume-curve", "leaky", "decompose",
                "verify-circuits"]:
        assert cmd in r.output


@pytest.mark.parametrize("gates,expected", [("CZ", "3"), ("XY", "13/6"), ("XY(3pi/4)", "9/4")])
def test_coverage_expected_depth(run, gates, expected):
    r = run("coverage", "--gates", gates, "--nmax", "3")
    assert r.exit_code == 0
    assert json.loads(r.output)["expected_depth"] == expected


def test_coverage_incomplete(run):
    r = run("coverage", "--gates", "CZ", "--nmax", "2")
    assert r.exit_code == 3
    data = json.loads(r.stdout)
    assert data["volumes"][-1] == "0"


def test_coverage_csv_and_lrs(run):
    r = run("coverage", "--gates", "CZ", "--nmax", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(r.output)))
    assert rows[0] == ["depth", "parts", "cumulative_volume"] and rows[-1] == ["3", "1", "1"]
    r = run("coverage", "--gates", "CZ", "--nmax", "3", "--format", "lrs")
    assert "begin" in json.loads(r.output)["depth_sets"][3][0]["lrs"]


def test_coverage_samples(run):
    r = run("coverage", "--gates", "CZ", "--nmax", "3", "--samples", "500")
    assert json.loads(r.output)["haar_fractions"][-1] == 1.0


def test_coverage_threads_env(run):
    a = run("coverage", "--gates", "XY", "--nmax", "3")
    b = run("coverage", "--gates", "XY", "--nmax", "3", env={"MONODROMY_THREADS": "2"})
    assert a.output == b.output


def test_parse_error(run):
    r = run("coverage", "--gates", "FROB")
    assert r.exit_code == 2
    r = run("coverage", "--gates", "CZ", "--nmax", "0")
    assert r.exit_code == 2


@pytest.mark.parametrize("target,gates,depth", [("SWAP", "CZ", 3), ("SWAP", "CZ,ISWAP", 2),
                                                ("I", "XY", 0), ("CAN(0,0,0)", "CZ", 0)])
def test_depth(run, target, gates, depth):
    r = run("depth", target, "--gates", gates)
    assert r.exit_code == 0
    assert json.loads(r.output)["depth"] == depth


def test_depth_matrix_file(run, tmp_path):
    f = tmp_path / "swap.json"
    f.write_text(json.dumps(matrix_to_json(SWAP)))
    r = run("depth", str(f), "--gates", "CZ")
    assert json.loads(r.output) == {"alcove": "(1/4,1/4,1/4,-3/4)", "depth": 3, "gates": ["CZ"]}


def test_depth_matrix_gate_set(run, tmp_path):
    f = tmp_path / "native.json"
    f.write_text(json.dumps(matrix_to_json(SWAP)))
    r = run("depth", "SWAP", "--gates", str(f))
    assert json.loads(r.output)["depth"] == 1


def test_depth_uncovered(run):
    r = run("depth", "SWAP", "--gates", "CZ", "--nmax", "2")
    assert r.exit_code == 3


def test_bad_inputs(run, tmp_path):
    assert run("depth", "missing.json", "--gates", "CZ").exit_code == 2
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"rows": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}))
    assert run("leaky", str(f)).exit_code == 2
    assert run("decompose", "CAN(1,2)").exit_code == 2


def test_approx(run):
    r = run("approx", "SWAP", "--gates", "XY", "--fidelity", "0.8")
    data = json.loads(r.output)
    assert r.exit_code == 0
    assert data["depth"] == 2 and data["target_alcove"] == "(1/3,1/3,0,-2/3)"
    assert data["class_fidelity"] == 0.85 and data["note"] == "realization unsupported"


def test_approx_realized(run):
    r = run("approx", "SWAP", "--gates", "CZ", "--fidelity", "1")
    data = json.loads(r.output)
    assert data["depth"] == 3 and data["realization"] is not None


def test_volume_curve(run):
    r = run("volume-curve", "--family", "XY", "--steps", "20")
    rows = list(csv.DictReader(io.StringIO(r.output)))
    assert len(rows) == 21
    by_t = {F(row["t"]): F(row["volume"]) for row in rows}
    assert by_t[F(3, 4)] == F(3, 4) and by_t[F(0)] == 0
    assert all(v == xy_volume_formula(t) for t, v in by_t.items())


def test_leaky(run):
    assert json.loads(run("leaky", "CZ").output)["leaks"] is True
    assert json.loads(run("leaky", "SQRT_ISWAP").output)["leaks"] is False


def test_decompose(run):
    data = json.loads(run("decompose", "CAN(0.3,0.2,0.1)").output)
    assert all(abs(a - b) < 1e-9 for a, b in zip(data["can"], [0.3, 0.2, 0.1]))
    data = json.loads(run("decompose", "CAN(pi/4,0,0)").output)
    assert data["alcove"] == "(1/4,1/4,-1/4,-1/4)"


def test_verify_circuits(run):
    r = run("verify-circuits")
    assert r.exit_code == 0 and json.loads(r.output)["ok"] is True


def test_deterministic(run):
    for args in [("approx", "SWAP", "--gates", "XY", "--fidelity", "0.9", "--seed", "3"),
                 ("coverage", "--gates", "DB", "--nmax", "3", "--samples", "300")]:
        assert run(*args).output == run(*args).output
