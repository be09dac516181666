import json
import subprocess
import sys

import numpy as np
import pytest

from hexablock import cli
from hexablock.errors import WrongShape
from hexablock.io import cmatrix_from_json, cmatrix_to_json, dumps, point_from_json, tuple_from_json, tuple_to_json
from hexablock.operator_tuple import OperatorTuple, diag_tuple
from hexablock.oracles import haar_unitary, sample_region
from hexablock.sweeps import RunConfig

COUNTER = "[0.9536128053418969, 0.25, [0, 0.25], [0, 0.0625]]"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write_tuple(tmp_path, entries, name="t.json"):
    p = tmp_path / name
    p.write_text(json.dumps(tuple_to_json(OperatorTuple(entries))))
    return str(p)


def test_cmatrix_json_schema_roundtrip(rng):
    m = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    d = cmatrix_to_json(m)
    assert set(d) == {"rows", "cols", "re", "im"} and d["rows"] == 2 and d["cols"] == 3
    np.testing.assert_array_equal(cmatrix_from_json(d), m)
    with pytest.raises(WrongShape):
        cmatrix_from_json({"rows": 2, "cols": 2, "re": [[1, 2]], "im": [[0, 0]]})


def test_tuple_json_roundtrip():
    t = diag_tuple([(1, 0, 0, -1), (0, 1, 1, 1)])
    back = tuple_from_json(json.loads(json.dumps(tuple_to_json(t))))
    assert back.kind == "quadruple"
    assert all(np.array_equal(a, b) for a, b in zip(t, back))


def test_point_parsing():
    assert point_from_json("[1, [0, 2], -0.5]") == (1, 2j, -0.5)


def test_point_commands(capsys):
    code, out = run(capsys, "point", "--c4", "[1,0,0,-1]")
    rep = json.loads(out)
    assert code == 0 and rep["verdicts"]["bH"] is True
    assert rep["config"] == RunConfig().to_dict()
    code, out = run(capsys, "point", "--c3", "[1,1,1]")
    assert json.loads(out)["verdicts"]["bE"]["on_distinguished_boundary"] is True
    code, out = run(capsys, "point", "--c4", COUNTER)
    rep = json.loads(out)["verdicts"]["H"]
    assert rep["inside_closed"] is False and rep["certificate"]["sup_psi"] > 1


def test_sup_command(capsys):
    code, out = run(capsys, "sup", "--c4", COUNTER, "--oracle")
    rep = json.loads(out)
    assert code == 1 and abs(rep["value"] - rep["grid_oracle"]) <= 1e-3 * rep["value"]
    code, _ = run(capsys, "sup", "--c4", "[0.5,0,0,0]")
    assert code == 0


def test_malformed_input_exit_2(capsys, tmp_path):
    assert cli.main(["point", "--c4", "[1,2"]) == 2
    assert cli.main(["point", "--c4", "[1,2,3]"]) == 2
    assert cli.main(["sweep", "no-such-sweep"]) == 2
    assert cli.main(["--depth", "1", "point", "--c2", "[0,0]"]) == 2
    assert cli.main(["classify", "--kind", "H-unitary", "--tuple", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "nc.json"
    s = np.array([[0.0, 1.0], [0.0, 0.0]])   # does not commute with diag(1, 0)
    bad.write_text(json.dumps(tuple_to_json(OperatorTuple([np.diag([1.0, 0.0]), s, s, s]))))
    assert cli.main(["classify", "--kind", "H-unitary", "--tuple", str(bad)]) == 2
    assert cli.main(["bogus"]) == 2
    capsys.readouterr()


def test_classify_exit_codes(capsys, tmp_path, rng):
    pts = sample_region("bH", rng, 3)
    path = write_tuple(tmp_path, diag_tuple(pts, haar_unitary(rng, 3)).entries)
    code, out = run(capsys, "classify", "--kind", "H-unitary", "--tuple", path)
    assert code == 0 and json.loads(out)["verdict"]["answer"] is True
    pts[0] = sample_region("H", rng, 1)[0]
    path = write_tuple(tmp_path, diag_tuple(pts).entries, "u.json")
    code, out = run(capsys, "classify", "--kind", "H-unitary", "--tuple", path)
    assert code == 1


def test_fo_command(capsys, tmp_path):
    path = write_tuple(tmp_path, [np.array([[0.5]])] * 3)
    code, out = run(capsys, "fo", "--tuple", path)
    rep = json.loads(out)["fundamental_pair"]
    assert code == 0
    assert cmatrix_from_json(rep["F1"])[0, 0] == pytest.approx(1 / 3, abs=1e-12)
    assert cmatrix_from_json(rep["F2"])[0, 0] == pytest.approx(1 / 3, abs=1e-12)


def test_dilate_command(capsys, tmp_path):
    z = np.zeros((2, 2))
    path = write_tuple(tmp_path, [np.eye(2), z, z, 0.5 * np.eye(2)])
    blocks = tmp_path / "blocks"
    code, out = run(capsys, "dilate", "--tuple", path, "--route", "H-sufficient", "--blocks-dir", str(blocks))
    rep = json.loads(out)
    assert code == 0 and rep["verification"]["max_residual"] <= 1e-9
    assert len(rep["block_files"]) == 4 and (blocks / "block0.json").exists()
    for route in ("E", "H-main", "pure-model"):
        code, _ = run(capsys, "dilate", "--tuple", path, "--route", route, "--depth", "8")
        assert code == 0, route
    path = write_tuple(tmp_path, [z, z, z, np.eye(2)], "neg.json")
    code, out = run(capsys, "dilate", "--tuple", path, "--route", "H-sufficient")
    assert code == 1 and json.loads(out)["certificate"]["valid"] is False


def test_decompose_command(capsys, tmp_path):
    path = write_tuple(tmp_path, diag_tuple([(1, 0, 0, -1), (0, 0, 0, 0)]).entries)
    code, out = run(capsys, "decompose", "--tuple", path)
    rep = json.loads(out)["split"]
    assert code == 0 and rep["unitary_dim"] == 1 and rep["cnu_dim"] == 1


def test_sweep_command_json_lines(capsys):
    code, out = run(capsys, "sweep", "boundary-unitary", "--trials", "20")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(lines) == 21
    assert [r["trial"] for r in lines[:-1]] == list(range(20))
    assert lines[-1]["summary"] and lines[-1]["passed"] == 20 and "config" in lines[-1]


def test_sweep_workers_do_not_change_output(capsys):
    _, one = run(capsys, "--seed", "5", "sweep", "pi-membership", "--trials", "6")
    _, two = run(capsys, "sweep", "pi-membership", "--trials", "6", "--workers", "2", "--seed", "5")
    assert one == two


def test_byte_identical_output(tmp_path):
    args = [sys.executable, "-m", "hexablock", "point", "--c4", COUNTER, "--seed", "3"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and a


def test_output_file_and_pretty(tmp_path, capsys):
    dest = tmp_path / "out.json"
    assert cli.main(["--pretty", "--output", str(dest), "point", "--c2", "[0.6, 0.8]"]) == 0
    text = dest.read_text()
    assert text.startswith("{\n") and json.loads(text)["verdicts"]["B2"]["on_distinguished_boundary"]


def test_floats_round_trip():
    x = 0.1 + 0.2
    assert json.loads(dumps({"x": x}))["x"] == x
    assert json.loads(dumps({"z": 1 + 2j}))["z"] == [1.0, 2.0]
