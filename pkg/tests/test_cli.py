import json

from click.testing import CliRunner

from medtk.cli import main
from medtk.groups import build_affine_coxeter

runner = CliRunner()


def invoke(args):
    return runner.invoke(main, args, catch_exceptions=False)


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_check_median_pass(tmp_path):
    f = write(tmp_path, "g.json", {"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]})
    out = invoke(["check-median", f])
    assert out.exit_code == 0
    assert json.loads(out.output)["median"] is True
    assert json.loads(out.output)["hyperplanes"] == 2


def test_check_median_fail(tmp_path):
    f = write(tmp_path, "g.json", {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]})
    out = invoke(["check-median", f])
    assert out.exit_code == 1
    data = json.loads(out.output)
    assert data["median"] is False and data["reason"] == "bad-triple"


def test_cubulate(tmp_path):
    f = write(tmp_path, "w.json", {"points": 4, "walls": [[0], [0, 1], [0, 1, 2]]})
    out = invoke(["cubulate", f])
    assert out.exit_code == 0
    data = json.loads(out.output)
    assert data["graph"]["n"] == 4 and data["hyperplanes"] == 3
    assert data["point_map"] == {"0": 0, "1": 1, "2": 2, "3": 3}


def test_cubulate_resource_cap(tmp_path):
    walls = [[p] for p in range(21)]
    f = write(tmp_path, "w.json", {"points": 22, "walls": walls})
    out = invoke(["cubulate", f])
    assert out.exit_code == 2


def test_cubulate_bad_input(tmp_path):
    f = write(tmp_path, "w.json", {"points": 3, "walls": [[0], [1, 2]]})
    out = invoke(["cubulate", f])
    assert out.exit_code == 2


def test_fw_abelian_witness(tmp_path):
    pres = build_affine_coxeter(1)
    f = write(tmp_path, "p.json", pres.to_json())
    out = invoke(["fw-abelian", "--pres", f, "--n", "1"])
    assert out.exit_code == 1
    data = json.loads(out.output)
    assert data["holds"] is False and data["subgroup_index"] == 1
    assert data["witness"]["value"] != "0"


def test_fw_abelian_holds(tmp_path):
    pres = build_affine_coxeter(2)
    f = write(tmp_path, "p.json", pres.to_json())
    out = invoke(["fw-abelian", "--pres", f, "--n", "2"])
    assert out.exit_code == 0
    assert json.loads(out.output)["holds"] is True


def test_scenario_commands():
    out = invoke(["cube-fix", "--k", "3"])
    assert out.exit_code == 0
    assert "overall: pass" in out.output
    out = invoke(["--format", "json", "cube-fix", "--k", "3"])
    assert out.exit_code == 0
    assert json.loads(out.output)["overall"] == "pass"
    out = invoke(["quasiline-dinfty", "--length", "4"])
    assert out.exit_code == 0


def test_scenario_failure_exit_code():
    out = invoke(["affine-coxeter", "--n", "1"])
    assert out.exit_code == 1
    assert "overall: fail" in out.output
