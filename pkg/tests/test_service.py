from fastapi.testclient import TestClient

from medtk.groups import build_affine_coxeter
from medtk.service import app

client = TestClient(app)


def test_list_scenarios():
    resp = client.get("/scenarios")
    assert resp.status_code == 200
    assert "duality" in resp.json()["scenarios"]


def test_scenario_endpoint():
    resp = client.post("/scenario/cube-fix", json={"params": {"k": 3}})
    assert resp.status_code == 200
    data = resp.json()
    assert data["overall"] == "pass" and data["scenario"] == "cube-fix"


def test_scenario_unknown():
    resp = client.post("/scenario/nonsense", json={"params": {}})
    assert resp.status_code == 400
    assert resp.json()["detail"]["kind"] == "input"


def test_check_median_endpoint():
    resp = client.post("/check-median", json={"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]})
    assert resp.status_code == 200
    assert resp.json() == {"median": True, "hyperplanes": 2}
    resp = client.post("/check-median", json={"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]})
    assert resp.json()["median"] is False


def test_cubulate_endpoint():
    resp = client.post("/cubulate", json={"points": 4, "walls": [[0], [0, 1], [0, 1, 2]]})
    assert resp.status_code == 200
    data = resp.json()
    assert data["graph"]["n"] == 4 and data["hyperplanes"] == 3


def test_cubulate_bad_wall():
    resp = client.post("/cubulate", json={"points": 3, "walls": [[0], [1, 2]]})
    assert resp.status_code == 400


def test_cubulate_resource_cap():
    resp = client.post("/cubulate", json={"points": 22, "walls": [[p] for p in range(21)]})
    assert resp.status_code == 422
    assert resp.json()["detail"]["kind"] == "resource"


def test_fw_abelian_endpoint():
    pres = build_affine_coxeter(1)
    resp = client.post("/fw-abelian", json={"presentation": pres.to_json(), "n": 1})
    assert resp.status_code == 200
    data = resp.json()
    assert data["holds"] is False and data["witness"]["value"] != "0"
    pres2 = build_affine_coxeter(2)
    resp = client.post("/fw-abelian", json={"presentation": pres2.to_json(), "n": 2})
    assert resp.json()["holds"] is True


def test_validation_errors():
    resp = client.post("/check-median", json={"n": -1, "edges": []})
    assert resp.status_code == 422
    resp = client.post("/fw-abelian", json={"presentation": {"generators": 1, "relators": []}, "n": 0})
    assert resp.status_code == 422
