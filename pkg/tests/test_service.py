import json
from fractions import Fraction as F

import pytest
from fastapi.testclient import TestClient

from tropd import tds_to_json
from tropd.service import create_app
from conftest import build_autocat, build_crossing1


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(budget_seconds=30.0))


def make_session(client, blob):
    r = client.post("/api/tds", json=blob)
    assert r.status_code == 201, r.text
    return r.json()["id"]


def test_presets_listed(client):
    names = client.get("/api/presets").json()["presets"]
    assert "autocatalator" in names and "genauto-5V_c" in names


def test_create_session_from_pairs_and_preset(client):
    sid = make_session(client, tds_to_json(build_autocat(F(1, 4))))
    assert sid
    sid2 = make_session(client, {"preset": "genauto-3"})
    assert sid2 and sid2 != sid


def test_create_session_schema_error(client):
    blob = tds_to_json(build_autocat(F(1, 4)))
    blob["pairs"][1]["degree"] = blob["pairs"][0]["degree"]
    r = client.post("/api/tds", json=blob)
    assert r.status_code == 400
    assert r.json()["error"] == "DuplicateDegreeInAxis"


def test_scene_with_override_and_idempotence(client):
    sid = make_session(client, tds_to_json(build_autocat(F(1, 4))))
    # the sink chamber: effective parameter -1/4 means pair-1 carries -5/4
    r1 = client.get(f"/api/tds/{sid}/scene", params={"set": "1:-5/4"})
    assert r1.status_code == 200
    body = r1.json()
    kinds = [s["kind"] for s in body["layers"]["singularities"]]
    assert kinds == ["Sink"]
    assert body["layers"]["cycles"] == []
    assert body["report"]["overall"] == "StructurallyStable"
    # source + sliding cycle chamber
    r2 = client.get(f"/api/tds/{sid}/scene")
    kinds2 = [s["kind"] for s in r2.json()["layers"]["singularities"]]
    assert kinds2 == ["Source"]
    assert [c["kind"] for c in r2.json()["layers"]["cycles"]] == ["sliding"]
    r3 = client.get(f"/api/tds/{sid}/scene", params={"set": "1:-5/4"})
    assert r3.content == r1.content


def test_scene_errors(client):
    assert client.get("/api/tds/nosuch/scene").status_code == 404
    sid = make_session(client, tds_to_json(build_autocat(F(1, 4))))
    r = client.get(f"/api/tds/{sid}/scene", params={"set": "1:abc"})
    assert r.status_code == 422


def test_orbit_endpoint(client):
    sid = make_session(client, tds_to_json(build_crossing1(-25)))
    r = client.post(f"/api/tds/{sid}/orbit", json={"start": ["2", "0"], "direction": "Forward"})
    assert r.status_code == 200
    body = r.json()
    assert body["termination"][0] == "Periodic"
    verts = [v["exact"] for v in body["vertices"]]
    assert verts[1] == ["2", "7"]
    bad = client.post(f"/api/tds/{sid}/orbit", json={"start": ["x", "y"]})
    assert bad.status_code == 422
    at_sing = client.post(f"/api/tds/{sid}/orbit", json={"start": ["-1/2", "2"]})
    assert at_sing.json()["termination"][0] == "Singularity"
    assert len(at_sing.json()["vertices"]) == 1


def test_graph_and_report_endpoints(client):
    sid = make_session(client, tds_to_json(build_crossing1(-25)))
    g = client.get(f"/api/tds/{sid}/graph").json()
    assert [[1, 0], [4, 2]] in g["arcs"]
    assert len(g["cycles"]) == 1
    rep = client.get(f"/api/tds/{sid}/report").json()
    assert rep["overall"] == "StructurallyStable"


def test_portrait_svg_endpoint(client):
    sid = make_session(client, {"preset": "autocatalator"})
    r = client.get(f"/api/tds/{sid}/portrait.svg")
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("image/svg")
    assert r.content.startswith(b"<svg")


def test_budget_returns_poll_token():
    app = create_app(budget_seconds=0.0)
    with TestClient(app) as c:
        # a parameter value nothing else caches, so the job takes real time
        sid = make_session(c, tds_to_json(build_autocat(F(123, 457))))
        r = c.get(f"/api/tds/{sid}/scene")
        assert r.status_code == 202
        token = r.json()["token"]
        import time
        for _ in range(100):
            pr = c.get(f"/api/jobs/{token}")
            if pr.status_code != 202:
                break
            time.sleep(0.05)
        assert pr.status_code == 200
        assert "layers" in pr.json()


def test_scene_layer_selection_graph_only(client):
    sid = make_session(client, tds_to_json(build_crossing1(-25)))
    r = client.get(f"/api/tds/{sid}/scene", params={"layers": "graph"})
    body = r.json()
    assert "graph" in body and body["graph"]["cycles"]
    assert body["layers"] == {}
    assert "report" not in body
