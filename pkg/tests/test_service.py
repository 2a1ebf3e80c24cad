import base64

import numpy as np
import pytest
from fastapi.testclient import TestClient

from coupledmaps.io_export import RunConfig, merge_run_config, write_pgm
from coupledmaps.runs import execute_run
from coupledmaps.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


HEADLINE_SMALL = {
    "scheme": "simultaneous", "fx": "logistic", "gy": "logistic",
    "b": 0.4, "r": 0.6, "bp": 0.4, "rp": 0.6,
    "burn": 20_000, "plot": 10_000, "x0": 0.7, "y0": 0.6,
    "width": 120, "height": 120,
}


def test_root_lists_endpoints(client):
    body = client.get("/").json()
    assert "/render" in body["endpoints"]


def test_render_pixels_equal_direct_pipeline(client):
    response = client.post("/render", json=HEADLINE_SMALL)
    assert response.status_code == 200
    body = response.json()
    doc = merge_run_config(RunConfig(width=120, height=120), dict(HEADLINE_SMALL))
    expected = execute_run(doc).image
    pixels = base64.b64decode(body["pixels"])
    assert pixels == expected.tobytes()
    assert body["width"] == 120 and body["height"] == 120
    assert body["params"]["burn"] == 20_000


def test_render_identical_requests_identical_bodies(client):
    first = client.post("/render", json=HEADLINE_SMALL)
    second = client.post("/render", json=HEADLINE_SMALL)
    assert first.content == second.content


def test_render_cache_returns_before_recompute(client):
    import time

    request = dict(HEADLINE_SMALL, burn=200_000)
    t0 = time.perf_counter()
    client.post("/render", json=request)
    cold = time.perf_counter() - t0
    t0 = time.perf_counter()
    client.post("/render", json=request)
    warm = time.perf_counter() - t0
    assert warm < cold / 5


def test_render_rejects_invalid_coupler(client):
    response = client.post("/render", json={"b": 0.7, "r": 0.7, "burn": 1, "plot": 1})
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert any("base + rate <= 1 failed" in v for v in detail["violations"])


def test_malformed_request_structured_error_connection_usable(client):
    response = client.post("/render", json={"plott": 100})
    assert response.status_code == 422
    assert response.json()["detail"][0]["type"] == "extra_forbidden"
    assert client.get("/").status_code == 200


def test_render_seeded_default(client):
    body = client.post("/render", json={"burn": 100, "plot": 100, "width": 16, "height": 16}).json()
    assert body["params"]["seed"] == 0
    assert body["params"]["x0"] is None


def test_render_scheme_toggle_identical_when_rp_zero(client):
    # with r' = 0 the two coupling schemes coincide, and so must their pixels
    base = {"b": 0.4, "r": 0.5, "bp": 0.3, "rp": 0.0, "burn": 5_000, "plot": 5_000,
            "seed": 2, "width": 80, "height": 80}
    sim = client.post("/render", json=dict(base, scheme="simultaneous")).json()["pixels"]
    seq = client.post("/render", json=dict(base, scheme="sequential")).json()["pixels"]
    assert sim == seq


def test_cycle_endpoint_fixed_point(client):
    request = {"b": 0.5, "r": 0.0, "bp": 0.5, "rp": 0.0, "burn": 10_000, "plot": 10,
               "seed": 3, "width": 32, "height": 32}
    body = client.post("/cycle", json=request).json()
    assert body["found"] is True
    assert body["cycle"]["period"] == 1
    x, y = body["cycle"]["points"][0]
    assert abs(x - 0.5) < 1e-6 and abs(y - 0.5) < 1e-6


def test_cycle_endpoint_chaotic_none(client):
    request = dict(HEADLINE_SMALL, burn=50_000, plot=10)
    body = client.post("/cycle", json=request).json()
    assert body["found"] is False and body["cycle"] is None


def test_stability_endpoint_verdict(client):
    request = {"b": 0.5, "r": 0.0, "bp": 0.5, "rp": 0.0, "burn": 3_000, "plot": 500,
               "width": 50, "height": 50, "trials": 3}
    body = client.post("/stability", json=request).json()
    assert body["verdict"] == "stable"
    assert len(body["runs"]) == 4  # trials + doubled-burn run
    assert len(body["pairs"]) == 6
    assert all(p["dilated_jaccard"] == 1.0 for p in body["pairs"])


def test_stability_rejects_single_trial(client):
    request = {"burn": 10, "plot": 10, "trials": 1}
    assert client.post("/stability", json=request).status_code == 400


def test_frames_endpoint_serves_files(tmp_path):
    image = np.arange(16, dtype=np.uint8).reshape(4, 4)
    write_pgm(image, tmp_path / "frame_00000.pgm")
    client = TestClient(create_app(frames_dir=tmp_path))
    response = client.get("/frames/frame_00000.pgm")
    assert response.status_code == 200
    assert response.content == (tmp_path / "frame_00000.pgm").read_bytes()


def test_frames_endpoint_blocks_traversal(tmp_path):
    (tmp_path / "inner").mkdir()
    client = TestClient(create_app(frames_dir=tmp_path / "inner"))
    response = client.get("/frames/../secret.txt")
    assert response.status_code in (403, 404)


def test_frames_endpoint_missing_file(tmp_path):
    client = TestClient(create_app(frames_dir=tmp_path))
    assert client.get("/frames/nope.pgm").status_code == 404


def test_frames_endpoint_unconfigured(client):
    assert client.get("/frames/whatever.pgm").status_code == 404
