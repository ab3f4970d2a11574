"""
HTTP surface tests against the FastAPI app.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest
from fastapi.testclient import TestClient

from app.config import get_settings
from app.main import app

client = TestClient(app)


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_classify():
    response = client.post("/api/v1/classify", json={"rho": "3/4"})
    assert response.status_code == 200
    body = response.json()
    assert body["version"] == 1
    assert [d["template"] for d in body["descriptors"]] == ["V(P2@2)", "V(P3@2) * M(7,g)", "V(P4@2) * M(5,g)"]
    assert body["descriptors"][1]["witness_count"] == 4
    assert body["descriptors"][1]["group"] == "Z2^3 x Z7"


def test_classify_expand():
    response = client.post("/api/v1/classify", json={"rho": "2/3", "expand_max_order": 30})
    assert response.status_code == 200
    family = response.json()["descriptors"][0]
    assert family["kind"] == "family"
    assert family["witness_count"] is None
    assert len(family["instances"]) == 9


@pytest.mark.parametrize("body", [{"rho": "1/3"}, {"rho": "three quarters"}, {"rho": "3/4", "expand_max_order": 0}])
def test_classify_rejects(body):
    assert client.post("/api/v1/classify", json=body).status_code == 422


def test_classify_groups():
    response = client.get("/api/v1/classify/groups", params={"rho": "3/4"})
    assert response.status_code == 200
    assert [g["group"] for g in response.json()["groups"]] == ["Z2^2", "Z2^3 x Z7", "Z2^4 x Z5"]


def test_lambda():
    response = client.post("/api/v1/lambda", json={"group": "Z3^2"})
    assert response.status_code == 200
    assert response.json()["lam"] == "8/9"
    response = client.post("/api/v1/lambda", json={"spec": "M(7,3)"})
    body = response.json()
    assert (body["lam"], body["Lambda"], body["cycle_structure"], body["order"]) == ("6/7", 6, "1^1 6^1", 7)


@pytest.mark.parametrize("body", [{}, {"group": "Z4", "spec": "M(4,3)"}, {"spec": "M(7,3)", "affine": True}])
def test_lambda_rejects(body):
    assert client.post("/api/v1/lambda", json=body).status_code == 422


def test_lambda_capacity(monkeypatch):
    monkeypatch.setenv("LAMBDA_ORBIT_CAPACITY", "8")
    get_settings.cache_clear()
    try:
        response = client.post("/api/v1/lambda", json={"spec": "V(x^4+1@2)"})
    finally:
        monkeypatch.delenv("LAMBDA_ORBIT_CAPACITY")
        get_settings.cache_clear()
    assert response.status_code == 413


def test_poly():
    body = client.post("/api/v1/poly", json={"poly": "x^4+x+1@2", "query": "primitive"}).json()
    assert body["irreducible"] and body["primitive"]
    body = client.post("/api/v1/poly", json={"poly": "x^4+x^2+1@2", "query": "factor"}).json()
    assert body["factors"] == ["(x^2+x+1@2)^2"]
    body = client.post("/api/v1/poly", json={"query": "enumerate", "p": 3, "degree": 2}).json()
    assert body["polys"] == ["x^2+x+2@3", "x^2+2x+2@3"]
    assert client.post("/api/v1/poly", json={"poly": "x^2+1", "query": "order"}).status_code == 422


def test_bounds():
    response = client.get("/api/v1/bounds/rho0", params={"decimal": 9})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"]
    assert body["rows"][0]["digits"] == "0.504307524"
    assert client.get("/api/v1/bounds/rho2").status_code == 422


def test_prng():
    response = client.post("/api/v1/prng/stream", json={"kind": "lcg", "m": 16, "a": 5, "c": 3, "count": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["words"] == [0, 3, 2, 13]
    assert body["states"] == "Z16"
    assert body["full_period"]
    assert body["certified_period"] == 16
    response = client.post("/api/v1/prng/stream", json={"kind": "vec", "p": 2, "poly": "x^4+x+1", "seed": 1, "count": 5})
    assert response.json()["words"] == [1, 2, 4, 8, 3]
    assert client.post("/api/v1/prng/stream", json={"kind": "lcg", "m": 10, "a": 2, "c": 1}).status_code == 422
