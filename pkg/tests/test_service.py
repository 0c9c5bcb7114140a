import pytest
from fastapi.testclient import TestClient

from histq import export_scenario, get_builtin
from histq.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_list_scenarios(client):
    reply = client.get("/scenarios")
    assert reply.status_code == 200
    names = {s["name"] for s in reply.json()}
    assert "beamsplitter" in names and "spin-half" in names
    bs = next(s for s in reply.json() if s["name"] == "beamsplitter")
    assert bs["dim"] == 20
    assert "F2" in bs["families"]


def test_certify_builtin(client):
    reply = client.post("/certify", json={
        "scenario": "beamsplitter", "family": "F2", "condition": "strong"})
    assert reply.status_code == 200
    body = reply.json()
    assert body["verdict"] == "consistent"
    assert body["condition"] == "strong"
    assert sorted(body["weights"], reverse=True)[:2] == pytest.approx([0.5, 0.5])
    assert body["max_abs_residual"] <= 1e-9


def test_certify_reports_inconsistency_in_band(client):
    # an absurdly tight tolerance turns roundoff into a certification failure
    reply = client.post("/certify", json={
        "scenario": "three-channel", "family": "D2", "tolerance": 1e-18})
    assert reply.status_code == 200
    body = reply.json()
    assert body["verdict"] in ("consistent", "inconsistent")


def test_query_value_and_meaningless(client):
    ok = client.post("/query", json={
        "scenario": "beamsplitter", "family": "F3",
        "target": "c@t1", "data": "Cstar@t2"})
    assert ok.status_code == 200
    assert ok.json()["kind"] == "value"
    assert ok.json()["value"] == pytest.approx(1.0, abs=1e-9)

    bad = client.post("/query", json={
        "scenario": "beamsplitter", "family": "F2", "target": "S@t2"})
    assert bad.status_code == 200
    assert bad.json()["kind"] == "meaningless"
    assert bad.json()["reason"] == "incompatible-event"


def test_query_parse_error_is_http_400(client):
    reply = client.post("/query", json={
        "scenario": "beamsplitter", "family": "F2", "target": "c@t1 AND"})
    assert reply.status_code == 400


def test_unknown_scenario_and_family_are_http_404(client):
    assert client.post("/query", json={
        "scenario": "nope", "family": "F2", "target": "c@t1"}).status_code == 404
    assert client.post("/query", json={
        "scenario": "beamsplitter", "family": "nope",
        "target": "c@t1"}).status_code == 404


def test_missing_scenario_reference_is_http_400(client):
    assert client.post("/query", json={
        "family": "F2", "target": "c@t1"}).status_code == 400


def test_sample_endpoint(client):
    reply = client.post("/sample", json={
        "scenario": "three-channel", "family": "D1",
        "n_runs": 5_000, "seed": 11})
    assert reply.status_code == 200
    body = reply.json()
    assert sum(body["counts"]) == 5_000
    assert len(body["labels"]) == len(body["counts"])
    again = client.post("/sample", json={
        "scenario": "three-channel", "family": "D1",
        "n_runs": 5_000, "seed": 11})
    assert again.json()["counts"] == body["counts"]


def test_export_and_inline_document(client):
    exported = client.post("/export", json={"scenario": "spin-half"})
    assert exported.status_code == 200
    document = exported.json()["document"]

    reply = client.post("/query", json={
        "document": document, "family": "Z", "target": "Zplus@t1"})
    assert reply.status_code == 200
    assert reply.json()["value"] == pytest.approx(0.5, abs=1e-9)


def test_invalid_document_is_http_400(client):
    reply = client.post("/query", json={
        "document": "histq_scenario: 99", "family": "Z", "target": "Zplus@t1"})
    assert reply.status_code == 400


def test_export_matches_library(client):
    via_http = client.post("/export", json={"scenario": "av"}).json()["document"]
    assert via_http == export_scenario(get_builtin("av"))
