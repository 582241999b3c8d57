"""HTTP policy-tuner service: session lifecycle, feedback, and what-if."""

import pytest
from fastapi.testclient import TestClient

from cybertweak.model import instance_to_dict
from cybertweak.service import create_app
from conftest import make_instance


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def instance_payload():
    inst = make_instance(
        [(10, 20, 1, 2), (5, 5, 1, 3), (8, 40, 1, 2)], b_d=10, b_a=5, b_e=25
    )
    return instance_to_dict(inst)


def create_session(client, payload):
    res = client.post("/sessions", json=payload)
    assert res.status_code == 201, res.text
    return res.json()["session_id"]


class TestSessions:
    def test_healthz(self, client):
        res = client.get("/healthz")
        assert res.status_code == 200
        assert res.json() == {"schema_version": 1, "status": "ok"}

    def test_create_and_get(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        res = client.get(f"/sessions/{sid}")
        assert res.status_code == 200
        body = res.json()
        assert body["solved"] is False
        assert body["schema_version"] == 1

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.post("/sessions/nope/solve", json={}).status_code == 404
        assert (
            client.get("/sessions/nope/what-if", params={"budget_ratio": 0.5}).status_code
            == 404
        )

    def test_invalid_instance_400(self, client, instance_payload):
        bad = dict(instance_payload)
        bad["websites"] = [dict(w) for w in instance_payload["websites"]]
        bad["websites"][1]["id"] = bad["websites"][0]["id"]
        res = client.post("/sessions", json=bad)
        assert res.status_code == 400
        assert any(
            "duplicate" in v["rule"] for v in res.json()["violations"]
        )


class TestSolve:
    def test_solve_returns_policy(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        res = client.post(f"/sessions/{sid}/solve", json={"method": "cybertweak"})
        assert res.status_code == 200, res.text
        body = res.json()
        assert body["value"] >= 0
        assert len(body["sites"]) == 3
        for site in body["sites"]:
            assert 0.0 <= site["x"] <= 1.0
            assert site["risk_band"] in ("Low", "Medium", "High")

    def test_unknown_method_400(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        res = client.post(f"/sessions/{sid}/solve", json={"method": "sorcery"})
        assert res.status_code == 400


class TestFeedback:
    def test_degraded_doubles_cost_and_resolves(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        client.post(f"/sessions/{sid}/solve", json={})
        res = client.post(
            f"/sessions/{sid}/feedback",
            json={"website_id": "w1", "verdict": "Degraded"},
        )
        assert res.status_code == 200, res.text
        body = res.json()
        assert body["new_c"] == pytest.approx(2.0)
        assert body["result"]["sites"][0]["c"] == pytest.approx(2.0)

    def test_feedback_cycle_restores_cost(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        client.post(f"/sessions/{sid}/solve", json={})
        client.post(
            f"/sessions/{sid}/feedback",
            json={"website_id": "w1", "verdict": "Degraded"},
        )
        res = client.post(
            f"/sessions/{sid}/feedback",
            json={"website_id": "w1", "verdict": "Acceptable"},
        )
        assert res.json()["new_c"] == pytest.approx(1.0)

    def test_cost_clamped(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        client.post(f"/sessions/{sid}/solve", json={})
        for _ in range(6):
            res = client.post(
                f"/sessions/{sid}/feedback",
                json={"website_id": "w2", "verdict": "Degraded"},
            )
        assert res.json()["new_c"] == pytest.approx(8.0)  # 8x the original cost

    def test_bad_verdict_400(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        res = client.post(
            f"/sessions/{sid}/feedback", json={"website_id": "w1", "verdict": "Meh"}
        )
        assert res.status_code == 400

    def test_unknown_website_404(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        res = client.post(
            f"/sessions/{sid}/feedback",
            json={"website_id": "w99", "verdict": "Degraded"},
        )
        assert res.status_code == 404


class TestWhatIf:
    def test_does_not_mutate_session(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        solved = client.post(f"/sessions/{sid}/solve", json={}).json()
        res = client.get(f"/sessions/{sid}/what-if", params={"budget_ratio": 1.0})
        assert res.status_code == 200
        assert res.json()["utility_ratio"] == pytest.approx(0.0, abs=1e-6)
        after = client.get(f"/sessions/{sid}").json()
        assert after["result"]["value"] == pytest.approx(solved["value"])
        assert after["budget_defender"] == instance_payload["budget_defender"]

    def test_out_of_range_400(self, client, instance_payload):
        sid = create_session(client, instance_payload)
        res = client.get(f"/sessions/{sid}/what-if", params={"budget_ratio": 1.5})
        assert res.status_code == 400
