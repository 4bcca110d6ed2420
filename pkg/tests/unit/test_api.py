import pytest
from fastapi.testclient import TestClient

from core.instance_io import instance_to_dict, solution_to_dict
from network.api_server import app


@pytest.fixture
def client():
    return TestClient(app)


def test_health_and_algorithms(client):
    assert client.get("/health").json() == {"status": "ok"}
    assert "jsg-astar" in client.get("/algorithms").json()["algorithms"]


def test_solve_t1(client, t1):
    response = client.post("/solve", json={"instance": instance_to_dict(t1), "algo": "ces"})
    assert response.status_code == 200
    body = response.json()
    assert body["cost"] == 3
    assert body["solution"]["paths"] == [[0, 1, 2], [3, 3, 3]]
    assert body["counters"]["cost_calculations"] == 4


def test_solve_rejects_unknown_algorithm(client, t1):
    response = client.post("/solve", json={"instance": instance_to_dict(t1), "algo": "dijkstra"})
    assert response.status_code == 400


def test_solve_rejects_invalid_instance(client, t1):
    data = instance_to_dict(t1)
    data["goals"] = [9, 3]
    response = client.post("/solve", json={"instance": data})
    assert response.status_code == 400
    assert "goals[0]" in response.json()["detail"]


def test_oracle_limit_is_a_client_error(client):
    data = {
        "nodes": 7,
        "edges": [[i, i + 1, 1] for i in range(6)],
        "risky": [],
        "starts": [0],
        "goals": [6],
        "supporter_cost": 1,
    }
    response = client.post("/solve", json={"instance": data, "algo": "oracle"})
    assert response.status_code == 400


def test_verify(client, t1, t1_optimal):
    response = client.post("/verify", json={
        "instance": instance_to_dict(t1),
        "solution": solution_to_dict(t1_optimal),
    })
    assert response.json() == {"valid": True, "cost": 3, "violations": []}


def test_request_extra_field_is_rejected(client, t1):
    response = client.post("/solve", json={"instance": instance_to_dict(t1), "colour": "blue"})
    assert response.status_code == 422


def test_oracle_horizon_too_short_is_a_client_error(client, t1):
    data = instance_to_dict(t1)
    data["horizon"] = 1
    response = client.post("/solve", json={"instance": data, "algo": "oracle"})
    assert response.status_code == 400
    assert "within 1 steps" in response.json()["detail"]
