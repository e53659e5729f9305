
from fastapi.testclient import TestClient

from redlab.api import app

client = TestClient(app)

ZERO = {"space": "X0"}
TOP = {"space": "X0", "tail": {"type": "affine", "r": 1}}
CYCLE = {"space": "Pomega", "values": ["3/2", "7/4"], "interval": {"lo": "5/4", "hi": "2"}}


def test_create_schedule():
    response = client.post("/schedules", json={"flavor": "c0", "base_p": 1.5, "n_max": 6})
    assert response.status_code == 200
    data = response.json()
    assert data["flavor"] == "c0"
    assert len(data["K"]) == 6
    assert all(clause["holds"] for clause in data["clauses"])


def test_infeasible_schedule_is_a_bad_request():
    response = client.post("/schedules", json={"base_p": 1.99, "n_max": 12, "margin": 0.9})
    assert response.status_code == 400
    assert response.json()["detail"]["clause"] == "series budget"


def test_malformed_body():
    assert client.post("/schedules", json={"flavor": "lp"}).status_code == 422


def test_decide():
    response = client.post("/decide/H0", json={"a": ZERO, "b": {"space": "X0", "prefix": [0, 1, 2]}})
    assert response.status_code == 200
    assert response.json() == {"related": True, "witness": 2}
    response = client.post("/decide/H0", json={"a": ZERO, "b": TOP})
    assert response.json()["related"] is False


def test_decide_wrong_space():
    response = client.post("/decide/=+", json={"a": CYCLE, "b": ZERO})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "type-mismatch"


def test_decide_unknown_relation():
    assert client.post("/decide/E9", json={"a": ZERO, "b": ZERO}).status_code == 404


def test_reduce_lp_with_schedule():
    schedule = client.post("/schedules", json={"base_p": 1.5, "n_max": 5}).json()
    response = client.post("/reduce/lp", json={"point": TOP, "schedule": schedule})
    assert response.status_code == 200
    assert len(response.json()["blocks"]) == 5


def test_reduce_lp_sum():
    response = client.post("/reduce/Lp", json={"point": CYCLE, "base_p": "5/4"})
    assert response.status_code == 200
    assert response.json()["parts"] == [{"num": 3, "den": 2}, {"num": 7, "den": 4}]


def test_reduce_errors():
    assert client.post("/reduce/Lp", json={"point": CYCLE}).status_code == 400
    assert client.post("/reduce/l7", json={"point": ZERO}).status_code == 404
    response = client.post("/reduce/lp", json={"point": {"space": "X0", "prefix": [3]}, "schedule": None})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "invalid-point"


def test_verify_suite():
    response = client.post("/verify/j-embed", json={"seed": 5, "cases": 4})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["summary"] == "suite=j-embed cases=4 holds=4 failed=0"
    assert len(data["results"]) == 4


def test_verify_unknown_suite():
    assert client.post("/verify/lemma99", json={}).status_code == 400


def test_hierarchy_endpoints():
    dot = client.get("/hierarchy/dot")
    assert dot.status_code == 200
    assert '"E1" -> "EKsigma";' in dot.text
    response = client.get("/hierarchy/reachable", params={"source": "E0", "target": "ESinf"})
    assert response.json() == {"source": "E0", "target": "ESinf", "reachable": True, "strict": True}
    assert client.get("/hierarchy/reachable", params={"source": "E0", "target": "E9"}).status_code == 404
