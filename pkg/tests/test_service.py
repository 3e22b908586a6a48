import pytest
from fastapi.testclient import TestClient

from conftest import build_runtime
from suql import MockAgentBackend
from suql.service import create_app


@pytest.fixture()
def client(restaurants):
    parser_table = {
        "cheap food": ["SELECT name FROM restaurants WHERE price = 'cheap' LIMIT 3;"],
        "food in Antarctica": [
            "SELECT name FROM restaurants WHERE location = 'Antarctica' LIMIT 3;"
        ],
    }
    app = create_app(
        restaurants.catalog,
        build_runtime(restaurants),
        MockAgentBackend({}, parser_table),
    )
    return TestClient(app, raise_server_exceptions=False)


class TestHealthAndSchema:
    def test_healthz(self, client):
        body = client.get("/healthz").json()
        assert body["status"] == "ok"
        assert body["tables"] == ["restaurants"]

    def test_schema_lists_columns(self, client):
        body = client.get("/schema").json()
        [table] = [t for t in body["tables"] if t["name"] == "restaurants"]
        names = [c["name"] for c in table["columns"]]
        assert "reviews" in names and "price" in names


class TestQuery:
    def test_query_wire_format(self, client):
        resp = client.post(
            "/query", json={"query": "SELECT name, rating FROM restaurants LIMIT 2"}
        )
        assert resp.status_code == 200
        body = resp.json()
        assert [c["name"] for c in body["columns"]] == ["name", "rating"]
        assert len(body["rows"]) == 2
        assert body["stats"]["rows_scanned"] == 2

    def test_syntax_error_shape(self, client):
        resp = client.post("/query", json={"query": "SELEC name"})
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "syntax_error"
        assert "SELEC" in body["message"]

    def test_bind_error_shape(self, client):
        resp = client.post("/query", json={"query": "SELECT nope FROM restaurants"})
        assert resp.status_code == 400
        assert resp.json()["code"] == "bind_error"

    def test_execution_error_shape(self, client):
        resp = client.post(
            "/query",
            json={"query": "SELECT name FROM restaurants ORDER BY answer(reviews, 'q?') - 1"},
        )
        assert resp.status_code in (422, 500)


class TestChat:
    def test_new_session_assigned(self, client):
        body = client.post("/chat", json={"utterance": "hi"}).json()
        assert body["session_id"]
        assert body["reply"]
        assert body["searched"] is None
        assert "suql" not in body

    def test_session_reuse_keeps_history(self, client):
        first = client.post("/chat", json={"utterance": "hi"}).json()
        sid = first["session_id"]
        second = client.post(
            "/chat", json={"session_id": sid, "utterance": "cheap food"}
        ).json()
        assert second["session_id"] == sid
        assert second["reply"].startswith(second["searched"])
        assert second["suql"].startswith("SELECT name FROM restaurants")
        assert second["results"]["rows"]
        assert second["trace"]["attempts"] == 1

    def test_no_result_turn(self, client):
        body = client.post("/chat", json={"utterance": "food in Antarctica"}).json()
        assert "no results" in body["reply"]
        assert body["results"]["rows"] == []

    def test_empty_utterance_rejected(self, client):
        resp = client.post("/chat", json={"utterance": "   "})
        assert resp.status_code == 400
        assert resp.json()["code"] == "empty_utterance"

    def test_trace_excludes_results(self, client):
        body = client.post("/chat", json={"utterance": "cheap food"}).json()
        assert "results" not in body["trace"]
        assert body["trace"]["searched"] == body["searched"]
