"""HTTP API contract: shapes, error bodies, durability, concurrency."""

import concurrent.futures

import pytest
from fastapi.testclient import TestClient

from docbot.gendata import showcase_document
from docbot.service import ServiceConfig, create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(ServiceConfig(data_dir=str(tmp_path / "data")))
    with TestClient(app) as c:
        yield c


def ingest_showcase(client):
    title, text = showcase_document()
    return client.post("/api/documents", json={"title": title, "text": text})


class TestDocuments:
    def test_ingest_counts(self, client):
        r = ingest_showcase(client)
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"doc_id", "n_sentences", "n_triples"}
        assert body["n_sentences"] == 10
        assert body["n_triples"] >= 3

    def test_two_sentence_document(self, client):
        r = client.post("/api/documents", json={"text": "One sentence. Two sentences."})
        assert r.json()["n_sentences"] == 2

    def test_empty_text_rejected(self, client):
        r = client.post("/api/documents", json={"text": "   "})
        assert r.status_code == 400
        assert set(r.json()) == {"status", "code", "message"}
        assert r.json()["code"] == "bad_request"

    def test_size_cap(self, tmp_path):
        app = create_app(ServiceConfig(data_dir=str(tmp_path / "d"), max_document_bytes=64))
        with TestClient(app) as client:
            r = client.post("/api/documents", json={"text": "word " * 100})
            assert r.status_code == 400

    def test_missing_field_is_bad_request(self, client):
        r = client.post("/api/documents", json={"title": "no text"})
        assert r.status_code == 400
        assert r.json()["code"] == "bad_request"


class TestSessionsAndMessages:
    def test_full_round_trip_shapes(self, client):
        doc_id = ingest_showcase(client).json()["doc_id"]
        r = client.post("/api/sessions", json={"doc_ids": [doc_id]})
        assert set(r.json()) == {"session_id"}
        sid = r.json()["session_id"]
        r = client.post(f"/api/sessions/{sid}/messages", json={"text": "hello!"})
        body = r.json()
        assert set(body) == {"reply", "origin", "score", "trace"}
        assert body["origin"] == "chitchat"
        r = client.get(f"/api/sessions/{sid}")
        body = r.json()
        assert set(body) == {"session_id", "doc_ids", "history"}
        assert [u["role"] for u in body["history"]] == ["user", "bot"]
        for u in body["history"]:
            assert set(u) == {"role", "text", "timestamp"}

    def test_two_messages_give_history_of_four(self, client):
        doc_id = ingest_showcase(client).json()["doc_id"]
        sid = client.post("/api/sessions", json={"doc_ids": [doc_id]}).json()["session_id"]
        client.post(f"/api/sessions/{sid}/messages", json={"text": "one"})
        client.post(f"/api/sessions/{sid}/messages", json={"text": "two"})
        assert len(client.get(f"/api/sessions/{sid}").json()["history"]) == 4

    def test_unknown_doc_404(self, client):
        r = client.post("/api/sessions", json={"doc_ids": ["nope"]})
        assert r.status_code == 404
        assert r.json()["code"] == "doc_not_found"

    def test_unknown_session_404(self, client):
        r = client.post("/api/sessions/deadbeef/messages", json={"text": "x"})
        assert r.status_code == 404
        assert r.json()["code"] == "session_not_found"
        r = client.get("/api/sessions/deadbeef")
        assert r.status_code == 404

    def test_trace_sorted_descending(self, client, tmp_path):
        # no matcher model -> chitchat with empty trace; shапe still verified
        doc_id = ingest_showcase(client).json()["doc_id"]
        sid = client.post("/api/sessions", json={"doc_ids": [doc_id]}).json()["session_id"]
        r = client.post(
            f"/api/sessions/{sid}/messages",
            json={"text": "how much does the falcon x1 laptop weigh?"},
        )
        trace = r.json()["trace"]
        assert trace == sorted(trace, key=lambda t: -t["score"])


class TestHealth:
    def test_health_before_ingestion(self, client):
        body = client.get("/api/health").json()
        assert body == {"status": "ok", "model_loaded": False, "index_docs": 0}

    def test_health_counts_documents(self, client):
        ingest_showcase(client)
        assert client.get("/api/health").json()["index_docs"] == 1

    def test_config_endpoint_exposes_threshold(self, client):
        body = client.get("/api/config").json()
        assert body == {"score_threshold": 0.3, "retrieval_k": 2}


class TestDurability:
    def test_documents_survive_restart_sessions_do_not(self, tmp_path):
        data_dir = str(tmp_path / "data")
        app1 = create_app(ServiceConfig(data_dir=data_dir))
        with TestClient(app1) as c1:
            doc_id = ingest_showcase(c1).json()["doc_id"]
            sid = c1.post("/api/sessions", json={"doc_ids": [doc_id]}).json()["session_id"]
        app2 = create_app(ServiceConfig(data_dir=data_dir))
        with TestClient(app2) as c2:
            assert c2.get("/api/health").json()["index_docs"] == 1
            r = c2.post("/api/sessions", json={"doc_ids": [doc_id]})
            assert r.status_code == 200
            sid2 = r.json()["session_id"]
            r = c2.post(f"/api/sessions/{sid2}/messages", json={"text": "hello"})
            assert r.status_code == 200
            assert c2.get(f"/api/sessions/{sid}").status_code == 404


class TestConcurrentSessions:
    def test_parallel_sessions_are_isolated(self, client):
        doc_id = ingest_showcase(client).json()["doc_id"]
        sids = [
            client.post("/api/sessions", json={"doc_ids": [doc_id]}).json()["session_id"]
            for _ in range(20)
        ]

        def run(pair):
            n, sid = pair
            for i in range(3):
                r = client.post(f"/api/sessions/{sid}/messages", json={"text": f"q {n}-{i}"})
                assert r.status_code == 200
            return sid

        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as ex:
            list(ex.map(run, enumerate(sids)))
        for n, sid in enumerate(sids):
            history = client.get(f"/api/sessions/{sid}").json()["history"]
            users = [u["text"] for u in history if u["role"] == "user"]
            assert users == [f"q {n}-{i}" for i in range(3)]


class TestErrorShape:
    def test_unknown_route_shares_the_error_shape(self, client):
        r = client.get("/api/not-a-route")
        assert r.status_code == 404
        assert set(r.json()) == {"status", "code", "message"}


class TestTripleCounts:
    def test_document_with_three_triples_reports_three(self, client):
        text = (
            "The laptop has a bright screen and a metal body. "
            "The case protects the screen from scratches and the stand holds the tablet at any angle."
        )
        r = client.post("/api/documents", json={"text": text})
        assert r.json()["n_triples"] == 3


class TestConfigFile:
    def test_key_value_file_with_env_overrides(self, tmp_path, monkeypatch):
        from docbot.service import load_config

        conf = tmp_path / "svc.conf"
        conf.write_text(
            "# demo config\n"
            "data_dir = /tmp/x\n"
            "listen = 0.0.0.0:9999\n"
            "score_threshold = 0.4\n"
            "retrieval_k = 3\n"
            "include_bot_turns = false\n"
        )
        monkeypatch.setenv("DOCBOT_DATA_DIR", "/tmp/override")
        cfg = load_config(conf)
        assert cfg.data_dir == "/tmp/override"  # env wins
        assert cfg.listen == "0.0.0.0:9999"
        assert cfg.score_threshold == 0.4
        assert cfg.retrieval_k == 3
        assert cfg.include_bot_turns is False

    def test_unknown_key_rejected(self, tmp_path):
        from docbot.errors import ConfigurationError
        from docbot.service import load_config

        conf = tmp_path / "svc.conf"
        conf.write_text("no_such_key = 1\n")
        with pytest.raises(ConfigurationError):
            load_config(conf)

    def test_custom_lexicon_path(self, tmp_path):
        lex = tmp_path / "lexicon.tsv"
        lex.write_text("frobnicates\tverb\n")
        from docbot.service import ServiceConfig, create_app

        app = create_app(ServiceConfig(data_dir=str(tmp_path / "d"), pos_lexicon=str(lex)))
        with TestClient(app) as client:
            r = client.post("/api/documents", json={"text": "The gadget frobnicates the widget."})
            assert r.json()["n_triples"] == 1
