"""Embeddings endpoint client: batching, ordering, retries, atomicity."""

import json

import numpy as np
import pytest
import requests

from ekcpd import AuthError, NetworkError, fetch_embeddings, read_jsonl
from ekcpd.client import API_KEY_ENV, BACKOFF_SECONDS


class FakeResponse:
    def __init__(self, status_code, payload=None, text=""):
        self.status_code = status_code
        self._payload = payload
        self.text = text

    def json(self):
        if self._payload is None:
            raise ValueError("no body")
        return self._payload


def embedding_for(text):
    """Deterministic 3-vector so tests can check order restoration."""
    h = float(sum(ord(c) for c in text) % 97)
    return [h, h + 0.5, -h]


class FakeSession:
    """Scripted /v1/embeddings endpoint.

    `script` is a list of status codes (or "error" for a connection
    failure) consumed one per POST; once exhausted, every call succeeds
    with embeddings for the posted batch, shuffled to exercise the
    index-based reordering.
    """

    def __init__(self, script=(), shuffle=True):
        self.script = list(script)
        self.shuffle = shuffle
        self.calls = []

    def post(self, url, headers=None, json=None, timeout=None):
        self.calls.append({
            "url": url,
            "headers": headers,
            "batch": list(json["input"]),
            "model": json["model"],
        })
        if self.script:
            step = self.script.pop(0)
            if step == "error":
                raise requests.ConnectionError("boom")
            if step != 200:
                return FakeResponse(step, text="scripted failure")
        batch = self.calls[-1]["batch"]
        data = [
            {"index": i, "embedding": embedding_for(t)}
            for i, t in enumerate(batch)
        ]
        if self.shuffle:
            data = data[::-1]
        return FakeResponse(200, {"data": data})

    def close(self):
        pass


@pytest.fixture
def texts_file(tmp_path):
    path = tmp_path / "texts.txt"
    path.write_text("\n".join(f"sentence {i}" for i in range(10)) + "\n")
    return path


@pytest.fixture
def no_sleep():
    slept = []
    return slept, slept.append


def fetch(texts_file, out, session, sleeps=None, **kw):
    sleeps = [] if sleeps is None else sleeps
    return fetch_embeddings(
        texts_file, out,
        endpoint="https://emb.example.com",
        model="test-model",
        api_key="sk-test",
        sleep=sleeps.append,
        session=session,
        **kw,
    )


class TestHappyPath:
    def test_writes_rows_in_input_order(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        session = FakeSession(shuffle=True)
        n = fetch(texts_file, out, session)
        assert n == 10
        seq = read_jsonl(out)
        expected = np.array([embedding_for(f"sentence {i}") for i in range(10)])
        assert np.allclose(seq.vectors, expected)

    def test_batching_boundaries(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        session = FakeSession()
        fetch(texts_file, out, session, batch_size=4)
        assert [len(c["batch"]) for c in session.calls] == [4, 4, 2]

    def test_url_and_headers(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        session = FakeSession()
        fetch(texts_file, out, session)
        call = session.calls[0]
        assert call["url"] == "https://emb.example.com/v1/embeddings"
        assert call["headers"]["Authorization"] == "Bearer sk-test"
        assert call["model"] == "test-model"

    def test_output_includes_texts_and_ids(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        fetch(texts_file, out, FakeSession())
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert rows[3]["text"] == "sentence 3"
        assert rows[3]["id"] == "3"

    def test_blank_lines_skipped(self, tmp_path):
        src = tmp_path / "texts.txt"
        src.write_text("one\n\n  \ntwo\n")
        out = tmp_path / "out.jsonl"
        n = fetch(src, out, FakeSession())
        assert n == 2

    def test_empty_input_writes_empty_output(self, tmp_path):
        src = tmp_path / "texts.txt"
        src.write_text("\n\n")
        out = tmp_path / "out.jsonl"
        n = fetch(src, out, FakeSession())
        assert n == 0
        assert out.exists() and out.read_text() == ""


class TestRetries:
    def test_backoff_schedule_on_429(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        session = FakeSession(script=[429, 429])
        sleeps = []
        fetch(texts_file, out, session, sleeps=sleeps)
        assert sleeps == [1.0, 2.0]
        assert out.exists()

    def test_5xx_and_connection_errors_retried(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        session = FakeSession(script=[500, "error", 503])
        sleeps = []
        fetch(texts_file, out, session, sleeps=sleeps)
        assert sleeps == list(BACKOFF_SECONDS)
        assert read_jsonl(out).T == 10

    def test_exhaustion_raises_network_error(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        session = FakeSession(script=[500, 500, 500, 500])
        with pytest.raises(NetworkError, match="4 attempts"):
            fetch(texts_file, out, session)
        assert not out.exists()

    def test_no_partial_output_after_first_batch_succeeds(
        self, tmp_path, texts_file
    ):
        out = tmp_path / "out.jsonl"
        # batch 1 fine; batch 2 fails all four attempts
        session = FakeSession(script=[200, 429, 429, 429, 429])
        with pytest.raises(NetworkError):
            fetch(texts_file, out, session, batch_size=5)
        assert not out.exists()
        assert not out.with_name(out.name + ".tmp").exists()


class TestAuth:
    @pytest.mark.parametrize("status", [401, 403])
    def test_auth_failure_aborts_without_retry(self, tmp_path, texts_file, status):
        out = tmp_path / "out.jsonl"
        session = FakeSession(script=[status])
        with pytest.raises(AuthError):
            fetch(texts_file, out, session)
        assert len(session.calls) == 1
        assert not out.exists()

    def test_missing_key_raises_before_any_request(
        self, tmp_path, texts_file, monkeypatch
    ):
        monkeypatch.delenv(API_KEY_ENV, raising=False)
        session = FakeSession()
        with pytest.raises(AuthError, match=API_KEY_ENV):
            fetch_embeddings(
                texts_file, tmp_path / "out.jsonl",
                endpoint="https://emb.example.com", model="m",
                session=session,
            )
        assert session.calls == []

    def test_env_key_used_when_not_passed(self, tmp_path, texts_file, monkeypatch):
        monkeypatch.setenv(API_KEY_ENV, "sk-env")
        session = FakeSession()
        fetch_embeddings(
            texts_file, tmp_path / "out.jsonl",
            endpoint="https://emb.example.com", model="m",
            session=session, sleep=lambda s: None,
        )
        assert session.calls[0]["headers"]["Authorization"] == "Bearer sk-env"


class TestResponseValidation:
    def test_unexpected_status_is_network_error(self, tmp_path, texts_file):
        out = tmp_path / "out.jsonl"
        session = FakeSession(script=[418])
        with pytest.raises(NetworkError, match="418"):
            fetch(texts_file, out, session)

    def test_short_response_rejected(self, tmp_path, texts_file):
        class ShortSession(FakeSession):
            def post(self, url, headers=None, json=None, timeout=None):
                return FakeResponse(
                    200, {"data": [{"index": 0, "embedding": [1.0]}]}
                )

        with pytest.raises(NetworkError, match="1 embeddings for 10"):
            fetch(texts_file, tmp_path / "out.jsonl", ShortSession())

    def test_malformed_payload_rejected(self, tmp_path, texts_file):
        class WeirdSession(FakeSession):
            def post(self, url, headers=None, json=None, timeout=None):
                return FakeResponse(200, {"rows": []})

        with pytest.raises(NetworkError, match="malformed"):
            fetch(texts_file, tmp_path / "out.jsonl", WeirdSession())

    def test_rejects_bad_batch_size(self, tmp_path, texts_file):
        with pytest.raises(ValueError):
            fetch(texts_file, tmp_path / "out.jsonl", FakeSession(), batch_size=0)
