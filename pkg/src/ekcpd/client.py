"""Client for OpenAI-compatible /v1/embeddings endpoints.

Reads one text per input line, posts batches, and writes the engine's
JSONL format.  Writes go to a temp file renamed into place on success,
so a crash or retry exhaustion never leaves a partial output file.
"""

from __future__ import annotations

import json
import os
import time
from pathlib import Path

import numpy as np
import requests

from .errors import AuthError, FormatError, NetworkError
from .formats import write_jsonl
from .sequence import EmbeddingSequence

API_KEY_ENV = "EKCPD_API_KEY"
DEFAULT_BATCH_SIZE = 64
# one initial attempt plus one retry per backoff entry
BACKOFF_SECONDS = (1.0, 2.0, 4.0)


def _post_batch(
    session: requests.Session,
    url: str,
    api_key: str,
    model: str,
    batch: list[str],
    timeout: float,
    sleep,
) -> list[list[float]]:
    last_err = None
    for attempt in range(len(BACKOFF_SECONDS) + 1):
        if attempt > 0:
            sleep(BACKOFF_SECONDS[attempt - 1])
        try:
            resp = session.post(
                url,
                headers={"Authorization": f"Bearer {api_key}"},
                json={"model": model, "input": batch},
                timeout=timeout,
            )
        except requests.RequestException as exc:
            last_err = f"connection error: {exc}"
            continue
        if resp.status_code in (401, 403):
            raise AuthError(
                f"endpoint rejected credentials (HTTP {resp.status_code}); "
                f"check {API_KEY_ENV}"
            )
        if resp.status_code == 429 or resp.status_code >= 500:
            last_err = f"HTTP {resp.status_code}"
            continue
        if resp.status_code != 200:
            raise NetworkError(f"unexpected HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            payload = resp.json()
            data = payload["data"]
            # responses may arrive out of order; "index" restores it
            data = sorted(data, key=lambda item: item["index"])
            vecs = [item["embedding"] for item in data]
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkError(f"malformed response payload: {exc}") from None
        if len(vecs) != len(batch):
            raise NetworkError(
                f"endpoint returned {len(vecs)} embeddings for {len(batch)} inputs"
            )
        return vecs
    raise NetworkError(
        f"batch failed after {len(BACKOFF_SECONDS) + 1} attempts ({last_err})"
    )


def fetch_embeddings(
    input_path,
    out_path,
    *,
    endpoint: str,
    model: str,
    batch_size: int = DEFAULT_BATCH_SIZE,
    api_key: str | None = None,
    timeout: float = 60.0,
    sleep=time.sleep,
    session: requests.Session | None = None,
) -> int:
    """Embed each line of input_path; returns the number of rows written.

    Batches are posted sequentially with up to three retries each
    (backoff 1s, 2s, 4s) on 429 and 5xx; 401/403 abort immediately.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if api_key is None:
        api_key = os.environ.get(API_KEY_ENV, "")
    if not api_key:
        raise AuthError(f"no API key: set {API_KEY_ENV} or pass api_key")
    lines = Path(input_path).read_text(encoding="utf-8").splitlines()
    texts = [ln for ln in lines if ln.strip()]
    out_path = Path(out_path)
    if not texts:
        # nothing to embed is not an error: write an empty artifact
        tmp_path = out_path.with_name(out_path.name + ".tmp")
        tmp_path.write_text("", encoding="utf-8")
        os.replace(tmp_path, out_path)
        return 0
    url = endpoint.rstrip("/") + "/v1/embeddings"
    own_session = session is None
    if own_session:
        session = requests.Session()
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    try:
        vectors: list[list[float]] = []
        for start in range(0, len(texts), batch_size):
            batch = texts[start:start + batch_size]
            vectors.extend(
                _post_batch(session, url, api_key, model, batch, timeout, sleep)
            )
        seq = EmbeddingSequence(
            np.asarray(vectors, dtype=np.float64),
            ids=tuple(str(i) for i in range(len(texts))),
        )
        write_jsonl(tmp_path, seq, texts=texts)
        os.replace(tmp_path, out_path)
    finally:
        if own_session:
            session.close()
        if tmp_path.exists():
            tmp_path.unlink()
    return len(texts)
