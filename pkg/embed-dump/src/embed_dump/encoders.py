"""Sentence encoders: signed feature hashing (offline) or any
sentence-transformers model resolvable on this machine."""

import hashlib
import re

import numpy as np

from .errors import ModelError, OptionsError

HASHING_PREFIX = "hashing:"
DEFAULT_MODEL = "sentence-transformers/all-MiniLM-L6-v2"

_TOKEN = re.compile(r"\w+", re.UNICODE)


class HashingEncoder:
    """Deterministic bag-of-ngrams encoder with no model download.

    Word unigrams and bigrams are hashed into d signed buckets
    (blake2b, so output is independent of PYTHONHASHSEED and platform).
    Crude semantically, but deterministic, local, and never produces a
    zero vector, which makes it the reference encoder for tests.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise OptionsError(f"hashing dimension must be >= 1, got {dim}")
        self.dim = int(dim)

    def _features(self, unit: str) -> list[str]:
        tokens = _TOKEN.findall(unit.lower())
        if not tokens:
            # punctuation-only unit: hash it whole so the row is nonzero
            tokens = [unit.strip() or "<empty>"]
        return tokens + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]

    def encode(self, units: list[str]) -> np.ndarray:
        out = np.zeros((len(units), self.dim))
        for i, unit in enumerate(units):
            for feat in self._features(unit):
                h = hashlib.blake2b(feat.encode("utf-8"), digest_size=9)
                value = int.from_bytes(h.digest(), "big")
                sign = 1.0 if value & 1 else -1.0
                out[i, (value >> 1) % self.dim] += sign
        return out


class SentenceTransformerEncoder:
    """Wrapper over sentence_transformers; import deferred to first use."""

    def __init__(self, model: str):
        self.model = model
        self._st = None

    def _load(self):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ModelError(
                f"model {self.model!r} needs the sentence-transformers "
                f"package: {exc}"
            ) from exc
        try:
            return SentenceTransformer(self.model, device="cpu")
        except Exception as exc:
            raise ModelError(
                f"could not load model {self.model!r}: {exc}"
            ) from exc

    def encode(self, units: list[str]) -> np.ndarray:
        if self._st is None:
            self._st = self._load()
        try:
            vectors = self._st.encode(
                units, batch_size=64, convert_to_numpy=True,
                show_progress_bar=False,
            )
        except Exception as exc:
            raise ModelError(
                f"model {self.model!r} failed to encode: {exc}"
            ) from exc
        return np.asarray(vectors, dtype=np.float64)


def resolve_encoder(model: str):
    """hashing:<d> selects the offline encoder, anything else a
    sentence-transformers identifier (hub name or local path)."""
    if not model:
        raise OptionsError("model must be a non-empty string")
    if model.startswith(HASHING_PREFIX):
        raw = model[len(HASHING_PREFIX):]
        try:
            dim = int(raw)
        except ValueError:
            raise OptionsError(
                f"bad hashing dimension {raw!r} in {model!r}"
            ) from None
        return HashingEncoder(dim)
    return SentenceTransformerEncoder(model)
