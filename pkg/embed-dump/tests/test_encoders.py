"""Encoder resolution and the offline hashing encoder."""

import numpy as np
import pytest

from embed_dump import (
    HashingEncoder,
    ModelError,
    OptionsError,
    SentenceTransformerEncoder,
    resolve_encoder,
)


class TestHashingEncoder:
    def test_shape_and_dtype(self):
        enc = HashingEncoder(32)
        out = enc.encode(["one sentence", "another one"])
        assert out.shape == (2, 32)
        assert out.dtype == np.float64

    def test_deterministic_across_instances(self):
        a = HashingEncoder(64).encode(["the same text"])
        b = HashingEncoder(64).encode(["the same text"])
        np.testing.assert_array_equal(a, b)

    def test_rows_independent_of_batching(self):
        units = ["alpha beta", "gamma delta", "epsilon"]
        whole = HashingEncoder(64).encode(units)
        single = np.vstack([HashingEncoder(64).encode([u]) for u in units])
        np.testing.assert_array_equal(whole, single)

    def test_identical_units_identical_rows(self):
        out = HashingEncoder(64).encode(["twin text", "twin text"])
        np.testing.assert_array_equal(out[0], out[1])

    def test_different_units_differ(self):
        out = HashingEncoder(256).encode(
            ["rain fell on the coast", "the orchestra played a chorale"]
        )
        assert not np.array_equal(out[0], out[1])

    def test_case_insensitive_tokens(self):
        out = HashingEncoder(64).encode(["Rain Fell", "rain fell"])
        np.testing.assert_array_equal(out[0], out[1])

    def test_word_order_matters_through_bigrams(self):
        out = HashingEncoder(256).encode(["alpha beta", "beta alpha"])
        assert not np.array_equal(out[0], out[1])

    def test_punctuation_only_unit_is_nonzero(self):
        out = HashingEncoder(32).encode(["?!...", "---"])
        assert np.linalg.norm(out[0]) > 0
        assert np.linalg.norm(out[1]) > 0

    def test_rejects_bad_dimension(self):
        with pytest.raises(OptionsError):
            HashingEncoder(0)


class TestResolveEncoder:
    def test_hashing_spec(self):
        enc = resolve_encoder("hashing:128")
        assert isinstance(enc, HashingEncoder)
        assert enc.dim == 128

    def test_bad_hashing_dim(self):
        with pytest.raises(OptionsError):
            resolve_encoder("hashing:many")
        with pytest.raises(OptionsError):
            resolve_encoder("hashing:0")

    def test_empty_model_rejected(self):
        with pytest.raises(OptionsError):
            resolve_encoder("")

    def test_other_names_go_to_sentence_transformers(self):
        enc = resolve_encoder("some/encoder-name")
        assert isinstance(enc, SentenceTransformerEncoder)
        assert enc.model == "some/encoder-name"

    def test_load_failure_becomes_model_error(self, monkeypatch):
        enc = resolve_encoder("some/encoder-name")
        monkeypatch.setattr(
            SentenceTransformerEncoder, "_load",
            lambda self: (_ for _ in ()).throw(ModelError("no such model")),
        )
        with pytest.raises(ModelError):
            enc.encode(["text"])
