"""Dump pipeline: units -> encoder -> JSONL in the ekcpd wire format."""

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoders import DEFAULT_MODEL, resolve_encoder
from .errors import ModelError, OptionsError
from .split import SPLIT_NONE, SPLITTERS, load_units


@dataclass(frozen=True)
class DumpConfig:
    input: str
    output: str
    splitter: str = SPLIT_NONE
    model: str = DEFAULT_MODEL
    normalize: bool = True

    def __post_init__(self):
        if self.splitter not in SPLITTERS:
            raise OptionsError(
                f"splitter must be one of {SPLITTERS}, got {self.splitter!r}"
            )
        if not self.model:
            raise OptionsError("model must be a non-empty string")


def dump(config: DumpConfig) -> int:
    """Write one JSONL row per sentence unit; returns the row count.

    Rows carry id (zero-padded index), the unit text, and the float32
    embedding, in input order.  Output appears atomically: encode
    failures leave no partial file behind.
    """
    units = load_units(config.input, config.splitter)
    encoder = resolve_encoder(config.model)
    out_path = Path(config.output)
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    try:
        rows32 = np.zeros((0, 0), dtype=np.float32)
        if units:
            vectors = np.asarray(encoder.encode(units), dtype=np.float64)
            if vectors.ndim != 2 or vectors.shape[0] != len(units):
                raise ModelError(
                    f"encoder returned shape {vectors.shape} "
                    f"for {len(units)} units"
                )
            if config.normalize:
                norms = np.linalg.norm(vectors, axis=1, keepdims=True)
                bad = np.flatnonzero(norms[:, 0] == 0.0)
                if bad.size:
                    raise ModelError(
                        f"cannot normalize: zero embedding at unit {bad[0] + 1}"
                    )
                vectors = vectors / norms
            rows32 = vectors.astype(np.float32)
        with open(tmp_path, "w", encoding="utf-8") as fh:
            for i, unit in enumerate(units):
                obj = {
                    "id": f"{i:05d}",
                    "embedding": [float(x) for x in rows32[i]],
                    "text": unit,
                }
                fh.write(json.dumps(obj) + "\n")
        os.replace(tmp_path, out_path)
    finally:
        if tmp_path.exists():
            tmp_path.unlink()
    return len(units)
