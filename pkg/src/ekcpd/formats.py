"""On-disk formats for embedding sequences and segmentations.

Two interchangeable sequence encodings:

* JSONL: one object per row, {"id": str?, "embedding": [floats], "text":
  str?}.  Values are quantized to float32 before writing and serialized
  with enough digits that reading restores the exact float32 values.
  Unknown keys are ignored, so sidecar metadata is harmless.
* binary: magic "EKCP", u32 version (=1), u64 T, u64 d, then T*d
  float32 little-endian row-major.  Fixed 24-byte header; total file
  size must be exactly 24 + 4*T*d bytes, checked on read.

Segmentations are a single JSON object {"T", "boundaries", "meta"}.
All readers raise FormatError with a position or byte diagnostic.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .sequence import EmbeddingSequence, Segmentation

MAGIC = b"EKCP"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")


def write_jsonl(
    path,
    seq: EmbeddingSequence,
    texts: list[str] | None = None,
) -> None:
    """Float32-exact JSONL; ids and texts are optional sidecars."""
    if texts is not None and len(texts) != seq.T:
        raise FormatError(f"got {len(texts)} texts for {seq.T} rows")
    rows32 = seq.vectors.astype(np.float32)
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(seq.T):
            obj = {}
            if seq.ids is not None:
                obj["id"] = seq.ids[i]
            obj["embedding"] = [float(x) for x in rows32[i]]
            if texts is not None:
                obj["text"] = texts[i]
            fh.write(json.dumps(obj) + "\n")


def read_jsonl(path) -> EmbeddingSequence:
    rows = []
    ids = []
    have_ids = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: line {lineno}: invalid JSON: {exc}") from None
            if not isinstance(obj, dict) or "embedding" not in obj:
                raise FormatError(f"{path}: line {lineno}: missing 'embedding'")
            emb = obj["embedding"]
            if not isinstance(emb, list) or not emb:
                raise FormatError(
                    f"{path}: line {lineno}: 'embedding' must be a non-empty list"
                )
            if rows and len(emb) != len(rows[0]):
                raise FormatError(
                    f"{path}: line {lineno}: dimension {len(emb)} != {len(rows[0])}"
                )
            rows.append(emb)
            row_has_id = "id" in obj
            if have_ids is None:
                have_ids = row_has_id
            elif have_ids != row_has_id:
                raise FormatError(
                    f"{path}: line {lineno}: 'id' present on some rows but not all"
                )
            if row_has_id:
                ids.append(str(obj["id"]))
    if not rows:
        raise FormatError(f"{path}: no rows")
    try:
        return EmbeddingSequence(
            np.asarray(rows, dtype=np.float64),
            ids=tuple(ids) if ids else None,
        )
    except (FormatError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_binary(path, seq: EmbeddingSequence) -> None:
    data = seq.vectors.astype("<f4").tobytes(order="C")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, seq.T, seq.d))
        fh.write(data)


def read_binary(path) -> EmbeddingSequence:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(
            f"{path}: too short for header, expected >= {_HEADER.size} bytes, "
            f"got {len(raw)}"
        )
    magic, version, T, d = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 4 * T * d
    if len(raw) != expected:
        raise FormatError(
            f"{path}: length mismatch for T={T}, d={d}: "
            f"expected {expected} bytes, got {len(raw)}"
        )
    if T < 1 or d < 1:
        raise FormatError(f"{path}: invalid shape T={T}, d={d}")
    arr = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(T, d)
    try:
        return EmbeddingSequence(arr.astype(np.float64))
    except (FormatError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from None


def read_sequence(path) -> EmbeddingSequence:
    """Dispatch on the magic bytes: binary if they match, else JSONL."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_binary(path)
    return read_jsonl(path)


def write_segmentation(path, seg: Segmentation, meta: dict | None = None) -> None:
    obj = {"T": seg.T, "boundaries": list(seg.boundaries), "meta": meta or {}}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)
        fh.write("\n")


def read_segmentation(path) -> tuple[Segmentation, dict]:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected a JSON object")
    for key in ("T", "boundaries"):
        if key not in obj:
            raise FormatError(f"{path}: missing '{key}'")
    try:
        seg = Segmentation(tuple(obj["boundaries"]))
    except (FormatError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad boundaries: {exc}") from None
    if seg.T != obj["T"]:
        raise FormatError(
            f"{path}: last boundary {seg.T} != declared T {obj['T']}"
        )
    meta = obj.get("meta") or {}
    if not isinstance(meta, dict):
        raise FormatError(f"{path}: 'meta' must be an object")
    return seg, meta
