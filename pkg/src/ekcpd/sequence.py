"""Core data types: embedding sequences and segmentations.

Positions are 1-based throughout: a sequence has rows 1..T and a
segmentation is the strictly increasing list of inclusive segment ends,
always finishing with T.  Change points are the boundaries except the
final T, so a single-segment sequence has zero change points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSequenceError, FormatError, ZeroVectorError

# Unit-norm slack accepted when a sequence claims normalized rows.
UNIT_NORM_TOL = 1e-6

# Norms at or below this are treated as zero vectors when normalizing.
ZERO_NORM_TOL = 1e-12


@dataclass(frozen=True)
class EmbeddingSequence:
    """T x d array of finite float64 rows, optionally tagged as unit-norm."""

    vectors: np.ndarray
    ids: tuple[str, ...] | None = None
    unit_normalized: bool = False

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.ndim != 2:
            raise FormatError(f"vectors must be 2-D, got shape {v.shape}")
        if v.shape[0] < 1 or v.shape[1] < 1:
            raise FormatError(f"vectors must be at least 1x1, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise FormatError("vectors contain NaN or infinite entries")
        if not v.flags.c_contiguous:
            v = np.ascontiguousarray(v)
        elif v is self.vectors and v.flags.writeable:
            # never flip writeability on a caller-owned buffer
            v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        if self.ids is not None:
            ids = tuple(str(i) for i in self.ids)
            if len(ids) != v.shape[0]:
                raise FormatError(
                    f"got {len(ids)} ids for {v.shape[0]} rows"
                )
            object.__setattr__(self, "ids", ids)
        if self.unit_normalized:
            norms = np.linalg.norm(v, axis=1)
            bad = np.abs(norms - 1.0) > UNIT_NORM_TOL
            if np.any(bad):
                row = int(np.argmax(bad))
                raise FormatError(
                    f"row {row + 1} has norm {norms[row]:.9f}, "
                    f"outside 1 +/- {UNIT_NORM_TOL} for a unit-normalized sequence"
                )

    @property
    def T(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]


def normalize_rows(seq: EmbeddingSequence) -> EmbeddingSequence:
    """Scale every row to unit Euclidean norm.

    Raises ZeroVectorError (1-based row index) if any row norm is ~0;
    no silent fallback, because a zero embedding upstream is a data bug.
    """
    norms = np.linalg.norm(seq.vectors, axis=1)
    small = norms <= ZERO_NORM_TOL
    if np.any(small):
        row = int(np.argmax(small))
        raise ZeroVectorError(row + 1, float(norms[row]))
    out = seq.vectors / norms[:, None]
    return EmbeddingSequence(out, ids=seq.ids, unit_normalized=True)


@dataclass(frozen=True)
class Segmentation:
    """Strictly increasing inclusive segment ends; the last entry equals T."""

    boundaries: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.boundaries)
        if len(b) == 0:
            raise FormatError("segmentation needs at least one boundary")
        if b[0] < 1:
            raise FormatError(f"boundaries must be >= 1, got {b[0]}")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise FormatError(f"boundaries must be strictly increasing: {b}")
        object.__setattr__(self, "boundaries", b)

    @property
    def T(self) -> int:
        return self.boundaries[-1]

    @property
    def num_segments(self) -> int:
        return len(self.boundaries)

    @property
    def num_changes(self) -> int:
        return len(self.boundaries) - 1

    @property
    def interior(self) -> tuple[int, ...]:
        """Change points: every boundary except the terminal T."""
        return self.boundaries[:-1]

    def segments(self) -> list[tuple[int, int]]:
        """Inclusive (start, end) pairs covering 1..T."""
        starts = (1,) + tuple(b + 1 for b in self.boundaries[:-1])
        return list(zip(starts, self.boundaries))

    def labels(self) -> np.ndarray:
        """Segment index (0-based) for each position 1..T, length T."""
        bounds = np.asarray(self.boundaries)
        pos = np.arange(1, self.T + 1)
        return np.searchsorted(bounds, pos, side="left")


def single_segment(T: int) -> Segmentation:
    if T < 1:
        raise DegenerateSequenceError(f"T must be >= 1, got {T}")
    return Segmentation((T,))
