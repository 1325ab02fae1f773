"""Shared naive oracles and hypothesis strategies.

Everything here recomputes quantities from their definitions (explicit
Gram matrices, probe-by-probe metric loops) so the fast implementations
are checked against independent arithmetic, not against themselves.
"""

import bisect

import numpy as np
from hypothesis import strategies as st

from ekcpd import EmbeddingSequence, Segmentation


def gram_matrix(vectors: np.ndarray, kind: str, gamma: float = 1.0) -> np.ndarray:
    v = np.asarray(vectors, dtype=np.float64)
    if kind == "linear":
        return v @ v.T
    diff = v[:, None, :] - v[None, :, :]
    return np.exp(-gamma * (diff * diff).sum(axis=2))


def double_sum_cost(vectors: np.ndarray, kind: str, s: int, e: int,
                    gamma: float = 1.0) -> float:
    """O(L^2) segment cost of rows s..e (1-based, inclusive)."""
    block = np.asarray(vectors, dtype=np.float64)[s - 1:e]
    L = e - s + 1
    G = gram_matrix(block, kind, gamma)
    return float(np.trace(G) - G.sum() / L)


def _segment_index(boundaries, t: int) -> int:
    """Index of the segment holding position t (pure Python)."""
    return bisect.bisect_left(list(boundaries), t)


def naive_pk(ref: Segmentation, hyp: Segmentation, window: int) -> float:
    """Probe-pair definition, one probe at a time."""
    T = ref.T
    disagreements = 0
    for t in range(1, T - window + 1):
        ref_same = (_segment_index(ref.boundaries, t)
                    == _segment_index(ref.boundaries, t + window))
        hyp_same = (_segment_index(hyp.boundaries, t)
                    == _segment_index(hyp.boundaries, t + window))
        disagreements += ref_same != hyp_same
    return disagreements / (T - window)


def naive_window_diff(ref: Segmentation, hyp: Segmentation, window: int) -> float:
    """Gap-count definition, one window at a time."""
    T = ref.T
    ref_gaps = set(ref.interior)
    hyp_gaps = set(hyp.interior)
    differing = 0
    for t in range(1, T - window + 1):
        gaps = range(t, t + window)
        r = sum(1 for b in gaps if b in ref_gaps)
        h = sum(1 for b in gaps if b in hyp_gaps)
        differing += r != h
    return differing / (T - window)


def naive_boundary_error(ref: Segmentation, hyp: Segmentation) -> int:
    """Max over true interior boundaries of distance to nearest estimate."""
    hyp_positions = [0] + list(hyp.boundaries)
    return max(
        min(abs(b - h) for h in hyp_positions) for b in ref.interior
    )


# ---------------------------------------------------------------------------
# Strategies

finite_floats = st.floats(min_value=-4.0, max_value=4.0,
                          allow_nan=False, allow_infinity=False)


@st.composite
def matrices(draw, min_T=1, max_T=10, min_d=1, max_d=4, rounded=False):
    T = draw(st.integers(min_T, max_T))
    d = draw(st.integers(min_d, max_d))
    flat = draw(st.lists(finite_floats, min_size=T * d, max_size=T * d))
    v = np.array(flat, dtype=np.float64).reshape(T, d)
    if rounded or draw(st.booleans()):
        # rounded entries force exact cost ties, stressing tie-breaking
        v = np.round(v)
    return v


@st.composite
def sequences(draw, **kwargs):
    return EmbeddingSequence(draw(matrices(**kwargs)))


@st.composite
def segmentations(draw, T=None, min_T=1, max_T=40):
    if T is None:
        T = draw(st.integers(min_T, max_T))
    interior = draw(st.lists(st.integers(1, T - 1), unique=True,
                             max_size=T - 1)) if T > 1 else []
    return Segmentation(tuple(sorted(interior) + [T]))


@st.composite
def segmentation_pairs(draw, min_T=2, max_T=40):
    """Two segmentations over one T, plus a valid probe window."""
    T = draw(st.integers(min_T, max_T))
    ref = draw(segmentations(T=T))
    hyp = draw(segmentations(T=T))
    window = draw(st.integers(1, T - 1))
    return ref, hyp, window
