"""Segmentation agreement metrics.

Both window metrics slide a probe of fixed width over 1..T and compare
reference against hypothesis locally, so a boundary missed by one
position costs far less than one missed by a whole segment:

* pk: fraction of probe pairs (t, t + window) on which the two
  segmentations disagree about "same segment or not".
* window_diff: fraction of windows whose interior boundary counts
  differ, which unlike pk also penalizes extra boundaries inside an
  otherwise correct segment.

Scores are in [0, 1], 0 iff locally identical, and the conventional
window is half the mean reference segment length (rounded half up,
floored at 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormatError, NoTrueChangesError, WindowTooLargeError
from .sequence import Segmentation


def default_window(ref: Segmentation) -> int:
    """max(1, round_half_up(T / (2 * num_segments))), from the reference."""
    x = ref.T / (2.0 * ref.num_segments)
    return max(1, int(np.floor(x + 0.5)))


def _check_pair(ref: Segmentation, hyp: Segmentation, window: int) -> None:
    if ref.T != hyp.T:
        raise FormatError(
            f"segmentations cover different lengths: ref T={ref.T}, hyp T={hyp.T}"
        )
    if window < 1:
        raise WindowTooLargeError(f"window must be >= 1, got {window}")
    if window >= ref.T:
        raise WindowTooLargeError(
            f"window {window} leaves no probe positions for T={ref.T}"
        )


def pk(ref: Segmentation, hyp: Segmentation, window: int) -> float:
    """Probe-pair disagreement rate; probes are (t, t + window), t = 1..T-window."""
    _check_pair(ref, hyp, window)
    T = ref.T
    n = T - window
    lo = np.arange(1, n + 1)
    hi = lo + window
    rb = np.asarray(ref.boundaries)
    hb = np.asarray(hyp.boundaries)
    same_ref = np.searchsorted(rb, lo) == np.searchsorted(rb, hi)
    same_hyp = np.searchsorted(hb, lo) == np.searchsorted(hb, hi)
    return float(np.count_nonzero(same_ref != same_hyp)) / n


def _gap_count_prefix(seg: Segmentation) -> np.ndarray:
    """prefix[i] = number of change points <= i, for i = 0..T."""
    interior = np.asarray(seg.interior)
    idx = np.arange(seg.T + 1)
    return np.searchsorted(interior, idx, side="right")


def window_diff(ref: Segmentation, hyp: Segmentation, window: int) -> float:
    """Fraction of length-`window` windows with differing boundary counts.

    A window starting at t spans positions t..t+window-1 and counts the
    change points b with t <= b <= t+window-1.
    """
    _check_pair(ref, hyp, window)
    T = ref.T
    starts = np.arange(1, T - window + 1)
    rp = _gap_count_prefix(ref)
    hp = _gap_count_prefix(hyp)
    r_counts = rp[starts + window - 1] - rp[starts - 1]
    h_counts = hp[starts + window - 1] - hp[starts - 1]
    return float(np.count_nonzero(r_counts != h_counts)) / len(starts)


def boundary_error(ref: Segmentation, hyp: Segmentation) -> int:
    """Worst distance from a true change point to the nearest estimated boundary.

    The hypothesis side includes the endpoints 0 and T, so an empty
    estimate is scored against the trivial boundaries rather than being
    undefined.  The reference must have at least one change point.
    """
    if ref.T != hyp.T:
        raise FormatError(
            f"segmentations cover different lengths: ref T={ref.T}, hyp T={hyp.T}"
        )
    true_cps = np.asarray(ref.interior)
    if true_cps.size == 0:
        raise NoTrueChangesError("reference has no change points")
    hyp_pos = np.concatenate(([0], np.asarray(hyp.boundaries)))
    dists = np.abs(true_cps[:, None] - hyp_pos[None, :])
    return int(dists.min(axis=1).max())


@dataclass(frozen=True)
class SegEvalReport:
    pk: float
    window_diff: float
    window: int
    hausdorff_one_sided: int
    k_true: int
    k_hat: int


def evaluate(
    ref: Segmentation, hyp: Segmentation, window: int | None = None
) -> SegEvalReport:
    """Bundle all metrics; window defaults from the reference.

    hausdorff_one_sided is 0 when the reference has no change points:
    there is nothing to miss.
    """
    if window is None:
        window = default_window(ref)
    err = boundary_error(ref, hyp) if ref.num_changes > 0 else 0
    return SegEvalReport(
        pk=pk(ref, hyp, window),
        window_diff=window_diff(ref, hyp, window),
        window=window,
        hausdorff_one_sided=err,
        k_true=ref.num_changes,
        k_hat=hyp.num_changes,
    )
