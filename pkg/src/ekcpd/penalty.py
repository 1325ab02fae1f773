"""Penalty schedules and data-driven selection of the scale constant.

The scaled schedule beta(T) = C * sqrt(T * ln T) grows fast enough to
suppress spurious change points under m-dependent noise while staying
o(T), so long segments still split when the mean truly moves.  C is the
only free knob; pick_scale estimates it from held-out documents by the
largest-curvature (elbow) rule on the change-point count curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCurveError
from .kernel_cost import CostModel
from .solver import SolverOptions, solve

DEFAULT_GRID_POINTS = 25
DEFAULT_GRID_LO = 1e-2
DEFAULT_GRID_HI = 1.0


@dataclass(frozen=True)
class PenaltySpec:
    """Either an explicit beta or a scale C for beta = C * sqrt(T ln T)."""

    beta: float | None = None
    scale: float | None = None

    def __post_init__(self):
        if (self.beta is None) == (self.scale is None):
            raise ValueError("set exactly one of beta and scale")
        for name in ("beta", "scale"):
            val = getattr(self, name)
            if val is not None:
                v = float(val)
                if not math.isfinite(v) or v < 0:
                    raise ValueError(f"{name} must be finite and >= 0, got {val}")
                object.__setattr__(self, name, v)
        if self.scale is not None and self.scale == 0:
            raise ValueError("scale must be > 0")

    @staticmethod
    def explicit(beta: float) -> "PenaltySpec":
        return PenaltySpec(beta=beta)

    @staticmethod
    def scaled(C: float) -> "PenaltySpec":
        return PenaltySpec(scale=C)

    def resolve(self, T: int) -> float:
        """Concrete beta for a sequence of length T."""
        if T < 1:
            raise ValueError(f"T must be >= 1, got {T}")
        if self.beta is not None:
            return self.beta
        if T == 1:
            return 0.0  # ln 1 = 0; a single row cannot split anyway
        return self.scale * math.sqrt(T * math.log(T))


def default_scale_grid(
    n: int = DEFAULT_GRID_POINTS,
    lo: float = DEFAULT_GRID_LO,
    hi: float = DEFAULT_GRID_HI,
) -> np.ndarray:
    """Log-spaced candidate scales, ascending."""
    if n < 3:
        raise ValueError(f"grid needs >= 3 points, got {n}")
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got lo={lo}, hi={hi}")
    return np.geomspace(lo, hi, n)


@dataclass(frozen=True)
class ElbowCurve:
    """Change-point counts along an ascending scale grid, one document."""

    scales: tuple[float, ...]
    k_hats: tuple[int, ...]

    def __post_init__(self):
        s = tuple(float(x) for x in self.scales)
        k = tuple(int(x) for x in self.k_hats)
        if len(s) < 3:
            raise ValueError("curve needs at least 3 grid points")
        if len(s) != len(k):
            raise ValueError("scales and k_hats lengths differ")
        if any(y <= x for x, y in zip(s, s[1:])) or s[0] <= 0:
            raise ValueError("scales must be positive and strictly increasing")
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "k_hats", k)


def changepoint_curve(
    model: CostModel,
    scales: np.ndarray,
    *,
    min_size: int = 1,
    algorithm: str = "pelt",
) -> ElbowCurve:
    """K_hat as a function of the scale C, for one cost model."""
    scales = np.asarray(scales, dtype=np.float64)
    ks = []
    for c in scales:
        beta = PenaltySpec.scaled(float(c)).resolve(model.T)
        seg = solve(model, SolverOptions(beta=beta, min_size=min_size,
                                         algorithm=algorithm))
        ks.append(seg.num_changes)
    return ElbowCurve(tuple(float(c) for c in scales), tuple(ks))


def curve_elbow(curve: ElbowCurve) -> float | None:
    """Scale at the largest discrete curvature of one K_hat curve.

    Curvature at interior point i is the second difference
    k[i-1] - 2 k[i] + k[i+1]; ties go to the smaller scale.  Returns
    None for a constant (uninformative) curve.
    """
    k = curve.k_hats
    if all(x == k[0] for x in k):
        return None
    best_i = None
    best_d2 = None
    for i in range(1, len(k) - 1):
        d2 = k[i - 1] - 2 * k[i] + k[i + 1]
        if best_d2 is None or d2 > best_d2:
            best_d2 = d2
            best_i = i
    return curve.scales[best_i]


def pick_scale(curves: list[ElbowCurve]) -> float:
    """Mean of per-document elbow scales; skips constant curves.

    Raises DegenerateCurveError if every curve is constant.  All curves
    must share one grid, otherwise averaging grid points is meaningless.
    """
    if not curves:
        raise DegenerateCurveError("no curves given")
    grid = curves[0].scales
    for c in curves[1:]:
        if c.scales != grid:
            raise ValueError("all curves must share the same scale grid")
    elbows = [e for e in map(curve_elbow, curves) if e is not None]
    if not elbows:
        raise DegenerateCurveError(
            "every curve is constant; the grid range never bends K_hat"
        )
    if all(e == elbows[0] for e in elbows[1:]):
        return float(elbows[0])  # keep the mean of equal values exact
    return float(np.mean(elbows))
