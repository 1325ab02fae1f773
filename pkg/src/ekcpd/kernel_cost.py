"""Kernel specification, cost caches, and segment scatter queries.

The within-segment cost of rows s..e (1-based, inclusive, length L) is

    cost(s, e) = sum_t k(y_t, y_t) - (1/L) * sum_{i,j} k(y_i, y_j),

the kernel-space scatter around the segment mean.  Both supported kernels
admit O(1) queries after a linear pass:

* linear: cost = (sum_t ||y_t||^2) - ||sum_t y_t||^2 / L, cached as a
  (T+1) x d prefix-sum matrix with its per-row squared norms plus a
  squared-norm prefix vector, O(T d) memory.  With unit rows this is
  L - ||P_e - P_{s-1}||^2 / L.
* rbf: k(x, y) = exp(-gamma ||x - y||^2), cached as a 2-D inclusion-
  exclusion prefix table over the full Gram matrix plus a diagonal
  prefix, O(T^2) memory.  Construction refuses T above RBF_MAX_T unless
  explicitly overridden, because the table alone is ~8 (T+1)^2 bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CostConsistencyError,
    DegenerateSequenceError,
    IndexOutOfRangeError,
    TooLargeError,
)
from .sequence import EmbeddingSequence, Segmentation, normalize_rows

LINEAR = "linear"
RBF = "rbf"

# Gram-table guard: 20001^2 doubles is ~3.2 GB, already generous.
RBF_MAX_T = 20000

# Costs are scatters, so >= 0 in exact arithmetic.  Negatives within
# this relative tolerance are rounding noise and get clamped to 0;
# anything worse means the cache is corrupt.
NEGATIVE_COST_TOL = 1e-9


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice plus row pre-processing.

    gamma=None selects the median heuristic at model-build time (rbf
    only).  normalize_rows=True rescales rows to unit norm first, which
    turns the linear kernel into cosine similarity.
    """

    kind: str = LINEAR
    gamma: float | None = None
    normalize_rows: bool = False

    def __post_init__(self):
        if self.kind not in (LINEAR, RBF):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.gamma is not None:
            if self.kind != RBF:
                raise ValueError("gamma only applies to the rbf kernel")
            g = float(self.gamma)
            if not np.isfinite(g) or g <= 0:
                raise ValueError(f"gamma must be finite and > 0, got {self.gamma}")
            object.__setattr__(self, "gamma", g)

    @staticmethod
    def linear() -> "KernelSpec":
        return KernelSpec(kind=LINEAR)

    @staticmethod
    def cosine() -> "KernelSpec":
        """Linear kernel on unit-normalized rows."""
        return KernelSpec(kind=LINEAR, normalize_rows=True)

    @staticmethod
    def rbf(gamma: float | None = None, normalize: bool = False) -> "KernelSpec":
        return KernelSpec(kind=RBF, gamma=gamma, normalize_rows=normalize)


def _pairwise_sq_dists(v: np.ndarray) -> np.ndarray:
    """Full squared-distance matrix, tiny negatives clamped to 0.

    Works in a single T x T buffer; at T = 20000 that buffer is already
    3.2 GB, so avoiding temporaries matters.
    """
    sq = np.einsum("ij,ij->i", v, v)
    d2 = v @ v.T
    np.multiply(d2, -2.0, out=d2)
    d2 += sq[:, None]
    d2 += sq[None, :]
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def median_bandwidth(seq: EmbeddingSequence) -> float:
    """gamma = 1 / median of positive squared pairwise distances.

    Zero distances (duplicate rows) are excluded; if every pair is a
    duplicate there is no scale to estimate and the sequence is
    degenerate.  Needs T >= 2.
    """
    if seq.T < 2:
        raise DegenerateSequenceError(
            f"median bandwidth needs at least 2 rows, got T={seq.T}"
        )
    d2 = _pairwise_sq_dists(seq.vectors)
    iu = np.triu_indices(seq.T, k=1)
    vals = d2[iu]
    pos = vals[vals > 0.0]
    if pos.size == 0:
        raise DegenerateSequenceError(
            "all rows are identical; median bandwidth undefined"
        )
    return float(1.0 / np.median(pos))


class CostModel:
    """Immutable per-sequence cache answering segment cost queries.

    Construct via build_cost_model.  All query methods are pure; nothing
    mutates after __init__.
    """

    def __init__(
        self,
        kernel: KernelSpec,
        T: int,
        d: int,
        *,
        prefix: np.ndarray | None = None,
        prefix_norm2: np.ndarray | None = None,
        sq_prefix: np.ndarray | None = None,
        gram2d: np.ndarray | None = None,
        diag_prefix: np.ndarray | None = None,
        gamma: float | None = None,
    ):
        self.kernel = kernel
        self.T = T
        self.d = d
        self.gamma = gamma
        self._prefix = prefix
        self._prefix_norm2 = prefix_norm2
        self._sq_prefix = sq_prefix
        self._gram2d = gram2d
        self._diag_prefix = diag_prefix

    def segment_cost(self, s: int, e: int) -> float:
        """Cost of rows s..e, 1-based inclusive.  0 for single rows."""
        if not (1 <= s <= e <= self.T):
            raise IndexOutOfRangeError(
                f"need 1 <= s <= e <= T={self.T}, got s={s}, e={e}"
            )
        if s == e:
            return 0.0
        return float(self.segment_costs(e, np.array([s - 1]))[0])

    def segment_costs(self, e: int, prev_ends: np.ndarray) -> np.ndarray:
        """Costs of segments (t, e] for an ascending array of prev ends t.

        prev_ends entries are 0-based prefix indices (t = s - 1), each in
        0..e-1.  Shared by all solvers so a given segment always produces
        bit-identical cost values regardless of the candidate set size.
        """
        t = np.asarray(prev_ends, dtype=np.int64)
        L = (e - t).astype(np.float64)
        if self.kernel.kind == LINEAR:
            # ||P_e - P_t||^2 expanded through cached prefix norms; the
            # einsum reduction keeps per-row bits independent of len(t).
            dots = np.einsum("ij,j->i", self._prefix[t], self._prefix[e])
            gap = (self._prefix_norm2[e] - 2.0 * dots) + self._prefix_norm2[t]
            sq = self._sq_prefix[e] - self._sq_prefix[t]
            costs = sq - gap / L
            scale = sq
        else:
            g2 = self._gram2d
            block = g2[e, e] - g2[t, e] - g2[e, t] + g2[t, t]
            sq = self._diag_prefix[e] - self._diag_prefix[t]
            costs = sq - block / L
            scale = sq
        costs = np.where(L == 1.0, 0.0, costs)
        tol = NEGATIVE_COST_TOL * np.maximum(1.0, scale)
        if np.any(costs < -tol):
            worst = float(costs.min())
            raise CostConsistencyError(
                f"segment cost {worst:.6e} below -{NEGATIVE_COST_TOL} tolerance; "
                "cost cache is inconsistent"
            )
        return np.maximum(costs, 0.0)


def build_cost_model(
    seq: EmbeddingSequence,
    kernel: KernelSpec,
    *,
    allow_large_gram: bool = False,
) -> CostModel:
    """Precompute the cost cache for one sequence under one kernel."""
    if kernel.normalize_rows and not seq.unit_normalized:
        seq = normalize_rows(seq)
    v = seq.vectors
    T, d = v.shape
    if kernel.kind == LINEAR:
        prefix = np.zeros((T + 1, d))
        np.cumsum(v, axis=0, out=prefix[1:])
        prefix_norm2 = np.einsum("ij,ij->i", prefix, prefix)
        sq_prefix = np.zeros(T + 1)
        np.cumsum(np.einsum("ij,ij->i", v, v), out=sq_prefix[1:])
        return CostModel(
            kernel,
            T,
            d,
            prefix=prefix,
            prefix_norm2=prefix_norm2,
            sq_prefix=sq_prefix,
        )

    if T > RBF_MAX_T and not allow_large_gram:
        raise TooLargeError(
            f"rbf cost cache needs a ({T + 1})^2 prefix table "
            f"(~{8 * (T + 1) ** 2 / 1e9:.1f} GB); refusing T > {RBF_MAX_T}. "
            "Pass allow_large_gram=True to override."
        )
    gamma = kernel.gamma if kernel.gamma is not None else median_bandwidth(seq)
    # reuse one T x T buffer: distances -> gram -> 2-D prefix sums
    work = _pairwise_sq_dists(v)
    np.multiply(work, -gamma, out=work)
    np.exp(work, out=work)  # diagonal is exp(0) = 1 exactly
    np.cumsum(work, axis=0, out=work)
    np.cumsum(work, axis=1, out=work)
    gram2d = np.zeros((T + 1, T + 1))
    gram2d[1:, 1:] = work
    del work
    diag_prefix = np.arange(T + 1, dtype=np.float64)  # k(y,y) = 1 exactly
    return CostModel(
        kernel, T, d, gram2d=gram2d, diag_prefix=diag_prefix, gamma=gamma
    )


def total_penalized_cost(
    model: CostModel, seg: Segmentation, beta: float
) -> float:
    """Sum of segment costs plus beta per change point.

    Accumulated left to right starting from -beta so the running value
    matches the solver's dynamic-programming recursion term for term
    (each segment contributes cost + beta).  K segments therefore add
    K * beta - beta = beta * num_changes.
    """
    if seg.T != model.T:
        raise IndexOutOfRangeError(
            f"segmentation covers T={seg.T} but model has T={model.T}"
        )
    total = -float(beta)
    for s, e in seg.segments():
        total = total + float(model.segment_costs(e, np.array([s - 1]))[0]) + float(beta)
    return total
