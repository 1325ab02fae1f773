"""Synthetic m-dependent segmentation instances and validation harnesses.

Data model: piecewise-constant topic means on the unit sphere (scaled by
`delta`) plus moving-average noise

    Z_t = (1 / sqrt(m + 1)) * sum_{j=0..m} eps_{t-j},
    eps_t iid N(0, noise_scale^2 I_d),

so each noise coordinate has variance noise_scale^2 at every lag but the
series is m-dependent: values more than m apart are independent.  That
is the weakest dependence structure under which the deviation bound

    Pr(|cost_hat - cost| > x) <= 4 exp(-x^2 / (8 (8m + 5) M^2 n))

holds for a bounded kernel (|k| <= M) on a stationary stretch of length
n.  mc_deviation_check estimates the left side by simulation;
localization_experiment measures how segmentation accuracy improves
with T when the penalty follows the sqrt(T ln T) schedule.

Randomness: every public entry point takes one integer seed and derives
independent sub-streams with numpy SeedSequence spawning, so results
are reproducible across platforms for a fixed numpy generation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidKError
from .kernel_cost import KernelSpec, build_cost_model
from .metrics import evaluate
from .penalty import PenaltySpec
from .sequence import EmbeddingSequence, Segmentation, normalize_rows
from .solver import SolverOptions, solve_pelt


def default_num_changes(T: int) -> int:
    """ceil(2 ln T), the planted change budget used across experiments."""
    if T < 1:
        raise InvalidKError(f"T must be >= 1, got {T}")
    if T == 1:
        return 0
    return math.ceil(2.0 * math.log(T))


@dataclass(frozen=True)
class SynthConfig:
    """Planted-instance parameters.  K=None means ceil(2 ln T)."""

    T: int
    K: int | None = None
    d: int = 16
    m: int = 20
    delta: float = 1.0
    topics: int = 5
    noise_scale: float = 0.5
    normalize: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.topics < 2:
            raise ValueError(f"need >= 2 topics, got {self.topics}")
        if self.noise_scale < 0:
            raise ValueError(f"noise_scale must be >= 0, got {self.noise_scale}")
        if self.K is not None and not (0 <= self.K <= self.T - 1):
            raise InvalidKError(
                f"K must be in 0..T-1={self.T - 1}, got {self.K}"
            )

    @property
    def resolved_K(self) -> int:
        if self.K is not None:
            return self.K
        return min(default_num_changes(self.T), self.T - 1)


@dataclass(frozen=True)
class PlantedInstance:
    seq: EmbeddingSequence
    truth: Segmentation
    segment_means: np.ndarray  # (K+1, d), the noiseless mean of each segment
    config: SynthConfig


def sample_changepoints(T: int, K: int, seed) -> Segmentation:
    """K change points uniform without replacement from 1..T-1, plus T.

    K = 0 yields the single-segment truth (T,).  `seed` may be an int or
    an existing numpy Generator.
    """
    if T < 1:
        raise InvalidKError(f"T must be >= 1, got {T}")
    if not (0 <= K <= T - 1):
        raise InvalidKError(f"K must be in 0..T-1={T - 1}, got {K}")
    rng = np.random.default_rng(seed)
    if K == 0:
        return Segmentation((T,))
    interior = rng.choice(T - 1, size=K, replace=False) + 1
    interior.sort()
    return Segmentation(tuple(int(b) for b in interior) + (T,))


def ma_from_innovations(eps: np.ndarray, m: int) -> np.ndarray:
    """Window-sum filter: row t of the output averages eps rows t-1..t+m-1.

    eps has T + m rows (innovations at times 1-m .. T); the output row t
    (1-based) is (1/sqrt(m+1)) * sum of the m+1 innovations ending at
    time t, so outputs more than m apart share no innovation.
    """
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    T = eps.shape[0] - m
    if T < 1:
        raise ValueError(f"need at least m+1={m + 1} innovation rows")
    if m == 0:
        return eps.copy()
    s = np.zeros((T + m + 1, eps.shape[1]))
    np.cumsum(eps, axis=0, out=s[1:])
    return (s[m + 1:] - s[:T]) / math.sqrt(m + 1)


def ma_noise(rng: np.random.Generator, T: int, d: int, m: int,
             noise_scale: float) -> np.ndarray:
    """T x d moving-average noise, per-coordinate variance noise_scale^2."""
    eps = rng.standard_normal((T + m, d)) * noise_scale
    return ma_from_innovations(eps, m)


def _topic_means(rng: np.random.Generator, topics: int, d: int,
                 delta: float) -> np.ndarray:
    raw = rng.standard_normal((topics, d))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    # standard normal rows are nonzero almost surely; guard anyway
    norms[norms == 0] = 1.0
    return delta * raw / norms


def _assign_topics(rng: np.random.Generator, segments: int,
                   topics: int) -> np.ndarray:
    """Uniform topic per segment, consecutive segments always differ."""
    out = np.empty(segments, dtype=np.int64)
    out[0] = rng.integers(0, topics)
    for k in range(1, segments):
        pick = int(rng.integers(0, topics - 1))
        if pick >= out[k - 1]:
            pick += 1
        out[k] = pick
    return out


def gen_planted(config: SynthConfig) -> PlantedInstance:
    """Deterministic instance from config.seed.

    Sub-streams (boundaries, topics, noise) are split from the seed, so
    e.g. changing noise_scale does not move the planted boundaries.
    """
    ss = np.random.SeedSequence(config.seed)
    cp_ss, topic_ss, noise_ss = ss.spawn(3)
    K = config.resolved_K
    truth = sample_changepoints(config.T, K, np.random.default_rng(cp_ss))

    topic_rng = np.random.default_rng(topic_ss)
    means = _topic_means(topic_rng, config.topics, config.d, config.delta)
    assign = _assign_topics(topic_rng, K + 1, config.topics)
    segment_means = means[assign]

    per_pos = segment_means[truth.labels()]
    noise = ma_noise(np.random.default_rng(noise_ss), config.T, config.d,
                     config.m, config.noise_scale)
    seq = EmbeddingSequence(per_pos + noise)
    if config.normalize:
        seq = normalize_rows(seq)
    return PlantedInstance(seq=seq, truth=truth,
                           segment_means=segment_means, config=config)


def replicate_seed(seed: int, *indices: int) -> np.random.SeedSequence:
    """Fixed splitting rule for per-replicate streams: (seed, i1, i2, ...)."""
    return np.random.SeedSequence([int(seed), *[int(i) for i in indices]])


# ---------------------------------------------------------------------------
# Deviation of the empirical cost on a stationary block


def deviation_bound(n: int, m: int, x: float, M: float = 1.0) -> float:
    """4 exp(-x^2 / (8 (8m + 5) M^2 n)), the tail bound being checked."""
    return 4.0 * math.exp(-(x * x) / (8.0 * (8 * m + 5) * M * M * n))


def uniform_deviation_scale(T: int, m: int, M: float = 1.0) -> float:
    """lambda_T = 4 sqrt(2) M sqrt((8m + 5) ln T).

    With x = lambda_T sqrt(n) the bound collapses to 4 T^-4, small
    enough to union over all O(T^2) segments of a length-T sequence.
    """
    if T < 2:
        raise ValueError(f"T must be >= 2, got {T}")
    return 4.0 * math.sqrt(2.0) * M * math.sqrt((8 * m + 5) * math.log(T))


def penalty_floor(T: int, m: int, M: float = 1.0) -> float:
    """16 M sqrt(2 (8m + 5) T ln T) + 2 M (1 + 6m).

    The schedule constant above which the theory guarantees no spurious
    change points; practical scales sit far below it, which is why C is
    tuned empirically instead.
    """
    if T < 2:
        raise ValueError(f"T must be >= 2, got {T}")
    return 16.0 * M * math.sqrt(2.0 * (8 * m + 5) * T * math.log(T)) \
        + 2.0 * M * (1 + 6 * m)


@dataclass(frozen=True)
class DeviationReport:
    n: int
    m: int
    x: float
    reps: int
    empirical_prob: float
    bound: float


_DEV_CHUNK = 256  # replicates simulated per vectorized batch


def _block_costs(kernel: KernelSpec, n: int, m: int, d: int,
                 noise_scale: float, mean: np.ndarray,
                 rng: np.random.Generator, reps: int) -> np.ndarray:
    """Empirical cost of 1..n for `reps` independent stationary blocks."""
    out = np.empty(reps)
    done = 0
    while done < reps:
        b = min(_DEV_CHUNK, reps - done)
        eps = rng.standard_normal((b, n + m, d)) * noise_scale
        if m == 0:
            z = eps
        else:
            s = np.zeros((b, n + m + 1, d))
            np.cumsum(eps, axis=1, out=s[:, 1:])
            z = (s[:, m + 1:] - s[:, :n]) / math.sqrt(m + 1)
        y = z + mean
        if kernel.normalize_rows:
            norms = np.linalg.norm(y, axis=2, keepdims=True)
            y = y / norms
        if kernel.kind == "linear":
            sq = np.einsum("bij,bij->b", y, y)
            tot = y.sum(axis=1)
            out[done:done + b] = sq - np.einsum("bj,bj->b", tot, tot) / n
        else:
            gamma = kernel.gamma
            sqn = np.einsum("bij,bij->bi", y, y)
            d2 = sqn[:, :, None] + sqn[:, None, :] - 2.0 * np.einsum(
                "bik,bjk->bij", y, y)
            np.maximum(d2, 0.0, out=d2)
            gram = np.exp(-gamma * d2)
            out[done:done + b] = n - gram.sum(axis=(1, 2)) / n
        done += b
    return out


def _deviation_cell(
    n: int, m: int, kernel: KernelSpec, reps: int, seed: int,
    d: int, noise_scale: float, calibration_factor: int,
) -> tuple[np.ndarray, float]:
    """Simulated costs plus a population estimate from a disjoint stream."""
    if reps < 1000:
        raise ValueError(f"reps must be >= 1000 for a stable tail, got {reps}")
    if n < 2 or m < 0:
        raise ValueError(f"need n >= 2, m >= 0; got n={n}, m={m}")
    bounded = kernel.kind == "rbf" or kernel.normalize_rows
    if not bounded:
        raise ValueError(
            "kernel must be bounded by 1 (rbf, or linear with normalize_rows)"
        )
    if kernel.kind == "rbf" and kernel.gamma is None:
        raise ValueError("rbf deviation checks need a fixed gamma")
    mean = np.zeros(d)
    mean[0] = 1.0
    cal_rng = np.random.default_rng(replicate_seed(seed, 0, n, m))
    main_rng = np.random.default_rng(replicate_seed(seed, 1, n, m))
    cal = _block_costs(kernel, n, m, d, noise_scale, mean, cal_rng,
                       calibration_factor * reps)
    costs = _block_costs(kernel, n, m, d, noise_scale, mean, main_rng, reps)
    return costs, float(cal.mean())


def mc_deviation_check(
    n: int,
    m: int,
    kernel: KernelSpec,
    x: float,
    reps: int,
    seed: int,
    *,
    d: int = 4,
    noise_scale: float = 0.5,
    calibration_factor: int = 10,
) -> DeviationReport:
    """Estimate Pr(|cost_hat - cost| > x) on stationary blocks vs the bound.

    The population cost is estimated from `calibration_factor * reps`
    fresh simulations on a disjoint stream, so calibration noise does
    not leak into the tail estimate.  The kernel must be bounded by
    M = 1: rbf, or linear with normalize_rows (cosine).  The block mean
    is a fixed unit vector; stationarity is all that matters here.
    """
    if x <= 0:
        raise ValueError(f"x must be > 0, got {x}")
    costs, pop = _deviation_cell(n, m, kernel, reps, seed, d, noise_scale,
                                 calibration_factor)
    emp = float(np.count_nonzero(np.abs(costs - pop) > x)) / reps
    return DeviationReport(n=n, m=m, x=x, reps=reps, empirical_prob=emp,
                           bound=deviation_bound(n, m, x))


def mc_deviation_sweep(
    ns: list[int],
    ms: list[int],
    x_factors: list[float],
    reps: int,
    seed: int,
    kernel: KernelSpec | None = None,
    *,
    d: int = 4,
    noise_scale: float = 0.5,
    calibration_factor: int = 10,
) -> list[DeviationReport]:
    """Full (n, m, x) grid; simulations are shared across thresholds.

    Thresholds are x = factor * sqrt(n).  Default kernel is cosine.
    """
    if kernel is None:
        kernel = KernelSpec.cosine()
    out = []
    for n in ns:
        for m in ms:
            costs, pop = _deviation_cell(n, m, kernel, reps, seed, d,
                                         noise_scale, calibration_factor)
            dev = np.abs(costs - pop)
            for factor in x_factors:
                x = float(factor) * math.sqrt(n)
                emp = float(np.count_nonzero(dev > x)) / reps
                out.append(DeviationReport(
                    n=n, m=m, x=x, reps=reps, empirical_prob=emp,
                    bound=deviation_bound(n, m, x),
                ))
    return out


# ---------------------------------------------------------------------------
# Localization error as T grows


@dataclass(frozen=True)
class LocalizationRow:
    T: int
    K: int
    reps: int
    mean_pk: float
    mean_wd: float
    mean_boundary_error: float
    delta_T: float  # sqrt(T ln T), the theoretical localization scale


LOCALIZATION_COLUMNS = (
    "T", "K", "reps", "mean_pk", "mean_wd", "mean_boundary_error", "delta_T"
)


def localization_experiment(
    Ts: list[int],
    C: float,
    m: int,
    reps: int,
    seed: int,
    *,
    d: int = 16,
    delta: float = 1.0,
    noise_scale: float = 0.5,
    topics: int = 5,
    min_size: int = 1,
    normalize: bool = True,
) -> list[LocalizationRow]:
    """Mean segmentation error per T under the scaled penalty schedule.

    Each replicate plants K = ceil(2 ln T) changes, solves with the
    linear kernel and beta = C sqrt(T ln T), and scores against truth.
    Rows are unit-normalized by default, matching how embedding
    pipelines feed this engine (the linear kernel on unit rows is the
    cosine kernel).
    """
    if C <= 0:
        raise ValueError(f"C must be > 0, got {C}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    kernel = KernelSpec.linear()
    rows = []
    for T in Ts:
        K = default_num_changes(T)
        beta = PenaltySpec.scaled(C).resolve(T)
        opts = SolverOptions(beta=beta, min_size=min_size)
        pks, wds, errs = [], [], []
        for r in range(reps):
            rep_seed = int(replicate_seed(seed, T, r).generate_state(1)[0])
            cfg = SynthConfig(T=T, K=K, d=d, m=m, delta=delta, topics=topics,
                              noise_scale=noise_scale, seed=rep_seed,
                              normalize=normalize)
            inst = gen_planted(cfg)
            model = build_cost_model(inst.seq, kernel)
            est = solve_pelt(model, opts)
            rep = evaluate(inst.truth, est)
            pks.append(rep.pk)
            wds.append(rep.window_diff)
            errs.append(rep.hausdorff_one_sided)
        rows.append(LocalizationRow(
            T=T, K=K, reps=reps,
            mean_pk=float(np.mean(pks)),
            mean_wd=float(np.mean(wds)),
            mean_boundary_error=float(np.mean(errs)),
            delta_T=math.sqrt(T * math.log(T)),
        ))
    return rows


# ---------------------------------------------------------------------------
# Closed-form population cost for the linear kernel, used as an oracle


def linear_population_cost(n: int, m: int, d: int, noise_scale: float) -> float:
    """E[cost(1..n)] for one stationary MA block under the raw linear kernel.

    With autocovariance trace delta_l = d sigma^2 (m + 1 - l) / (m + 1)
    at lag l <= m (0 beyond) this is

        (n - 1) * delta_0 - 2 * sum_{l=1..min(n-1,m)} (1 - l/n) * delta_l.

    The mean vector drops out: the linear cost is translation invariant.
    """
    s2 = noise_scale * noise_scale
    delta0 = d * s2
    total = (n - 1) * delta0
    for l in range(1, min(n - 1, m) + 1):
        delta_l = d * s2 * (m + 1 - l) / (m + 1)
        total -= 2.0 * (1.0 - l / n) * delta_l
    return total
