"""Kernel change-point detection for embedding sequences.

Segment a T x d sequence of embeddings into homogeneous runs by exactly
minimizing a kernel-based within-segment scatter plus a per-change
penalty, tune the penalty from data, and score segmentations with the
standard windowed metrics.  A synthetic-generation harness validates
the statistical claims the defaults rely on.
"""

from .client import fetch_embeddings
from .errors import (
    AuthError,
    CostConsistencyError,
    DegenerateCurveError,
    DegenerateSequenceError,
    EkcpdError,
    FormatError,
    IndexOutOfRangeError,
    InfeasibleError,
    InvalidKError,
    MaxChangepointsExceededError,
    NetworkError,
    NoTrueChangesError,
    TooLargeError,
    WindowTooLargeError,
    ZeroVectorError,
)
from .kernel_cost import (
    CostModel,
    KernelSpec,
    build_cost_model,
    median_bandwidth,
    total_penalized_cost,
)
from .metrics import (
    SegEvalReport,
    boundary_error,
    default_window,
    evaluate,
    pk,
    window_diff,
)
from .penalty import (
    ElbowCurve,
    PenaltySpec,
    changepoint_curve,
    curve_elbow,
    default_scale_grid,
    pick_scale,
)
from .formats import (
    read_binary,
    read_jsonl,
    read_segmentation,
    read_sequence,
    write_binary,
    write_jsonl,
    write_segmentation,
)
from .sequence import EmbeddingSequence, Segmentation, normalize_rows
from .solver import (
    SolverOptions,
    brute_force_oracle,
    solve,
    solve_exact_dp,
    solve_pelt,
)
from .synthgen import (
    DeviationReport,
    LocalizationRow,
    PlantedInstance,
    SynthConfig,
    default_num_changes,
    deviation_bound,
    gen_planted,
    linear_population_cost,
    localization_experiment,
    ma_from_innovations,
    ma_noise,
    mc_deviation_check,
    mc_deviation_sweep,
    penalty_floor,
    sample_changepoints,
    uniform_deviation_scale,
)

__version__ = "0.1.0"

__all__ = [
    "AuthError",
    "CostConsistencyError",
    "CostModel",
    "DegenerateCurveError",
    "DegenerateSequenceError",
    "DeviationReport",
    "EkcpdError",
    "ElbowCurve",
    "EmbeddingSequence",
    "FormatError",
    "IndexOutOfRangeError",
    "InfeasibleError",
    "InvalidKError",
    "KernelSpec",
    "LocalizationRow",
    "MaxChangepointsExceededError",
    "NetworkError",
    "NoTrueChangesError",
    "PenaltySpec",
    "PlantedInstance",
    "SegEvalReport",
    "Segmentation",
    "SolverOptions",
    "SynthConfig",
    "TooLargeError",
    "WindowTooLargeError",
    "ZeroVectorError",
    "boundary_error",
    "brute_force_oracle",
    "build_cost_model",
    "changepoint_curve",
    "curve_elbow",
    "default_num_changes",
    "default_scale_grid",
    "default_window",
    "deviation_bound",
    "evaluate",
    "fetch_embeddings",
    "gen_planted",
    "linear_population_cost",
    "localization_experiment",
    "ma_from_innovations",
    "ma_noise",
    "mc_deviation_check",
    "mc_deviation_sweep",
    "median_bandwidth",
    "normalize_rows",
    "penalty_floor",
    "pick_scale",
    "pk",
    "read_binary",
    "read_jsonl",
    "read_segmentation",
    "read_sequence",
    "sample_changepoints",
    "solve",
    "solve_exact_dp",
    "solve_pelt",
    "total_penalized_cost",
    "uniform_deviation_scale",
    "window_diff",
    "write_binary",
    "write_jsonl",
    "write_segmentation",
]
