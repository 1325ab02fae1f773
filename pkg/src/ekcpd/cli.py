"""Command-line interface.

Subcommands: segment, eval, elbow, simulate (planted | deviation |
localization), fetch.  Results go to files; stdout carries a single
JSON summary line per run.  Exit codes: 0 ok, 2 malformed input file,
3 infeasible or inconsistent options, 4 no usable elbow, 5 auth
failure, 6 network failure after retries.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from time import perf_counter

import numpy as np

from . import formats
from .client import fetch_embeddings
from .errors import (
    AuthError,
    DegenerateCurveError,
    DegenerateSequenceError,
    EkcpdError,
    FormatError,
    InfeasibleError,
    InvalidKError,
    NetworkError,
    NoTrueChangesError,
    TooLargeError,
    WindowTooLargeError,
    ZeroVectorError,
)
from .kernel_cost import KernelSpec, build_cost_model, total_penalized_cost
from .metrics import evaluate
from .penalty import (
    DEFAULT_GRID_HI,
    DEFAULT_GRID_LO,
    DEFAULT_GRID_POINTS,
    PenaltySpec,
    changepoint_curve,
    curve_elbow,
    default_scale_grid,
    pick_scale,
)
from .solver import ALGO_DP, ALGO_PELT, SolverOptions, solve
from .synthgen import (
    LOCALIZATION_COLUMNS,
    SynthConfig,
    gen_planted,
    localization_experiment,
    mc_deviation_sweep,
)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _kernel_from_args(args) -> KernelSpec:
    gamma = None
    if getattr(args, "gamma", None) not in (None, "median"):
        gamma = float(args.gamma)
    if args.kernel == "cosine":
        if gamma is not None:
            raise ValueError("--gamma only applies to --kernel rbf")
        return KernelSpec.cosine()
    if args.kernel == "linear":
        if gamma is not None:
            raise ValueError("--gamma only applies to --kernel rbf")
        return KernelSpec(kind="linear", normalize_rows=args.normalize)
    return KernelSpec(kind="rbf", gamma=gamma, normalize_rows=args.normalize)


def _emit(obj: dict) -> None:
    print(json.dumps(obj))


def cmd_segment(args) -> int:
    t0 = perf_counter()
    seq = formats.read_sequence(args.input)
    kernel = _kernel_from_args(args)
    if args.beta is not None:
        pspec = PenaltySpec.explicit(args.beta)
    elif args.C == 0.0:
        # C = 0 is an unpenalized fit; scaled() itself requires C > 0
        pspec = PenaltySpec.explicit(0.0)
    else:
        pspec = PenaltySpec.scaled(args.C)
    beta = pspec.resolve(seq.T)
    model = build_cost_model(seq, kernel, allow_large_gram=args.allow_large_gram)
    opts = SolverOptions(
        beta=beta,
        min_size=args.min_size,
        max_changepoints=args.max_changepoints,
        algorithm=args.algo,
    )
    seg = solve(model, opts)
    meta = {
        "kernel": kernel.kind,
        "normalize_rows": kernel.normalize_rows,
        "gamma": model.gamma,
        "beta": beta,
        "min_size": opts.min_size,
        "algorithm": opts.algorithm,
    }
    formats.write_segmentation(args.output, seg, meta)
    _emit({
        "k_hat": seg.num_changes,
        "total_cost": total_penalized_cost(model, seg, beta),
        "beta": beta,
        "wall_time_s": round(perf_counter() - t0, 6),
    })
    return 0


def cmd_eval(args) -> int:
    ref, _ = formats.read_segmentation(args.reference)
    hyp, _ = formats.read_segmentation(args.hypothesis)
    report = evaluate(ref, hyp, window=args.window)
    _emit({
        "pk": report.pk,
        "window_diff": report.window_diff,
        "window": report.window,
        "boundary_error": report.hausdorff_one_sided,
        "k_true": report.k_true,
        "k_hat": report.k_hat,
        "pk_pct": 100.0 * report.pk,
        "wd_pct": 100.0 * report.window_diff,
    })
    return 0


def cmd_elbow(args) -> int:
    kernel = _kernel_from_args(args)
    grid = default_scale_grid(args.grid_points, args.grid_lo, args.grid_hi)
    curves = []
    for path in args.inputs:
        seq = formats.read_sequence(path)
        model = build_cost_model(seq, kernel,
                                 allow_large_gram=args.allow_large_gram)
        curves.append(changepoint_curve(model, grid, min_size=args.min_size))
    if args.curves_out:
        with open(args.curves_out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["document", "scale", "k_hat"])
            for path, curve in zip(args.inputs, curves):
                for c, k in zip(curve.scales, curve.k_hats):
                    w.writerow([path, repr(c), k])
    c_star = pick_scale(curves)
    _emit({
        "C_star": c_star,
        "per_document": [curve_elbow(c) for c in curves],
        "grid": [float(c) for c in grid],
    })
    return 0


def cmd_simulate_planted(args) -> int:
    cfg = SynthConfig(
        T=args.T, K=args.K, d=args.d, m=args.m, delta=args.delta,
        topics=args.topics, noise_scale=args.sigma,
        normalize=args.normalize_rows, seed=args.seed,
    )
    inst = gen_planted(cfg)
    labels = inst.truth.labels()
    bset = set(inst.truth.boundaries)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "segment", "boundary"]
                   + [f"y{j}" for j in range(cfg.d)])
        for i in range(cfg.T):
            t = i + 1
            w.writerow([t, int(labels[i]), int(t in bset)]
                       + [repr(float(v)) for v in inst.seq.vectors[i]])
    if args.jsonl_out:
        formats.write_jsonl(args.jsonl_out, inst.seq)
    if args.truth_out:
        formats.write_segmentation(args.truth_out, inst.truth,
                                   {"generator": "planted", "seed": cfg.seed})
    _emit({
        "T": cfg.T,
        "K": inst.truth.num_changes,
        "boundaries": list(inst.truth.boundaries),
        "out": args.out,
    })
    return 0


def cmd_simulate_deviation(args) -> int:
    kernel = (KernelSpec.rbf(gamma=args.rbf_gamma, normalize=True)
              if args.kernel == "rbf" else KernelSpec.cosine())
    reports = mc_deviation_sweep(args.n, args.m, args.x_factors,
                                 args.reps, args.seed, kernel)
    violations = sum(1 for r in reports if r.empirical_prob > r.bound)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "m", "x", "reps", "empirical_prob", "bound"])
        for r in reports:
            w.writerow([r.n, r.m, repr(r.x), r.reps,
                        repr(r.empirical_prob), repr(r.bound)])
    _emit({"cells": len(reports), "violations": violations, "out": args.out})
    return 0


def cmd_simulate_localization(args) -> int:
    rows = localization_experiment(args.Ts, args.C, args.m, args.reps,
                                   args.seed)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(LOCALIZATION_COLUMNS))
        for r in rows:
            w.writerow([r.T, r.K, r.reps, repr(r.mean_pk), repr(r.mean_wd),
                        repr(r.mean_boundary_error), repr(r.delta_T)])
    _emit({
        "Ts": [r.T for r in rows],
        "mean_pk": [r.mean_pk for r in rows],
        "mean_boundary_error": [r.mean_boundary_error for r in rows],
        "out": args.out,
    })
    return 0


def cmd_fetch(args) -> int:
    n = fetch_embeddings(
        args.input,
        args.output,
        endpoint=args.endpoint,
        model=args.model,
        batch_size=args.batch_size,
    )
    _emit({"rows": n, "out": args.output})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ekcpd",
        description="Kernel change-point segmentation of embedding sequences",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_kernel_flags(sp, default="cosine"):
        sp.add_argument("--kernel", choices=["cosine", "linear", "rbf"],
                        default=default)
        sp.add_argument("--gamma", default=None, metavar="G|median",
                        help="rbf bandwidth; 'median' or a positive float "
                             "(default: median heuristic)")
        sp.add_argument("--normalize", action="store_true",
                        help="unit-normalize rows before the kernel "
                             "(implied by --kernel cosine)")
        sp.add_argument("--allow-large-gram", action="store_true",
                        help="lift the rbf sequence-length guard")

    sp = sub.add_parser("segment", help="segment one embedding sequence")
    sp.add_argument("input", help="JSONL or binary embedding file")
    sp.add_argument("-o", "--output", required=True,
                    help="segmentation JSON output path")
    add_kernel_flags(sp)
    pen = sp.add_mutually_exclusive_group(required=True)
    pen.add_argument("--beta", type=float, default=None,
                     help="explicit penalty per change point")
    pen.add_argument("--C", type=float, default=None, dest="C",
                     help="penalty scale: beta = C * sqrt(T ln T)")
    sp.add_argument("--min-size", type=int, default=1)
    sp.add_argument("--max-changepoints", type=int, default=None)
    sp.add_argument("--algo", choices=[ALGO_PELT, ALGO_DP], default=ALGO_PELT)
    sp.set_defaults(func=cmd_segment)

    sp = sub.add_parser("eval", help="score a hypothesis against a reference")
    sp.add_argument("reference", help="reference segmentation JSON")
    sp.add_argument("hypothesis", help="hypothesis segmentation JSON")
    sp.add_argument("--window", type=int, default=None,
                    help="probe width (default: half mean reference "
                         "segment length)")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("elbow",
                        help="pick the penalty scale from documents")
    sp.add_argument("inputs", nargs="+", help="embedding files")
    add_kernel_flags(sp)
    sp.add_argument("--grid-lo", type=float, default=DEFAULT_GRID_LO)
    sp.add_argument("--grid-hi", type=float, default=DEFAULT_GRID_HI)
    sp.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS)
    sp.add_argument("--min-size", type=int, default=1)
    sp.add_argument("--curves-out", default=None,
                    help="optional CSV of every (document, scale, k_hat)")
    sp.set_defaults(func=cmd_elbow)

    sim = sub.add_parser("simulate", help="synthetic data and checks")
    simsub = sim.add_subparsers(dest="sim_command", required=True)

    sp = simsub.add_parser("planted", help="one planted instance to CSV")
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--K", type=int, default=None,
                    help="planted changes (default ceil(2 ln T))")
    sp.add_argument("--d", type=int, default=16)
    sp.add_argument("--m", type=int, default=20)
    sp.add_argument("--delta", type=float, default=1.0)
    sp.add_argument("--topics", type=int, default=5)
    sp.add_argument("--sigma", type=float, default=0.5)
    sp.add_argument("--normalize-rows", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="CSV output path")
    sp.add_argument("--jsonl-out", default=None,
                    help="also write the rows as embedding JSONL")
    sp.add_argument("--truth-out", default=None,
                    help="also write the true segmentation JSON")
    sp.set_defaults(func=cmd_simulate_planted)

    sp = simsub.add_parser("deviation",
                           help="empirical cost deviation vs tail bound")
    sp.add_argument("--n", type=_int_list, required=True,
                    help="comma-separated block lengths")
    sp.add_argument("--m", type=_int_list, required=True,
                    help="comma-separated dependence ranges")
    sp.add_argument("--x-factors", type=_float_list, default=[0.5, 1.0, 2.0],
                    help="thresholds as multiples of sqrt(n)")
    sp.add_argument("--reps", type=int, default=10000)
    sp.add_argument("--kernel", choices=["cosine", "rbf"], default="cosine")
    sp.add_argument("--rbf-gamma", type=float, default=1.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="CSV output path")
    sp.set_defaults(func=cmd_simulate_deviation)

    sp = simsub.add_parser("localization",
                           help="segmentation error as T grows")
    sp.add_argument("--Ts", type=_int_list, default=[250, 500, 1000, 2000])
    sp.add_argument("--C", type=float, default=0.1)
    sp.add_argument("--m", type=int, default=20)
    sp.add_argument("--reps", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="CSV output path")
    sp.set_defaults(func=cmd_simulate_localization)

    sp = sub.add_parser("fetch",
                        help="embed a text file via an embeddings endpoint")
    sp.add_argument("input", help="one text unit per line")
    sp.add_argument("-o", "--output", required=True,
                    help="JSONL output path")
    sp.add_argument("--endpoint", required=True,
                    help="base URL; /v1/embeddings is appended")
    sp.add_argument("--model", required=True)
    sp.add_argument("--batch-size", type=int, default=64)
    sp.set_defaults(func=cmd_fetch)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleError, WindowTooLargeError, InvalidKError,
            NoTrueChangesError, TooLargeError, DegenerateSequenceError,
            ZeroVectorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DegenerateCurveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except AuthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except NetworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 6
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EkcpdError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
