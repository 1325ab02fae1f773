"""Penalized segmentation solvers: exact DP, PELT pruning, brute force.

All three minimize

    sum_k cost(segment_k) + beta * (number of change points)

over segmentations of 1..T whose segments all have length >= min_size,
and all three break cost ties the same way: prefer the smaller last
change point at every recursion step.  Unrolled, that means among
optimal segmentations we return the one whose boundary list, read right
to left and padded with zeros, is lexicographically smallest; in
particular fewer change points beat more when totals tie exactly.

The recursion, with F(0) = -beta and cost queries from a CostModel:

    F(s) = min over admissible t of  F(t) + cost(t+1, s) + beta,
    t admissible iff (t = 0 or t >= min_size) and t <= s - min_size.

PELT prunes candidate t once F(t) + cost(t+1, s) > F(s): segment costs
only grow under extension splits (cost(s, e) >= cost(s, u) + cost(u+1, e)),
so from the step where prefix end s itself becomes an admissible split,
t can never re-enter the argmin.  That step is s + min_size, not s + 1:
for the min_size - 1 steps in between, s is not yet a legal previous end
and the dominated t may still be the only way to cover the tail, so
removals are deferred until the dominating end is admissible.  The
inequality is strict, so exact ties survive pruning and PELT reproduces
the exact DP bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest

import numpy as np

from .errors import (
    InfeasibleError,
    MaxChangepointsExceededError,
    TooLargeError,
)
from .kernel_cost import CostModel, total_penalized_cost
from .sequence import Segmentation

ALGO_PELT = "pelt"
ALGO_DP = "dp"
ALGO_BRUTE = "brute"

# Brute force enumerates 2^(T-1) boundary subsets.
BRUTE_MAX_T = 16


@dataclass(frozen=True)
class SolverOptions:
    beta: float
    min_size: int = 1
    max_changepoints: int | None = None
    algorithm: str = ALGO_PELT

    def __post_init__(self):
        b = float(self.beta)
        if not np.isfinite(b) or b < 0:
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        object.__setattr__(self, "beta", b)
        if int(self.min_size) < 1:
            raise ValueError(f"min_size must be >= 1, got {self.min_size}")
        object.__setattr__(self, "min_size", int(self.min_size))
        if self.max_changepoints is not None and int(self.max_changepoints) < 0:
            raise ValueError("max_changepoints must be >= 0")
        if self.algorithm not in (ALGO_PELT, ALGO_DP, ALGO_BRUTE):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")


def _check_feasible(model: CostModel, opts: SolverOptions) -> None:
    if opts.min_size > model.T:
        raise InfeasibleError(
            f"min_size={opts.min_size} exceeds T={model.T}; "
            "no segmentation exists"
        )


def _check_cap(seg: Segmentation, opts: SolverOptions) -> Segmentation:
    if opts.max_changepoints is not None and seg.num_changes > opts.max_changepoints:
        raise MaxChangepointsExceededError(
            f"optimum uses {seg.num_changes} change points, "
            f"cap is {opts.max_changepoints}; raise beta or the cap"
        )
    return seg


def _dp(model: CostModel, opts: SolverOptions, prune: bool,
        candidate_sizes: list[int] | None = None) -> Segmentation:
    T = model.T
    ms = opts.min_size
    beta = opts.beta
    F = np.full(T + 1, np.inf)
    F[0] = -beta
    prev = np.full(T + 1, -1, dtype=np.int64)
    cands: list[int] = []
    # pending[s'] lists candidates whose removal takes effect at step s'
    pending: dict[int, list[int]] = {}
    for s in range(1, T + 1):
        t_new = s - ms
        # each t becomes admissible exactly once, at s = t + min_size
        if t_new == 0 or t_new >= ms:
            cands.append(t_new)
        if not cands:
            continue
        ts = np.asarray(cands, dtype=np.int64)
        base = F[ts] + model.segment_costs(s, ts)
        v = base + beta
        i = int(np.argmin(v))  # first minimum: smallest last change point
        F[s] = v[i]
        prev[s] = ts[i]
        if prune:
            keep = base <= F[s]
            if not keep.all():
                # a candidate dominated here is dominated by prefix end s,
                # which is only admissible from step s + min_size on; until
                # then the candidate can still carry the optimum, so its
                # removal is deferred to that step
                pending.setdefault(s + ms, []).extend(
                    t for t, k in zip(cands, keep) if not k
                )
            dead = pending.pop(s + 1, None)
            if dead:
                gone = set(dead)
                cands = [t for t in cands if t not in gone]
        if candidate_sizes is not None:
            candidate_sizes.append(len(cands))
    if not np.isfinite(F[T]):
        raise InfeasibleError(
            f"no segmentation of T={T} with min_size={ms}"
        )
    rev = []
    s = T
    while s > 0:
        rev.append(s)
        s = int(prev[s])
    return Segmentation(tuple(reversed(rev)))


def solve_exact_dp(model: CostModel, opts: SolverOptions) -> Segmentation:
    """O(T^2) dynamic program over all admissible split points."""
    _check_feasible(model, opts)
    return _check_cap(_dp(model, opts, prune=False), opts)


def solve_pelt(
    model: CostModel,
    opts: SolverOptions,
    *,
    candidate_sizes: list[int] | None = None,
) -> Segmentation:
    """Exact DP with PELT pruning; same optimum and same tie-breaks.

    candidate_sizes, if given, receives the surviving candidate count
    after each step (instrumentation only, no effect on the result).
    """
    _check_feasible(model, opts)
    return _check_cap(
        _dp(model, opts, prune=True, candidate_sizes=candidate_sizes), opts
    )


def _tie_key(interior: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(reversed(interior))


def _key_less(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    for x, y in zip_longest(a, b, fillvalue=0):
        if x != y:
            return x < y
    return False


def brute_force_oracle(model: CostModel, opts: SolverOptions) -> Segmentation:
    """Enumerate every admissible segmentation; reference for tests.

    Applies the same tie rule as the DP (right-to-left boundary
    comparison, zero-padded) and accumulates totals in the same order,
    so agreement is exact, not approximate.
    """
    T = model.T
    if T > BRUTE_MAX_T:
        raise TooLargeError(
            f"brute force enumerates 2^(T-1) segmentations; T={T} > {BRUTE_MAX_T}"
        )
    _check_feasible(model, opts)
    ms = opts.min_size
    beta = opts.beta
    # table[t][e] = cost of segment (t, e], from the same vectorized query
    # the DP uses, so every segment cost is bit-identical across solvers.
    table = [None] + [model.segment_costs(e, np.arange(e)) for e in range(1, T + 1)]
    best_cost = None
    best_interior = None
    for mask in range(1 << (T - 1)):
        interior = tuple(i + 1 for i in range(T - 1) if (mask >> i) & 1)
        bounds = interior + (T,)
        prev_b = 0
        ok = True
        for b in bounds:
            if b - prev_b < ms:
                ok = False
                break
            prev_b = b
        if not ok:
            continue
        # same accumulation order as the DP recursion, see total_penalized_cost
        cost = -beta
        prev_b = 0
        for b in bounds:
            cost = cost + float(table[b][prev_b]) + beta
            prev_b = b
        if (
            best_cost is None
            or cost < best_cost
            or (cost == best_cost and _key_less(_tie_key(interior), _tie_key(best_interior)))
        ):
            best_cost = cost
            best_interior = interior
    if best_interior is None:
        raise InfeasibleError(f"no segmentation of T={T} with min_size={ms}")
    return _check_cap(Segmentation(best_interior + (T,)), opts)


def solve(model: CostModel, opts: SolverOptions) -> Segmentation:
    """Dispatch on opts.algorithm."""
    if opts.algorithm == ALGO_PELT:
        return solve_pelt(model, opts)
    if opts.algorithm == ALGO_DP:
        return solve_exact_dp(model, opts)
    return brute_force_oracle(model, opts)
