"""Penalty schedule algebra and elbow-based scale selection."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import matrices
from ekcpd import (
    DegenerateCurveError,
    ElbowCurve,
    EmbeddingSequence,
    KernelSpec,
    PenaltySpec,
    SynthConfig,
    build_cost_model,
    changepoint_curve,
    curve_elbow,
    default_scale_grid,
    gen_planted,
    pick_scale,
)


class TestPenaltySpec:
    def test_requires_exactly_one_field(self):
        with pytest.raises(ValueError):
            PenaltySpec()
        with pytest.raises(ValueError):
            PenaltySpec(beta=1.0, scale=0.1)

    def test_rejects_negative_beta(self):
        with pytest.raises(ValueError):
            PenaltySpec.explicit(-1.0)

    def test_zero_beta_allowed(self):
        assert PenaltySpec.explicit(0.0).resolve(10) == 0.0

    @pytest.mark.parametrize("c", [0.0, -0.5, np.nan])
    def test_rejects_bad_scale(self, c):
        with pytest.raises(ValueError):
            PenaltySpec.scaled(c)

    def test_explicit_resolve_ignores_T(self):
        spec = PenaltySpec.explicit(2.5)
        assert spec.resolve(2) == 2.5
        assert spec.resolve(10**6) == 2.5

    def test_scaled_resolve_closed_form(self):
        assert PenaltySpec.scaled(1.0).resolve(3) == pytest.approx(
            math.sqrt(3 * math.log(3)), abs=1e-12
        )
        assert PenaltySpec.scaled(0.1).resolve(2000) == pytest.approx(
            0.1 * math.sqrt(2000 * math.log(2000)), abs=1e-12
        )

    def test_scaled_resolve_T1_is_zero(self):
        assert PenaltySpec.scaled(0.7).resolve(1) == 0.0

    def test_resolve_rejects_bad_T(self):
        with pytest.raises(ValueError):
            PenaltySpec.scaled(1.0).resolve(0)

    @given(st.floats(0.01, 10.0), st.integers(2, 10**6))
    @settings(max_examples=100)
    def test_resolve_scales_linearly_in_C(self, c, T):
        one = PenaltySpec.scaled(1.0).resolve(T)
        assert PenaltySpec.scaled(c).resolve(T) == pytest.approx(c * one, rel=1e-12)

    def test_quadrupling_T_ratio(self):
        """beta(4T)/beta(T) = 2 sqrt(ln(4T)/ln T), slowly approaching 2."""
        spec = PenaltySpec.scaled(1.0)

        def ratio(T):
            return spec.resolve(4 * T) / spec.resolve(T)

        exact = 2.0 * math.sqrt(math.log(4 * 10**6) / math.log(10**6))
        assert ratio(10**6) == pytest.approx(exact, rel=1e-12)
        ratios = [ratio(10**p) for p in (6, 12, 24, 48)]
        assert all(r > n for r, n in zip(ratios, ratios[1:]))
        assert all(r > 2.0 for r in ratios)
        assert ratio(10**60) < 2.0 * 1.01


class TestScaleGrid:
    def test_default_grid(self):
        grid = default_scale_grid()
        assert len(grid) == 25
        assert grid[0] == pytest.approx(1e-2)
        assert grid[-1] == pytest.approx(1.0)
        ratios = grid[1:] / grid[:-1]
        assert np.allclose(ratios, ratios[0])

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            default_scale_grid(2)

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            default_scale_grid(5, lo=1.0, hi=0.1)
        with pytest.raises(ValueError):
            default_scale_grid(5, lo=0.0, hi=1.0)


class TestElbowCurve:
    def test_validation(self):
        with pytest.raises(ValueError):
            ElbowCurve((0.1, 0.2), (3, 2))
        with pytest.raises(ValueError):
            ElbowCurve((0.1, 0.2, 0.2), (3, 2, 1))
        with pytest.raises(ValueError):
            ElbowCurve((0.1, 0.2, 0.3), (3, 2))

    def test_elbow_hand_curve(self):
        curve = ElbowCurve((0.1, 0.2, 0.4, 0.8, 1.6), (10, 9, 3, 2, 2))
        # second differences at interior points: -5, 5, 1
        assert curve_elbow(curve) == 0.4

    def test_elbow_tie_prefers_smaller_scale(self):
        curve = ElbowCurve((0.1, 0.2, 0.4, 0.8, 1.6), (9, 6, 3, 1, 0))
        # second differences 0, 1, 1: tie between 0.4 and 0.8
        assert curve_elbow(curve) == 0.4

    def test_constant_curve_has_no_elbow(self):
        assert curve_elbow(ElbowCurve((0.1, 0.2, 0.4), (5, 5, 5))) is None


class TestChangepointCurve:
    def test_counts_non_increasing_on_planted(self):
        inst = gen_planted(SynthConfig(T=150, K=4, d=6, m=5, delta=3.0,
                                       noise_scale=0.4, seed=2))
        model = build_cost_model(inst.seq, KernelSpec.cosine())
        curve = changepoint_curve(model, default_scale_grid())
        ks = curve.k_hats
        assert all(a >= b for a, b in zip(ks, ks[1:]))

    @given(matrices(min_T=4, max_T=20, max_d=3))
    @settings(max_examples=40, deadline=None)
    def test_counts_non_increasing_random(self, v):
        model = build_cost_model(EmbeddingSequence(v), KernelSpec.linear())
        curve = changepoint_curve(model, default_scale_grid(10))
        ks = curve.k_hats
        assert all(a >= b for a, b in zip(ks, ks[1:]))

    def test_min_size_respected(self):
        inst = gen_planted(SynthConfig(T=60, K=3, d=4, seed=5))
        model = build_cost_model(inst.seq, KernelSpec.cosine())
        curve = changepoint_curve(model, default_scale_grid(6), min_size=10)
        assert max(curve.k_hats) <= 5  # at most floor(60/10) segments


class TestPickScale:
    def test_mean_of_elbows(self):
        c1 = ElbowCurve((0.1, 0.2, 0.4, 0.8, 1.6), (10, 9, 3, 2, 2))  # 0.4
        c2 = ElbowCurve((0.1, 0.2, 0.4, 0.8, 1.6), (9, 8, 7, 2, 1))   # 0.8
        assert pick_scale([c1, c2]) == pytest.approx(0.6)

    def test_identical_documents_average_to_single_elbow(self):
        c = ElbowCurve((0.1, 0.2, 0.4, 0.8, 1.6), (10, 9, 3, 2, 2))
        assert pick_scale([c] * 6) == 0.4

    def test_constant_curves_skipped(self):
        c1 = ElbowCurve((0.1, 0.2, 0.4, 0.8, 1.6), (10, 9, 3, 2, 2))
        c2 = ElbowCurve((0.1, 0.2, 0.4, 0.8, 1.6), (4, 4, 4, 4, 4))
        assert pick_scale([c1, c2]) == 0.4

    def test_all_constant_degenerate(self):
        flat = ElbowCurve((0.1, 0.2, 0.4), (4, 4, 4))
        with pytest.raises(DegenerateCurveError):
            pick_scale([flat, flat])

    def test_empty_degenerate(self):
        with pytest.raises(DegenerateCurveError):
            pick_scale([])

    def test_grid_mismatch_rejected(self):
        c1 = ElbowCurve((0.1, 0.2, 0.4), (5, 3, 2))
        c2 = ElbowCurve((0.1, 0.3, 0.4), (5, 3, 2))
        with pytest.raises(ValueError):
            pick_scale([c1, c2])


class TestTwoBlockTransition:
    def _model(self):
        v = np.zeros((6, 2))
        v[:3, 0] = 1.0
        v[3:, 1] = 1.0
        return build_cost_model(
            EmbeddingSequence(v, unit_normalized=True), KernelSpec.linear()
        )

    def test_scaled_transition_brackets_analytic_value(self):
        # split while C sqrt(6 ln 6) < 3, i.e. up to C* = 3/sqrt(6 ln 6)
        c_star = 3.0 / math.sqrt(6 * math.log(6))
        grid = default_scale_grid(41, 0.5, 1.5)
        curve = changepoint_curve(self._model(), grid)
        ks = np.array(curve.k_hats)
        last_split = float(np.array(grid)[ks == 1].max())
        first_merge = float(np.array(grid)[ks == 0].min())
        assert last_split < c_star <= first_merge

    def test_transition_exact_on_straddling_scales(self):
        c_star = 3.0 / math.sqrt(6 * math.log(6))
        model = self._model()
        curve = changepoint_curve(
            model, np.array([c_star * (1 - 1e-9), c_star, c_star * (1 + 1e-9)])
        )
        # at beta exactly 3 the single-segment tie wins
        assert curve.k_hats == (1, 0, 0)
