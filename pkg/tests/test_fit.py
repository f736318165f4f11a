import numpy as np
import pytest

from icctab import (
    DataTable,
    NumericError,
    PreconditionError,
    StructuralError,
    SynthSpec,
    corrected_r2,
    degrade_random,
    fit_predictors,
    generate,
    icc_report,
    r2cor_bias_demo,
    r2_icc_curve,
    zscore,
)
from icctab.rand import as_generator


class TestCorrectedR2:
    def test_published_transcript_values(self):
        ratio, cor = corrected_r2([0.1337, 0.0592], icc=0.9261, icc_cor=0.9286)
        assert ratio == pytest.approx([0.1443, 0.0639], abs=5e-4)
        assert cor == pytest.approx([0.1340, 0.0593], abs=5e-4)

    def test_identity(self):
        ratio, cor = corrected_r2(0.4, icc=0.8, icc_cor=0.9)
        assert cor == pytest.approx(0.9 * 0.4 / 0.8, abs=1e-15)


@pytest.fixture(scope="module")
def table_and_predictor():
    raw, truth = generate(SynthSpec(rows=400, cols=30, seed=41))
    degraded = degrade_random(raw, 0.15, rng=42)
    gen = as_generator(43)
    predictor = truth.item_effects + gen.normal(0, 0.3, size=400)
    return degraded, predictor


class TestFitPredictors:
    def test_eq_identity_holds_exactly(self, table_and_predictor):
        table, predictor = table_and_predictor
        fit = fit_predictors(table, predictor)
        rep = fit.icc_context
        assert fit.r2_cor[0] == pytest.approx(
            rep.icc_cor * fit.r2[0] / rep.icc, abs=1e-12
        )
        assert 0.0 <= fit.r2[0] <= 1.0

    def test_item_means_predictor_is_perfect(self, table_and_predictor):
        table, _ = table_and_predictor
        rep = icc_report(table)
        fit = fit_predictors(table, rep.item_means)
        assert fit.r2[0] == pytest.approx(1.0, abs=1e-12)
        assert fit.r2_on_icc[0] == pytest.approx(1.0 / rep.icc, abs=1e-12)
        assert fit.r2_cor[0] == pytest.approx(rep.icc_cor / rep.icc, abs=1e-12)

    def test_complete_table_needs_no_correction(self):
        raw, truth = generate(SynthSpec(rows=200, cols=20, seed=44))
        fit = fit_predictors(raw, truth.item_effects)
        assert fit.r2_cor[0] == pytest.approx(fit.r2[0], abs=1e-12)

    def test_affine_scale_invariance(self, table_and_predictor):
        table, predictor = table_and_predictor
        base = fit_predictors(table, predictor)
        scaled = fit_predictors(table, -3.5 * predictor + 11.0)
        assert scaled.r2[0] == pytest.approx(base.r2[0], abs=1e-12)
        assert scaled.r2_cor[0] == pytest.approx(base.r2_cor[0], abs=1e-12)

    def test_multiple_predictors(self, table_and_predictor):
        table, predictor = table_and_predictor
        gen = as_generator(45)
        other = gen.normal(0, 1, size=table.rows)
        fit = fit_predictors(table, np.column_stack([predictor, other]))
        assert fit.r2.shape == (2,)
        assert fit.r2[0] > fit.r2[1]

    def test_constant_predictor_rejected(self, table_and_predictor):
        table, _ = table_and_predictor
        with pytest.raises(NumericError, match="constant"):
            fit_predictors(table, np.ones(table.rows))

    def test_shape_mismatch_rejected(self, table_and_predictor):
        table, _ = table_and_predictor
        with pytest.raises(StructuralError, match="rows"):
            fit_predictors(table, np.arange(10.0))

    def test_column_effect_warning_propagates(self):
        raw, truth = generate(SynthSpec(rows=200, cols=12, item_sd=0.2, seed=46))
        offsets = np.random.default_rng(47).normal(0, 3, size=12)
        degraded = degrade_random(DataTable(raw.values + offsets), 0.2, rng=48)
        fit = fit_predictors(degraded, truth.item_effects)
        assert fit.warnings
        assert fit.icc_context.column_effect_warning


class TestR2IccCurve:
    def test_ratio_flat_under_additive_model(self):
        raw, truth = generate(SynthSpec(rows=1400, cols=80, seed=51))
        zt = zscore(raw)
        gen = as_generator(52)
        predictor = truth.item_effects + gen.normal(0, 0.25, size=1400)
        points = r2_icc_curve(zt, predictor, group_sizes=[2, 4, 8, 16], resamples=200, rng=53)
        ratios = [pt.ratio for pt in points]
        assert max(ratios) - min(ratios) <= 0.04
        assert all(pt.excluded == 0 for pt in points)

    def test_independent_predictor_scores_zero(self):
        raw, _ = generate(SynthSpec(rows=1000, cols=40, seed=54))
        gen = as_generator(55)
        noise_pred = gen.normal(0, 1, size=1000)
        points = r2_icc_curve(raw, noise_pred, group_sizes=[4, 16], resamples=100, rng=56)
        for pt in points:
            assert pt.r2 < 0.01
            assert pt.ratio < 0.05

    def test_perfect_predictor_noise_free_table(self):
        gen = as_generator(57)
        effects = gen.normal(0, 1, size=50)
        table = DataTable(np.tile(effects[:, None], (1, 12)))
        points = r2_icc_curve(table, effects, group_sizes=[1, 2, 4], resamples=20, rng=58)
        for pt in points:
            assert pt.icc == pytest.approx(1.0)
            assert pt.ratio == pytest.approx(1.0)

    def test_exclusions_reported_for_sparse_rows(self):
        raw, truth = generate(SynthSpec(rows=300, cols=20, seed=59))
        degraded = degrade_random(raw, 0.5, rng=60)
        points = r2_icc_curve(degraded, truth.item_effects, group_sizes=[2], resamples=50, rng=61)
        assert points[0].excluded > 0

    def test_oversized_group_rejected(self, complete_table):
        with pytest.raises(PreconditionError):
            r2_icc_curve(complete_table, np.arange(5.0), group_sizes=[3], rng=1)


class TestR2CorBiasDemo:
    def test_zero_proportion_coincides(self):
        raw, truth = generate(SynthSpec(rows=300, cols=25, seed=62))
        point = r2cor_bias_demo(raw, truth.item_effects, [0.0], replications=2, rng=63)[0]
        assert point.r2_observed == pytest.approx(point.r2_exact)
        assert point.r2_cor == pytest.approx(point.r2_exact)

    def test_requires_complete_table(self, small_table):
        with pytest.raises(PreconditionError):
            r2cor_bias_demo(small_table, np.arange(4.0), [0.1], replications=1, rng=1)

    def test_correction_beats_observed_under_degradation(self):
        raw, truth = generate(SynthSpec(rows=1000, cols=40, item_sd=0.3, seed=64))
        zt = zscore(raw)
        gen = as_generator(65)
        predictor = truth.item_effects + gen.normal(0, 0.25, size=1000)
        point = r2cor_bias_demo(zt, predictor, [0.3], replications=5, rng=66)[0]
        assert abs(point.r2_cor - point.r2_exact) < abs(point.r2_observed - point.r2_exact)
        assert point.r2_observed < point.r2_exact
