import math

import numpy as np
import pytest

from icctab import (
    DataTable,
    MissingPattern,
    PreconditionError,
    StructuralError,
    SynthSpec,
    alpha_cdf,
    degrade_pattern,
    degrade_random,
    generate,
    icc_report,
    signed_power,
)


class TestGenerate:
    def test_zero_severity_is_additive(self):
        spec = SynthSpec(rows=50, cols=8, mean=3.0, severity=0.0, seed=1)
        table, truth = generate(spec)
        assert np.all(truth.participant_exponents == 1.0)
        residuals = table.values - 3.0 - truth.item_effects[:, None]
        assert abs(residuals.mean()) < 0.1
        assert abs(residuals.std() - spec.noise_sd) < 0.1

    def test_reproducible_from_spec(self):
        spec = SynthSpec(rows=30, cols=6, severity=1.5, seed=44)
        a, truth_a = generate(spec)
        b, truth_b = generate(spec)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(truth_a.item_effects, truth_b.item_effects)

    def test_icc_matches_target_q(self):
        # item_sd chosen for q = 0.161 so the 39-column ICC lands near 0.8626
        spec_q = 0.161
        iccs = []
        for seed in range(10):
            spec = SynthSpec(rows=1400, cols=39, item_sd=math.sqrt(spec_q), seed=seed)
            table, _ = generate(spec)
            iccs.append(icc_report(table).icc)
        assert np.mean(iccs) == pytest.approx(0.8626, abs=0.01)

    def test_expected_icc_field(self):
        spec = SynthSpec(rows=10, cols=80, seed=0)
        _, truth = generate(spec)
        assert truth.expected_icc == pytest.approx(0.16 * 80 / (0.16 * 80 + 1))

    def test_severity_spreads_exponents(self):
        _, truth = generate(SynthSpec(rows=10, cols=500, severity=2.0, seed=5))
        assert truth.participant_exponents.min() >= 1.0
        assert truth.participant_exponents.max() > 2.0

    def test_spec_validation(self):
        with pytest.raises(PreconditionError):
            SynthSpec(rows=1, cols=5)
        with pytest.raises(PreconditionError):
            SynthSpec(rows=5, cols=5, item_sd=0.0)
        with pytest.raises(PreconditionError):
            SynthSpec(rows=5, cols=5, severity=-1.0)


class TestSignedPower:
    def test_zero_base(self):
        assert signed_power(0.0, 3.7) == 0.0

    def test_negative_base_keeps_sign(self):
        assert signed_power(-2.0, 3.0) == pytest.approx(-8.0)

    def test_unit_exponent_is_identity(self):
        x = np.array([-1.5, 0.0, 0.4, 2.0])
        assert signed_power(x, 1.0) == pytest.approx(x)


class TestAlphaCdf:
    def test_lower_boundary(self):
        assert alpha_cdf(1.0, 2.0) == 0.0

    def test_upper_limit(self):
        assert alpha_cdf(200.0, 2.0) == pytest.approx(1.0)

    def test_characteristic_point(self):
        s = 2.0
        assert alpha_cdf(1.0 + s, s) == pytest.approx(1.0 - math.exp(-1.0))

    def test_domain_checks(self):
        with pytest.raises(PreconditionError):
            alpha_cdf(0.5, 2.0)
        with pytest.raises(PreconditionError):
            alpha_cdf(1.5, 0.0)


class TestDegradeRandom:
    def test_zero_proportion_is_identity(self, complete_table):
        assert degrade_random(complete_table, 0.0, rng=1) is complete_table

    def test_exact_mask_count(self):
        raw, _ = generate(SynthSpec(rows=80, cols=25, seed=2))
        degraded = degrade_random(raw, 0.16, rng=3)
        assert degraded.missing.sum() == round(0.16 * 80 * 25)

    def test_pmiss_recount(self):
        raw, _ = generate(SynthSpec(rows=60, cols=20, seed=4))
        degraded = degrade_random(raw, 0.3, rng=5)
        assert abs(icc_report(degraded).pmiss - 0.3) <= 1.0 / (60 * 20)

    def test_unmasked_values_untouched(self, complete_table):
        degraded = degrade_random(complete_table, 0.25, rng=6)
        valid = degraded.valid
        assert np.array_equal(degraded.values[valid], complete_table.values[valid])

    def test_reproducible(self, complete_table):
        a = degrade_random(complete_table, 0.25, rng=9)
        b = degrade_random(complete_table, 0.25, rng=9)
        assert np.array_equal(a.missing, b.missing)

    def test_unsatisfiable_constraint(self):
        t = DataTable(np.arange(4.0).reshape(2, 2) + 1)
        with pytest.raises(StructuralError, match="without emptying"):
            degrade_random(t, 0.75, rng=1)

    def test_proportion_domain(self, complete_table):
        with pytest.raises(PreconditionError):
            degrade_random(complete_table, 0.96, rng=1)


class TestDegradePattern:
    def test_all_false_pattern_is_identity(self, complete_table):
        out = degrade_pattern(complete_table, np.zeros((5, 4), bool))
        assert np.array_equal(out.values, complete_table.values)
        assert out.missing.sum() == 0

    def test_idempotent_on_own_mask(self, small_table):
        out = degrade_pattern(small_table, MissingPattern.from_table(small_table))
        assert np.array_equal(out.missing, small_table.missing)

    def test_density_recount(self):
        raw, _ = generate(SynthSpec(rows=120, cols=30, seed=6))
        reference = degrade_random(raw, 0.2, rng=7)
        pattern = MissingPattern.from_table(reference)
        other, _ = generate(SynthSpec(rows=120, cols=30, seed=8))
        out = degrade_pattern(other, pattern)
        assert out.pmiss == pytest.approx(pattern.density)

    def test_shape_mismatch(self, complete_table):
        with pytest.raises(StructuralError, match="shape"):
            degrade_pattern(complete_table, np.zeros((3, 3), bool))

    def test_sort_rows_by_mean_reorders(self):
        values = np.array([[5.0, 6.0], [1.0, 2.0], [3.0, 4.0]])
        out = degrade_pattern(DataTable(values), np.zeros((3, 2), bool), sort_rows_by_mean=True)
        assert out.values[:, 0].tolist() == [1.0, 3.0, 5.0]
