import itertools

import numpy as np
import pytest

from polarperc import (
    FitError,
    ResourceLimitError,
    ScalingPoint,
    fit_scaling_exponent,
    max_rate,
    synthetic_spectrum,
)
from polarperc.scaling import dump_spectrum, load_spectrum


def brute_force_spectrum(z0, n):
    """Independent oracle: enumerate every branch sequence."""
    leaves = []
    for branches in itertools.product((0, 1), repeat=n):
        z = z0
        for b in branches:
            z = z * z if b == 0 else 2.0 * z - z * z
        leaves.append(z)
    return sorted(leaves)


class TestSyntheticSpectrum:
    def test_one_stage(self):
        np.testing.assert_allclose(synthetic_spectrum(0.5, 1).values, [0.25, 0.75])

    def test_two_stages(self):
        np.testing.assert_allclose(
            synthetic_spectrum(0.5, 2).values, [0.0625, 0.4375, 0.5625, 0.9375]
        )

    @pytest.mark.parametrize("z0,n", [(0.5, 6), (0.3, 8), (0.72, 10)])
    def test_against_brute_force(self, z0, n):
        np.testing.assert_array_equal(
            synthetic_spectrum(z0, n).values, brute_force_spectrum(z0, n)
        )

    @pytest.mark.parametrize("n", range(0, 15))
    def test_martingale_mean(self, n):
        spec = synthetic_spectrum(0.37, n)
        assert spec.values.mean() == pytest.approx(0.37, abs=2**n * 1e-16)

    def test_doubling_multiset_identity(self):
        for n in (4, 8, 12):
            prev = synthetic_spectrum(0.5, n).values
            rebuilt = np.sort(np.concatenate([prev * prev, 2 * prev - prev * prev]))
            np.testing.assert_array_equal(
                rebuilt, synthetic_spectrum(0.5, n + 1).values
            )

    def test_resource_guard(self):
        with pytest.raises(ResourceLimitError):
            synthetic_spectrum(0.5, 25)


class TestMaxRate:
    def test_one_stage_loose_target(self):
        pt = max_rate(synthetic_spectrum(0.5, 1), 0.3)
        assert pt.rate == 0.5 and pt.gap == 0.0 and pt.degenerate

    def test_one_stage_tight_target(self):
        pt = max_rate(synthetic_spectrum(0.5, 1), 0.2)
        assert pt.rate == 0.0 and pt.gap == 0.5 and not pt.degenerate

    def test_target_above_total_sum(self):
        # sum of the whole spectrum is below the target: everything selected
        pt = max_rate(synthetic_spectrum(0.3, 1), 0.7)
        assert pt.rate == 1.0
        assert pt.gap == pytest.approx(-0.3)
        assert pt.degenerate

    def test_rate_monotone_in_target(self):
        spec = synthetic_spectrum(0.5, 12)
        rates = [max_rate(spec, t).rate for t in (1e-6, 1e-4, 1e-2, 0.3)]
        assert rates == sorted(rates)

    def test_pe_target_validation(self):
        with pytest.raises(ValueError):
            max_rate(synthetic_spectrum(0.5, 4), 0.0)


class TestScalingFit:
    def test_exact_power_law(self):
        points = [
            ScalingPoint(n, 2**n, 0.0, (2**n) ** -0.25, 1e-3) for n in range(4, 16)
        ]
        fit = fit_scaling_exponent(points)
        assert fit.value == pytest.approx(4.0, abs=1e-12)
        assert fit.stderr < 1e-12

    def test_degenerate_points_excluded(self):
        good = [ScalingPoint(n, 2**n, 0.0, 2.0**-n, 1e-3) for n in range(3)]
        bad = [ScalingPoint(9, 2**9, 0.6, -0.1, 1e-3, degenerate=True)]
        fit = fit_scaling_exponent(good + bad)
        assert fit.n_points == 3

    def test_identical_gaps_rejected(self):
        points = [ScalingPoint(n, 2**n, 0.0, 0.25, 1e-3) for n in range(5)]
        with pytest.raises(FitError):
            fit_scaling_exponent(points)

    def test_too_few_points(self):
        points = [ScalingPoint(n, 2**n, 0.0, 2.0**-n, 1e-3) for n in range(2)]
        with pytest.raises(FitError):
            fit_scaling_exponent(points)

    def test_pipeline_mu_roughly_stable_in_z0(self):
        # finite-size corrections keep the fitted exponent well above the
        # asymptotic 3.63 at these blocklengths (local slopes drift from ~5.0
        # at n=10 to ~4.1 at n=22); the channel parameter shifts the fit by
        # a few tenths, not more
        mus = []
        for z0 in (0.4, 0.5, 0.6):
            points = [
                max_rate(synthetic_spectrum(z0, n), 1e-3) for n in range(10, 21)
            ]
            mus.append(fit_scaling_exponent(points).value)
        assert max(mus) - min(mus) < 0.5
        assert all(3.5 < mu < 5.2 for mu in mus)


class TestSpectrumIO:
    def test_round_trip(self, tmp_path):
        spec = synthetic_spectrum(0.41, 10)
        path = tmp_path / "spec.pspc"
        dump_spectrum(spec, path)
        loaded = load_spectrum(path)
        assert loaded.n == spec.n and loaded.z0 == spec.z0
        np.testing.assert_array_equal(loaded.values, spec.values)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.pspc"
        path.write_bytes(b"NOPE" + b"\0" * 32)
        with pytest.raises(ValueError):
            load_spectrum(path)
