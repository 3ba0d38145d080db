import math

import numpy as np
import pytest

from polarperc import (
    PHI,
    PHI_CONJ,
    GoldenConstants,
    ReferenceConstants,
    beta_complementary,
    beta_residue,
    g_deriv,
    g_func,
    mf_critical_coincidence,
    rho_mf,
    rho_mf_deriv,
)

ULP = np.spacing(1.0)


class TestGoldenConstants:
    def test_phi_value(self):
        assert PHI == (1.0 + math.sqrt(5.0)) / 2.0

    def test_phi_squared_identity(self):
        assert abs(PHI * PHI - (PHI + 1.0)) <= 2 * ULP * PHI

    def test_conjugate_identities(self):
        assert PHI_CONJ == PHI - 1.0
        assert abs(PHI_CONJ * PHI - 1.0) <= ULP
        assert abs(PHI_CONJ**2 - (1.0 - PHI_CONJ)) <= 2 * ULP
        assert abs(PHI_CONJ**3 - (2.0 * PHI_CONJ - 1.0)) <= 2 * ULP

    def test_beta_mu_reciprocal(self):
        g = GoldenConstants()
        assert abs(g.beta_analytic * g.mu_analytic - 1.0) <= ULP


class TestReferenceConstants:
    def test_analytic_mu_within_bounds(self):
        g, r = GoldenConstants(), ReferenceConstants()
        assert r.mu_lower <= g.mu_analytic <= r.mu_upper

    def test_numeric_beta_mu_consistency(self):
        r = ReferenceConstants()
        assert abs(1.0 / r.beta_num - r.mu_num) < 0.02

    def test_closed_form_lower_bound_expression(self):
        # the stored 3.589 is the rounded value of (1 - 1/(2 ln 2))^(-1)
        computed = 1.0 / (1.0 - 1.0 / (2.0 * math.log(2.0)))
        assert abs(computed - ReferenceConstants().mu_closed_lower) < 5e-4


class TestMeanFieldFormulas:
    def test_rho_mf_values(self):
        assert rho_mf(1.0) == 1.0
        assert rho_mf(0.5) == 0.0
        assert rho_mf(PHI_CONJ) == pytest.approx(PHI_CONJ, abs=1e-15)

    def test_rho_mf_negative_below_half(self):
        assert rho_mf(0.3) < 0.0

    def test_rho_mf_deriv_values(self):
        assert rho_mf_deriv(1.0) == 0.0
        assert rho_mf_deriv(0.5) == pytest.approx(8.0)
        assert rho_mf_deriv(PHI_CONJ) == pytest.approx(2.0 * PHI, rel=1e-14)

    def test_g_func_values(self):
        assert g_func(1.0) == 0.0
        assert g_func(0.75) == pytest.approx(0.125)
        assert g_func(PHI_CONJ) == pytest.approx(PHI_CONJ, abs=1e-15)

    def test_g_deriv_values(self):
        assert g_deriv(1.0) == 0.0
        assert g_deriv(0.75) == pytest.approx(-1.5)
        assert g_deriv(PHI_CONJ) == pytest.approx(-2.0 / PHI_CONJ**3, rel=1e-12)

    @pytest.mark.parametrize("func", [rho_mf, rho_mf_deriv])
    def test_domain_error_at_zero(self, func):
        with pytest.raises(ValueError):
            func(0.0)

    @pytest.mark.parametrize("func", [g_func, g_deriv])
    @pytest.mark.parametrize("p", [0.0, 0.25, 0.5])
    def test_g_domain_errors(self, func, p):
        with pytest.raises(ValueError):
            func(p)

    def test_monotone_on_upper_interval(self):
        ps = np.linspace(0.5 + 1e-6, 1.0, 1000)
        rho_vals = [rho_mf(p) for p in ps]
        g_vals = [g_func(p) for p in ps]
        assert all(b > a for a, b in zip(rho_vals, rho_vals[1:]))
        assert all(b < a for a, b in zip(g_vals, g_vals[1:]))


class TestBetaResidue:
    def test_golden_point(self):
        g = GoldenConstants()
        assert abs(beta_residue(PHI_CONJ) - 1.0 / (2.0 + PHI)) < 1e-14
        assert abs(beta_residue(PHI_CONJ) * g.mu_analytic - 1.0) < 1e-14

    def test_at_true_threshold(self):
        # regression baseline: residue formula evaluated at the literature
        # bond-DP threshold instead of its golden approximation
        val = beta_residue(ReferenceConstants().pc_bond)
        assert val == pytest.approx(0.32651052532315655, abs=1e-12)

    def test_limit_toward_one(self):
        # both derivatives vanish linearly at p=1 with opposite signs, so the
        # residue tends to 1/2 there
        assert beta_residue(1.0 - 1e-9) == pytest.approx(0.5, abs=1e-6)

    def test_proximity_to_numeric_estimate(self):
        r = ReferenceConstants()
        assert abs(beta_residue(PHI_CONJ) - r.beta_num) / r.beta_num < 0.0005

    def test_mu_proximity_to_numeric_estimate(self):
        g, r = GoldenConstants(), ReferenceConstants()
        assert abs(g.mu_analytic - r.mu_num) / r.mu_num < 0.003

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            beta_residue(0.5)
        with pytest.raises(ValueError):
            beta_residue(1.0)


class TestComplementaryRoot:
    def test_value(self):
        assert beta_complementary() == pytest.approx(0.7236068, abs=1e-7)

    def test_sums_to_one(self):
        assert beta_complementary() + beta_residue(PHI_CONJ) == pytest.approx(1.0, abs=1e-15)

    def test_rejected_because_mu_below_two(self):
        assert 1.0 / beta_complementary() < 2.0


class TestCriticalCoincidence:
    def test_both_equal_conjugate(self):
        a, b = mf_critical_coincidence()
        assert abs(a - PHI_CONJ) <= 4 * ULP
        assert abs(b - PHI_CONJ) <= 4 * ULP
        assert abs(a - b) < 1e-15

    def test_no_coincidence_off_critical(self):
        assert rho_mf(0.70) == pytest.approx(0.8163265, abs=1e-6)
        assert g_func(0.70) == pytest.approx(0.225, abs=1e-12)
        assert rho_mf(0.70) != g_func(0.70)
