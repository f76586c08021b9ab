"""Closed-form spectra, metrics, and eigenfunctions of the two models."""

import numpy as np
import pytest

from mlqm import (
    ComplexSpectrumError,
    DeformationParams,
    DegenerateModelError,
    DisplacedOscillatorParams,
    DomainError,
    SwansonParams,
    UnsupportedRegimeError,
    displaced_energy,
    displaced_epsilon_levels,
    displaced_metric,
    displaced_spectral,
    displaced_transform,
    displaced_wavefunction,
    eta_inner,
    generic_metric,
    swanson_beta_c,
    swanson_energy,
    swanson_metric,
    swanson_reality_margin,
    swanson_spectral,
    swanson_transform,
    swanson_wavefunction,
)
from mlqm.models import (
    displaced_coefficients,
    displaced_log_rho,
    displaced_printed_wavefunction,
    swanson_coefficients,
    swanson_log_rho,
    swanson_printed_wavefunction,
)
from mlqm.verify import ode_residual


def displaced_default(beta=0.1, gamma=0.0, lam=0.5):
    return DisplacedOscillatorParams(deformation=DeformationParams(1.0, beta, gamma), lam=lam)


def swanson_default(beta=0.5, gamma=0.0, lam=0.2, delta=0.2):
    return SwansonParams(deformation=DeformationParams(1.0, beta, gamma), lam=lam, delta=delta)


class TestParameterValidation:
    def test_displaced_rejects_bad_mass(self):
        with pytest.raises(DomainError):
            DisplacedOscillatorParams(deformation=DeformationParams(), mu=0.0)

    def test_swanson_degenerate_drive(self):
        with pytest.raises(DegenerateModelError):
            SwansonParams(deformation=DeformationParams(), lam=0.5, delta=0.5)

    def test_swanson_negative_drive(self):
        with pytest.raises(UnsupportedRegimeError):
            SwansonParams(deformation=DeformationParams(), lam=0.8, delta=0.5)

    def test_reduced_coupling(self):
        params = DisplacedOscillatorParams(
            deformation=DeformationParams(hbar=2.0), mu=0.5, omega=2.0, lam=3.0
        )
        assert params.lam_tilde == pytest.approx(3.0 / (0.5 * 2.0 * 4.0))

    def test_swanson_c1(self):
        params = swanson_default(lam=0.3, delta=0.1)
        assert params.drive == pytest.approx(0.6)
        assert params.c1 == pytest.approx((0.1 - 0.3) / 0.6)


class TestDisplacedSpectrum:
    def test_ground_state_reference_value(self):
        assert displaced_energy(0, displaced_default()) == pytest.approx(
            0.6506246098625197, rel=1e-14
        )

    def test_lambda_shift_is_additive(self):
        base = displaced_default(lam=0.0)
        shifted = displaced_default(lam=0.7)
        for n in range(4):
            diff = displaced_energy(n, shifted) - displaced_energy(n, base)
            assert diff == pytest.approx(0.49 / 2.0, rel=1e-12)

    def test_beta_zero_limit_is_harmonic(self):
        params = DisplacedOscillatorParams(deformation=DeformationParams(), lam=0.5)
        for n in range(5):
            expected = (n + 0.5) + 0.125
            assert displaced_energy(n, params) == pytest.approx(expected, rel=1e-14)

    def test_energy_map_links_epsilon_and_energy(self):
        params = displaced_default()
        coeffs = displaced_coefficients(params)
        eps = displaced_epsilon_levels(params)
        for n in range(6):
            e = displaced_energy(n, params)
            assert coeffs.energy_map.epsilon(e) == pytest.approx(float(eps(n)), rel=1e-12)

    def test_epsilon_gamma_covariance(self):
        # the ladder shifts by exactly gamma through the offset; E_n is fixed
        a = displaced_default(gamma=0.0)
        b = displaced_default(gamma=0.05)
        for n in range(4):
            assert displaced_energy(n, a) == displaced_energy(n, b)
            assert float(displaced_epsilon_levels(b)(n) - displaced_epsilon_levels(a)(n)) == pytest.approx(
                0.05, abs=1e-12
            )

    def test_negative_level_rejected(self):
        with pytest.raises(DomainError):
            displaced_energy(-1, displaced_default())


class TestSwansonSpectrum:
    def test_clean_point(self):
        assert swanson_energy(0, swanson_default()) == pytest.approx(0.45, rel=1e-14)

    def test_hermitian_case_is_harmonic_at_beta_zero(self):
        params = SwansonParams(deformation=DeformationParams())
        for n in range(5):
            assert swanson_energy(n, params) == pytest.approx(n + 0.5, rel=1e-14)

    def test_energy_map_links_epsilon_and_energy(self):
        params = swanson_default()
        coeffs = swanson_coefficients(params)
        sp = swanson_spectral(params)
        from mlqm import secant_squared_levels

        ladder = secant_squared_levels(sp.nu, 0.5)
        for n in range(6):
            eps = float(ladder(n) + sp.offset)
            assert coeffs.energy_map.energy(eps) == pytest.approx(
                float(np.real(swanson_energy(n, params))), rel=1e-12
            )

    def test_reality_margin_sign(self):
        assert swanson_reality_margin(swanson_default(beta=1.9)) > 0
        assert swanson_reality_margin(swanson_default(beta=2.1)) < 0

    def test_complex_past_threshold(self):
        e = swanson_energy(0, swanson_default(beta=2.1))
        assert e.imag > 0
        # conjugate-pair structure: closed form returns the + branch

    def test_beta_c_reference_value(self):
        assert swanson_beta_c(swanson_default()) == pytest.approx(2.0, rel=1e-14)

    def test_beta_c_none_for_opposite_couplings(self):
        assert swanson_beta_c(swanson_default(lam=0.2, delta=-0.1)) is None

    def test_spectral_is_real_flag(self):
        assert swanson_spectral(swanson_default(beta=1.9)).is_real
        assert not swanson_spectral(swanson_default(beta=2.1)).is_real


class TestMetrics:
    def test_displaced_metric_normalized_at_origin(self):
        eta = displaced_metric(displaced_default())
        assert eta(0.0) == pytest.approx(1.0)

    def test_swanson_metric_closed_form(self):
        params = swanson_default(lam=0.3, delta=0.1)
        eta = swanson_metric(params)
        p = np.linspace(-3, 3, 7)
        expected = (1.0 + 0.5 * p**2) ** (params.c1 / 0.5)
        assert np.allclose(eta(p), expected)

    def test_generic_path_agrees_with_closed_forms(self):
        p = np.linspace(-5, 5, 11)
        d_params = displaced_default(gamma=0.05)
        g1 = generic_metric(d_params.deformation, displaced_log_rho(d_params))
        assert np.allclose(displaced_metric(d_params)(p), g1(p), rtol=1e-12)
        s_params = swanson_default(lam=0.3, delta=0.1, gamma=0.1)
        g2 = generic_metric(s_params.deformation, swanson_log_rho(s_params))
        assert np.allclose(swanson_metric(s_params)(p), g2(p), rtol=1e-12)

    def test_hermitian_limits_have_trivial_metric(self):
        p = np.linspace(-4, 4, 9)
        assert np.allclose(displaced_metric(displaced_default(lam=0.0))(p), 1.0)
        assert np.allclose(swanson_metric(swanson_default(lam=0.2, delta=0.2))(p), 1.0)


class TestTransforms:
    def test_displaced_box_size(self):
        problem = displaced_transform(displaced_default())
        assert problem.q_max == pytest.approx(np.pi / (2 * np.sqrt(0.1)))

    def test_displaced_potential_is_sec_squared_plus_offset(self):
        params = displaced_default()
        sp = displaced_spectral(params)
        problem = displaced_transform(params)
        q = np.linspace(-0.9, 0.9, 13) * problem.q_max
        expected = sp.nu / np.cos(np.sqrt(0.1) * q) ** 2 + sp.offset
        assert np.allclose(problem.potential(q), expected, rtol=1e-10)

    def test_swanson_potential_is_sec_squared_plus_offset(self):
        params = swanson_default(lam=0.3, delta=0.1)
        sp = swanson_spectral(params)
        problem = swanson_transform(params)
        q = np.linspace(-0.9, 0.9, 13) * problem.q_max
        expected = sp.nu / np.cos(np.sqrt(0.5) * q) ** 2 + sp.offset
        assert np.allclose(problem.potential(q), expected, rtol=1e-10)

    def test_swanson_potential_is_gamma_free(self):
        base = swanson_default(lam=0.3, delta=0.1, gamma=0.0)
        tilted = swanson_default(lam=0.3, delta=0.1, gamma=0.2)
        qs = np.linspace(-0.8, 0.8, 9) * swanson_transform(base).q_max
        va = swanson_transform(base).potential(qs)
        vb = swanson_transform(tilted).potential(qs)
        assert np.allclose(va, vb, rtol=1e-12)


class TestWavefunctions:
    @pytest.mark.parametrize("n", [0, 1, 3])
    def test_displaced_satisfies_ode(self, n):
        params = displaced_default()
        psi = displaced_wavefunction(n, params)
        report = ode_residual(psi, displaced_coefficients(params), psi.epsilon)
        assert report.value < 1e-10

    @pytest.mark.parametrize("n", [0, 2])
    def test_swanson_satisfies_ode(self, n):
        params = swanson_default(lam=0.3, delta=0.1)
        psi = swanson_wavefunction(n, params)
        report = ode_residual(psi, swanson_coefficients(params), psi.epsilon)
        assert report.value < 1e-10

    def test_metric_normalization(self):
        params = displaced_default()
        psi = displaced_wavefunction(2, params)
        norm2 = eta_inner(psi, psi, displaced_metric(params), params.deformation)
        assert norm2.real == pytest.approx(1.0, rel=1e-10)

    def test_gamma_enters_only_through_envelope(self):
        # |psi|^2 * measure weight is the gamma-invariant probability density
        p = np.linspace(-4, 4, 17)
        for gamma in (0.0, 0.05):
            params = displaced_default(gamma=gamma)
            psi = displaced_wavefunction(0, params)
            dens = np.abs(psi(p)) ** 2 * params.deformation.measure_weight(p)
            if gamma == 0.0:
                ref = dens
            else:
                assert np.allclose(dens, ref, rtol=1e-9)

    def test_swanson_rejects_complex_regime(self):
        with pytest.raises(ComplexSpectrumError):
            swanson_wavefunction(0, swanson_default(beta=2.1))

    def test_printed_forms_do_not_satisfy_the_ode(self):
        # the published closed forms (kept for cross-checks) leave an O(1)
        # residual; the canonical forms above are the solutions
        params = displaced_default()
        psi = displaced_printed_wavefunction(0, params)
        assert ode_residual(psi, displaced_coefficients(params), psi.epsilon).value > 0.1
        s_params = swanson_default(lam=0.3, delta=0.1)
        phi = swanson_printed_wavefunction(0, s_params)
        assert ode_residual(phi, swanson_coefficients(s_params), phi.epsilon).value > 0.1

    def test_ground_state_has_no_nodes(self):
        psi = displaced_wavefunction(0, displaced_default())
        p = np.linspace(-8, 8, 400)
        assert np.all(np.real(psi(p)) > 0) or np.all(np.real(psi(p)) < 0)

    def test_first_excited_changes_sign_once(self):
        psi = displaced_wavefunction(1, displaced_default())
        vals = np.real(psi(np.linspace(-8, 8, 400)))
        assert np.sum(np.abs(np.diff(np.sign(vals))) > 0) == 1
