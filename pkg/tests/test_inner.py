"""Deformed-measure quadrature schemes."""

import numpy as np
import pytest

from mlqm import (
    DeformationParams,
    DomainError,
    GridFunction,
    MomentumGrid,
    NonConvergenceError,
    QuadratureSpec,
    deformed_inner,
    eta_inner,
    eta_norm,
    measure_jacobian,
)
from mlqm.inner import GAUSS_LEGENDRE_Q, UNIFORM_TRAPEZOID_P


class TestQuadratureSpec:
    def test_defaults(self):
        spec = QuadratureSpec()
        assert spec.scheme == GAUSS_LEGENDRE_Q and spec.node_count == 512

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"scheme": "monte-carlo"},
            {"node_count": 8},
            {"p_truncation": 0.0},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureSpec(**kwargs)


class TestMeasureJacobian:
    def test_beta_zero_is_unity(self):
        d = DeformationParams()
        assert np.all(measure_jacobian(d, np.linspace(-3, 3, 7)) == 1.0)

    def test_closed_form(self):
        d = DeformationParams(1.0, 0.4, 0.2)
        p = np.array([0.0, 1.5, -2.0])
        assert np.allclose(measure_jacobian(d, p), (1 + 0.4 * p**2) ** 0.5)


class TestInnerProducts:
    def test_exact_measure_normalization(self):
        # integral of the bare measure dp/(1+beta p^2) equals pi/sqrt(beta)
        d = DeformationParams(1.0, 0.5, 0.0)
        one = lambda p: np.ones_like(np.asarray(p, dtype=float))
        val = deformed_inner(one, one, d)
        assert val.real == pytest.approx(np.pi / np.sqrt(0.5), rel=1e-12)
        assert abs(val.imag) < 1e-14

    def test_schemes_agree_on_decaying_state(self):
        d = DeformationParams(1.0, 0.3, 0.0)
        phi = lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2)
        a = deformed_inner(phi, phi, d, QuadratureSpec())
        b = deformed_inner(phi, phi, d, QuadratureSpec(scheme=UNIFORM_TRAPEZOID_P, node_count=4096))
        assert a.real == pytest.approx(b.real, rel=1e-9)

    def test_metric_weight_applied(self):
        d = DeformationParams(1.0, 0.5, 0.0)
        phi = lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2)
        eta = lambda p: 2.0 * np.ones_like(np.asarray(p, dtype=float))
        plain = deformed_inner(phi, phi, d)
        weighted = eta_inner(phi, phi, eta, d)
        assert weighted.real == pytest.approx(2.0 * plain.real, rel=1e-13)

    def test_exactly_orthogonal_pair_is_not_divergence(self):
        d = DeformationParams(1.0, 0.4, 0.0)
        even = lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2)
        odd = lambda p: np.asarray(p, dtype=float) * np.exp(-0.5 * np.asarray(p, dtype=float) ** 2)
        val = deformed_inner(even, odd, d)
        assert abs(val) < 1e-12

    def test_divergence_detected(self):
        d = DeformationParams(1.0, 0.5, 0.0)
        growing = lambda p: 1.0 + 0.5 * np.asarray(p, dtype=float) ** 2
        with pytest.raises(NonConvergenceError):
            deformed_inner(growing, growing, d)

    def test_q_scheme_requires_positive_beta(self):
        d = DeformationParams()
        phi = lambda p: np.exp(-np.asarray(p, dtype=float) ** 2)
        with pytest.raises(DomainError):
            deformed_inner(phi, phi, d)

    def test_trapezoid_scheme_handles_beta_zero(self):
        d = DeformationParams()
        phi = lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2)
        spec = QuadratureSpec(scheme=UNIFORM_TRAPEZOID_P, node_count=4096, p_truncation=12.0)
        val = deformed_inner(phi, phi, d, spec)
        assert val.real == pytest.approx(np.sqrt(np.pi), rel=1e-10)

    def test_grid_function_input(self):
        d = DeformationParams(1.0, 0.3, 0.0)
        grid = MomentumGrid.symmetric(20.0, 4001)
        phi = GridFunction.from_callable(grid, lambda p: np.exp(-0.5 * p**2))
        sampled = deformed_inner(phi, phi, d)
        exact = deformed_inner(
            lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2),
            lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2),
            d,
        )
        # linear interpolation of the samples limits the attainable accuracy
        assert sampled.real == pytest.approx(exact.real, rel=1e-4)

    def test_eta_norm(self):
        d = DeformationParams(1.0, 0.3, 0.0)
        phi = lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2)
        n = eta_norm(phi, None, d)
        assert n == pytest.approx(np.sqrt(deformed_inner(phi, phi, d).real), rel=1e-13)
