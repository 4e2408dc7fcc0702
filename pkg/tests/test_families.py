"""Tests for the divided-difference function families.

Derivative engines are validated against Richardson-extrapolated finite
differences; closed-form anchors come from the polygamma recurrence and
the series oracle.
"""

import math

import numpy as np
import pytest

from cm_atlas import (
    EULER_GAMMA,
    GridSpec,
    ParamTriple,
    capital_lambda,
    delta,
    delta_deriv,
    digamma,
    divided_diff_psi,
    h_func,
    kernel_g,
    ln_h,
    phi,
    polygamma,
    psi_positive_root,
    q_func,
    theta,
    theta_deriv,
    theta_quadrature,
    z_func,
)
from cm_atlas.errors import (
    DegenerateParameterError,
    DomainError,
    EvalOverflowError,
    OrderError,
)

PI2_OVER_6 = 1.6449340668482264


class TestParamTriple:
    def test_regimes(self):
        assert ParamTriple(0.3, 0.3, 1.0).regime == "equal"
        assert ParamTriple(0.0, 1.0, 1.0).regime == "unit-gap"
        assert ParamTriple(1.0, 0.0, 1.0).regime == "unit-gap"
        assert ParamTriple(0.0, 0.5, 1.0).regime == "sub-unit-gap"
        assert ParamTriple(0.0, 2.5, 1.0).regime == "super-unit-gap"

    def test_alpha_and_gap(self):
        p = ParamTriple(0.7, 0.2, 3.0)
        assert p.alpha == 0.2
        assert p.gap == pytest.approx(0.5)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            ParamTriple(math.nan, 0.0, 1.0)


class TestGridSpec:
    def test_points_inside_domain(self):
        for spacing in ("log", "linear"):
            g = GridSpec(1e-3, 1e2, 50, spacing)
            xs = g.points(alpha=0.25)
            assert np.all(np.diff(xs) > 0.0)
            assert xs[0] >= -0.25 + 1e-3 * (1.0 - 1e-12)
            assert xs[-1] <= 1e2 + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(delta=0.0)
        with pytest.raises(ValueError):
            GridSpec(n_points=1)
        with pytest.raises(ValueError):
            GridSpec(spacing="cubic")


class TestDividedDiff:
    def test_unit_step_digamma(self):
        # psi(3) - psi(2) = 1/2 by the recurrence.
        assert divided_diff_psi(0, 0.0, 1.0, 2.0) == pytest.approx(0.5, abs=1e-13)

    def test_confluent_branch(self):
        assert divided_diff_psi(0, 1.0, 1.0, 3.0) == pytest.approx(
            polygamma(1, 4.0).value, abs=1e-14
        )

    def test_unit_step_trigamma(self):
        assert divided_diff_psi(1, 0.0, 1.0, 2.0) == pytest.approx(-0.25, abs=1e-13)

    def test_near_confluent_fallback(self):
        direct = divided_diff_psi(0, 0.5, 0.5, 2.0)
        assert divided_diff_psi(0, 0.5, 0.5 + 1e-10, 2.0) == pytest.approx(
            direct, rel=1e-9
        )

    def test_validation(self):
        with pytest.raises(OrderError):
            divided_diff_psi(16, 0.0, 0.5, 1.0)
        with pytest.raises(DomainError):
            divided_diff_psi(0, 0.0, 0.5, -0.1)


class TestDelta:
    def test_unit_gap_critical_is_zero(self):
        assert delta(ParamTriple(0.0, 1.0, 1.0), 7.3) == 0.0

    def test_unit_gap_closed_form(self):
        assert delta(ParamTriple(0.0, 1.0, 0.0), 2.0) == pytest.approx(0.25)

    def test_equal_regime_anchor(self):
        assert delta(ParamTriple(0.0, 0.0, 0.0), 1.0) == pytest.approx(
            PI2_OVER_6**2, rel=1e-12
        )

    def test_deriv_order_zero_matches(self):
        p = ParamTriple(0.2, 0.7, 0.5)
        for x in (0.3, 1.5, 20.0):
            assert delta_deriv(p, 0, x) == delta(p, x)

    def test_unit_gap_first_derivative(self):
        assert delta_deriv(ParamTriple(0.0, 1.0, 0.0), 1, 2.0) == pytest.approx(-0.25)

    def test_deriv_against_richardson(self, richardson):
        p = ParamTriple(0.2, 0.7, 0.5)
        # Step grows with the order to keep the epsilon/h^n rounding error
        # of the difference quotient below the 1e-6 target.
        for n, h in ((1, 1e-3), (2, 3e-3), (3, 1e-2)):
            want = richardson(lambda y: delta(p, y), 1.5, n, h)
            assert delta_deriv(p, n, 1.5) == pytest.approx(want, rel=1e-6)

    def test_deriv_order_cap(self):
        with pytest.raises(OrderError):
            delta_deriv(ParamTriple(0.0, 0.5, 1.0), 9, 1.0)


class TestTheta:
    def test_unit_gap_critical_is_zero(self):
        p = ParamTriple(0.0, 1.0, 1.0)
        for x in (1e-3, 0.5, 3.0, 1e3):
            assert theta(p, x) == 0.0
            for n in range(1, 5):
                assert theta_deriv(p, n, x) == 0.0

    def test_equal_regime_anchor(self):
        assert theta(ParamTriple(0.0, 0.0, 0.0), 1.0) == pytest.approx(
            PI2_OVER_6 - 0.5, rel=1e-12
        )

    def test_telescoping_identity_pointwise(self):
        p = ParamTriple(0.3, 0.8, 0.4)
        x = 2.0
        lhs = delta(p, x) - delta(p, x + 1.0)
        rhs = 2.0 * theta(p, x) / ((x + p.s) * (x + p.t))
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_deriv_against_richardson(self, richardson):
        p = ParamTriple(0.1, 0.6, 1.0)
        want = richardson(lambda y: theta(p, y), 1.0, 2, h=3e-3)
        assert theta_deriv(p, 2, 1.0) == pytest.approx(want, rel=1e-6)

    def test_deriv_order_zero_delegates(self):
        p = ParamTriple(0.0, 0.0, 0.7)
        assert theta_deriv(p, 0, 1.3) == theta(p, 1.3)


class TestTelescopingSweep:
    def test_random_triples(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            s = float(rng.uniform(0.0, 2.0))
            t = s + float(rng.uniform(-1.5, 1.5))
            lam = float(rng.uniform(-2.0, 3.0))
            p = ParamTriple(s, t, lam)
            for x in np.geomspace(1e-2, 1e2, 100):
                x = float(x) - p.alpha + 1e-2
                lhs = delta(p, x) - delta(p, x + 1.0)
                rhs = 2.0 * theta(p, x) / ((x + p.s) * (x + p.t))
                scale = max(abs(lhs), abs(rhs), 1.0)
                assert abs(lhs - rhs) <= 1e-10 * scale


class TestSwapSymmetry:
    def test_families_invariant(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            s = float(rng.uniform(0.0, 3.0))
            t = s + float(rng.uniform(0.05, 2.0))
            lam = float(rng.uniform(-2.0, 3.0))
            x = float(rng.uniform(0.1, 50.0))
            a, b = ParamTriple(s, t, lam), ParamTriple(t, s, lam)
            for f in (delta, theta, ln_h):
                va, vb = f(a, x), f(b, x)
                assert abs(va - vb) <= 1e-12 * (1.0 + max(abs(va), abs(vb)))
            for f in (z_func, capital_lambda):
                va, vb = f(s, t, x), f(t, s, x)
                assert abs(va - vb) <= 1e-12 * (1.0 + max(abs(va), abs(vb)))


class TestThetaQuadrature:
    def test_matches_closed_form(self):
        for s, t, lam, x in ((0.25, 0.75, 1.0, 2.0), (0.0, 2.0, 0.5, 1.0)):
            p = ParamTriple(s, t, lam)
            want = theta(p, x)
            assert abs(theta_quadrature(p, x) - want) <= 1e-8 * (1.0 + abs(want))

    def test_critical_unit_gap_is_zero(self):
        assert abs(theta_quadrature(ParamTriple(0.0, 1.0, 1.0), 1.0)) <= 1e-9

    def test_rejects_equal_parameters(self):
        with pytest.raises(DegenerateParameterError):
            theta_quadrature(ParamTriple(0.5, 0.5, 1.0), 1.0)


class TestKernel:
    def test_unit_gap_is_exactly_one(self):
        assert kernel_g(0.0, 1.0, 3.7) == 1.0
        assert kernel_g(2.0, 1.0, 0.1) == 1.0

    def test_small_u_limit(self):
        assert kernel_g(0.0, 0.5, 1e-8) == pytest.approx(1.0, abs=1e-6)

    def test_large_u_limit(self):
        assert kernel_g(0.0, 0.5, 200.0) == pytest.approx(2.0, abs=1e-10)

    def test_monotonicity_by_gap(self):
        us = np.geomspace(1e-2, 50.0, 200)
        sub = [kernel_g(0.0, 0.4, float(u)) for u in us]
        sup = [kernel_g(0.0, 2.5, float(u)) for u in us]
        assert all(a <= b for a, b in zip(sub, sub[1:]))
        assert all(a >= b for a, b in zip(sup, sup[1:]))

    def test_validation(self):
        with pytest.raises(DegenerateParameterError):
            kernel_g(1.0, 1.0, 2.0)
        with pytest.raises(DomainError):
            kernel_g(0.0, 0.5, 0.0)


class TestGammaRatioFamily:
    def test_unit_gap_critical_is_one(self):
        p = ParamTriple(0.0, 1.0, 1.0)
        for x in (0.2, 1.0, 30.0):
            assert h_func(p, x) == pytest.approx(1.0, rel=1e-13)

    def test_unit_gap_closed_form(self):
        # [(x+s)(x+s+1)]^((1-lambda)/2) at s=0, lambda=3, x=1 is 1/2.
        assert h_func(ParamTriple(0.0, 1.0, 3.0), 1.0) == pytest.approx(0.5, rel=1e-12)

    def test_log_derivative_is_theta(self, richardson):
        p = ParamTriple(0.2, 0.9, 2.0)
        want = theta(p, 1.5)
        assert richardson(lambda y: ln_h(p, y), 1.5, 1) == pytest.approx(
            want, abs=1e-7
        )

    def test_equal_branch_log_derivative(self, richardson):
        p = ParamTriple(0.5, 0.5, 1.2)
        want = theta(p, 2.0)
        assert richardson(lambda y: ln_h(p, y), 2.0, 1) == pytest.approx(
            want, abs=1e-7
        )

    def test_large_x_trichotomy(self):
        assert abs(ln_h(ParamTriple(0.0, 0.5, 1.0), 1e6)) <= 1e-6
        assert ln_h(ParamTriple(0.0, 0.5, 2.0), 1e6) < -5.0
        assert ln_h(ParamTriple(0.0, 0.5, 0.5), 1e6) > 5.0

    def test_overflow_policy(self):
        p = ParamTriple(0.0, 0.5, 1000.0)
        ln_h(p, 1e-3)  # finite in log space
        with pytest.raises(EvalOverflowError):
            h_func(p, 1e-3)


class TestCapitalLambda:
    def test_limit_at_infinity(self):
        assert capital_lambda(0.0, 0.5, 1e6) == pytest.approx(1.0, abs=1e-4)

    def test_limit_at_boundary(self):
        assert capital_lambda(0.0, 0.5, 1e-7) == pytest.approx(2.0, abs=1e-3)

    def test_theta_sign_switch(self):
        # theta < 0 exactly when lambda exceeds the threshold function.
        s, t, x = 0.0, 0.5, 1.0
        lam = capital_lambda(s, t, x)
        assert theta(ParamTriple(s, t, lam + 1e-9), x) < 0.0
        assert theta(ParamTriple(s, t, lam - 1e-9), x) > 0.0

    def test_rejects_equal_parameters(self):
        with pytest.raises(DegenerateParameterError):
            capital_lambda(1.0, 1.0, 2.0)


class TestZFunc:
    def test_equal_branch_anchor(self):
        assert z_func(0.0, 0.0, 1.0) == pytest.approx(
            math.exp(-EULER_GAMMA) - 1.0, rel=1e-12
        )

    def test_gamma_recurrence_anchor(self):
        assert z_func(0.0, 1.0, 2.0) == pytest.approx(0.0, abs=1e-12)

    def test_convex_decreasing_sub_unit(self):
        xs = np.geomspace(0.05, 50.0, 120)
        vals = [z_func(0.0, 0.5, float(x)) for x in xs]
        d1 = np.diff(vals)
        slope = d1 / np.diff(xs)
        d2 = np.diff(slope)
        assert np.all(d1 < 0.0)
        assert np.all(d2 > 0.0)


class TestPhi:
    def test_limit_at_infinity(self):
        assert phi(1e6) == pytest.approx(0.0, abs=1e-5)

    def test_limit_at_zero(self):
        assert phi(1e-6) == pytest.approx(-EULER_GAMMA, abs=1e-3)

    def test_increasing(self):
        assert phi(2.0) > phi(1.0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            phi(0.0)


class TestQFunc:
    def test_value_at_root(self):
        c = psi_positive_root()
        assert q_func(c) == pytest.approx(1.0 / polygamma(1, c).value, rel=1e-13)

    def test_continuity_across_window(self):
        c = psi_positive_root()
        assert q_func(c + 1e-5) == pytest.approx(q_func(c), abs=1e-3)
        assert q_func(c + 2e-4) == pytest.approx(q_func(c), abs=1e-3)

    def test_decreasing_between_anchor_points(self):
        assert q_func(1.0) > q_func(2.0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            q_func(-1.0)


class TestDomainBoundary:
    def test_families_reject_boundary(self):
        p = ParamTriple(0.0, 0.5, 1.0)
        for f in (delta, theta, ln_h):
            with pytest.raises(DomainError):
                f(p, 0.0)
        with pytest.raises(DomainError):
            digamma(0.0)
