import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import eval_jacobi

from fracspm.errors import ConfigurationError, PoleError
from fracspm.specialfn import (
    JacobiParams,
    JacobiSeries,
    gamma,
    gamma_ratio,
    gauss_jacobi,
    jacobi_deriv_coeff,
    jacobi_endpoint,
    jacobi_endpoints,
    jacobi_eval,
    jacobi_norm,
    jacobi_table,
    jacobi_weight_integral,
    loggamma,
)

# Gamma(4.7) by adaptive quadrature of its Euler integral (scipy quad, frozen)
GAMMA_4_7_QUAD = 15.431411600047438
# P_5^{0.6,0.75}(0.3) from the terminating hypergeometric series in mpmath (frozen)
P5_06_075_AT_03 = 0.5013400090752363


def _hyp_jacobi(n, a, b, x):
    return float(mpmath.binomial(n + a, n) * mpmath.hyp2f1(-n, n + a + b + 1, a + 1, (1 - mpmath.mpf(x)) / 2))


def _moment(a, b, m):
    # integral of (1-x)^a (1+x)^b x^m via Beta functions of the binomial expansion
    return sum(math.comb(m, j) * (-1.0) ** (m - j) * jacobi_weight_integral((a, b + j)) for j in range(m + 1))


class TestGamma:
    def test_trivial_values(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-15)
        assert gamma(0.5) == pytest.approx(1.7724538509055160, rel=1e-15)

    def test_against_euler_integral(self):
        val, _ = quad(lambda t: t ** 3.7 * math.exp(-t), 0, np.inf, epsabs=0, epsrel=1e-13)
        assert val == pytest.approx(GAMMA_4_7_QUAD, rel=1e-13)
        assert gamma(4.7) == pytest.approx(GAMMA_4_7_QUAD, rel=1e-13)

    def test_against_mpmath_on_range(self):
        xs = np.concatenate([np.linspace(-9.95, -0.05, 61), np.linspace(0.05, 50.0, 200)])
        xs = xs[np.abs(xs - np.round(xs)) > 1e-3]
        ref = np.array([float(mpmath.gamma(x)) for x in xs])
        assert np.max(np.abs(gamma(xs) / ref - 1.0)) <= 1e-13

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            gamma(x)

    def test_reflection(self):
        for x in np.arange(1, 10) / 10.0:
            assert gamma(x) * gamma(1 - x) * math.sin(math.pi * x) / math.pi == pytest.approx(1.0, abs=1e-12)

    def test_loggamma_large(self):
        for x in (60.0, 171.5, 400.0, 1e4):
            assert loggamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-13)

    def test_gamma_ratio_regimes(self):
        cases = [(2.5, 1.5), (40.3, 41.0), (512.8, 513.0), (1024.2, 1025.0), (200.0, 180.0), (-0.5, 2.0)]
        for num, den in cases:
            ref = float(mpmath.gamma(num) / mpmath.gamma(den))
            assert gamma_ratio(num, den) == pytest.approx(ref, rel=5e-14)


class TestJacobi:
    def test_low_degrees(self):
        x = np.linspace(-1, 1, 7)
        assert np.all(jacobi_eval(0, (0.3, -0.4), x) == 1.0)
        a, b = 0.3, -0.4
        assert np.allclose(jacobi_eval(1, (a, b), x), ((a + b + 2) * x + (a - b)) / 2, atol=1e-15)

    def test_hypergeometric_oracle(self):
        assert _hyp_jacobi(5, 0.6, 0.75, 0.3) == pytest.approx(P5_06_075_AT_03, rel=1e-14)
        assert jacobi_eval(5, (0.6, 0.75), 0.3) == pytest.approx(P5_06_075_AT_03, rel=1e-13)

    @given(st.integers(0, 40), st.floats(-0.95, 2.0), st.floats(-0.95, 2.0), st.floats(-1.0, 1.0))
    def test_matches_scipy(self, n, a, b, x):
        ref = eval_jacobi(n, a, b, x)
        assert jacobi_eval(n, (a, b), x) == pytest.approx(ref, rel=1e-10, abs=1e-10)

    def test_stable_high_degree(self):
        x = np.linspace(-0.999, 0.999, 41)
        for a, b in [(0.0, 0.0), (-0.4, -0.1), (0.6, 0.75)]:
            ref = eval_jacobi(1024, a, b, x)
            assert np.max(np.abs(jacobi_eval(1024, (a, b), x) - ref)) <= 1e-9 * max(1.0, np.abs(ref).max())

    def test_table_rows(self):
        x = np.linspace(-0.9, 0.9, 5)
        t = jacobi_table(6, (0.2, 0.1), x)
        assert t.shape == (7, 5)
        for n in range(7):
            assert np.allclose(t[n], eval_jacobi(n, 0.2, 0.1, x), rtol=1e-13, atol=1e-14)

    def test_endpoints(self):
        assert jacobi_endpoint(0, (0.3, 0.2), 1) == 1.0
        assert jacobi_endpoint(3, (0, 0), 1) == pytest.approx(1.0)
        assert jacobi_endpoint(3, (0, 0), -1) == pytest.approx(-1.0)

    def test_endpoint_extrapolation(self):
        # Richardson extrapolation of jacobi_eval towards x = -1 (second order)
        h = 1e-4
        v1, v2, v4 = (float(jacobi_eval(4, (0.9, 0.3), -1 + k * h)) for k in (1, 2, 4))
        extrap = (8 * v1 - 6 * v2 + v4) / 3
        assert jacobi_endpoint(4, (0.9, 0.3), -1) == pytest.approx(extrap, rel=1e-9)
        assert jacobi_endpoint(4, (0.9, 0.3), -1) == pytest.approx(
            float(jacobi_eval(4, (0.9, 0.3), -1 + 1e-12)), rel=1e-9)
        assert jacobi_endpoint(4, (0.9, 0.3), -1) == pytest.approx(jacobi_eval(4, (0.9, 0.3), -1.0), rel=1e-13)

    def test_endpoint_vector_matches_scalar(self):
        for side in (1, -1):
            v = jacobi_endpoints(300, (0.3, -0.6), side)
            ref = [jacobi_endpoint(n, (0.3, -0.6), side) for n in range(301)]
            assert np.allclose(v, ref, rtol=1e-13, atol=0)

    def test_deriv_coeff(self):
        assert jacobi_deriv_coeff(5, 0, (0.3, 0.1)) == 1.0
        assert jacobi_deriv_coeff(1, 1, (0, 0)) == pytest.approx(1.0, rel=1e-14)
        assert jacobi_deriv_coeff(2, 3, (0, 0)) == 0.0

    def test_second_derivative_fd(self):
        a, b = 0.6, 0.3
        x = np.linspace(-0.8, 0.8, 9)
        h = 1e-4
        fd = (jacobi_eval(7, (a, b), x + h) - 2 * jacobi_eval(7, (a, b), x) + jacobi_eval(7, (a, b), x - h)) / h ** 2
        exact = jacobi_deriv_coeff(7, 2, (a, b)) * jacobi_eval(5, (a + 2, b + 2), x)
        assert np.max(np.abs(fd - exact)) <= 1e-6 * np.abs(exact).max() * 10

    def test_first_derivative_identity(self):
        rng = np.random.default_rng(7)
        x = rng.uniform(-0.95, 0.95, 50)
        h = 1e-6
        for n, a, b in [(5, 0.2, -0.3), (9, 0.6, 0.75), (12, -0.5, 0.4)]:
            fd = (jacobi_eval(n, (a, b), x + h) - jacobi_eval(n, (a, b), x - h)) / (2 * h)
            exact = (n + a + b + 1) / 2 * jacobi_eval(n - 1, (a + 1, b + 1), x)
            assert np.max(np.abs(fd - exact)) <= 1e-9 * np.abs(exact).max() * 10

    def test_norms(self):
        assert jacobi_norm(0, (0, 0)) == pytest.approx(2.0)
        for n in range(6):
            assert jacobi_norm(n, (0, 0)) == pytest.approx(2.0 / (2 * n + 1))
        rule = gauss_jacobi(6, (-0.4, -0.1))
        val = rule.integrate(jacobi_eval(3, (-0.4, -0.1), rule.nodes) ** 2)
        assert jacobi_norm(3, (-0.4, -0.1)) == pytest.approx(val, rel=1e-13)

    def test_series_derivative(self):
        s = JacobiSeries([0.5, -1.0, 2.0, 0.25], (0.3, 0.2))
        x = np.linspace(-0.9, 0.9, 11)
        h = 1e-6
        fd = (s(x + h) - s(x - h)) / (2 * h)
        assert np.allclose(s.derivative()(x), fd, atol=1e-8)

    def test_params_validation(self):
        with pytest.raises(ConfigurationError):
            JacobiParams(-1.0, 0.0)


class TestQuadrature:
    def test_trivial_rules(self):
        r = gauss_jacobi(1, (0, 0))
        assert r.nodes[0] == pytest.approx(0.0, abs=1e-16) and r.weights[0] == pytest.approx(2.0)
        r = gauss_jacobi(2, (0, 0))
        assert np.allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
        assert np.allclose(r.weights, [1.0, 1.0], atol=1e-15)

    def test_moments_beta_oracle(self):
        a, b = 0.75, -0.25
        r = gauss_jacobi(8, (a, b))
        for m in range(16):
            scale = sum(math.comb(m, j) * jacobi_weight_integral((a, b + j)) for j in range(m + 1))
            assert abs(r.integrate(r.nodes ** m) - _moment(a, b, m)) <= 1e-13 * scale

    @given(st.integers(1, 1024), st.floats(-0.95, 3.0), st.floats(-0.95, 3.0))
    def test_rule_invariants(self, n, a, b):
        r = gauss_jacobi(n, (a, b))
        assert r.size == n
        assert np.all(np.diff(r.nodes) > 0) and r.nodes[0] > -1 and r.nodes[-1] < 1
        assert np.all(r.weights > 0)
        assert r.weights.sum() == pytest.approx(jacobi_weight_integral((a, b)), rel=1e-12)

    def test_large_rule_weight_sum(self):
        for params in [(0, 0), (0.6, -0.5), (-0.74, -0.06)]:
            r = gauss_jacobi(1024, params)
            assert r.weights.sum() == pytest.approx(jacobi_weight_integral(params), rel=1e-12)

    @pytest.mark.parametrize("params", [(0, 0), (0.6, 0.6), (-0.25, -0.25), (0.8, -0.5)])
    def test_orthogonality(self, params):
        for n in range(1, 21):
            r = gauss_jacobi(n + 2, params)
            pn = jacobi_eval(n, params, r.nodes)
            for m in range(n):
                assert abs(r.integrate(jacobi_eval(m, params, r.nodes) * pn)) <= 1e-11
            assert r.integrate(pn * pn) == pytest.approx(jacobi_norm(n, params), rel=1e-11)

    def test_bad_size(self):
        with pytest.raises(ConfigurationError):
            gauss_jacobi(0, (0, 0))
