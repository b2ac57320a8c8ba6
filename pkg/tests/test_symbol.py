import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, seed, settings as hyp_settings, strategies as st

from haar_affine.chaos.chaos1 import Chaos1, truncate_to_step
from haar_affine.classify.spectrum import L2_RADIUS
from haar_affine.dyadic.norms import lp_norm
from haar_affine.exceptions import (
    CapacityError,
    DomainError,
    DualUndefinedError,
    ModeError,
    SymbolHypothesisWarning,
)
from haar_affine.models import ScalarMode, SymbolKind
from haar_affine.symbol.generators import (
    binomial_asymptotic_constants,
    binomial_symbol,
    counterexample_symbol,
    geometric_symbol,
    make_symbol,
    polynomial_symbol,
)
from haar_affine.symbol.norms import ap_norm, hinf_boundary, multiplier_norm, multiplier_trend
from haar_affine.symbol.relations import bv_report, check_value_relation
from haar_affine.symbol.roots import roots_min_modulus
from haar_affine.symbol.series import DyadicRadius, PowerSeries

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=7)
polynomial_symbols = st.lists(rationals, min_size=1, max_size=9).map(Chaos1.polynomial)


class TestPowerSeries:
    """Test truncated power series arithmetic."""

    def test_polynomial_product(self):
        """Test (1 + z)(1 - z) = 1 - z^2."""
        product = polynomial_symbol(["1", "1"]) * polynomial_symbol(["1", "-1"])
        assert product == polynomial_symbol(["1", "0", "-1"])
        assert product[5] == 0

    def test_reciprocal(self):
        """Test 1/(1 - z) = sum z^k."""
        inverse = polynomial_symbol(["1", "-1"]).reciprocal(5)
        assert inverse.coeffs == (1,) * 6
        with pytest.raises(CapacityError):
            inverse[6]

    def test_reciprocal_needs_nonzero_constant(self):
        """Test that 1/z is refused."""
        with pytest.raises(DualUndefinedError):
            polynomial_symbol(["0", "1"]).reciprocal(3)

    def test_exp(self):
        """Test exp(z) = sum z^k / k! exactly."""
        u = PowerSeries.from_coeffs(["0", "1"] + ["0"] * 5)
        assert u.exp().coeffs == tuple(Fraction(1, math.factorial(k)) for k in range(7))
        with pytest.raises(ModeError):
            PowerSeries.from_coeffs(["1", "1"]).exp()

    def test_compose(self):
        """Test (1 + w + w^2) at w = 2z."""
        composed = polynomial_symbol(["1", "1", "1"]).compose(polynomial_symbol(["0", "2"]))
        assert composed.coeffs[:3] == (1, 2, 4)

    def test_mixed_modes(self):
        """Test that exact and float series do not combine."""
        with pytest.raises(DomainError):
            polynomial_symbol(["1"]) + polynomial_symbol([1.0], ScalarMode.FLOAT)

    def test_dyadic_radius_power(self):
        """Test that R^p is exact only when p times the exponent is an integer."""
        assert L2_RADIUS.power(2) == Fraction(1, 2)
        assert L2_RADIUS.power(3) is None
        assert DyadicRadius(Fraction(-1, 4)).value == pytest.approx(2 ** -0.25)


class TestGenerators:
    """Test the example symbol families."""

    def test_geometric(self):
        """Test c_k = (-1/3)^k for a = 1/3."""
        u = geometric_symbol("1/3", 6)
        assert u.coeffs == tuple(Fraction(-1, 3) ** k for k in range(7))
        assert u.radius == pytest.approx(3.0)

    def test_make_symbol_dispatch(self):
        """Test dispatch by kind and refusal of unknown kinds."""
        assert make_symbol("polynomial", {"coeffs": ["1", "-1/2"]}, 8).is_polynomial
        assert not make_symbol(SymbolKind.TAYLOR, {"coeffs": ["1", "-1/2"]}, 8).is_polynomial
        with pytest.raises(DomainError):
            make_symbol("chebyshev", {}, 8)

    def test_binomial_is_float_only(self):
        """Test that exact mode refuses the binomial family."""
        with pytest.raises(ModeError):
            binomial_symbol(0.25, 2.0, 16, ScalarMode.EXACT)

    def test_binomial_asymptotics(self):
        """Test c_k (k+1)^(1+theta) and d_k (k+1)^(1-theta) for theta = 1/4, p = 2, 10 <= k <= 1000."""
        theta, p, N = 0.25, 2.0, 1000
        u = binomial_symbol(theta, p, N)
        R = DyadicRadius(-1 / Fraction(str(p)))
        k = np.arange(N + 1)
        c_const, d_const = binomial_asymptotic_constants(theta)
        c_ratio = u.scaled_moduli(R) * (k + 1) ** (1 + theta) / c_const
        d_ratio = u.reciprocal(N).scaled_moduli(R) * (k + 1) ** (1 - theta) / d_const
        for ratio in (c_ratio[10:], d_ratio[10:]):
            assert np.all(ratio >= 0.1)
            assert np.all(ratio <= 10.0)

    def test_binomial_hypothesis_warning(self):
        """Test the warning for theta outside (0, 1 - 1/p)."""
        with pytest.warns(SymbolHypothesisWarning):
            binomial_symbol(0.75, 2.0, 16)

    def test_binomial_terminates_for_integer_theta(self):
        """Test that theta = 1 gives the polynomial 1 - 2^(1/p) z."""
        with pytest.warns(SymbolHypothesisWarning):
            u = binomial_symbol(1.0, 2.0, 16)
        assert u.is_polynomial
        assert u.trimmed_degree() == 1

    def test_counterexample(self):
        """Test the constant term e and finiteness at a moderate truncation."""
        u = counterexample_symbol(2.0, 64)
        assert complex(u[0]) == pytest.approx(math.e)
        assert np.all(np.isfinite(u.as_complex()))

    @pytest.mark.parametrize("p", [2.0, 2.2])
    def test_counterexample_overflow(self, p):
        """Test that overflowing coefficients raise instead of returning inf."""
        with pytest.raises(CapacityError):
            counterexample_symbol(p, 2048)

    @pytest.mark.parametrize("p", [3.0, 4.0])
    def test_counterexample_default_truncation(self, p):
        """Test that N = 2048 stays finite once N/p + 4.1 sqrt(N) is below 1024."""
        u = counterexample_symbol(p, 2048)
        assert np.all(np.isfinite(u.as_complex()))


class TestSymbolNorms:
    """Test A_p^+ norms, H^infinity estimates and Toeplitz sections."""

    @pytest.mark.parametrize("a", [0.3, 0.9])
    def test_l2_operator_norm(self, a):
        """Test that the N = 512 section and the boundary maximum both approach 1 + a/sqrt(2)."""
        u = polynomial_symbol([1.0, -a], ScalarMode.FLOAT)
        expected = 1 + a / math.sqrt(2)
        section = multiplier_norm(u, 2, L2_RADIUS, 512)
        boundary = hinf_boundary(u, L2_RADIUS)
        assert section.value == pytest.approx(expected, rel=0.02)
        assert boundary.value == pytest.approx(expected, rel=0.02)

    def test_exact_ap_power(self, third_symbol):
        """Test sum |c_k|^2 R^2k = 19/18 at R = 2^(-1/2)."""
        report = ap_norm(third_symbol.symbol(), 2, L2_RADIUS)
        assert report.exact_value == "19/18"
        assert report.exact_power == 2
        assert report.certified_upper == report.value

    def test_section_interval(self, third_symbol):
        """Test the p = 3 interval against the l^1 bound."""
        u = third_symbol.symbol()
        R = DyadicRadius(Fraction(-1, 3))
        report = multiplier_norm(u, 3, R, 32)
        l1 = multiplier_norm(u, 1, R, 32)
        assert report.is_interval
        assert report.certified_lower <= report.certified_upper
        assert l1.value == pytest.approx(1 + 2 ** (-1 / 3) / 3)

    def test_trend(self, third_symbol):
        """Test one row per section size."""
        trend = multiplier_trend(third_symbol.symbol(), 2, L2_RADIUS, [8, 16, 32])
        assert [row.truncation["N"] for row in trend.rows] == [8, 16, 32]

    @pytest.mark.parametrize("p", [1.5, 3.0, 4.0])
    def test_lp_equivalent_to_ap(self, third_symbol, p):
        """Test ||f_m||_p against the A_p^+ norm at 2^(-1/p) within [1/20, 20]."""
        R = DyadicRadius(-1 / Fraction(str(p)))
        ratio = lp_norm(truncate_to_step(third_symbol, 10), p).value / ap_norm(third_symbol.symbol(), p, R).value
        assert 1 / 20 <= ratio <= 20

    def test_p_below_one(self, third_symbol):
        """Test that p < 1 is refused."""
        with pytest.raises(DomainError):
            ap_norm(third_symbol.symbol(), 0.5, L2_RADIUS)


class TestRelations:
    """Test the value identity and the BV comparison."""

    @given(polynomial_symbols)
    @hyp_settings(max_examples=50, deadline=None)
    @seed(7)
    def test_value_relation(self, c):
        """Test (1 - z) f_check = (2z - 1) f^ through degree 64."""
        assert check_value_relation(c, 64).passed

    def test_bv_report(self, third_symbol):
        """Test the BV and A_1 sums of 1 - z/3."""
        report = bv_report(third_symbol, 10)
        assert report.bv_sum == pytest.approx(3.0)
        assert report.a1_sum == pytest.approx(4 / 3)
        assert report.termwise_upper_ok
        assert report.tail_lower_ok


class TestRoots:
    """Test root finding for polynomial symbols."""

    def test_smallest_root(self, third_symbol):
        """Test z0 = 3 for 1 - z/3."""
        report = roots_min_modulus(third_symbol.symbol())
        assert report.z0_modulus == pytest.approx(3.0)
        assert report.residual_ok

    def test_ties_by_argument(self):
        """Test that 1 + z^2 reports z0 = i."""
        report = roots_min_modulus(polynomial_symbol(["1", "0", "1"]))
        assert report.z0.im == pytest.approx(1.0)
        assert report.z0.re == pytest.approx(0.0, abs=1e-12)

    def test_constant_has_no_roots(self):
        """Test that a nonzero constant has no z0."""
        assert roots_min_modulus(polynomial_symbol(["2"])).z0 is None

    def test_series_refused(self):
        """Test that truncated series have no root report."""
        with pytest.raises(DomainError):
            roots_min_modulus(geometric_symbol("1/3", 8))
