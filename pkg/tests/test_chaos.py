from fractions import Fraction

import pytest
from hypothesis import given, seed, settings as hyp_settings, strategies as st

from haar_affine.chaos.affine import (
    affine_coeffs,
    apply_Tf,
    apply_Tf_adjoint,
    apply_Tf_chaos,
    apply_Tf_coeffs,
    biorthogonal_coeffs,
    inverse_check,
    x0_cap_for,
    x0_coeffs,
    x0_energy,
    x0_is_disjoint,
)
from haar_affine.chaos.chaos1 import (
    Chaos1,
    bmo_chaos1,
    coeffs_from_values,
    dual_coeffs,
    truncate_to_step,
    values_from_coeffs,
)
from haar_affine.chaos.chaos_d import ChaosD, decompose_chaoses
from haar_affine.chaos.reconstruct import chaos_ordering, reconstruct_in_chaoses
from haar_affine.dyadic.coeffs import HaarCoeffMap
from haar_affine.dyadic.norms import bmo_norm
from haar_affine.dyadic.scalars import GaussianRational
from haar_affine.dyadic.stepfn import DyadicStep, haar, norm2_squared
from haar_affine.dyadic.tree import GapVector, MultiIndex
from haar_affine.exceptions import CapacityError, DomainError, DualUndefinedError
from haar_affine.models import ScalarMode
from haar_affine.suites import biorthogonal_suite, commutation_suite, random_haar_polynomial, walsh_suite
from haar_affine.symbol.series import cauchy_product

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=7)
nonzero_rationals = rationals.filter(lambda q: q != 0)
polynomial_symbols = st.tuples(nonzero_rationals, st.lists(rationals, max_size=8)).map(
    lambda parts: Chaos1.polynomial([parts[0]] + parts[1])
)
gaussian_rationals = st.builds(GaussianRational, rationals, rationals)
complex_symbols = st.lists(gaussian_rationals, min_size=1, max_size=4).map(Chaos1.polynomial)
short_indices = st.lists(st.integers(min_value=0, max_value=1), max_size=5).map(lambda b: MultiIndex(tuple(b)))
haar_polynomials = st.dictionaries(short_indices, gaussian_rationals, max_size=6).map(HaarCoeffMap)
mean_zero_steps = st.integers(min_value=1, max_value=5).flatmap(
    lambda level: st.lists(rationals, min_size=1 << level, max_size=1 << level)
).map(lambda values: DyadicStep.from_values([v - sum(values, Fraction(0)) / len(values) for v in values]))


class TestChaos1:
    """Test coefficients, values and duals of first-order chaoses."""

    def test_values_from_coeffs(self, third_symbol):
        """Test f(1/2^k) for f^ = 1 - z/3."""
        values = values_from_coeffs(third_symbol, 3)
        assert values == [-1, Fraction(4, 3), Fraction(2, 3), Fraction(2, 3)]

    def test_constant_symbol_values(self):
        """Test that f = h takes the values -1, 1, 1, ... at 1/2^k."""
        assert values_from_coeffs(Chaos1.polynomial(["1"]), 3) == [-1, 1, 1, 1]

    def test_values_round_trip(self, third_symbol):
        """Test that coefficients are recovered from values."""
        values = values_from_coeffs(third_symbol, 5)
        assert coeffs_from_values(values).coeffs == tuple(third_symbol.coeff(k) for k in range(6))

    def test_truncation_matches_values(self, third_symbol):
        """Test that the level-m truncation takes the computed values at 1/2^k."""
        step = truncate_to_step(third_symbol, 6)
        values = values_from_coeffs(third_symbol, 5)
        for k in range(6):
            assert step.value_at(Fraction(1, 2 ** k)) == values[k]
        with pytest.raises(DomainError):
            truncate_to_step(third_symbol, 0)

    def test_stored_depth(self):
        """Test that a truncated series refuses coefficients it does not hold."""
        c = Chaos1.from_coeffs(["1", "1/2"])
        with pytest.raises(CapacityError):
            c.coeff(2)

    def test_dual_of_affine_symbol(self, third_symbol):
        """Test 1/(1 - z/3) = sum 3^-k z^k."""
        d = dual_coeffs(third_symbol, 4)
        assert d.coeffs == tuple(Fraction(1, 3 ** k) for k in range(5))
        with pytest.raises(CapacityError):
            d.coeff(5)

    def test_dual_undefined(self, shift_symbol):
        """Test that a symbol vanishing at the origin has no dual."""
        with pytest.raises(DualUndefinedError) as excinfo:
            dual_coeffs(shift_symbol, 4)
        assert "symbol vanishes at origin" in str(excinfo.value)

    @given(polynomial_symbols)
    @hyp_settings(max_examples=50, deadline=None)
    @seed(2)
    def test_dual_recurrence(self, c):
        """Test that the Cauchy product with the dual is 1 through degree 64."""
        product = cauchy_product(c.symbol().truncate(64).coeffs, dual_coeffs(c, 64).coeffs, 64, ScalarMode.EXACT)
        assert product[0] == 1
        assert all(v == 0 for v in product[1:])

    @given(polynomial_symbols, st.integers(min_value=1, max_value=8))
    @hyp_settings(max_examples=30, deadline=None)
    @seed(3)
    def test_bmo_closed_form(self, c, m):
        """Test that the closed-form BMO_d norm equals the step-function computation."""
        assert bmo_chaos1(c, m).exact_value == bmo_norm(truncate_to_step(c, m)).exact_value


class TestAffineSystem:
    """Test the affine system, its biorthogonal partner and T_f."""

    @pytest.mark.parametrize("a", ["1/3", "1/2", "2"])
    def test_biorthogonality(self, a):
        """Test (f_beta, g^alpha) = delta exactly for |alpha|, |beta| <= 6."""
        report = biorthogonal_suite(Chaos1.polynomial(["1", f"-{a}"]), max_len=6)
        assert report.passed
        assert report.checks[0].detail["pairs"] == 127 ** 2

    def test_affine_keys(self, third_symbol):
        """Test f_beta = sum c_k V^{beta 0_k} h."""
        beta = MultiIndex.of(1)
        f = affine_coeffs(beta, third_symbol, 3)
        assert f[MultiIndex.of(1)] == 1
        assert f[MultiIndex.of(1, 0)] == Fraction(-1, 3)
        assert len(f) == 2

    def test_biorthogonal_needs_dual_depth(self, third_symbol):
        """Test that g^alpha asks for enough dual coefficients."""
        with pytest.raises(CapacityError):
            biorthogonal_coeffs(MultiIndex.zeros(5), dual_coeffs(third_symbol, 3))

    def test_Tf_maps_h_to_f(self, third_symbol):
        """Test T_f h = f."""
        assert apply_Tf(third_symbol, haar(1, 1), 2) == truncate_to_step(third_symbol, 2)

    def test_commutation(self, third_symbol):
        """Test T_f V_b = V_b T_f and the symbol identity on 100 random inputs."""
        report = commutation_suite(third_symbol, seed=5, count=100)
        assert report.passed

    def test_chaos_symbol_identity(self, third_symbol):
        """Test that T_f multiplies the chaos symbol by f^ in the last variable."""
        x = ChaosD.from_gaps(2, {(1, 0): "1"})
        result = apply_Tf_chaos(third_symbol, x, 2)
        assert result.symbol() == {(1, 0): 1, (1, 1): Fraction(-1, 3)}

    def test_adjoint_sesquilinear(self, rng):
        """Test (T_f x, y) = (x, T_f* y) for a complex symbol."""
        c = Chaos1.polynomial(["1", "1/2 i", "-1/4"])
        x = random_haar_polynomial(rng)
        y = random_haar_polynomial(rng, max_len=8)
        lhs = apply_Tf_coeffs(c, x, 3).inner_sesquilinear(y)
        rhs = x.inner_sesquilinear(apply_Tf_adjoint(c, y, 3))
        assert lhs == rhs

    def test_adjoint_bilinear(self, rng):
        """Test (T_f x, y) = (x, T_f^T y) for the bilinear pairing."""
        c = Chaos1.polynomial(["1", "1/2 i"])
        x = random_haar_polynomial(rng)
        y = random_haar_polynomial(rng, max_len=7)
        assert apply_Tf_coeffs(c, x, 2).inner(y) == x.inner(apply_Tf_adjoint(c, y, 2, pairing="bilinear"))

    @given(complex_symbols, haar_polynomials, haar_polynomials)
    @hyp_settings(max_examples=50, deadline=None)
    @seed(31)
    def test_adjoint_random(self, c, x, y):
        """Test both adjoint identities on random Haar polynomials with |alpha| <= 5."""
        image = apply_Tf_coeffs(c, x, 4)
        assert image.inner_sesquilinear(y) == x.inner_sesquilinear(apply_Tf_adjoint(c, y, 4))
        assert image.inner(y) == x.inner(apply_Tf_adjoint(c, y, 4, pairing="bilinear"))

    def test_unknown_pairing(self, third_symbol):
        """Test that only the two pairings are accepted."""
        with pytest.raises(DomainError):
            apply_Tf_adjoint(third_symbol, haar(1, 1), 2, pairing="hermitian")

    def test_inverse(self, third_symbol, rng):
        """Test T_g T_f x = x for the dual g."""
        for _ in range(5):
            assert inverse_check(third_symbol, random_haar_polynomial(rng), 8).passed

    def test_walsh_orthonormal(self):
        """Test (W^alpha h, W^beta h) = delta for |alpha| = |beta| <= 5."""
        assert walsh_suite(max_len=5).passed


class TestSpecialFunction:
    """Test the function x0 behind the H^1_d identity."""

    def test_energy_limit(self, half_symbol):
        """Test ||T_f* x0||^2 -> 9/8 for f^ = 1 - z/2, n = 1."""
        cap = x0_cap_for(half_symbol, 1, 1e-6)
        report = x0_energy(half_symbol, 1, cap)
        assert cap == 21
        assert abs(report.value - 9 / 8) <= 1e-6
        assert report.certified_upper == 9 / 8

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_disjoint_supports(self, n):
        """Test that the Haar terms of x0 are pairwise disjoint."""
        x0 = x0_coeffs(n, 12)
        assert x0_is_disjoint(x0)
        assert all(alpha.bits[-n:] == (0,) * n for alpha in x0)

    def test_overlap_detected(self):
        """Test that nested supports are reported."""
        nested = HaarCoeffMap({MultiIndex.of(0): 1, MultiIndex.of(0, 1): 1})
        assert not x0_is_disjoint(nested)

    def test_invalid_n(self):
        """Test that n must be positive."""
        with pytest.raises(DomainError):
            x0_coeffs(0, 10)


class TestReconstruction:
    """Test expansions in the affine system ordered by chaos."""

    def test_chaos_ordering(self):
        """Test the order d ascending, n ascending."""
        assert chaos_ordering(8) == [1, 2, 4, 8, 3, 5, 6, 7]

    def test_error_decreases(self, third_symbol, h2_step):
        """Test the L2 error for x = h_2 along n_max = 2^4 .. 2^10 at depth 40."""
        errors = []
        for n_max in (2 ** 4, 2 ** 6, 2 ** 8, 2 ** 10):
            _, report = reconstruct_in_chaoses(third_symbol, h2_step, n_max, 40)
            errors.append(report.errors[0].value)
        assert all(b <= a for a, b in zip(errors, errors[1:]))
        assert errors[-1] < 1e-6
        K = 10
        assert errors[-1] == pytest.approx(3.0 ** -K * 2.0 ** (-(K + 1) / 2), rel=1e-9)

    def test_invalid_n_max(self, third_symbol, h2_step):
        """Test that n_max must be positive."""
        with pytest.raises(DomainError):
            reconstruct_in_chaoses(third_symbol, h2_step, 0, 4)


class TestChaosD:
    """Test higher chaoses."""

    def test_decompose(self, mixed_step):
        """Test that chaos parts come out lowest order first and carry the right gap vectors."""
        parts = decompose_chaoses(mixed_step)
        orders = [part.d for part in parts]
        assert orders == sorted(orders)
        assert all(g.d == part.d for part in parts for g in part.coeffs)

    def test_h6_is_second_chaos(self):
        """Test that h_6 = V_1 V_0 h is a single second-chaos term with gaps (0, 1)."""
        parts = decompose_chaoses(haar(6, 4))
        assert [part.d for part in parts] == [2]
        assert parts[0].coeffs == {GapVector((0, 1)): 1}

    @given(mean_zero_steps)
    @hyp_settings(max_examples=50, deadline=None)
    @seed(32)
    def test_chaoses_orthogonal(self, x):
        """Test that the energies of the chaos parts add up to ||x||_2^2."""
        assert sum(part.norm2_squared() for part in decompose_chaoses(x)) == norm2_squared(x)

    def test_wrong_order_refused(self):
        """Test that a gap vector of another order is refused."""
        with pytest.raises(DomainError):
            ChaosD(2, {GapVector((1,)): 1})
