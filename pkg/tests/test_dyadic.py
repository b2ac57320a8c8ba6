import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, seed, settings as hyp_settings, strategies as st

from haar_affine.chaos.chaos1 import Chaos1, truncate_to_step
from haar_affine.dyadic.coeffs import HaarCoeffMap, fourier_haar
from haar_affine.dyadic.norms import bmo_norm, h1_norm, lp_norm, paley_lp_norm, project_chaos1, sharp
from haar_affine.dyadic.scalars import GaussianRational, format_scalar, parse_scalar
from haar_affine.dyadic.stepfn import (
    DyadicStep,
    adjoint,
    adjoint_scaled,
    apply_multi,
    dilate,
    haar,
    inner,
    norm2_squared,
)
from haar_affine.dyadic.tree import (
    GapVector,
    MultiIndex,
    chaos_order,
    gaps_to_nd,
    index_to_multi,
    interval_of,
    is_antichain,
    multi_to_index,
    nd_to_gaps,
)
from haar_affine.exceptions import CapacityError, DomainError, InputParseError, NonZeroMeanError
from haar_affine.models import ScalarMode


def _mean_zero(values):
    mean = sum(values, Fraction(0)) / len(values)
    return DyadicStep.from_values([v - mean for v in values], ScalarMode.EXACT)


mean_zero_steps = st.integers(min_value=1, max_value=5).flatmap(
    lambda level: st.lists(
        st.fractions(min_value=-5, max_value=5, max_denominator=9),
        min_size=1 << level,
        max_size=1 << level,
    )
).map(_mean_zero)

rational_steps = st.integers(min_value=1, max_value=5).flatmap(
    lambda level: st.lists(
        st.fractions(min_value=-5, max_value=5, max_denominator=9),
        min_size=1 << level,
        max_size=1 << level,
    )
).map(lambda values: DyadicStep.from_values(values, ScalarMode.EXACT))

bits = st.integers(min_value=0, max_value=1)
bit_strings = st.lists(bits, max_size=12).map(lambda b: MultiIndex(tuple(b)))


class TestScalars:
    """Test exact scalar parsing and formatting."""

    def test_parse_rational_and_complex(self):
        """Test that rationals and complex rationals parse exactly."""
        assert parse_scalar("-1/3") == GaussianRational(Fraction(-1, 3))
        assert parse_scalar("1/2+3/4 i") == GaussianRational(Fraction(1, 2), Fraction(3, 4))
        assert parse_scalar("0.1") == GaussianRational(Fraction(1, 10))

    def test_parse_error_reports_position(self):
        """Test that a malformed scalar names the offending position."""
        with pytest.raises(InputParseError) as excinfo:
            parse_scalar("1//2")
        assert excinfo.value.position == 1

    def test_format(self):
        """Test the p/q rendering of exact scalars."""
        assert format_scalar(parse_scalar("4/2")) == "2"
        assert format_scalar(parse_scalar("1/2-1/3 i")) == "1/2-1/3 i"


class TestMultiIndex:
    """Test addressing of the dyadic tree."""

    def test_numbering_round_trip(self):
        """Test n -> alpha -> n for the first Haar numbers."""
        for n in range(1, 130):
            assert multi_to_index(index_to_multi(n)) == n
        assert index_to_multi(1) == MultiIndex(())
        assert index_to_multi(6) == MultiIndex.of(1, 0)

    def test_length_cap(self):
        """Test that indices longer than 62 are refused."""
        MultiIndex.zeros(62)
        with pytest.raises(CapacityError):
            MultiIndex.zeros(63)

    def test_interval(self):
        """Test the dyadic interval of an index."""
        interval = interval_of(MultiIndex.of(1, 0))
        assert interval.left == Fraction(1, 2)
        assert interval.right == Fraction(3, 4)
        assert interval.contains(Fraction(3, 4))
        assert not interval.contains(Fraction(1, 2))

    def test_gap_vectors(self):
        """Test the gap description of chaos indices."""
        assert nd_to_gaps(6) == GapVector((0, 1))
        assert GapVector((0, 1)).to_multi() == index_to_multi(6)
        assert gaps_to_nd(GapVector((2, 0, 1))) == 0b100110
        assert chaos_order(6) == 2
        for n in range(1, 200):
            assert gaps_to_nd(nd_to_gaps(n)) == n
            assert GapVector.from_multi(index_to_multi(n)).d == chaos_order(n)

    def test_invalid_inputs(self):
        """Test the domain errors of the tree helpers."""
        with pytest.raises(DomainError):
            index_to_multi(0)
        with pytest.raises(DomainError):
            MultiIndex.of(0, 2)

    def test_antichain(self):
        """Test prefix detection."""
        assert is_antichain([MultiIndex.of(0), MultiIndex.of(1, 0)])
        assert not is_antichain([MultiIndex.of(1), MultiIndex.of(1, 0)])

    @given(bit_strings, bit_strings)
    @hyp_settings(max_examples=100, deadline=None)
    @seed(21)
    def test_intervals_nest(self, beta, gamma):
        """Test that I_{beta gamma} lies inside I_beta with length 2^-|beta gamma|."""
        nested = interval_of(beta + gamma)
        assert nested.issubset(interval_of(beta))
        assert nested.length == Fraction(1, 2 ** (len(beta) + len(gamma)))

    @given(st.lists(bit_strings, min_size=1, max_size=10))
    @hyp_settings(max_examples=100, deadline=None)
    @seed(22)
    def test_antichain_intervals_disjoint(self, indices):
        """Test that the intervals of an antichain are pairwise disjoint."""
        distinct = set(indices)
        maximal = [a for a in distinct if not any(a != b and a.is_prefix_of(b) for b in distinct)]
        assert is_antichain(maximal)
        for a, b in itertools.combinations(maximal, 2):
            assert interval_of(a).is_disjoint(interval_of(b))


class TestStepFunctions:
    """Test dyadic step functions and the multishift."""

    def test_haar_functions(self):
        """Test h_1 and h_2 cell values."""
        assert list(haar(1, 1).values) == [1, -1]
        assert list(haar(2, 2).values) == [1, -1, 0, 0]
        with pytest.raises(CapacityError):
            haar(4, 2)

    def test_dilations(self):
        """Test that V_0 and V_1 move h onto the Haar functions h_2 and h_3."""
        h = haar(1, 1)
        assert dilate(0, h) == haar(2, 2)
        assert dilate(1, h) == haar(3, 2)
        assert apply_multi(MultiIndex.of(1, 0), h) == haar(6, 3)

    def test_pairing_and_adjoint(self):
        """Test (h_2, h_2) = 1/2 and that the scaled adjoint undoes V_0."""
        h2 = haar(2, 3)
        assert inner(h2, h2) == Fraction(1, 2)
        assert inner(h2, haar(3, 3)) == 0
        assert adjoint_scaled(MultiIndex.of(0), h2) == haar(1, 2)

    def test_haar_orthogonality(self):
        """Test (h_m, h_n) = 2^-|alpha| delta_mn for every m, n <= 128."""
        # Float sums of dyadic rationals are exact here.
        hs = [haar(n, 8, ScalarMode.FLOAT) for n in range(1, 129)]
        for m, hm in enumerate(hs, start=1):
            expected = 2.0 ** -len(index_to_multi(m))
            for n, hn in enumerate(hs, start=1):
                assert inner(hm, hn) == (expected if m == n else 0.0)

    @given(rational_steps, bits)
    @hyp_settings(max_examples=50, deadline=None)
    @seed(23)
    def test_dilation_halves_energy(self, x, b):
        """Test ||V_b x||_2^2 = ||x||_2^2 / 2."""
        assert norm2_squared(dilate(b, x)) == norm2_squared(x) / 2

    @given(mean_zero_steps, mean_zero_steps, st.data())
    @hyp_settings(max_examples=50, deadline=None)
    @seed(24)
    def test_multishift_adjoint(self, x, y, data):
        """Test (V^alpha x, y) = (x, V^alpha* y) for mean-zero x, y and |alpha| <= 5."""
        alpha = MultiIndex(tuple(data.draw(st.lists(bits, max_size=min(5, y.level)))))
        assert inner(apply_multi(alpha, x), y) == inner(x, adjoint(alpha, y))

    def test_value_at(self):
        """Test evaluation with left-open cells."""
        h = haar(1, 1)
        assert h.value_at(Fraction(1, 2)) == 1
        assert h.value_at(Fraction(3, 4)) == -1
        with pytest.raises(DomainError):
            h.value_at(0)

    def test_level_cap(self, override_settings):
        """Test that dense step functions stop at max_step_level."""
        override_settings(max_step_level=8)
        with pytest.raises(CapacityError):
            DyadicStep.zeros(9)

    def test_mixed_modes_refused(self):
        """Test that exact and float step functions do not combine."""
        exact = haar(1, 1)
        approx = haar(1, 1, ScalarMode.FLOAT)
        with pytest.raises(DomainError):
            exact + approx


class TestHaarCoeffMap:
    """Test Fourier-Haar expansions as sparse coefficient maps."""

    def test_round_trip(self, mixed_step):
        """Test that expanding and summing returns the step function."""
        assert fourier_haar(mixed_step).to_step(3) == mixed_step

    def test_parseval(self, mixed_step):
        """Test ||x||^2 = sum |xi|^2 2^-|alpha| exactly."""
        assert norm2_squared(mixed_step) == fourier_haar(mixed_step).norm2_squared()

    def test_dilation_on_keys(self, mixed_step):
        """Test that V_b on a step function prefixes every key with b."""
        assert fourier_haar(dilate(1, mixed_step)) == fourier_haar(mixed_step).dilate(1)

    def test_mean_zero_required(self):
        """Test that the expansion refuses functions with a nonzero mean."""
        with pytest.raises(NonZeroMeanError):
            fourier_haar(DyadicStep.from_values(["1", "0"]))

    def test_by_order(self, mixed_step):
        """Test that chaos parts add back to the whole map."""
        x = fourier_haar(mixed_step)
        parts = x.by_order()
        total = HaarCoeffMap({}, ScalarMode.EXACT)
        for part in parts.values():
            total = total + part
        assert total == x
        assert all(alpha.ones + 1 == d for d, part in parts.items() for alpha in part)


class TestNorms:
    """Test L^p, BMO_d and H^1_d norms of step functions."""

    def test_lp_of_haar(self):
        """Test ||h||_p = 1 for every p, exact at p = 2 and 4."""
        h = haar(1, 1)
        assert lp_norm(h, 2).exact_value == "1"
        assert lp_norm(h, 4).exact_power == 4
        assert lp_norm(h, 3).value == pytest.approx(1.0)
        assert lp_norm(h, float("inf")).value == 1.0

    def test_lp_of_h2(self):
        """Test ||h_2||_2^2 = 1/2 exactly."""
        assert lp_norm(haar(2, 4), 2).exact_value == "1/2"

    def test_bmo_and_h1_of_haar(self):
        """Test the endpoint norms of h."""
        h = haar(1, 1)
        assert bmo_norm(h).exact_value == "1"
        assert h1_norm(h).value == pytest.approx(1.0)
        assert paley_lp_norm(h, 3).value == pytest.approx(1.0)

    def test_lp_domain(self):
        """Test that p < 1 is refused."""
        with pytest.raises(DomainError):
            lp_norm(haar(1, 1), 0.5)

    @given(mean_zero_steps)
    @hyp_settings(max_examples=50, deadline=None)
    @seed(13)
    def test_sharp_max_is_bmo_norm(self, x):
        """Test max of the sharp function equals the BMO_d norm exactly."""
        assert float(max(v.real for v in sharp(x).values)) == bmo_norm(x).value

    @given(mean_zero_steps, mean_zero_steps, st.integers(min_value=1, max_value=3))
    @hyp_settings(max_examples=30, deadline=None)
    @seed(25)
    def test_refinement_invariance(self, x, y, extra):
        """Test that refining a step function leaves pairings and norms unchanged."""
        fine = x.refine(x.level + extra)
        assert inner(fine, y) == inner(x, y)
        assert norm2_squared(fine) == norm2_squared(x)
        assert lp_norm(fine, 2).exact_value == lp_norm(x, 2).exact_value
        assert bmo_norm(fine).exact_value == bmo_norm(x).exact_value
        assert h1_norm(fine).value == pytest.approx(h1_norm(x).value, rel=1e-12)

    @given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=1, max_size=8))
    @hyp_settings(max_examples=50, deadline=None)
    @seed(26)
    def test_paley_of_first_chaos(self, coeffs):
        """Test the H^1_d norm of f_m against partial sums of |c_k|^2 over the cells (2^-k-1, 2^-k]."""
        m = len(coeffs)
        partial = list(itertools.accumulate(float(c) ** 2 for c in coeffs))
        expected = sum(2.0 ** (-k - 1) * math.sqrt(partial[k]) for k in range(m))
        expected += 2.0 ** -m * math.sqrt(partial[-1])
        f = truncate_to_step(Chaos1.from_coeffs(coeffs), m)
        assert h1_norm(f).value == pytest.approx(expected, rel=1e-12, abs=1e-12)


class TestChaosProjection:
    """Test the averaging projection Q onto the first chaos."""

    def test_fixes_h2(self):
        """Test Q h_2 = h_2."""
        assert project_chaos1(haar(2, 4)) == haar(2, 4)

    def test_kills_h3(self):
        """Test Q h_3 = 0."""
        assert project_chaos1(haar(3, 4)).is_zero()

    def test_fixes_first_chaos(self, third_symbol):
        """Test that truncations of a first-chaos function are fixed."""
        f = truncate_to_step(third_symbol, 6)
        assert project_chaos1(f) == f

    @given(rational_steps)
    @hyp_settings(max_examples=50, deadline=None)
    @seed(27)
    def test_idempotent(self, x):
        """Test Q Q x = Q x."""
        once = project_chaos1(x)
        assert project_chaos1(once) == once
