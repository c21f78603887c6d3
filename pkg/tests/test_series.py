from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starq.scalars import Scalar
from starq.series import (ExponentTail, LambdaSeries, QSeries,
                          TruncationMismatch, admissibility_check,
                          lam_series, np_clearing_factor, ordered_sign,
                          scalar_series, ultrametric_distance)


def s(terms, trunc=6):
    return scalar_series(terms, trunc)


class TestOrder:
    def test_min_exponent(self):
        # lam^2*x stands in for any nonzero coefficient at exponent 2
        assert s({2: 1, 3: 1}).order() == 2

    def test_zero_has_infinite_order(self):
        assert s({}).order() == float("inf")

    def test_laurent_exponent(self):
        assert s({-1: 1, 0: 1}).order() == -1


class TestAbsoluteValue:
    def test_two_to_minus_order(self):
        assert s({2: 1}).abs_lambda() == Fraction(1, 4)

    def test_zero(self):
        assert s({}).abs_lambda() == 0

    def test_negative_order(self):
        assert s({-3: 1}).abs_lambda() == 8


class TestArithmetic:
    def test_cancellation(self):
        assert (s({1: 1, 2: 1}) + s({1: -1})) == s({2: 1})

    def test_product_exponents(self):
        assert s({1: 2}) * s({1: 3}) == s({2: 6})

    def test_additive_inverse_is_zero(self):
        f = s({0: 1, 3: Fraction(-1, 2)})
        assert (f + (-f)).order() == float("inf")

    def test_window_mismatch(self):
        with pytest.raises(TruncationMismatch):
            s({0: 1}, 4) + s({0: 1}, 6)

    def test_product_discards_above_window(self):
        f = s({4: 1}, 6)
        assert (f * f).is_zero()

    def test_conj_fixes_lam(self):
        f = s({1: Scalar(0, 1)})
        assert f.conj() == s({1: Scalar(0, -1)})


class TestOrderedSign:
    def test_negative_lowest(self):
        assert ordered_sign(s({1: -1, 2: 1})) == -1

    def test_zero(self):
        assert ordered_sign(s({})) == 0

    def test_positive(self):
        assert ordered_sign(s({5: 3})) == 1


class TestUltrametric:
    def test_reflexive(self):
        f = s({0: 1, 2: 3})
        assert ultrametric_distance(f, f) == 0

    def test_unit_vs_one_plus_lam(self):
        assert ultrametric_distance(s({0: 1}), s({0: 1, 1: 1})) == Fraction(1, 2)

    def test_laurent_distance(self):
        assert ultrametric_distance(s({-1: 1}), s({})) == 2


class TestAdmissibility:
    def test_integer_tail_is_laurent(self):
        assert admissibility_check([-1, 0],
                                   ExponentTail.arithmetic(1, 1)) == "L"

    def test_halves_are_np(self):
        tail = ExponentTail.arithmetic(Fraction(1, 2), Fraction(1, 2))
        assert admissibility_check([], tail) == "NP"
        assert np_clearing_factor([], tail) == 2

    def test_accumulating_is_inadmissible(self):
        assert admissibility_check([], ExponentTail.accumulating(1)) \
            == "inadmissible"

    def test_descending_has_no_minimum(self):
        assert admissibility_check([0], ExponentTail.arithmetic(0, -1)) \
            == "inadmissible"

    def test_qseries_classification(self):
        qs = QSeries({Fraction(1, 2): Scalar(1), Fraction(2): Scalar(1)})
        assert qs.cls == "NP"
        assert qs.order() == Fraction(1, 2)


small_scalars = st.builds(
    Scalar,
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=-3, max_value=3, max_denominator=4))

series_st = st.dictionaries(st.integers(min_value=-3, max_value=6),
                            small_scalars, max_size=4).map(
    lambda d: LambdaSeries({e: c for e, c in d.items()}, 6))

real_series_st = st.dictionaries(
    st.integers(min_value=-3, max_value=6),
    st.fractions(min_value=-3, max_value=3, max_denominator=4).map(Scalar),
    max_size=4).map(lambda d: LambdaSeries(d, 6))


class TestPropertyBased:
    @settings(max_examples=200, deadline=None)
    @given(series_st, series_st, series_st)
    def test_ultrametric_inequality(self, f, g, h):
        assert ultrametric_distance(f, h) <= max(
            ultrametric_distance(f, g), ultrametric_distance(g, h))

    @settings(max_examples=200, deadline=None)
    @given(series_st, series_st)
    def test_strong_triangle_with_equality_clause(self, f, g):
        of, og, osum = f.order(), g.order(), (f + g).order()
        assert osum >= min(of, og)
        if of != og:
            assert osum == min(of, og)

    @settings(max_examples=200, deadline=None)
    @given(real_series_st)
    def test_trichotomy(self, a):
        sign = ordered_sign(a)
        assert (sign > 0) + (sign < 0) + a.is_zero() == 1

    @settings(max_examples=200, deadline=None)
    @given(real_series_st, real_series_st)
    def test_positive_cone(self, a, b):
        if ordered_sign(a) > 0 and ordered_sign(b) > 0:
            assert ordered_sign(a + b) > 0
            if a.order() + b.order() <= 6:
                assert ordered_sign(a * b) > 0

    @settings(max_examples=100, deadline=None)
    @given(series_st, series_st)
    def test_distributivity(self, f, g):
        h = lam_series(6)
        assert (f + g) * h == f * h + g * h
