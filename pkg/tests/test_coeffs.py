import math
from fractions import Fraction

import pytest

from starq.coeffs import (DivergentIntegral, GaussPoly, UnknownVariable,
                          UnsupportedChart, WeightMismatch, moyal_plane,
                          poisson, wick_poisson, wick_space)
from starq.scalars import Scalar

from oracles import quad_gauss_1d

M = moyal_plane(1)
W = wick_space(1)
QP = M.variables


def var(name, gamma=0, chart=M):
    return GaussPoly.variable(chart.variables, name, gamma,
                              wick_pairs=(chart.kind == "wick"))


class TestDerive:
    def test_product_rule_through_weight(self):
        # d_q (q e^{-q^2-p^2}) = (1 - 2 q^2) e^{-q^2-p^2}
        f = var("q1", gamma=1)
        expect = (GaussPoly.const(QP, 1, 1)
                  + GaussPoly(QP, {(2, 0): Scalar(-2)}, 1))
        assert f.derive("q1") == expect

    def test_independent_symbols(self):
        z = var("z1", chart=W)
        assert z.derive("zbar1").is_zero()

    def test_momentum_kills_configuration(self):
        q3 = var("q1") * var("q1") * var("q1")
        assert q3.derive("p1").is_zero()

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable):
            var("q1").derive("q7")


class TestPoisson:
    def test_canonical_pair(self):
        assert poisson(var("q1"), var("p1"), M) == GaussPoly.const(QP, 1)

    def test_antisymmetry(self):
        f = var("q1") * var("p1")
        assert poisson(f, f, M).is_zero()

    def test_leibniz_in_first_slot(self):
        q, p = var("q1"), var("p1")
        assert poisson(q * q, p, M) == q.scale(2)

    def test_wick_chart_rejected(self):
        with pytest.raises(UnsupportedChart):
            poisson(var("z1", chart=W), var("zbar1", chart=W), W)

    def test_wick_bracket_canonical(self):
        # {z, zbar} = -2i with respect to the Kaehler symplectic form
        z, zb = var("z1", chart=W), var("zbar1", chart=W)
        assert wick_poisson(z, zb, W) == GaussPoly.const(
            W.variables, Scalar(0, -2), wick_pairs=True)


class TestGaussIntegral:
    def test_plain_gaussian_is_pi(self):
        f = GaussPoly.const(QP, 1, 1)
        v = f.gauss_integral()
        assert v.is_exact and v.exact == {1: Scalar(1)}

    def test_odd_moment_vanishes(self):
        f = GaussPoly(["q1"], {(1,): Scalar(1)}, 1)
        assert f.gauss_integral().is_zero(0.0)

    def test_single_even_moment_is_float(self):
        # int q^2 e^{-q^2} = sqrt(pi)/2: frozen from the moment formula
        # (2m-1)!!/(2 gamma)^m sqrt(pi/gamma), m = 1, gamma = 1
        f = GaussPoly(["q1"], {(2,): Scalar(1)}, 1)
        v = f.gauss_integral()
        assert not v.is_exact
        assert v.as_complex().real == pytest.approx(0.8862269254527580, abs=1e-12)

    def test_against_quadrature(self):
        # dual route: numerical quadrature of x^4 - 2x^2 + 3 against e^{-2x^2}
        f = GaussPoly(["q1"], {(4,): Scalar(1), (2,): Scalar(-2),
                               (0,): Scalar(3)}, 2)
        lhs = f.gauss_integral().as_complex().real
        rhs = quad_gauss_1d({4: 1.0, 2: -2.0, 0: 3.0}, 2.0)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_divergent_flat_weight(self):
        with pytest.raises(DivergentIntegral):
            var("q1").gauss_integral()

    def test_leftover_variable_detected(self):
        f = var("q1", gamma=1)
        with pytest.raises(DivergentIntegral):
            f.gauss_integral(names=["p1"])

    def test_vanishes_on_total_derivatives(self):
        f = (var("q1") * var("p1") + var("q1")).scale(Scalar(1, 1))
        weighted = f * GaussPoly.const(QP, 1, 1)
        assert weighted.derive("q1").gauss_integral().is_zero(0.0)


class TestEvaluate:
    def test_constant_shift(self):
        z, zb = var("z1", chart=W), var("zbar1", chart=W)
        f = z * zb + GaussPoly.const(W.variables, 2, wick_pairs=True)
        assert f.evaluate([0, 0]).exact == {0: Scalar(2)}

    def test_coordinate_at_origin(self):
        assert var("q1").evaluate([0, 0]).is_zero(0.0)

    def test_weight_is_one_at_origin(self):
        f = (var("q1") * var("q1")
             + GaussPoly.const(QP, 1)) * GaussPoly.const(QP, 1, 1)
        assert f.evaluate([0, 0]).exact == {0: Scalar(1)}


class TestAlgebraClosure:
    def test_weight_adds_under_product(self):
        f = var("q1", gamma=1)
        assert (f * f).gamma == 2

    def test_mixed_weight_sum_rejected(self):
        with pytest.raises(WeightMismatch):
            var("q1", gamma=1) + var("q1")

    def test_conjugation_swaps_symbols(self):
        z = var("z1", chart=W).scale(Scalar(0, 1))
        assert z.conj() == var("zbar1", chart=W).scale(Scalar(0, -1))

    def test_conj_is_algebra_homomorphism(self):
        z, zb = var("z1", chart=W), var("zbar1", chart=W)
        f = z * z + zb.scale(Scalar(2, 1))
        g = z * zb
        assert (f * g).conj() == f.conj() * g.conj()
        assert f.conj().conj() == f
