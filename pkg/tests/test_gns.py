import random
from fractions import Fraction

import pytest

from starq import (DivergentIntegral, MultiObservable, StarAlgebra,
                   cotangent_flat, moyal_plane, wick_space)
from starq.coeffs import GaussPoly
from starq.gns import (ConvexFunctional, DeltaFunctional, FockVector,
                       GnsVector, KMSFunctional, ModelMismatch,
                       OverlappingSupports, SchrodingerFunctional,
                       SupportDescriptor, TraceFunctional, WaveFunction,
                       bargmann_fock_apply, basis_observables,
                       extend_functional, faithfulness_check, fock_reduce,
                       gelfand_member, gns_direct_sum, gns_reduce, gns_repr,
                       omega_square, positivity_check, schrodinger_apply,
                       schrodinger_reduce, support_of_functional,
                       support_of_vector)
from starq.oper import LeftMul, apply_op
from starq.scalars import Scalar, Value
from starq.series import LambdaSeries, lam_series
from starq.verify import rand_observable


@pytest.fixture
def delta(wick6):
    return DeltaFunctional(wick6)


@pytest.fixture
def trace(moyal6):
    return TraceFunctional(moyal6)


@pytest.fixture
def schro(weyl6):
    return SchrodingerFunctional(weyl6)


def lam_scale(obs):
    return obs.scale_lambda(lam_series(obs.trunc))


class TestEval:
    def test_trace_of_gauss_is_pi(self, trace, moyal6):
        f = moyal6.embed(GaussPoly.const(moyal6.chart.variables, 1, 1))
        val = trace.eval(f)
        assert val.coeffs[0].exact == {1: Scalar(1)}

    def test_delta_on_star_square(self, delta, wick6):
        z, zb = wick6.coordinate("z1"), wick6.coordinate("zbar1")
        val = delta.eval(wick6.mul(z, zb))
        assert val == LambdaSeries({1: Value.exact_scalar(2)}, 6)

    def test_kms_at_zero_temperature_parameter(self, trace, moyal6):
        H = lam_scale(moyal6.coordinate("q1"))
        kms = KMSFunctional(moyal6, H, 0)
        rng = random.Random(0)
        for _ in range(5):
            f = rand_observable(rng, moyal6, 3, gamma=1)
            assert kms.eval(f) == trace.eval(f)

    def test_schrodinger_needs_integrable_density(self, weyl_lebesgue6):
        om = SchrodingerFunctional(weyl_lebesgue6)
        q = weyl_lebesgue6.coordinate("q1")
        with pytest.raises(DivergentIntegral):
            om.eval(q)


class TestPositivity:
    def test_delta_square_of_zbar(self, delta, wick6):
        assert positivity_check(delta, wick6.coordinate("zbar1"))

    def test_zero_observable(self, delta, wick6):
        assert positivity_check(delta, wick6.zero())

    def test_trace_random_weighted(self, trace, moyal6):
        rng = random.Random(1)
        for _ in range(50):
            f = rand_observable(rng, moyal6, 3, gamma=1)
            assert positivity_check(trace, f)

    def test_kms_and_schrodinger(self, moyal6, schro, weyl6):
        q, p = moyal6.coordinate("q1"), moyal6.coordinate("p1")
        H = lam_scale(moyal6.mul(q, q) + moyal6.mul(p, p))
        kms = KMSFunctional(moyal6, H, Fraction(1, 2))
        rng = random.Random(2)
        for _ in range(10):
            assert positivity_check(kms, rand_observable(rng, moyal6, 2,
                                                         gamma=1))
            assert positivity_check(schro, rand_observable(rng, weyl6, 2))


class TestSupports:
    def test_point_support(self, delta):
        supp = support_of_functional(delta)
        assert supp.tag() == "Point"

    def test_trace_support_full(self, trace):
        assert support_of_functional(trace).is_full(1)

    def test_convex_union(self):
        alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 6)
        one = LambdaSeries({0: Scalar(1)}, 6)
        conv = ConvexFunctional([
            (one, TraceFunctional(alg, components=[0])),
            (one, TraceFunctional(alg, components=[1]))])
        supp = support_of_functional(conv)
        assert supp.component_set() == frozenset({0, 1})
        assert supp.tag(2) == "Full"

    def test_overlap_rejected(self):
        alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 6)
        one = LambdaSeries({0: Scalar(1)}, 6)
        with pytest.raises(OverlappingSupports):
            ConvexFunctional([(one, TraceFunctional(alg, components=[0])),
                              (one, TraceFunctional(alg, components=[0]))])

    def test_vector_support_faithful(self):
        alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 6)
        tr = TraceFunctional(alg)
        f = MultiObservable.coordinate(alg.chart, 6, "q1").restrict({0})
        psi = GnsVector(tr, f)
        assert support_of_vector(psi).component_set() == frozenset({0})

    def test_vector_support_empty_off_functional(self):
        alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 6)
        tr0 = TraceFunctional(alg, components=[0])
        f = MultiObservable.coordinate(alg.chart, 6, "q1").restrict({1})
        psi = GnsVector(tr0, f)
        assert support_of_vector(psi).is_empty()
        assert psi.is_null()

    def test_vector_support_zero_section(self, schro, weyl6):
        p = weyl6.coordinate("p1")
        psi = GnsVector(schro, p)
        supp = support_of_vector(psi)
        # gaussian volume: the reduced wave function is i lam q, nonzero
        assert supp.tag() == "ZeroSection"

    def test_lattice_order(self):
        pt = SupportDescriptor.point(0, (0,))
        zs = SupportDescriptor.zero_section([0])
        full = SupportDescriptor.components([0])
        assert SupportDescriptor.empty().leq(pt)
        assert pt.leq(zs) and zs.leq(full)
        assert not full.leq(zs)
        assert pt.union(zs) == zs
        assert SupportDescriptor.components([0]).disjoint(
            SupportDescriptor.components([1]))


class TestGelfand:
    def test_z_belongs(self, delta, wick6):
        assert gelfand_member(delta, wick6.coordinate("z1"))

    def test_zbar_does_not(self, delta, wick6):
        assert not gelfand_member(delta, wick6.coordinate("zbar1"))

    def test_faithful_trace_trivial_ideal(self, trace, moyal6):
        rng = random.Random(3)
        for _ in range(10):
            f = rand_observable(rng, moyal6, 2, gamma=1)
            if f.is_zero():
                continue
            assert not gelfand_member(trace, f)

    def test_left_ideal(self, delta, wick6):
        rng = random.Random(4)
        z = wick6.coordinate("z1")
        for _ in range(20):
            g = rand_observable(rng, wick6, 2)
            assert gelfand_member(delta, wick6.mul(g, z))


class TestReduction:
    def test_delta_zbar_to_symbol(self, delta, wick6):
        fv = fock_reduce(delta, wick6.coordinate("zbar1"))
        assert fv == FockVector.monomial(1, (1,), 6)

    def test_schrodinger_flat_momentum_dies(self, weyl_lebesgue6):
        om = SchrodingerFunctional(weyl_lebesgue6)
        wf = schrodinger_reduce(om, weyl_lebesgue6.coordinate("p1"))
        assert wf.is_zero()

    def test_faithful_identity(self, trace, moyal6):
        f = rand_observable(random.Random(5), moyal6, 3)
        assert gns_reduce(GnsVector(trace, f)) == f

    def test_reduction_isometric_fock(self, delta, wick6):
        rng = random.Random(6)
        for _ in range(10):
            f = rand_observable(rng, wick6, 2)
            g = rand_observable(rng, wick6, 2)
            quotient = delta.inner(f, g)
            model = fock_reduce(delta, f).inner(fock_reduce(delta, g))
            assert quotient == model

    def test_reduction_isometric_schrodinger(self, schro, weyl6):
        rng = random.Random(7)
        for _ in range(8):
            f = rand_observable(rng, weyl6, 2)
            g = rand_observable(rng, weyl6, 2)
            quotient = schro.inner(f, g)
            model = schrodinger_reduce(schro, f).inner(
                schrodinger_reduce(schro, g))
            diff = quotient - model
            assert all(v.is_zero(1e-9) for v in diff.coeffs.values())


class TestRepresentation:
    def test_fock_creation_annihilation(self, delta, wick6):
        z, zb = wick6.coordinate("z1"), wick6.coordinate("zbar1")
        vac = FockVector.vacuum(1, 6)
        ybar = FockVector.monomial(1, (1,), 6)
        assert bargmann_fock_apply(delta, zb, vac) == ybar
        got = bargmann_fock_apply(delta, z, ybar)
        assert got == FockVector(1, {(0,): LambdaSeries({1: Scalar(2)}, 6)},
                                 6)

    def test_schrodinger_flat_actions(self, weyl_lebesgue6):
        om = SchrodingerFunctional(weyl_lebesgue6)
        chart = weyl_lebesgue6.chart
        u = WaveFunction(chart, [LambdaSeries(
            {0: GaussPoly(("q1",), {(2,): Scalar(1)}, 1)}, 6)], 6)
        # rho(p) u = -i lam du/dq
        got = schrodinger_apply(om, weyl_lebesgue6.coordinate("p1"), u)
        du = u.parts[0].coeffs[0].derive("q1")
        want = WaveFunction(chart, [LambdaSeries(
            {1: du.scale(Scalar(0, -1))}, 6)], 6)
        assert got == want
        # rho(q) u = q u
        got_q = schrodinger_apply(om, weyl_lebesgue6.coordinate("q1"), u)
        qu = GaussPoly(("q1",), {(1,): Scalar(1)}) * u.parts[0].coeffs[0]
        assert got_q == WaveFunction(chart, [LambdaSeries({0: qu}, 6)], 6)

    def test_schrodinger_gaussian_volume_action(self, schro, weyl6):
        # rho(p) u = i lam q u - i lam du/dq for the unit gaussian volume
        chart = weyl6.chart
        u = WaveFunction(chart, [LambdaSeries(
            {0: GaussPoly(("q1",), {(1,): Scalar(1)})}, 6)], 6)
        got = schrodinger_apply(schro, weyl6.coordinate("p1"), u)
        qu = GaussPoly(("q1",), {(2,): Scalar(0, 1)})
        du = GaussPoly(("q1",), {(0,): Scalar(0, -1)})
        want = WaveFunction(chart, [LambdaSeries({1: qu + du}, 6)], 6)
        assert got == want

    def test_quotient_action_matches_fock_model(self, delta, wick6):
        for f in basis_observables(wick6, 4):
            for g in basis_observables(wick6, 4):
                lhs = fock_reduce(delta, wick6.mul(f, g))
                rhs = bargmann_fock_apply(delta, f, fock_reduce(delta, g))
                assert lhs == rhs

    def test_quotient_action_matches_wave_model(self, schro, weyl6):
        for f in basis_observables(weyl6, 3):
            for g in basis_observables(weyl6, 3):
                lhs = schrodinger_reduce(schro, weyl6.mul(f, g))
                rhs = schrodinger_apply(schro, f, schrodinger_reduce(schro, g))
                assert lhs == rhs

    def test_gns_repr_is_left_multiplication(self, trace, moyal6):
        f = moyal6.coordinate("q1")
        op = gns_repr(trace, f)
        g = rand_observable(random.Random(8), moyal6, 2)
        psi = GnsVector(trace, g)
        assert apply_op(op, psi).rep == moyal6.mul(f, g)


class TestDirectSum:
    def make_convex(self):
        alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 4)
        one = LambdaSeries({0: Scalar(1)}, 4)
        conv = ConvexFunctional([
            (one, TraceFunctional(alg, components=[0])),
            (one, TraceFunctional(alg, components=[1]))])
        return alg, conv

    def test_split_is_orthogonal_decomposition(self):
        alg, conv = self.make_convex()
        ds = gns_direct_sum(conv)
        f = (MultiObservable.coordinate(alg.chart, 4, "q1").restrict({0})
             + MultiObservable.coordinate(alg.chart, 4, "p1").restrict({1}))
        fw = f.scale_lambda(LambdaSeries({0: Scalar(1)}, 4))
        fw = MultiObservable(
            alg.chart,
            [p.map_coeffs(lambda g: g * GaussPoly.const(
                alg.chart.variables, 1, 1)) for p in fw.parts], 4)
        psi = GnsVector(conv, fw)
        parts = ds.split(psi)
        assert (parts[0].rep + parts[1].rep) == fw
        cross = conv.inner(parts[0].rep, parts[1].rep)
        assert all(v.is_zero() for v in cross.coeffs.values())

    def test_projectors_commute_with_representation(self):
        alg, conv = self.make_convex()
        ds = gns_direct_sum(conv)
        rng = random.Random(9)
        from starq.oper import Compose, _apply_observable
        for _ in range(20):
            f = rand_observable(rng, alg, 2)
            probe = rand_observable(rng, alg, 2)
            P = ds.projectors[0]
            lhs = _apply_observable(Compose((P, LeftMul(f))), probe, alg)
            rhs = _apply_observable(Compose((LeftMul(f), P)), probe, alg)
            assert lhs == rhs

    def test_single_component_trivial(self, trace):
        one = LambdaSeries({0: Scalar(1)}, 6)
        conv = ConvexFunctional([(one, trace)])
        ds = gns_direct_sum(conv)
        assert len(ds.projectors) == 1


class TestExtension:
    def test_vanishes_off_support(self):
        alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 4)
        tr0 = TraceFunctional(alg, components=[0])
        f = rand_observable(random.Random(10), alg, 2, gamma=1).restrict({1})
        assert all(v.is_zero(0.0)
                   for v in extend_functional(tr0, f).coeffs.values())

    def test_restriction_of_a_sum(self):
        alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 4)
        tr0 = TraceFunctional(alg, components=[0])
        rng = random.Random(11)
        f0 = rand_observable(rng, alg, 2, gamma=1).restrict({0})
        f1 = rand_observable(rng, alg, 2, gamma=1).restrict({1})
        assert extend_functional(tr0, f0 + f1) == tr0.eval(f0)

    def test_full_support_is_plain_eval(self, trace, moyal6):
        f = rand_observable(random.Random(12), moyal6, 2, gamma=1)
        assert extend_functional(trace, f) == trace.eval(f)


class TestFaithfulness:
    def test_trace_faithful(self, trace):
        assert faithfulness_check(trace)

    def test_delta_not_faithful(self, delta):
        assert not faithfulness_check(delta)

    def test_kms_faithful(self, moyal6):
        H = lam_scale(moyal6.coordinate("q1"))
        assert faithfulness_check(KMSFunctional(moyal6, H, 2))


class TestCauchySchwarz:
    def test_ordered_inequality(self, trace, moyal6, delta, wick6):
        rng = random.Random(13)
        for om, alg, gam in ((trace, moyal6, 1), (delta, wick6, 0)):
            for _ in range(10):
                f = rand_observable(rng, alg, 2, gamma=gam)
                g = rand_observable(rng, alg, 2, gamma=gam)
                fg = om.inner(f, g)
                gap = (om.eval(omega_square(om, f))
                       * om.eval(omega_square(om, g))
                       - fg * fg.conj())
                low = [gap.coeffs[e] for e in sorted(gap.coeffs)
                       if not gap.coeffs[e].is_zero()]
                if low:
                    assert low[0].real_sign() >= 0
