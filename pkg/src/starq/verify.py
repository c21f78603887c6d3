"""Named property batteries behind `starq verify`.

Each suite re-checks the algebraic laws its module is built on, at sizes
controlled by the run configuration, and reports one pass/fail line per
property.  Tests reuse these batteries; the acceptance suite pins their
tolerances.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coeffs import (GaussPoly, MultiObservable, cotangent_flat, moyal_plane,
                     poisson, wick_space)
from .gns import (ConvexFunctional, DeltaFunctional, GnsVector,
                  KMSFunctional, SchrodingerFunctional, SupportDescriptor,
                  TraceFunctional, bargmann_fock_apply, basis_observables,
                  fock_reduce, gelfand_member, gns_direct_sum, omega_square,
                  positivity_check, schrodinger_apply, schrodinger_reduce,
                  support_of_vector)
from .modular import CheckResult, ModularData, tomita_checks
from .oper import (Compose, LeftMul, Model, RightMul, Scale, Sum,
                   adjoint, adjoint_relation_check, apply_op,
                   commutant_probe, is_local, kms_equivalence)
from .scalars import Scalar, Value
from .series import LambdaSeries, ordered_sign, ultrametric_distance
from .star import StarAlgebra
from .topo import (OperatorSequence, UnboundedOrder, alr_synthesize,
                   lambda_adic_converges, sinking_order_family,
                   star_strong_converges, strong_converges, strong_limit,
                   translated_bump_family)
from .oper import DiffOp


@dataclass
class RunConfig:
    trunc: int = 6
    degree: int = 4
    eps: float = 1e-12
    seed: int = 0
    series_samples: int = 1000
    pair_samples: int = 50
    triple_samples: int = 25  # per product

    def rng(self) -> random.Random:
        return random.Random(self.seed)


SUITES = ("series", "coeffs", "star", "gns", "oper", "modular", "topo")


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

_COEFF_POOL = [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2),
               Fraction(-3, 2), Fraction(3)]


def rand_scalar(rng: random.Random, real: bool = False) -> Scalar:
    re = rng.choice(_COEFF_POOL)
    im = 0 if real else rng.choice([0, 0] + _COEFF_POOL)
    return Scalar(re, im)


def rand_scalar_series(rng: random.Random, trunc: int, real: bool = False,
                       min_exp: int = -2) -> LambdaSeries:
    coeffs = {}
    for _ in range(rng.randrange(1, 4)):
        e = rng.randrange(min_exp, trunc + 1)
        coeffs[e] = rand_scalar(rng, real)
    return LambdaSeries(coeffs, trunc)


def rand_poly(rng: random.Random, variables, degree: int, terms: int = 2,
              wick: bool = False, gamma: Fraction | int = 0,
              real: bool = False) -> GaussPoly:
    t: dict = {}
    for _ in range(terms):
        mono = [0] * len(variables)
        for _ in range(rng.randrange(degree + 1)):
            mono[rng.randrange(len(variables))] += 1
        t[tuple(mono)] = rand_scalar(rng, real)
    return GaussPoly(variables, t, gamma, wick_pairs=wick)


def rand_observable(rng: random.Random, algebra: StarAlgebra, degree: int,
                    terms: int = 2, gamma: Fraction | int = 0,
                    lam_spread: bool = True) -> MultiObservable:
    wick = algebra.chart.kind == "wick"
    parts = []
    for _ in range(algebra.chart.components):
        coeffs = {0: rand_poly(rng, algebra.chart.variables, degree, terms,
                               wick, gamma)}
        if lam_spread and rng.random() < 0.5:
            coeffs[1] = rand_poly(rng, algebra.chart.variables, degree,
                                  terms, wick, gamma)
        parts.append(LambdaSeries(coeffs, algebra.trunc))
    return MultiObservable(algebra.chart, parts, algebra.trunc)


def _all(name: str, it) -> CheckResult:
    return CheckResult(name, all(it), "exact")


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_series(cfg: RunConfig) -> list[CheckResult]:
    rng = cfg.rng()
    N = cfg.trunc
    out = []

    ok = True
    for _ in range(cfg.series_samples // 5):
        f, g, h = (rand_scalar_series(rng, N) for _ in range(3))
        if ultrametric_distance(f, h) > max(ultrametric_distance(f, g),
                                            ultrametric_distance(g, h)):
            ok = False
    out.append(CheckResult("ultrametric_inequality", ok, "exact"))

    ok = True
    for _ in range(cfg.series_samples // 5):
        f, g = (rand_scalar_series(rng, N) for _ in range(2))
        of, og, osum = f.order(), g.order(), (f + g).order()
        if osum < min(of, og):
            ok = False
        if of != og and osum != min(of, og):
            ok = False
    out.append(CheckResult("order_strong_triangle", ok, "exact"))

    ok = True
    tri = True
    for _ in range(cfg.series_samples):
        a = rand_scalar_series(rng, N, real=True)
        b = rand_scalar_series(rng, N, real=True)
        sa, sb = ordered_sign(a), ordered_sign(b)
        if (sa > 0) + (sa < 0) + (a.is_zero()) != 1:
            tri = False
        if sa > 0 and sb > 0:
            if ordered_sign(a + b) <= 0:
                ok = False
            # the product stays positive whenever it survives the window
            if a.order() + b.order() <= N and ordered_sign(a * b) <= 0:
                ok = False
    out.append(CheckResult("ordered_ring_positive_cone", ok, "exact"))
    out.append(CheckResult("ordered_ring_trichotomy", tri, "exact"))

    ok = True
    for _ in range(cfg.series_samples // 5):
        a = rand_scalar_series(rng, N, real=True, min_exp=0)
        if ordered_sign(a) <= 0:
            a = -a
        if a.is_zero() or a.order() >= N:
            continue
        b = rand_scalar_series(rng, N, real=True, min_exp=0).shift(
            int(a.order()) + 1)
        if not b.is_zero() and ordered_sign(a + b) <= 0:
            ok = False
    out.append(CheckResult("order_topology_dominance", ok, "exact"))

    alg = StarAlgebra(moyal_plane(1), "moyal", N)
    ok = True
    for _ in range(cfg.series_samples // 10):
        f = rand_observable(rng, alg, 2).parts[0]
        g = rand_observable(rng, alg, 2).parts[0]
        if f.is_zero() or g.is_zero():
            continue
        if (f * g).order() != f.order() + g.order():
            ok = False
    out.append(CheckResult("order_multiplicative_no_zero_divisors", ok,
                           "exact"))
    return out


def suite_coeffs(cfg: RunConfig) -> list[CheckResult]:
    rng = cfg.rng()
    chart = moyal_plane(1)
    vars_ = chart.variables
    out = []

    ok = True
    for _ in range(200):
        gamma = rng.choice([0, 0, 1])
        f = rand_poly(rng, vars_, 3, gamma=gamma)
        g = rand_poly(rng, vars_, 3, gamma=gamma)
        v = rng.choice(vars_)
        lhs = (f * g).derive(v)
        rhs = f.derive(v) * g + f * g.derive(v)
        if lhs != rhs:
            ok = False
    out.append(CheckResult("leibniz_rule", ok, "exact"))

    ok = True
    for _ in range(60):
        f, g, h = (rand_poly(rng, vars_, 3) for _ in range(3))
        jac = (poisson(f, poisson(g, h, chart), chart)
               + poisson(g, poisson(h, f, chart), chart)
               + poisson(h, poisson(f, g, chart), chart))
        if not jac.is_zero():
            ok = False
    out.append(CheckResult("poisson_jacobi", ok, "exact"))

    wchart = wick_space(1)
    ok = True
    for _ in range(100):
        f = rand_poly(rng, wchart.variables, 3, wick=True)
        g = rand_poly(rng, wchart.variables, 3, wick=True)
        if f.conj().conj() != f or (f * g).conj() != f.conj() * g.conj():
            ok = False
    out.append(CheckResult("conjugation_involution_homomorphism", ok,
                           "exact"))

    ok = True
    for _ in range(60):
        f = rand_poly(rng, vars_, 3, gamma=1)
        g = rand_poly(rng, vars_, 3, gamma=1)
        a, b = rand_scalar(rng), rand_scalar(rng)
        lin = ((f.scale(a) + g.scale(b)).gauss_integral()
               - (f.gauss_integral().scale(a) + g.gauss_integral().scale(b)))
        if not lin.is_zero(cfg.eps):
            ok = False
        v = rng.choice(vars_)
        if not f.derive(v).gauss_integral().is_zero(cfg.eps):
            ok = False
    out.append(CheckResult("gauss_integral_linear_and_kills_derivatives",
                           ok, "exact"))
    return out


def _product_algebras(trunc: int) -> list[StarAlgebra]:
    return [StarAlgebra(moyal_plane(1), "moyal", trunc),
            StarAlgebra(wick_space(1), "wick", trunc),
            StarAlgebra(cotangent_flat(1, density=("gaussian", 1)), "std",
                        trunc),
            StarAlgebra(cotangent_flat(1, density=("gaussian", 1)), "weyl",
                        trunc)]


def first_order_commutator_matches_bracket(alg: StarAlgebra,
                                           f: MultiObservable,
                                           g: MultiObservable) -> bool:
    """lam^1 coefficient of [f, g] equals i{f_0, g_0} componentwise."""
    from .coeffs import wick_poisson
    bracket = wick_poisson if alg.chart.kind == "wick" else poisson
    zero = GaussPoly.zero(alg.chart.variables, 0,
                          wick_pairs=(alg.chart.kind == "wick"))
    comm = alg.comm(f, g)
    for fp, gp, cp in zip(f.parts, g.parts, comm.parts):
        f0 = fp.coeffs.get(0, zero)
        g0 = gp.coeffs.get(0, zero)
        expect = bracket(f0, g0, alg.chart).scale(Scalar(0, 1))
        got = cp.coeffs.get(1, zero)
        if got != expect and not (got.is_zero() and expect.is_zero()):
            return False
    return True


def suite_star(cfg: RunConfig) -> list[CheckResult]:
    rng = cfg.rng()
    out = []
    deg = cfg.degree
    for alg in _product_algebras(cfg.trunc):
        name = alg.product
        assoc = unit = invol = first = True
        for _ in range(cfg.triple_samples):
            f = rand_observable(rng, alg, deg)
            g = rand_observable(rng, alg, deg)
            h = rand_observable(rng, alg, deg)
            if alg.mul(alg.mul(f, g), h) != alg.mul(f, alg.mul(g, h)):
                assoc = False
            one = alg.one()
            if alg.mul(one, f) != f or alg.mul(f, one) != f:
                unit = False
            if alg.product == "std":
                # normal ordering is Hermitian only up to the squared
                # corrector: conj(f*g) = N^-2(N^2 conj(g) * N^2 conj(f))
                def n2(x, inverse=False):
                    return alg.n_op(alg.n_op(x, inverse), inverse)
                lhs = alg.mul(f, g).conj()
                rhs = n2(alg.mul(n2(g.conj()), n2(f.conj())), inverse=True)
                if lhs != rhs:
                    invol = False
            elif alg.mul(f, g).conj() != alg.mul(g.conj(), f.conj()):
                invol = False
            if not first_order_commutator_matches_bracket(alg, f, g):
                first = False
        out.append(CheckResult(f"{name}_associative", assoc, "exact"))
        out.append(CheckResult(f"{name}_unit", unit, "exact"))
        invol_name = ("std_involution_corrector_twisted" if name == "std"
                      else f"{name}_involution")
        out.append(CheckResult(invol_name, invol, "exact"))
        out.append(CheckResult(f"{name}_first_order_bracket", first,
                               "exact"))

    # locality at component granularity
    alg2 = StarAlgebra(moyal_plane(1, components=2), "moyal", cfg.trunc)
    ok = True
    for _ in range(20):
        f = rand_observable(rng, alg2, 2).restrict({0})
        g = rand_observable(rng, alg2, 2)
        prod = alg2.mul(f, g)
        if not prod.support_components() <= (f.support_components()
                                             & g.support_components()):
            ok = False
    out.append(CheckResult("product_component_locality", ok, "exact"))

    # homogeneity of the normal-ordered product
    std = _product_algebras(cfg.trunc)[2]
    ok = all(std.homogeneity_check(rand_observable(rng, std, 3),
                                   rand_observable(rng, std, 3))
             for _ in range(cfg.pair_samples))
    out.append(CheckResult("std_homogeneity_derivation", ok, "exact"))

    # star exponential: symbolic flow equation, initial value, group law
    moyal = _product_algebras(cfg.trunc)[0]
    lam = LambdaSeries({1: Scalar(1)}, cfg.trunc)
    ok_ode = ok_init = ok_group = ok_conj = True
    for _ in range(6):
        H = rand_observable(rng, moyal, 2, lam_spread=False)
        H = (H + H.conj()).scale_lambda(lam)  # real, order >= 1
        coeffs = moyal.star_exp_beta_coeffs(H)
        for k in range(len(coeffs) - 1):
            lhs = coeffs[k + 1].scale(k + 1)
            rhs = moyal.mul(H, coeffs[k])
            if lhs != rhs:
                ok_ode = False
        if moyal.star_exp(H, 0) != moyal.one():
            ok_init = False
        b1 = Fraction(rng.randrange(-2, 3), rng.choice([1, 2]))
        b2 = Fraction(rng.randrange(-2, 3), rng.choice([1, 2]))
        lhs = moyal.star_exp(H, b1 + b2)
        rhs = moyal.mul(moyal.star_exp(H, b1), moyal.star_exp(H, b2))
        if lhs != rhs:
            ok_group = False
        if moyal.star_exp(H, b1).conj() != moyal.star_exp(H.conj(), b1):
            ok_conj = False
    out.append(CheckResult("star_exp_flow_equation", ok_ode, "exact"))
    out.append(CheckResult("star_exp_initial_value", ok_init, "exact"))
    out.append(CheckResult("star_exp_group_law", ok_group, "exact"))
    out.append(CheckResult("star_exp_conjugation", ok_conj, "exact"))

    # ordering corrector inverse
    wl = _product_algebras(cfg.trunc)[3]
    ok = True
    for _ in range(10):
        f = rand_observable(rng, wl, 4)
        if wl.n_op(wl.n_op(f), inverse=True) != f:
            ok = False
    out.append(CheckResult("ordering_corrector_invertible", ok, "exact"))
    return out


def suite_gns(cfg: RunConfig) -> list[CheckResult]:
    rng = cfg.rng()
    out = []
    N = min(cfg.trunc, 4)
    deg = min(cfg.degree, 4)

    wick = StarAlgebra(wick_space(1), "wick", N)
    delta = DeltaFunctional(wick)
    moyal = StarAlgebra(moyal_plane(1), "moyal", N)
    trace = TraceFunctional(moyal)
    cot = StarAlgebra(cotangent_flat(1, density=("gaussian", 1)), "weyl", N)
    schro = SchrodingerFunctional(cot)

    def series_nonneg(s: LambdaSeries) -> bool:
        for e in sorted(s.coeffs):
            v = s.coeffs[e]
            if v.is_zero(cfg.eps):
                continue
            return v.real_sign(cfg.eps) >= 0 and v.imag_magnitude() <= cfg.eps
        return True

    ok = True
    for om, gam in ((delta, 0), (trace, 1)):
        for _ in range(15):
            f = rand_observable(rng, om.algebra, 2, gamma=gam)
            g = rand_observable(rng, om.algebra, 2, gamma=gam)
            fg = om.eval(om.algebra.mul(f.conj(), g))
            ff = om.eval(omega_square(om, f))
            gg = om.eval(omega_square(om, g))
            gap = ff * gg - fg * fg.conj()
            if not series_nonneg(gap):
                ok = False
    out.append(CheckResult("cauchy_schwarz", ok, "eps"))

    ok = True
    z = wick.coordinate("z1")
    for _ in range(20):
        g = rand_observable(rng, wick, 2)
        if not gelfand_member(delta, wick.mul(g, z)):
            ok = False
    out.append(CheckResult("gelfand_left_ideal", ok, "exact"))

    ok = True
    for om, gam in ((trace, 1), (delta, 0)):
        for _ in range(8):
            f = rand_observable(rng, om.algebra, 2, gamma=0)
            a = rand_observable(rng, om.algebra, 2, gamma=gam)
            b = rand_observable(rng, om.algebra, 2, gamma=gam)
            lhs = om.inner(om.algebra.mul(f, a), b)
            rhs = om.inner(a, om.algebra.mul(f.conj(), b))
            if any(not v.is_zero(cfg.eps) for v in (lhs - rhs).coeffs.values()):
                ok = False
    out.append(CheckResult("gns_star_representation", ok, "eps"))

    # positivity of the zoo
    ok = all(positivity_check(om, rand_observable(rng, om.algebra, 2,
                                                  gamma=gam), cfg.eps)
             for om, gam in ((delta, 0), (trace, 1), (schro, 0))
             for _ in range(10))
    out.append(CheckResult("functional_positivity", ok, "eps"))

    # locality of the representation on a two-component model
    alg2 = StarAlgebra(moyal_plane(1, components=2), "moyal", N)
    tr2 = TraceFunctional(alg2)
    ok = True
    for _ in range(15):
        f = rand_observable(rng, alg2, 2).restrict(
            {rng.randrange(2)})
        g = rand_observable(rng, alg2, 2, gamma=1)
        psi = GnsVector(tr2, g)
        img = apply_op(LeftMul(f), psi)
        bound = support_of_vector(psi).intersect(
            SupportDescriptor.components(f.support_components()))
        if not support_of_vector(img).leq(bound):
            ok = False
    out.append(CheckResult("gns_representation_local", ok, "exact"))

    # model equivalence: quotient action equals the explicit formulas
    ok = True
    basisw = basis_observables(wick, deg)
    for f in basisw[:8]:
        for g in basisw[:8]:
            lhs = fock_reduce(delta, wick.mul(f, g))
            rhs = bargmann_fock_apply(delta, f, fock_reduce(delta, g))
            if lhs != rhs:
                ok = False
    out.append(CheckResult("fock_model_equivalence", ok, "exact"))

    ok = True
    basisc = basis_observables(cot, min(deg, 3))
    for f in basisc[:6]:
        for g in basisc[:6]:
            lhs = schrodinger_reduce(schro, cot.mul(f, g))
            rhs = schrodinger_apply(schro, f, schrodinger_reduce(schro, g))
            if lhs != rhs:
                ok = False
    out.append(CheckResult("schrodinger_model_equivalence", ok, "exact"))

    # orthogonality of disjoint supports in a convex sum
    one_s = LambdaSeries({0: Scalar(1)}, N)
    half = LambdaSeries({0: Scalar(Fraction(1, 2))}, N)
    conv = ConvexFunctional([
        (half, TraceFunctional(alg2, components=[0])),
        (one_s, TraceFunctional(alg2, components=[1]))])
    ok = True
    for _ in range(10):
        f = rand_observable(rng, alg2, 2, gamma=1).restrict({0})
        g = rand_observable(rng, alg2, 2, gamma=1).restrict({1})
        ip = conv.inner(f, g)
        if any(not v.is_zero(cfg.eps) for v in ip.coeffs.values()):
            ok = False
    out.append(CheckResult("disjoint_support_orthogonality", ok, "exact"))
    return out


def suite_oper(cfg: RunConfig) -> list[CheckResult]:
    rng = cfg.rng()
    out = []
    N = min(cfg.trunc, 4)
    moyal = StarAlgebra(moyal_plane(1), "moyal", N)
    trace = TraceFunctional(moyal)
    lam_h = StarAlgebra(moyal_plane(1), "moyal", N)
    q = moyal.coordinate("q1")
    p = moyal.coordinate("p1")
    lam = LambdaSeries({1: Scalar(1)}, N)
    H = (moyal.mul(q, q) + moyal.mul(p, p)).scale_lambda(lam)
    kms = KMSFunctional(moyal, H, Fraction(1, 2))

    # *-algebra laws of the adjoint
    f = rand_observable(rng, moyal, 2)
    g = rand_observable(rng, moyal, 2)
    a = rand_scalar_series(rng, N, min_exp=0)
    A: Sum = Sum((Compose((Scale(a), LeftMul(f))), RightMul(g)))
    ok = True
    for om in (trace, kms):
        lhs = adjoint(adjoint(A, om), om)
        # double adjoint must act exactly like A on a probe
        probe = rand_observable(rng, moyal, 2, gamma=1)
        from .oper import _apply_observable
        if _apply_observable(lhs, probe, moyal) != _apply_observable(
                A, probe, moyal):
            ok = False
        AB = Compose((LeftMul(f), RightMul(g)))
        lhs2 = adjoint(AB, om)
        rhs2 = Compose((adjoint(RightMul(g), om), adjoint(LeftMul(f), om)))
        if _apply_observable(lhs2, probe, moyal) != _apply_observable(
                rhs2, probe, moyal):
            ok = False
    out.append(CheckResult("adjoint_star_algebra_laws", ok, "exact"))

    ok = all(adjoint_relation_check(X, om, degree=1, eps=1e-9)
             for om in (trace, kms)
             for X in (LeftMul(f), RightMul(g)))
    out.append(CheckResult("adjoint_inner_product_relation", ok, "eps"))

    ok = True
    for _ in range(20):
        ff = rand_observable(rng, moyal, 2)
        gg = rand_observable(rng, moyal, 2)
        probe = rand_observable(rng, moyal, 2)
        from .oper import _apply_observable
        lhs = _apply_observable(Compose((LeftMul(ff), RightMul(gg))), probe,
                                moyal)
        rhs = _apply_observable(Compose((RightMul(gg), LeftMul(ff))), probe,
                                moyal)
        if lhs != rhs:
            ok = False
    out.append(CheckResult("left_right_multiplications_commute", ok,
                           "exact"))

    # faithful representation separates observables
    model = Model(trace, 2)
    ok = True
    for _ in range(10):
        ff = rand_observable(rng, moyal, 1, lam_spread=False)
        if ff.is_zero():
            continue
        mat = model.matrixize(LeftMul(ff))
        if all(series.is_zero() for series in mat.entries.values()):
            ok = False
    out.append(CheckResult("faithful_representation_separates", ok, "exact"))

    # superselection: component projectors commute, are local, not scalar
    alg2 = StarAlgebra(moyal_plane(1, components=2), "moyal", N)
    one_s = LambdaSeries({0: Scalar(1)}, N)
    conv = ConvexFunctional([
        (one_s, TraceFunctional(alg2, components=[0])),
        (one_s, TraceFunctional(alg2, components=[1]))])
    ds = gns_direct_sum(conv)
    proj = ds.projectors[0]
    ok = is_local(proj, conv, degree=1)
    for _ in range(20):
        ff = rand_observable(rng, alg2, 2)
        probe = rand_observable(rng, alg2, 2)
        from .oper import _apply_observable
        lhs = _apply_observable(Compose((proj, LeftMul(ff))), probe, alg2)
        rhs = _apply_observable(Compose((LeftMul(ff), proj)), probe, alg2)
        if lhs != rhs:
            ok = False
    nontrivial = (_apply_observable(proj, alg2.one(), alg2)
                  not in (alg2.one(), alg2.zero()))
    out.append(CheckResult("superselection_projectors", ok and nontrivial,
                           "exact"))
    return out


def suite_modular(cfg: RunConfig) -> list[CheckResult]:
    N = min(cfg.trunc, 4)
    alg = StarAlgebra(moyal_plane(1), "moyal", N)
    q = alg.coordinate("q1")
    p = alg.coordinate("p1")
    lam = LambdaSeries({1: Scalar(1)}, N)
    H = (alg.mul(q, q) + alg.mul(p, p)).scale_lambda(lam)
    md = ModularData(alg, H, 2)
    return tomita_checks(md, degree=min(cfg.degree, 2), eps=max(cfg.eps, 1e-9),
                         seed=cfg.seed)


def suite_topo(cfg: RunConfig) -> list[CheckResult]:
    rng = cfg.rng()
    out = []
    N = cfg.trunc

    alg = StarAlgebra(moyal_plane(1), "moyal", N)
    q = alg.coordinate("q1")

    def lam_family(n: int):
        return Compose((Scale(LambdaSeries({n: Scalar(1)}, N)), LeftMul(q)))

    seq = OperatorSequence(lam_family, 2 * N + 2, alg)
    probes = basis_observables(alg, 2)[:4]
    basis = basis_observables(alg, 2)
    ok = (strong_converges(seq, None, probes).verdict
          and lambda_adic_converges(seq, None, basis).verdict)
    out.append(CheckResult("lambda_adic_implies_strong", ok, "exact"))

    alg16 = StarAlgebra(moyal_plane(1, components=16), "moyal",
                        min(N, 4))
    fam = translated_bump_family(alg16, 32)
    pr = [MultiObservable.one(alg16.chart, alg16.trunc).restrict({0}),
          MultiObservable.coordinate(alg16.chart, alg16.trunc,
                                     "q1").restrict({1, 2})]
    basis16 = [MultiObservable.one(alg16.chart, alg16.trunc).restrict({i})
               for i in range(16)]
    strong_ok = strong_converges(fam, None, pr).verdict
    lad = lambda_adic_converges(fam, None, basis16)
    out.append(CheckResult("strong_not_lambda_adic_bump_family",
                           strong_ok and not lad.verdict, "exact"))

    sink = sinking_order_family(alg, 2 * N)
    try:
        strong_limit(sink, probes)
        out.append(CheckResult("unbounded_order_detected", False, "exact"))
    except UnboundedOrder:
        out.append(CheckResult("unbounded_order_detected", True, "exact"))

    # synthesis soundness on random differential operators
    synth_alg = StarAlgebra(moyal_plane(1), "moyal", max(N, 9))
    ok = True
    for _ in range(3):
        table = {}
        for _ in range(2):
            dq = rng.randrange(3)
            dp = rng.randrange(2)
            c = rand_poly(rng, synth_alg.chart.variables, 3)
            table[(dq, dp)] = LambdaSeries({0: c}, synth_alg.trunc)
        D = DiffOp.build("observable", table)
        res = alr_synthesize(D, synth_alg, order=6, probe_degree=3)
        if res.verified_order < 6:
            ok = False
    out.append(CheckResult("left_right_synthesis_reaches_order", ok,
                           "exact"))

    # *-strong convergence with thermal adjoints
    lamq = StarAlgebra(moyal_plane(1), "moyal", min(N, 4))
    lam = LambdaSeries({1: Scalar(1)}, lamq.trunc)
    H = (lamq.mul(lamq.coordinate("q1"), lamq.coordinate("q1"))
         + lamq.mul(lamq.coordinate("p1"),
                    lamq.coordinate("p1"))).scale_lambda(lam)
    kms = KMSFunctional(lamq, H, 1)
    qq = lamq.coordinate("q1")

    def rfam(n: int):
        return Compose((Scale(LambdaSeries({n: Scalar(1)}, lamq.trunc)),
                        RightMul(qq)))

    rseq = OperatorSequence(rfam, 2 * lamq.trunc + 2, lamq)
    probes2 = basis_observables(lamq, 2)[:3]
    rep = star_strong_converges(rseq, None, probes2, kms)
    out.append(CheckResult("star_strong_convergence_thermal", rep.verdict,
                           "exact"))
    return out


def run_suite(name: str, cfg: RunConfig) -> list[CheckResult]:
    table = {"series": suite_series, "coeffs": suite_coeffs,
             "star": suite_star, "gns": suite_gns, "oper": suite_oper,
             "modular": suite_modular, "topo": suite_topo}
    if name == "all":
        out = []
        for key in SUITES:
            for res in table[key](cfg):
                out.append(CheckResult(f"{key}.{res.name}", res.passed,
                                       res.mode))
        return out
    if name not in table:
        raise KeyError(name)
    return table[name](cfg)
