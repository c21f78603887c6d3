"""Acceptance battery: one test per criterion, tolerances pinned inline.

Exact means bit-identical results of exact rational arithmetic; the float
tolerance 1e-9 applies only where closed-form Gaussian integration leaves
the exact domain.  Every test prints its own pass line (visible with -s).
"""

import json
import random
import time
from fractions import Fraction

import pytest

from starq import (MultiObservable, StarAlgebra, cotangent_flat, moyal_plane,
                   wick_space)
from starq.cli import main as cli_main
from starq.coeffs import GaussPoly, poisson
from starq.gns import (ConvexFunctional, DeltaFunctional, GnsVector,
                       KMSFunctional, SchrodingerFunctional,
                       SupportDescriptor, TraceFunctional,
                       bargmann_fock_apply, basis_observables,
                       delta_ideal_closed_form, fock_reduce, gns_direct_sum,
                       omega_square, schrodinger_apply, schrodinger_reduce,
                       support_of_vector)
from starq.linalg import in_span, rank_of_vectors
from starq.modular import ModularData, tomita_checks
from starq.oper import (Compose, DiffOp, LeftMul, Model, RightMul, Scale,
                        adjoint, adjoint_relation_check, commutant_probe,
                        is_local, kms_equivalence, _apply_observable)
from starq.scalars import Scalar
from starq.series import LambdaSeries, lam_series, ordered_sign, \
    ultrametric_distance
from starq.topo import (UnboundedOrder, alr_synthesize,
                        lambda_adic_converges, sinking_order_family,
                        strong_converges, strong_limit,
                        translated_bump_family)
from starq.verify import (RunConfig, first_order_commutator_matches_bracket,
                          rand_observable, rand_poly, rand_scalar_series,
                          run_suite)

EPS = 1e-9


def ok(criterion: str) -> None:
    print(f"ACCEPTANCE PASS: {criterion}")


def lam_scale(obs):
    return obs.scale_lambda(lam_series(obs.trunc))


def test_criterion_01_star_product_axioms():
    """Associativity, unit, involution, first-order bracket: 100 random
    triples (25 per product), deg <= 4, N = 6, exact, under 60 s."""
    t0 = time.time()
    rng = random.Random(101)
    algebras = [StarAlgebra(moyal_plane(1), "moyal", 6),
                StarAlgebra(wick_space(1), "wick", 6),
                StarAlgebra(cotangent_flat(1, density=("gaussian", 1)),
                            "std", 6),
                StarAlgebra(cotangent_flat(1, density=("gaussian", 1)),
                            "weyl", 6)]
    for alg in algebras:
        for _ in range(25):
            f = rand_observable(rng, alg, 4)
            g = rand_observable(rng, alg, 4)
            h = rand_observable(rng, alg, 4)
            assert alg.mul(alg.mul(f, g), h) == alg.mul(f, alg.mul(g, h))
            assert alg.mul(alg.one(), f) == f
            assert alg.mul(f, alg.one()) == f
            if alg.product == "std":
                def n2(x, inverse=False):
                    return alg.n_op(alg.n_op(x, inverse), inverse)
                assert alg.mul(f, g).conj() == n2(
                    alg.mul(n2(g.conj()), n2(f.conj())), inverse=True)
            else:
                assert alg.mul(f, g).conj() == alg.mul(g.conj(), f.conj())
            assert first_order_commutator_matches_bracket(alg, f, g)
    elapsed = time.time() - t0
    assert elapsed < 60.0
    ok(f"1 star-product axioms (4 products x 25 triples, {elapsed:.1f}s)")


def test_criterion_02_homogeneity():
    """Grading operator is a derivation of the normal-ordered product:
    50 random pairs, exact."""
    rng = random.Random(102)
    std = StarAlgebra(cotangent_flat(1, density=("gaussian", 1)), "std", 6)
    for _ in range(50):
        f = rand_observable(rng, std, 4)
        g = rand_observable(rng, std, 4)
        assert std.homogeneity_check(f, g)
    ok("2 homogeneity of the normal-ordered product (50 pairs)")


def test_criterion_03_star_exponential():
    """Flow equation (symbolic), group law, initial value: exact, N = 8."""
    rng = random.Random(103)
    alg = StarAlgebra(moyal_plane(1), "moyal", 8)
    for _ in range(5):
        H = rand_observable(rng, alg, 2, lam_spread=False)
        H = lam_scale(H + H.conj())
        assert H.order() >= 1
        coeffs = alg.star_exp_beta_coeffs(H)
        assert coeffs[0] == alg.one()
        for k in range(len(coeffs) - 1):
            assert coeffs[k + 1].scale(k + 1) == alg.mul(H, coeffs[k])
        assert alg.star_exp(H, 0) == alg.one()
        b1 = Fraction(rng.randrange(-2, 3), rng.choice([1, 2]))
        b2 = Fraction(rng.randrange(-2, 3), rng.choice([1, 2]))
        assert alg.star_exp(H, b1 + b2) == alg.mul(alg.star_exp(H, b1),
                                                   alg.star_exp(H, b2))
    ok("3 star exponential: flow equation, group law, initial value (N=8)")


def test_criterion_04_gelfand_ideal_equivalence():
    """Point-evaluation ideal: derivative criterion iff vanishing star
    square, for every basis observable deg <= 4, N = 4, exact."""
    wick = StarAlgebra(wick_space(1), "wick", 4)
    delta = DeltaFunctional(wick)
    checked = 0
    for b in basis_observables(wick, 4):
        primary = all(v.is_zero(0.0) for v in
                      delta.eval(omega_square(delta, b)).coeffs.values())
        closed = delta_ideal_closed_form(delta, b, degree_bound=4)
        assert primary == closed
        checked += 1
    assert checked == 15
    ok(f"4 ideal-membership equivalence on {checked} basis observables")


def test_criterion_05_bargmann_fock():
    """Explicit symbol-model action equals the quotient action on all
    basis pairs; commutant dimension 1 at deg <= 3; the representation
    constant is 2*lam (fixed by the quotient cross-check)."""
    wick = StarAlgebra(wick_space(1), "wick", 4)
    delta = DeltaFunctional(wick)
    basis = basis_observables(wick, 4)
    for f in basis:
        for g in basis:
            lhs = fock_reduce(delta, wick.mul(f, g))
            rhs = bargmann_fock_apply(delta, f, fock_reduce(delta, g))
            assert lhs == rhs
    # factor-two resolution: pi(z) acts as 2 lam d/dybar, not lam d/dybar
    from starq.gns import FockVector
    ybar = FockVector.monomial(1, (1,), 4)
    got = bargmann_fock_apply(delta, wick.coordinate("z1"), ybar)
    assert got == FockVector(1, {(0,): LambdaSeries({1: Scalar(2)}, 4)}, 4)
    rep = commutant_probe([LeftMul(wick.coordinate("z1")),
                           LeftMul(wick.coordinate("zbar1"))],
                          delta, degree=3)
    assert rep.dimension == 1
    assert all(d == 1 for d in rep.lift_dimensions)
    ok("5 symbol model: quotient equivalence, trivial commutant, "
       "2*lam constant")


def test_criterion_06_schrodinger():
    """Wave-model intertwining exact (deg <= 4); representation symmetry
    within 1e-9; commutant dimension equals the component count."""
    cot = StarAlgebra(cotangent_flat(1, density=("gaussian", 1)), "weyl", 4)
    schro = SchrodingerFunctional(cot)
    basis = basis_observables(cot, 4)
    for f in basis[:10]:
        for g in basis[:10]:
            lhs = schrodinger_reduce(schro, cot.mul(f, g))
            rhs = schrodinger_apply(schro, f, schrodinger_reduce(schro, g))
            assert lhs == rhs
    rng = random.Random(106)
    for _ in range(10):
        f = rand_observable(rng, cot, 2)
        a = rand_observable(rng, cot, 2)
        b = rand_observable(rng, cot, 2)
        lhs = schro.inner(cot.mul(f, a), b)
        rhs = schro.inner(a, cot.mul(f.conj(), b))
        assert all(v.is_zero(EPS) for v in (lhs - rhs).coeffs.values())
    for comps, want in ((1, 1), (2, 2)):
        chart = cotangent_flat(1, components=comps, density=("gaussian", 1))
        algc = StarAlgebra(chart, "weyl", 4)
        omc = SchrodingerFunctional(algc)
        gens = [LeftMul(algc.coordinate("q1")),
                LeftMul(algc.coordinate("p1"))]
        for c in range(comps - 1):
            gens.append(LeftMul(MultiObservable.one(chart, 4).restrict({c})))
        assert commutant_probe(gens, omc, degree=3).dimension == want
    ok("6 wave model: intertwining exact, symmetry 1e-9, commutant "
       "dimension = components")


def test_criterion_07_trace_property():
    """|tr(f*g) - tr(g*f)| < 1e-9 over 50 random weighted pairs, N = 6."""
    alg = StarAlgebra(moyal_plane(1), "moyal", 6)
    tr = TraceFunctional(alg)
    rng = random.Random(107)
    worst = 0.0
    for _ in range(50):
        f = rand_observable(rng, alg, 3, gamma=1)
        g = rand_observable(rng, alg, 3, gamma=1)
        diff = tr.eval(alg.mul(f, g)) - tr.eval(alg.mul(g, f))
        for v in diff.coeffs.values():
            worst = max(worst, abs(v.as_complex()))
    assert worst < EPS
    ok(f"7 trace property (50 pairs, worst residual {worst:.1e})")


def test_criterion_08_kms():
    """Thermal adjoint relation within 1e-9 on 30 pairs; zero-parameter
    reduction to the trace exact; equivalence unitary within 1e-9 and
    intertwining exact."""
    alg = StarAlgebra(moyal_plane(1), "moyal", 4)
    q, p = alg.coordinate("q1"), alg.coordinate("p1")
    H = lam_scale(alg.mul(q, q) + alg.mul(p, p))
    kms = KMSFunctional(alg, H, Fraction(1, 2))
    rng = random.Random(108)
    basis = basis_observables(alg, 1, gamma=1)
    pairs = 0
    for _ in range(30):
        f = rand_observable(rng, alg, 1)
        A = RightMul(f)
        Astar = adjoint(A, kms)
        a = basis[rng.randrange(len(basis))]
        b = basis[rng.randrange(len(basis))]
        lhs = kms.inner(_apply_observable(Astar, a, alg), b)
        rhs = kms.inner(a, _apply_observable(A, b, alg))
        assert all(v.is_zero(EPS) for v in (lhs - rhs).coeffs.values())
        pairs += 1
    assert pairs == 30

    trace = TraceFunctional(alg)
    kms0 = KMSFunctional(alg, H, 0)
    for _ in range(5):
        f = rand_observable(rng, alg, 2, gamma=1)
        assert kms0.eval(f) == trace.eval(f)

    U = kms_equivalence(kms, kms0, verify=True, degree=1, eps=EPS)
    for _ in range(10):
        f = rand_observable(rng, alg, 2)
        probe = rand_observable(rng, alg, 2)
        lhs = _apply_observable(Compose((U, LeftMul(f))), probe, alg)
        rhs = _apply_observable(Compose((LeftMul(f), U)), probe, alg)
        assert lhs == rhs
    ok("8 thermal functional: adjoint 1e-9 (30 pairs), zero-parameter "
       "reduction exact, equivalence unitary and intertwining")


def test_criterion_09_modular_theory():
    """The full modular battery: involutions, group laws, positivity,
    anti-unitarity, stability of left multiplications, sign resolution."""
    alg = StarAlgebra(moyal_plane(1), "moyal", 4)
    q, p = alg.coordinate("q1"), alg.coordinate("p1")
    H = lam_scale(alg.mul(q, q) + alg.mul(p, p))
    md = ModularData(alg, H, 2)

    basis4 = basis_observables(alg, 4)
    for b in basis4:
        assert md.S(md.S(b)) == b
        assert md.F(md.F(b)) == b
        assert md.J(md.J(b)) == b
        assert md.J(b) == md.S(md.Delta_pow(Fraction(-1, 2), b))
        assert md.Delta_pow(Fraction(1, 2), md.Delta_pow(Fraction(1, 2), b)) \
            == md.Delta(b)
        assert md.Delta_pow(Fraction(1, 3),
                            md.Delta_pow(Fraction(2, 3), b)) == md.Delta(b)
        assert md.J(md.Delta_pow(Fraction(1, 2), md.J(b))) \
            == md.Delta_pow(Fraction(-1, 2), b)

    checks = tomita_checks(md, degree=2, eps=EPS)
    failed = [c.name for c in checks if not c.passed]
    assert not failed
    assert any(c.name == "J_witness_second_factor_sign_plus" for c in checks)

    # both sign candidates really were discriminated
    f = alg.coordinate("q1")
    half = Fraction(1, 2)
    g_minus = alg.mul(alg.mul(md.E(-half), f.conj()), md.E(-half))
    b = alg.coordinate("p1")
    assert md.J(alg.mul(f, md.J(b))) != alg.mul(b, g_minus)
    _op, sign = md.conjugate_left(f)
    assert sign == +1
    ok("9 modular theory: all identities exact/1e-9, second-factor sign "
       "resolved to plus")


def test_criterion_10_lambda_adic_kernel():
    """Ultrametric, strong triangle, trichotomy, multiplicativity:
    exact over 1000 random series."""
    rng = random.Random(110)
    alg = StarAlgebra(moyal_plane(1), "moyal", 6)
    for _ in range(1000):
        f = rand_scalar_series(rng, 6)
        g = rand_scalar_series(rng, 6)
        h = rand_scalar_series(rng, 6)
        assert ultrametric_distance(f, h) <= max(
            ultrametric_distance(f, g), ultrametric_distance(g, h))
        assert (f + g).order() >= min(f.order(), g.order())
        if f.order() != g.order():
            assert (f + g).order() == min(f.order(), g.order())
        a = rand_scalar_series(rng, 6, real=True)
        s = ordered_sign(a)
        assert (s > 0) + (s < 0) + a.is_zero() == 1
        fp = rand_poly(rng, alg.chart.variables, 2)
        gp = rand_poly(rng, alg.chart.variables, 2)
        e1, e2 = rng.randrange(0, 3), rng.randrange(0, 3)
        fs = LambdaSeries({e1: fp}, 6)
        gs = LambdaSeries({e2: gp}, 6)
        if not fs.is_zero() and not gs.is_zero():
            assert (fs * gs).order() == fs.order() + gs.order()
    ok("10 lambda-adic kernel over 1000 random series")


def test_criterion_11_convex_superselection():
    """Two-component convex sum: orthogonal splitting, projectors in the
    local commutant and non-scalar, exact."""
    alg = StarAlgebra(moyal_plane(1, components=2), "moyal", 4)
    one = LambdaSeries({0: Scalar(1)}, 4)
    conv = ConvexFunctional([
        (one, TraceFunctional(alg, components=[0])),
        (one, TraceFunctional(alg, components=[1]))])
    ds = gns_direct_sum(conv)
    rng = random.Random(111)

    for _ in range(10):
        f = rand_observable(rng, alg, 2, gamma=1)
        psi = GnsVector(conv, f)
        parts = ds.split(psi)
        assert (parts[0].rep + parts[1].rep) == f
        cross = conv.inner(parts[0].rep, parts[1].rep)
        assert all(v.is_zero(0.0) for v in cross.coeffs.values())

    P = ds.projectors[0]
    assert is_local(P, conv, degree=2)
    assert adjoint(P, conv) == P
    for _ in range(20):
        f = rand_observable(rng, alg, 2)
        probe = rand_observable(rng, alg, 2)
        lhs = _apply_observable(Compose((P, LeftMul(f))), probe, alg)
        rhs = _apply_observable(Compose((LeftMul(f), P)), probe, alg)
        assert lhs == rhs
    pi1 = _apply_observable(P, alg.one(), alg)
    assert pi1 not in (alg.one(), alg.zero())  # non-scalar
    gens = [LeftMul(b) for b in basis_observables(alg, 2)]
    rep = commutant_probe(gens, conv, degree=2)
    model = Model(conv, 2)
    mat = model.matrixize(P)
    vec = {}
    for (i, j), series in mat.entries.items():
        for r, c in series.coeffs.items():
            vec[(i, j, r)] = c
    keys = set()
    for v in rep.basis:
        keys.update(v)
    assert in_span({k: c for k, c in vec.items() if k in keys}, rep.basis)
    ok("11 convex splitting and superselection projectors")


def test_criterion_12_left_right_density():
    """Synthesis reaches residual order >= 6 for 10 random differential
    operators (coefficient deg <= 3, derivative order <= 3); the plain
    first derivative synthesizes with zero residual."""
    alg = StarAlgebra(moyal_plane(1), "moyal", 9)
    one = LambdaSeries({0: GaussPoly.const(alg.chart.variables, 1)}, 9)
    res = alr_synthesize(DiffOp.build("observable", {(1, 0): one}),
                         alg, order=6, probe_degree=4)
    assert res.verified_order == float("inf")

    rng = random.Random(112)
    for _ in range(10):
        table = {}
        for _ in range(2):
            dq = rng.randrange(0, 3)
            dp = rng.randrange(0, 2)
            if dq + dp > 3:
                continue
            c = rand_poly(rng, alg.chart.variables, 3)
            key = (dq, dp)
            series = LambdaSeries({0: c}, 9)
            table[key] = table[key] + series if key in table else series
        if not table:
            table[(1, 0)] = one
        D = DiffOp.build("observable", table)
        res = alr_synthesize(D, alg, order=6, probe_degree=4)
        assert res.verified_order >= 6
    ok("12 differential operators realized in the left/right algebra "
       "(residual order >= 6)")


def test_criterion_13_topology_diagnostics():
    """Translated-indicator family: strongly null, not lambda-adically
    (16 components, prefix 32); sinking-order family raises."""
    alg16 = StarAlgebra(moyal_plane(1, components=16), "moyal", 4)
    fam = translated_bump_family(alg16, 32)
    probes = [MultiObservable.one(alg16.chart, 4).restrict({0}),
              MultiObservable.coordinate(alg16.chart, 4,
                                         "q1").restrict({1, 2}),
              MultiObservable.one(alg16.chart, 4).restrict({3, 5})]
    assert strong_converges(fam, None, probes).verdict
    basis = [MultiObservable.one(alg16.chart, 4).restrict({i})
             for i in range(16)]
    rep = lambda_adic_converges(fam, None, basis)
    assert not rep.verdict

    alg = StarAlgebra(moyal_plane(1), "moyal", 4)
    with pytest.raises(UnboundedOrder):
        strong_limit(sinking_order_family(alg, 10),
                     basis_observables(alg, 2)[:3])
    ok("13 topology diagnostics: strong-not-adic family, unbounded-order "
       "detection")


def test_criterion_14_cli(capsys):
    """Golden outputs for every subcommand; reduced verify-all under 10 s;
    full configuration under 5 minutes."""
    goldens = [
        (("mul", "--product", "wick", "--chart", "wick:1", "z1", "zbar1"),
         "z1*zbar1 + 2*lam"),
        (("comm", "q1", "p1"), "i*lam"),
        (("exp", "--beta", "1", "--trunc", "2", "lam*q1"),
         "1 + q1*lam + 1/2*q1^2*lam^2"),
        (("n-op", "--chart", "cotangent:1:gaussian:1", "p1"),
         "p1 + i*q1*lam"),
        (("eval", "--functional", "trace", "gauss(1)"), "pi"),
        (("ideal-member", "--product", "wick", "--chart", "wick:1",
          "--functional", "delta0", "z1"), "member"),
        (("gns", "--product", "wick", "--chart", "wick:1", "--functional",
          "delta0", "zbar1"), "FockVector((1)*ybar1)"),
        (("repr", "--product", "wick", "--chart", "wick:1", "--functional",
          "delta0", "z1", "zbar1"), "FockVector((2*lam)*1)"),
    ]
    for argv, want in goldens:
        code = cli_main(list(argv))
        out = capsys.readouterr().out.strip()
        assert code == 0 and out == want, (argv, out)

    code = cli_main(["commutant", "--model", "fock", "--deg", "3",
                     "--trunc", "4", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0 and payload["dimension"] == 1

    code = cli_main(["tomita", "--H", "lam*q1", "--beta", "3", "--trunc",
                     "3", "--deg", "2", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0 and payload["all_passed"]

    code = cli_main(["synth", "--target", "dq", "--order", "6", "--trunc",
                     "9", "--deg", "3", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0 and payload["verified_order"] == "window"

    t0 = time.time()
    code = cli_main(["verify", "all", "--trunc", "2", "--deg", "2",
                     "--json"])
    reduced = time.time() - t0
    payload = json.loads(capsys.readouterr().out)
    assert code == 0 and payload["all_passed"]
    assert reduced < 10.0

    t0 = time.time()
    results = run_suite("all", RunConfig())
    full = time.time() - t0
    assert all(c.passed for c in results)
    assert full < 300.0
    ok(f"14 CLI goldens; verify-all reduced {reduced:.1f}s, full {full:.1f}s")
