"""Command-line front end.

    starq mul --product moyal --trunc 6 "q1" "p1"
    starq eval --functional trace "gauss(1)"
    starq tomita --H "lam*(q1^2+p1^2)" --beta 2 --check all
    starq verify all --trunc 2 --deg 2

Exit codes: 0 success, 1 domain error (divergent integrals, order
restrictions, chart mismatches), 2 usage error (bad flags or syntax).
JSON output (`--json`) is deterministic for a fixed seed; `STARQ_EPS`
overrides the float comparison tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .coeffs import (Chart, DivergentIntegral, ChartMismatch,
                     DimensionMismatch, GaussPoly, MultiObservable,
                     UnknownVariable, UnsupportedChart, WeightMismatch,
                     cotangent_flat, moyal_plane, wick_space)
from .gns import (DeltaFunctional, Functional, KMSFunctional, ModelMismatch,
                  SchrodingerFunctional, TraceFunctional, fock_reduce,
                  gelfand_member, gns_reduce, GnsVector, schrodinger_reduce,
                  support_of_functional)
from .modular import ModularData, tomita_checks
from .oper import LeftMul, commutant_probe
from .parser import EvalError, ParseError, evaluate, parse, parse_observable
from .render import (SCHEMA, observable_json, render_lambda_scalar,
                     render_observable, render_part, value_series_json)
from .scalars import DEFAULT_EPS
from .series import LambdaSeries, TruncationMismatch
from .star import AlgebraMismatch, OrderTooLow, StarAlgebra
from .topo import OrderBudgetExceeded, alr_synthesize
from .verify import SUITES, RunConfig, run_suite

DOMAIN_ERRORS = (DivergentIntegral, ChartMismatch, DimensionMismatch,
                 UnknownVariable, UnsupportedChart, WeightMismatch,
                 ModelMismatch, AlgebraMismatch, OrderTooLow,
                 TruncationMismatch, OrderBudgetExceeded, EvalError,
                 ValueError)


def parse_chart(spec: str) -> Chart:
    """moyal:1, wick:2, cotangent:1:gaussian:1, with x<m> components:
    moyal:1x2."""
    bits = spec.split(":")
    kind = bits[0]
    if len(bits) < 2:
        raise EvalError(f"chart spec {spec!r} needs a dimension")
    dim = bits[1]
    comps = 1
    if "x" in dim:
        dim, m = dim.split("x", 1)
        comps = int(m)
    n = int(dim)
    if kind == "moyal":
        return moyal_plane(n, comps)
    if kind == "wick":
        return wick_space(n, comps)
    if kind == "cotangent":
        density: tuple = ("lebesgue", None)
        if len(bits) >= 3 and bits[2] == "gaussian":
            c = Fraction(bits[3]) if len(bits) >= 4 else Fraction(1)
            density = ("gaussian", c)
        return cotangent_flat(n, comps, density)
    raise EvalError(f"unknown chart kind {kind!r}")


def default_chart(product: str) -> str:
    return {"moyal": "moyal:1", "wick": "wick:1",
            "std": "cotangent:1:gaussian:1",
            "weyl": "cotangent:1:gaussian:1"}[product]


def build_algebra(args) -> StarAlgebra:
    chart = parse_chart(args.chart or default_chart(args.product))
    return StarAlgebra(chart, args.product, args.trunc)


def build_functional(args, algebra: StarAlgebra) -> Functional:
    name = args.functional
    if name == "delta0":
        return DeltaFunctional(algebra)
    if name == "trace":
        return TraceFunctional(algebra)
    if name == "kms":
        if not args.H:
            raise EvalError("kms needs --H")
        H = parse_observable(args.H, algebra)
        return KMSFunctional(algebra, H, Fraction(args.beta))
    if name == "schrodinger":
        return SchrodingerFunctional(algebra)
    raise EvalError(f"unknown functional {name!r}")


def emit(args, payload: dict, text: str) -> None:
    if args.json:
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_mul(args) -> int:
    alg = build_algebra(args)
    f = parse_observable(args.f, alg)
    g = parse_observable(args.g, alg)
    out = alg.comm(f, g) if args.commutator else alg.mul(f, g)
    emit(args, {"command": "comm" if args.commutator else "mul",
                "result": observable_json(out)}, render_observable(out))
    return 0


def cmd_exp(args) -> int:
    alg = build_algebra(args)
    H = parse_observable(args.H_pos, alg)
    out = alg.star_exp(H, Fraction(args.beta))
    emit(args, {"command": "exp", "result": observable_json(out)},
         render_observable(out))
    return 0


def cmd_nop(args) -> int:
    alg = build_algebra(args)
    f = parse_observable(args.f, alg)
    out = alg.n_op(f, inverse=args.inverse)
    emit(args, {"command": "n-op", "result": observable_json(out)},
         render_observable(out))
    return 0


def cmd_eval(args) -> int:
    alg = build_algebra(args)
    om = build_functional(args, alg)
    f = parse_observable(args.f, alg)
    val = om.eval(f)
    text_terms = []
    for e in sorted(val.coeffs):
        v = val.coeffs[e]
        lam = "" if e == 0 else (" * lam" if e == 1 else f" * lam^{e}")
        text_terms.append(f"{v.render()}{lam}"
                          + ("" if v.is_exact else " (float)"))
    emit(args, {"command": "eval", "functional": om.tag,
                "result": value_series_json(val)},
         " + ".join(text_terms) if text_terms else "0")
    return 0


def cmd_ideal_member(args) -> int:
    alg = build_algebra(args)
    om = build_functional(args, alg)
    f = parse_observable(args.f, alg)
    member = gelfand_member(om, f, eps=args.eps)
    emit(args, {"command": "ideal-member", "functional": om.tag,
                "member": member}, "member" if member else "not-member")
    return 0


def cmd_gns(args) -> int:
    alg = build_algebra(args)
    om = build_functional(args, alg)
    f = parse_observable(args.f, alg)
    psi = GnsVector(om, f)
    red = gns_reduce(psi)
    supp = support_of_functional(om)
    if om.tag == "delta":
        model = "fock"
        text = repr(red)
    elif om.tag == "schrodinger":
        model = "wave"
        text = repr(red)
    else:
        model = "observable"
        text = render_observable(red)
    emit(args, {"command": "gns", "functional": om.tag, "model": model,
                "support": repr(supp), "reduced": text}, text)
    return 0


def cmd_repr(args) -> int:
    alg = build_algebra(args)
    om = build_functional(args, alg)
    f = parse_observable(args.f, alg)
    g = parse_observable(args.g, alg)
    psi = GnsVector(om, alg.mul(f, g))
    red = gns_reduce(psi)
    text = (render_observable(red) if isinstance(red, MultiObservable)
            else repr(red))
    emit(args, {"command": "repr", "functional": om.tag, "result": text},
         text)
    return 0


def cmd_commutant(args) -> int:
    if args.model == "fock":
        alg = StarAlgebra(parse_chart(args.chart or "wick:1"), "wick",
                          args.trunc)
        om: Functional = DeltaFunctional(alg)
        gens = []
        for k in range(1, alg.chart.n + 1):
            gens.append(LeftMul(alg.coordinate(f"z{k}")))
            gens.append(LeftMul(alg.coordinate(f"zbar{k}")))
        budget = 0
    elif args.model == "schrodinger":
        alg = StarAlgebra(parse_chart(args.chart or "cotangent:1:gaussian:1"),
                          "weyl", args.trunc)
        om = SchrodingerFunctional(alg)
        gens = [LeftMul(alg.coordinate(f"q{k}"))
                for k in range(1, alg.chart.n + 1)]
        gens += [LeftMul(alg.coordinate(f"p{k}"))
                 for k in range(1, alg.chart.n + 1)]
        for comp in range(alg.chart.components - 1):
            gens.append(LeftMul(
                MultiObservable.one(alg.chart, alg.trunc).restrict({comp})))
        budget = 0
    elif args.model == "trace":
        from .gns import basis_observables
        alg = StarAlgebra(parse_chart(args.chart or "moyal:1"), "moyal",
                          args.trunc)
        om = TraceFunctional(alg)
        gens = [LeftMul(b) for b in basis_observables(alg, args.deg)]
        budget = 1
    else:
        raise EvalError(f"unknown commutant model {args.model!r}")
    rep = commutant_probe(gens, om, degree=args.deg, raise_budget=budget)
    payload = {"command": "commutant", "model": args.model,
               "dimension": rep.dimension,
               "order0_dimension": rep.order0_dimension,
               "lift_dimensions": rep.lift_dimensions,
               "flagged_boundary_rows": sorted(
                   {j for s in rep.excluded_columns.values() for j in s}),
               "unconstrained_entries": rep.unconstrained_entries}
    emit(args, payload,
         f"dimension {rep.dimension} (order-0 {rep.order0_dimension}, "
         f"lifts {rep.lift_dimensions})")
    return 0


def cmd_tomita(args) -> int:
    alg = build_algebra(args)
    H = parse_observable(args.H, alg)
    md = ModularData(alg, H, Fraction(args.beta))
    checks = tomita_checks(md, degree=min(args.deg, 2), eps=args.eps,
                           seed=args.seed)
    if args.check != "all":
        checks = [c for c in checks if args.check in c.name]
    payload = {"command": "tomita",
               "checks": [c.as_dict() for c in checks],
               "all_passed": all(c.passed for c in checks)}
    lines = [f"{c.name}: {'pass' if c.passed else 'FAIL'} [{c.mode}]"
             for c in checks]
    emit(args, payload, "\n".join(lines))
    return 0 if all(c.passed for c in checks) else 1


def _parse_diff_target(text: str, alg: StarAlgebra):
    """Target grammar: sum of `coeff-expr * dq1^a * dp1^b` terms; bare
    `dq`/`dp` abbreviate dq1/dp1."""
    from .oper import DiffOp
    n = alg.chart.n
    table: dict = {}
    for chunk in text.replace("-", "+-").split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:].strip()
        factors = [b.strip() for b in chunk.split("*")]
        multi = [0] * (2 * n)
        coeff_bits = []
        for fac in factors:
            base, _, power = fac.partition("^")
            power_n = int(power) if power else 1
            name = base.strip()
            if name in ("dq", "dp"):
                name += "1"
            if name.startswith("dq") and name[2:].isdigit():
                multi[int(name[2:]) - 1] += power_n
            elif name.startswith("dp") and name[2:].isdigit():
                multi[n + int(name[2:]) - 1] += power_n
            else:
                coeff_bits.append(fac)
        coeff_text = "*".join(coeff_bits) if coeff_bits else "1"
        if neg:
            coeff_text = f"-({coeff_text})"
        obs = parse_observable(coeff_text, alg)
        series = obs.parts[0]
        key = tuple(multi)
        table[key] = table[key] + series if key in table else series
    return DiffOp.build("observable", table)


def cmd_synth(args) -> int:
    chart = parse_chart(args.chart or "moyal:1")
    alg = StarAlgebra(chart, "moyal", args.trunc)
    D = _parse_diff_target(args.target, alg)
    res = alr_synthesize(D, alg, order=args.order, probe_degree=args.deg)
    verified = ("window" if res.verified_order == float("inf")
                else int(res.verified_order))
    payload = {"command": "synth", "target": args.target,
               "requested_order": args.order,
               "verified_order": str(verified),
               "witness": "left-right multiplication combination "
                          "(exact on the probe basis)"}
    emit(args, payload,
         f"synthesized; residual order {verified} "
         f"(requested {args.order})")
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig(trunc=args.trunc, degree=args.deg, eps=args.eps,
                    seed=args.seed)
    results = run_suite(args.suite, cfg)
    payload = {"command": "verify", "suite": args.suite,
               "checks": [c.as_dict() for c in results],
               "all_passed": all(c.passed for c in results)}
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name} [{c.mode}]"
             for c in results]
    emit(args, payload, "\n".join(lines))
    return 0 if all(c.passed for c in results) else 1


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="starq",
        description="exact truncated deformation-quantization workbench")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, product=True):
        p.add_argument("--trunc", type=int, default=6)
        p.add_argument("--deg", type=int, default=4)
        p.add_argument("--chart", default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true")
        p.add_argument("--eps", type=float,
                       default=float(os.environ.get("STARQ_EPS",
                                                    DEFAULT_EPS)))
        if product:
            p.add_argument("--product", default="moyal",
                           choices=("moyal", "wick", "std", "weyl"))

    p = sub.add_parser("mul", help="star product of two observables")
    common(p)
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(fn=cmd_mul, commutator=False)

    p = sub.add_parser("comm", help="star commutator")
    common(p)
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(fn=cmd_mul, commutator=True)

    p = sub.add_parser("exp", help="star exponential Exp(beta*H)")
    common(p)
    p.add_argument("--beta", default="1")
    p.add_argument("H_pos", metavar="H")
    p.set_defaults(fn=cmd_exp)

    p = sub.add_parser("n-op", help="ordering corrector N")
    common(p)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("f")
    p.set_defaults(fn=cmd_nop, product="weyl")

    for name, fn in (("eval", cmd_eval), ("ideal-member", cmd_ideal_member),
                     ("gns", cmd_gns)):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--functional", default="trace",
                       choices=("delta0", "trace", "kms", "schrodinger"))
        p.add_argument("--H", default=None)
        p.add_argument("--beta", default="1")
        p.add_argument("f")
        p.set_defaults(fn=fn)

    p = sub.add_parser("repr", help="GNS action of f on the class of g")
    common(p)
    p.add_argument("--functional", default="trace",
                   choices=("delta0", "trace", "kms", "schrodinger"))
    p.add_argument("--H", default=None)
    p.add_argument("--beta", default="1")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(fn=cmd_repr)

    p = sub.add_parser("commutant", help="truncated commutant probe")
    common(p, product=False)
    p.add_argument("--model", default="fock",
                   choices=("fock", "schrodinger", "trace"))
    p.set_defaults(fn=cmd_commutant)

    p = sub.add_parser("tomita", help="modular-theory identity battery")
    common(p)
    p.add_argument("--H", required=True)
    p.add_argument("--beta", default="1")
    p.add_argument("--check", default="all")
    p.set_defaults(fn=cmd_tomita)

    p = sub.add_parser("synth",
                       help="realize a differential operator in the "
                            "left/right multiplication algebra")
    common(p, product=False)
    p.add_argument("--target", required=True)
    p.add_argument("--order", type=int, default=6)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("verify", help="run a property battery")
    common(p, product=False)
    p.add_argument("suite", choices=SUITES + ("all",))
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
