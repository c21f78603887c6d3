"""Operator topologies at desk scale, and the constructive density of
left-right multiplication combinations.

Verdicts about convergence are certified over a finite prefix n <= n_max and
a finite probe set, never claimed for a true infinite limit.  Two regimes
are distinguished honestly:

  strong     per-probe order profiles o(A_n f - A f) must climb past the
             window; a plateau below the window raises InconclusivePrefix
  lambda-adic  operator-level order profiles over a spanning basis; the
             profile must cross every order threshold while the family is
             still alive (a family that merely runs off the finite
             component model does not count as converging)

The synthesis routine writes a differential operator with polynomial
coefficients exactly as an algebraic combination of left and right star
multiplications and Laurent scalars, using the exact commutator identities
ad(p) = -i lam d_q and ad(q) = +i lam d_p of the symmetric product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .coeffs import GaussPoly, MultiObservable, UnsupportedChart
from .gns import Functional, basis_observables
from .oper import (Compose, DiffOp, Id, LeftMul, OperatorExpr, RightMul,
                   Scale, Sum, _apply_observable, adjoint)
from .scalars import Scalar
from .series import LambdaSeries
from .star import StarAlgebra, multi_indices, _factorial_multi

INF = math.inf


class InconclusivePrefix(RuntimeError):
    pass


class NotCauchy(ValueError):
    pass


class UnboundedOrder(ArithmeticError):
    pass


class OrderBudgetExceeded(ValueError):
    pass


@dataclass
class OperatorSequence:
    """Closed-form operator family n -> A_n with a finite certification range."""

    generator: Callable[[int], OperatorExpr]
    n_max: int
    algebra: StarAlgebra

    def __getitem__(self, n: int) -> OperatorExpr:
        return self.generator(n)


@dataclass
class ConvergenceReport:
    verdict: bool
    profiles: dict  # probe index -> list of orders (math.inf for window-zero)
    note: str = ""


def _order_of_diff(A: OperatorExpr, B: OperatorExpr | None,
                   probe: MultiObservable, algebra: StarAlgebra):
    av = _apply_observable(A, probe, algebra)
    if B is not None:
        av = av - _apply_observable(B, probe, algebra)
    return av.order()


def strong_converges(seq: OperatorSequence, limit: OperatorExpr | None,
                     probes: Sequence[MultiObservable]) -> ConvergenceReport:
    """Certified strong convergence: every per-probe difference must leave
    the window monotonically within the prefix."""
    if not probes:
        raise ValueError("strong topology needs at least one probe")
    profiles = {}
    verdict = True
    note = ""
    for idx, f in enumerate(probes):
        prof = [_order_of_diff(seq[n], limit, f, seq.algebra)
                for n in range(seq.n_max + 1)]
        profiles[idx] = prof
        for a, b in zip(prof, prof[1:]):
            if b < a:
                verdict = False
                note = f"probe {idx}: order profile decreases"
        if verdict and prof[-1] != INF:
            raise InconclusivePrefix(
                f"probe {idx}: order plateau at {prof[-1]} at n_max")
    return ConvergenceReport(verdict, profiles, note)


def lambda_adic_converges(seq: OperatorSequence, limit: OperatorExpr | None,
                          basis: Sequence[MultiObservable],
                          ) -> ConvergenceReport:
    """Certified lambda-adic operator convergence over a spanning basis.

    The family is `alive` at n while A_n (minus the limit) is not the zero
    operator on the basis.  Convergence requires the order profile to cross
    every threshold 1..N during the alive prefix; a dead tail (the family
    leaving the finite model) certifies nothing.
    """
    N = seq.algebra.trunc
    prof = []
    for n in range(seq.n_max + 1):
        o = min((_order_of_diff(seq[n], limit, f, seq.algebra)
                 for f in basis), default=INF)
        prof.append(o)
    alive = [n for n, o in enumerate(prof) if o != INF]
    if not alive:
        return ConvergenceReport(True, {0: prof}, "difference vanishes")
    last_alive = alive[-1]
    alive_prof = prof[:last_alive + 1]
    for a, b in zip(alive_prof, alive_prof[1:]):
        if b < a:
            return ConvergenceReport(False, {0: prof},
                                     "order profile decreases")
    crossed = all(any(o >= r for o in alive_prof) for r in range(1, N + 1))
    if crossed:
        return ConvergenceReport(True, {0: prof}, "all thresholds crossed")
    if len(alive_prof) >= 4 and alive_prof[0] == alive_prof[-1]:
        return ConvergenceReport(
            False, {0: prof},
            "order plateau over the alive prefix; tail zeros are model "
            "exhaustion, not convergence")
    raise InconclusivePrefix("alive prefix too short to certify")


def strong_limit(seq: OperatorSequence,
                 probes: Sequence[MultiObservable]) -> OperatorExpr:
    """Limit of a strongly Cauchy family, with order-divergence detection.

    Raises UnboundedOrder when the operator orders keep sinking (the
    diagnostic scenario o_n = -2n), NotCauchy when probes never stabilize.
    On the window, Cauchy means eventual stabilization; the stabilized
    member is the limit.
    """
    if not probes:
        raise ValueError("need probes")
    orders = []
    for n in range(seq.n_max + 1):
        o = min((_order_of_diff(seq[n], None, f, seq.algebra)
                 for f in probes), default=INF)
        orders.append(o)
    finite = [o for o in orders if o != INF]
    if len(finite) >= 3:
        drop = finite[0] - finite[-1]
        if drop >= len(finite) - 1 and all(b < a for a, b in
                                           zip(finite, finite[1:])):
            raise UnboundedOrder(
                f"operator orders sink linearly: {finite[:6]}...")
    images = []
    for n in range(seq.n_max + 1):
        images.append(tuple(_apply_observable(seq[n], f, seq.algebra)
                            for f in probes))
    stable_from = None
    for n in range(seq.n_max, -1, -1):
        if images[n] == images[seq.n_max]:
            stable_from = n
        else:
            break
    if stable_from is None or stable_from == seq.n_max:
        raise NotCauchy("probe images never stabilize within the prefix")
    return seq[stable_from]


def finite_topology_limit(seq: OperatorSequence,
                          probes: Sequence[MultiObservable]) -> OperatorExpr:
    """Limit under eventual exact equality on every probe."""
    images = []
    for n in range(seq.n_max + 1):
        images.append(tuple(_apply_observable(seq[n], f, seq.algebra)
                            for f in probes))
    stable_from = None
    for n in range(seq.n_max, -1, -1):
        if images[n] == images[seq.n_max]:
            stable_from = n
        else:
            break
    if stable_from is None or stable_from == seq.n_max:
        raise NotCauchy("probe images never stabilize within the prefix")
    return seq[stable_from]


def star_strong_converges(seq: OperatorSequence, limit: OperatorExpr | None,
                          probes: Sequence[MultiObservable],
                          omega: Functional) -> ConvergenceReport:
    """Strong convergence of the family and of its adjoint family."""
    direct = strong_converges(seq, limit, probes)
    adj_seq = OperatorSequence(
        lambda n: adjoint(seq[n], omega), seq.n_max, seq.algebra)
    adj_limit = adjoint(limit, omega) if limit is not None else None
    adj = strong_converges(adj_seq, adj_limit, probes)
    return ConvergenceReport(direct.verdict and adj.verdict,
                             {"direct": direct.profiles,
                              "adjoint": adj.profiles},
                             direct.note or adj.note)


# ---------------------------------------------------------------------------
# approximate identities on the component model
# ---------------------------------------------------------------------------

def indicator(algebra: StarAlgebra, comps: Iterable[int]) -> MultiObservable:
    return MultiObservable.one(algebra.chart, algebra.trunc).restrict(comps)


@dataclass
class ApproxIdentity:
    """Exhausting family (O_n, chi_n) by component indicators."""

    algebra: StarAlgebra

    def sets(self, n: int) -> frozenset[int]:
        m = self.algebra.chart.components
        return frozenset(range(min(n + 1, m)))

    def chi(self, n: int) -> MultiObservable:
        return indicator(self.algebra, self.sets(n))

    def chi_complement(self, n: int) -> MultiObservable:
        m = self.algebra.chart.components
        return indicator(self.algebra,
                         frozenset(range(m)) - self.sets(n))


def translated_bump_family(algebra: StarAlgebra, n_max: int) -> OperatorSequence:
    """Left multiplication by the complement of an exhausting indicator.

    The translated-bump phenomenon on the component model: strongly null
    on any finitely-supported probe, but never small in the lambda-adic
    operator metric while a component remains.
    """
    ai = ApproxIdentity(algebra)
    return OperatorSequence(lambda n: LeftMul(ai.chi_complement(n)),
                            n_max, algebra)


def sinking_order_family(algebra: StarAlgebra, n_max: int) -> OperatorSequence:
    """Diagnostic family with operator order -2n."""
    q = algebra.coordinate("q1")

    def gen(n: int) -> OperatorExpr:
        s = LambdaSeries({-2 * n: Scalar(1)}, algebra.trunc)
        return Compose((Scale(s), LeftMul(q)))

    return OperatorSequence(gen, n_max, algebra)


# ---------------------------------------------------------------------------
# exact synthesis of differential operators from left/right multiplications
# ---------------------------------------------------------------------------

def _ad_derivative(algebra: StarAlgebra, var_kind: str, k: int) -> OperatorExpr:
    """d/dq^k as (i/lam) ad(p_k); d/dp_k as (-i/lam) ad(q^k)."""
    trunc = algebra.trunc
    if var_kind == "q":
        coord = algebra.coordinate(f"p{k}")
        scal = LambdaSeries({-1: Scalar(0, 1)}, trunc)
    else:
        coord = algebra.coordinate(f"q{k}")
        scal = LambdaSeries({-1: Scalar(0, -1)}, trunc)
    minus = Scale(LambdaSeries({0: Scalar(-1)}, trunc))
    ad = Sum((LeftMul(coord), Compose((minus, RightMul(coord)))))
    return Compose((Scale(scal), ad))


def _deriv_expr(algebra: StarAlgebra, multi: tuple[int, ...]) -> OperatorExpr:
    """d_q^alpha d_p^beta with multi = (alpha..., beta...) over n slots each."""
    n = algebra.chart.n
    factors: list[OperatorExpr] = []
    for k in range(n):
        for _ in range(multi[k]):
            factors.append(_ad_derivative(algebra, "q", k + 1))
    for k in range(n):
        for _ in range(multi[n + k]):
            factors.append(_ad_derivative(algebra, "p", k + 1))
    if not factors:
        return Id()
    return Compose(tuple(factors))


def _mult_expr(algebra: StarAlgebra, c: GaussPoly, budget: int) -> OperatorExpr:
    """Pointwise multiplication by c as star multiplications, exactly.

    L_c = sum_r (i lam/2)^r sum_{a,b} ((-1)^|b| / (a! b!))
          m_{d_q^a d_p^b c} o d_p^a d_q^b
    is inverted recursively; with polynomial coefficients the recursion
    terminates because derivatives exhaust the degree, so the identity is
    exact on the window.  With weighted coefficients the remainder has
    lambda-order > budget.
    """
    n = algebra.chart.n
    trunc = algebra.trunc
    terms: list[OperatorExpr] = [LeftMul(algebra.embed(c))]
    if c.gamma == 0:
        budget = min(budget, c.degree())
    for r in range(1, budget + 1):
        pref = Scalar(0, Fraction(1, 2)) ** r
        for ta in range(r + 1):
            for alpha in multi_indices(n, ta):
                for beta in multi_indices(n, r - ta):
                    dc = c.derive_multi(alpha + beta)
                    if dc.is_zero():
                        continue
                    sign = -1 if sum(beta) % 2 else 1
                    coef = pref * Scalar(Fraction(
                        -sign, _factorial_multi(alpha) * _factorial_multi(beta)))
                    scal = Scale(LambdaSeries({r: coef}, trunc))
                    inner = _mult_expr(algebra, dc, budget - r)
                    deriv = _deriv_expr(algebra, beta + alpha)
                    terms.append(Compose((scal, inner, deriv)))
    if len(terms) == 1:
        return terms[0]
    return Sum(tuple(terms))


@dataclass
class SynthesisResult:
    expr: OperatorExpr
    verified_order: float  # min over probes of o(D f - A f); inf if zero
    probe_orders: list


def alr_synthesize(D: DiffOp, algebra: StarAlgebra, order: int,
                   probe_degree: int = 4) -> SynthesisResult:
    """Realize a differential operator inside the left/right algebra.

    Every coefficient term c_alpha(q, p) d^alpha maps to a multiplication
    synthesized from left star multiplications composed with the exact
    commutator realizations of the derivatives.  The residual order is
    verified by direct application to the full probe basis.
    """
    if algebra.chart.kind != "moyal" or algebra.product != "moyal":
        raise UnsupportedChart(
            "exact synthesis uses the symmetric product on the flat plane")
    if D.space != "observable":
        raise UnsupportedChart("target must act on observables")
    max_deriv = max((sum(multi) for multi, _c in D.terms), default=0)
    if order > algebra.trunc - max_deriv:
        raise OrderBudgetExceeded(
            f"verifiable orders stop at {algebra.trunc - max_deriv}")
    parts: list[OperatorExpr] = []
    for multi, coeff in D.terms:
        deriv = _deriv_expr(algebra, multi)
        for e, c in coeff.coeffs.items():
            mult = _mult_expr(algebra, c, order)
            piece: OperatorExpr = Compose((mult, deriv))
            if e != 0:
                piece = Compose((Scale(LambdaSeries({e: Scalar(1)},
                                                    algebra.trunc)), piece))
            parts.append(piece)
    A: OperatorExpr = Sum(tuple(parts)) if len(parts) != 1 else parts[0]

    probe_orders = []
    for b in basis_observables(algebra, probe_degree):
        diff = (_apply_observable(D, b, algebra)
                - _apply_observable(A, b, algebra))
        probe_orders.append(diff.order())
    verified = min(probe_orders, default=INF)
    if verified < order:
        raise AssertionError(
            f"synthesis fell short: order {verified} < requested {order}")
    return SynthesisResult(A, verified, probe_orders)
