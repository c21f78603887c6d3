"""Star products on flat charts.

Four associative deformations of the pointwise product are provided, each
an exact finite sum on the truncation window because the r-th bidifferential
term carries lam^r:

  moyal  symmetric product sum_r (i lam/2)^r/r! P^r(f,g) built from powers
         of the canonical bidifferential P
  wick   holomorphic/antiholomorphic expansion with factor (2 lam)^r/r!
  std    normal ordering on a flat cotangent chart: all momentum
         derivatives hit the left factor, configuration derivatives the
         right, with factor (lam/i)^r/r!
  weyl   std conjugated by the weight-and-divergence corrector
         exp((lam/2i)(Laplace + F(alpha))); Hermitian, and the volume
         density enters through the one-form alpha

The star exponential Exp(beta*H) is the terminating power series for
Hamiltonians of positive lambda-order; it solves d/dbeta Exp = H * Exp
with Exp(0) = 1 and satisfies the group law exactly on the window.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .coeffs import (COTANGENT, GAUSSIAN, LEBESGUE, MOYAL, WICK, Chart,
                     ChartMismatch, GaussPoly, MultiObservable,
                     UnsupportedChart)
from .scalars import Scalar
from .series import LambdaSeries

PRODUCTS = ("moyal", "wick", "std", "weyl")


class AlgebraMismatch(TypeError):
    pass


class OrderTooLow(ValueError):
    """Star exponential of a Hamiltonian with nonpositive lambda-order."""


def multi_indices(slots: int, total: int) -> Iterable[tuple[int, ...]]:
    """All tuples of `slots` nonnegative integers summing to `total`."""
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in multi_indices(slots - 1, total - head):
            yield (head,) + rest


def _factorial_multi(m: Sequence[int]) -> int:
    out = 1
    for k in m:
        f = 1
        for j in range(2, k + 1):
            f *= j
        out *= f
    return out


class _DerivTable:
    """Memoized iterated derivatives of one GaussPoly."""

    def __init__(self, g: GaussPoly, names: Sequence[str]):
        self.names = tuple(names)
        self.table: dict[tuple[int, ...], GaussPoly] = {
            (0,) * len(names): g}

    def get(self, multi: tuple[int, ...]) -> GaussPoly:
        hit = self.table.get(multi)
        if hit is not None:
            return hit
        for i, k in enumerate(multi):
            if k > 0:
                lower = multi[:i] + (k - 1,) + multi[i + 1:]
                hit = self.get(lower).derive(self.names[i])
                self.table[multi] = hit
                return hit
        raise AssertionError("unreachable")


def _bidiff_sum(fa: GaussPoly, gb: GaussPoly, r: int, chart: Chart,
                product: str) -> GaussPoly:
    """The r-th bidifferential term M_r(fa, gb) without its lam^r scalar."""
    n = chart.n
    if product == "wick":
        left = _DerivTable(fa, [f"z{k}" for k in range(1, n + 1)])
        right = _DerivTable(gb, [f"zbar{k}" for k in range(1, n + 1)])
        factor = Scalar(2) ** r if r else Scalar(1)
        acc = GaussPoly.zero(fa.vars, fa.gamma + gb.gamma, wick_pairs=True)
        for I in multi_indices(n, r):
            c = factor * Scalar(Fraction(1, _factorial_multi(I)))
            acc = acc + (left.get(I) * right.get(I)).scale(c)
        return acc
    if product == "std":
        left = _DerivTable(fa, [f"p{k}" for k in range(1, n + 1)])
        right = _DerivTable(gb, [f"q{k}" for k in range(1, n + 1)])
        factor = Scalar(0, -1) ** r if r else Scalar(1)
        acc = GaussPoly.zero(fa.vars, fa.gamma + gb.gamma)
        for I in multi_indices(n, r):
            c = factor * Scalar(Fraction(1, _factorial_multi(I)))
            acc = acc + (left.get(I) * right.get(I)).scale(c)
        return acc
    # moyal: P^r expanded over pairs of multi-indices
    qs = [f"q{k}" for k in range(1, n + 1)]
    ps = [f"p{k}" for k in range(1, n + 1)]
    left = _DerivTable(fa, qs + ps)
    right = _DerivTable(gb, qs + ps)
    half_i = Scalar(0, Fraction(1, 2))
    factor = half_i ** r if r else Scalar(1)
    acc = GaussPoly.zero(fa.vars, fa.gamma + gb.gamma)
    for total_a in range(r + 1):
        for alpha in multi_indices(n, total_a):
            for beta in multi_indices(n, r - total_a):
                sign = -1 if sum(beta) % 2 else 1
                c = factor * Scalar(Fraction(sign, _factorial_multi(alpha)
                                             * _factorial_multi(beta)))
                dl = left.get(alpha + beta)          # d_q^alpha d_p^beta f
                dr = right.get(beta + alpha)         # d_q^beta  d_p^alpha g
                acc = acc + (dl * dr).scale(c)
    return acc


# ---------------------------------------------------------------------------
# the exp((lam/2i)(Laplace + F(alpha))) corrector on cotangent charts
# ---------------------------------------------------------------------------

def _neumaier_generator(g: GaussPoly, chart: Chart) -> GaussPoly:
    """(Laplace + F(alpha)) g on a flat chart with vanishing Christoffels."""
    n = chart.n
    out = GaussPoly.zero(g.vars, g.gamma)
    for k in range(1, n + 1):
        out = out + g.derive(f"q{k}").derive(f"p{k}")
    mode, c = chart.density
    if mode == GAUSSIAN:
        for k in range(1, n + 1):
            alpha_k = GaussPoly.variable(g.vars, f"q{k}").scale(Scalar(-2 * c))
            out = out + alpha_k * g.derive(f"p{k}")
    return out


def n_operator_series(f: LambdaSeries, chart: Chart, trunc: int,
                      inverse: bool = False) -> LambdaSeries:
    sign = Scalar(0, Fraction(1, 2)) if inverse else Scalar(0, Fraction(-1, 2))
    out: dict[int, GaussPoly] = {}

    def acc(e: int, g: GaussPoly) -> None:
        if g.is_zero():
            return
        if e in out:
            out[e] = out[e] + g
        else:
            out[e] = g

    for a, fa in f.coeffs.items():
        term = fa
        factor = Scalar(1)
        j = 0
        while a + j <= trunc:
            acc(a + j, term.scale(factor))
            j += 1
            if a + j > trunc:
                break
            term = _neumaier_generator(term, chart)
            if term.is_zero():
                break
            factor = factor * sign * Scalar(Fraction(1, j))
    return LambdaSeries(out, trunc)


class StarAlgebra:
    """Immutable product configuration: chart, product name, window."""

    __slots__ = ("chart", "product", "trunc")

    def __init__(self, chart: Chart, product: str, trunc: int):
        if product not in PRODUCTS:
            raise ValueError(f"unknown product {product!r}")
        if product == "wick" and chart.kind != WICK:
            raise UnsupportedChart("wick product needs the holomorphic chart")
        if product in ("std", "weyl") and chart.kind != COTANGENT:
            raise UnsupportedChart(f"{product} product needs a cotangent chart")
        if product == "moyal" and chart.kind == WICK:
            raise UnsupportedChart("moyal product needs canonical coordinates")
        if trunc < 1:
            raise ValueError("window must allow at least first order")
        self.chart = chart
        self.product = product
        self.trunc = trunc

    # -- convenience constructors of observables -------------------------
    def zero(self) -> MultiObservable:
        return MultiObservable.zero(self.chart, self.trunc)

    def one(self) -> MultiObservable:
        return MultiObservable.one(self.chart, self.trunc)

    def coordinate(self, name: str, gamma: Fraction | int = 0) -> MultiObservable:
        return MultiObservable.coordinate(self.chart, self.trunc, name, gamma)

    def embed(self, g: GaussPoly, component: int | None = None) -> MultiObservable:
        return MultiObservable.from_gausspoly(self.chart, self.trunc, g, component)

    def _check(self, f: MultiObservable, g: MultiObservable) -> None:
        if f.chart != self.chart or g.chart != self.chart:
            raise AlgebraMismatch("observable charts do not match the algebra")
        if f.trunc != self.trunc or g.trunc != self.trunc:
            raise AlgebraMismatch("observable windows do not match the algebra")

    # -- products ---------------------------------------------------------
    def mul(self, f: MultiObservable, g: MultiObservable) -> MultiObservable:
        self._check(f, g)
        if self.product == "weyl":
            nf = self.n_op(f)
            ng = self.n_op(g)
            std = StarAlgebra(self.chart, "std", self.trunc)
            return self.n_op(std.mul(nf, ng), inverse=True)
        parts = []
        for fp, gp in zip(f.parts, g.parts):
            acc: dict[int, GaussPoly] = {}
            for a, fa in fp.coeffs.items():
                for b, gb in gp.coeffs.items():
                    r_max = self.trunc - a - b
                    if fa.gamma == 0 and gb.gamma == 0:
                        # without weight, r-th derivatives exhaust the degree
                        r_max = min(r_max, fa.degree(), gb.degree())
                    for r in range(0, r_max + 1):
                        term = _bidiff_sum(fa, gb, r, self.chart, self.product)
                        if term.is_zero():
                            continue
                        e = a + b + r
                        if e in acc:
                            acc[e] = acc[e] + term
                        else:
                            acc[e] = term
            parts.append(LambdaSeries(acc, self.trunc))
        return MultiObservable(self.chart, parts, self.trunc)

    def comm(self, f: MultiObservable, g: MultiObservable) -> MultiObservable:
        return self.mul(f, g) - self.mul(g, f)

    def bidiff_term(self, f: MultiObservable, g: MultiObservable,
                    r: int) -> MultiObservable:
        """M_r(f, g) applied coefficientwise, without the lam^r prefactor."""
        self._check(f, g)
        if self.product == "weyl":
            raise UnsupportedChart("weyl product has no direct term expansion")
        parts = []
        for fp, gp in zip(f.parts, g.parts):
            acc: dict[int, GaussPoly] = {}
            for a, fa in fp.coeffs.items():
                for b, gb in gp.coeffs.items():
                    term = _bidiff_sum(fa, gb, r, self.chart, self.product)
                    if term.is_zero():
                        continue
                    e = a + b
                    acc[e] = acc[e] + term if e in acc else term
            parts.append(LambdaSeries(acc, self.trunc))
        return MultiObservable(self.chart, parts, self.trunc)

    # -- ordering corrector -------------------------------------------------
    def n_op(self, f: MultiObservable, inverse: bool = False) -> MultiObservable:
        if self.chart.kind != COTANGENT:
            raise UnsupportedChart("ordering corrector lives on cotangent charts")
        return f.map_parts(
            lambda p: n_operator_series(p, self.chart, self.trunc, inverse))

    # -- star exponential ----------------------------------------------------
    def star_exp(self, H: MultiObservable,
                 beta: Fraction | int | LambdaSeries = 1) -> MultiObservable:
        self._check(H, H)
        if H.order() < 1:
            raise OrderTooLow(
                "star exponential needs a Hamiltonian of lambda-order >= 1")
        out = self.one()
        power = self.one()
        k = 0
        while True:
            k += 1
            power = self.mul(power, H)
            if power.is_zero() or k > self.trunc:
                break
            if isinstance(beta, LambdaSeries):
                coef = beta
                for _ in range(k - 1):
                    coef = coef * beta
                term = power.scale_lambda(coef).scale(Fraction(1, _fact(k)))
            else:
                term = power.scale(Fraction(beta) ** k / _fact(k))
            out = out + term
        return out

    def star_exp_beta_coeffs(self, H: MultiObservable) -> list[MultiObservable]:
        """Coefficients E_k of Exp(beta H) = sum_k beta^k E_k, symbolically in beta."""
        self._check(H, H)
        if H.order() < 1:
            raise OrderTooLow(
                "star exponential needs a Hamiltonian of lambda-order >= 1")
        coeffs = [self.one()]
        power = self.one()
        k = 0
        while True:
            k += 1
            power = self.mul(power, H)
            if power.is_zero() or k > self.trunc:
                break
            coeffs.append(power.scale(Fraction(1, _fact(k))))
        return coeffs

    # -- homogeneity -----------------------------------------------------------
    def homogeneity_operator(self, f: MultiObservable) -> MultiObservable:
        """lam * d/dlam plus the Liouville derivative along p d/dp."""
        parts = []
        for p in f.parts:
            acc: dict[int, GaussPoly] = {}
            for e, c in p.coeffs.items():
                euler = c.scale(e)
                liouville = GaussPoly.zero(c.vars, c.gamma)
                for k in range(1, self.chart.n + 1):
                    pk_plain = GaussPoly.variable(c.vars, f"p{k}")
                    liouville = liouville + pk_plain * c.derive(f"p{k}")
                total = euler + liouville
                if not total.is_zero():
                    acc[e] = total
            parts.append(LambdaSeries(acc, self.trunc))
        return MultiObservable(self.chart, parts, self.trunc)

    def homogeneity_check(self, f: MultiObservable, g: MultiObservable) -> bool:
        """Is the grading operator a derivation of this product?"""
        if self.product != "std":
            raise UnsupportedChart("homogeneity is a property of the std product")
        lhs = self.homogeneity_operator(self.mul(f, g))
        rhs = (self.mul(self.homogeneity_operator(f), g)
               + self.mul(f, self.homogeneity_operator(g)))
        return lhs == rhs

    def with_trunc(self, trunc: int) -> "StarAlgebra":
        return StarAlgebra(self.chart, self.product, trunc)

    def __repr__(self) -> str:
        return f"StarAlgebra({self.chart.kind}:{self.chart.n}, {self.product}, N={self.trunc})"


def _fact(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def star_mul(algebra: StarAlgebra, f: MultiObservable,
             g: MultiObservable) -> MultiObservable:
    return algebra.mul(f, g)


def star_comm(algebra: StarAlgebra, f: MultiObservable,
              g: MultiObservable) -> MultiObservable:
    return algebra.comm(f, g)
