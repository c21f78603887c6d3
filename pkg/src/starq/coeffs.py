"""Coefficient algebras over flat charts.

A chart fixes the variable model: the symplectic plane with canonical
coordinates (q^k, p_k), the holomorphic model with independent commuting
symbols (z^k, zbar^k), or a flat cotangent chart (q^k, p_k) carrying a
volume density on the configuration directions.  Charts may consist of
several disjoint components; functions are stored per component.

The dense function class is `GaussPoly`: an exact multivariate polynomial
times the weight exp(-gamma*|x|^2) (for the holomorphic model |x|^2 means
sum z^k zbar^k).  The class is closed under derivatives, products (weights
add) and same-weight sums, and every Gaussian integral of it has a closed
form, so functionals evaluate without any analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import (Scalar, Value, ZERO, ONE, gaussian_moment,
                      sqrt_pi_over_gamma_pack)
from .series import LambdaSeries


class UnknownVariable(KeyError):
    pass


class UnsupportedChart(TypeError):
    pass


class WeightMismatch(ValueError):
    """Sum of Gaussian-weighted functions with different weights."""


class DivergentIntegral(ArithmeticError):
    pass


class DimensionMismatch(ValueError):
    pass


class ChartMismatch(TypeError):
    pass


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

MOYAL = "moyal"
WICK = "wick"
COTANGENT = "cotangent"

LEBESGUE = "lebesgue"
GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class Chart:
    """Variable model: kind, dimension n, number of disjoint components.

    cotangent charts carry the density of the configuration volume:
    ("lebesgue", None) or ("gaussian", c) for exp(-c*|q|^2) d^n q.
    """

    kind: str
    n: int
    components: int = 1
    density: tuple[str, Fraction | None] = (LEBESGUE, None)

    def __post_init__(self):
        if self.kind not in (MOYAL, WICK, COTANGENT):
            raise UnsupportedChart(f"unknown chart kind {self.kind!r}")
        if self.n < 1 or self.components < 1:
            raise ValueError("chart needs n >= 1 and components >= 1")
        if self.kind == COTANGENT:
            mode, c = self.density
            if mode not in (LEBESGUE, GAUSSIAN):
                raise ValueError(f"unknown density {mode!r}")
            if mode == GAUSSIAN and (c is None or Fraction(c) <= 0):
                raise ValueError("gaussian density needs c > 0")

    @property
    def variables(self) -> tuple[str, ...]:
        if self.kind == WICK:
            return tuple(f"z{k}" for k in range(1, self.n + 1)) + \
                   tuple(f"zbar{k}" for k in range(1, self.n + 1))
        return tuple(f"q{k}" for k in range(1, self.n + 1)) + \
               tuple(f"p{k}" for k in range(1, self.n + 1))

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def config_variables(self) -> tuple[str, ...]:
        return tuple(f"q{k}" for k in range(1, self.n + 1))


def moyal_plane(n: int = 1, components: int = 1) -> Chart:
    return Chart(MOYAL, n, components)


def wick_space(n: int = 1, components: int = 1) -> Chart:
    return Chart(WICK, n, components)


def cotangent_flat(n: int = 1, components: int = 1,
                   density: tuple[str, Fraction | None] = (LEBESGUE, None)) -> Chart:
    mode, c = density
    return Chart(COTANGENT, n, components,
                 (mode, Fraction(c) if c is not None else None))


# ---------------------------------------------------------------------------
# Gaussian-weighted polynomials
# ---------------------------------------------------------------------------

Monomial = tuple[int, ...]


class GaussPoly:
    """poly(x) * exp(-gamma*|x|^2) over a fixed variable tuple."""

    __slots__ = ("vars", "terms", "gamma", "wick_pairs")

    def __init__(self, variables: Sequence[str], terms: dict[Monomial, Scalar],
                 gamma: Fraction | int = 0, *, wick_pairs: bool = False,
                 _clean: bool = False):
        self.vars = tuple(variables)
        self.gamma = Fraction(gamma)
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        self.wick_pairs = wick_pairs
        if _clean:
            self.terms = terms
        else:
            self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(variables: Sequence[str], gamma: Fraction | int = 0,
             wick_pairs: bool = False) -> "GaussPoly":
        return GaussPoly(variables, {}, gamma, wick_pairs=wick_pairs, _clean=True)

    @staticmethod
    def const(variables: Sequence[str], c: Scalar | int | Fraction,
              gamma: Fraction | int = 0, wick_pairs: bool = False) -> "GaussPoly":
        c = Scalar.of(c)
        zero_mono = (0,) * len(variables)
        return GaussPoly(variables, {zero_mono: c}, gamma, wick_pairs=wick_pairs)

    @staticmethod
    def variable(variables: Sequence[str], name: str,
                 gamma: Fraction | int = 0, wick_pairs: bool = False) -> "GaussPoly":
        variables = tuple(variables)
        idx = variables.index(name)
        mono = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return GaussPoly(variables, {mono: Scalar(1)}, gamma, wick_pairs=wick_pairs)

    def _like(self, terms: dict[Monomial, Scalar],
              gamma: Fraction | None = None, clean: bool = False) -> "GaussPoly":
        return GaussPoly(self.vars, terms,
                         self.gamma if gamma is None else gamma,
                         wick_pairs=self.wick_pairs, _clean=clean)

    # -- predicates and structure -----------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total polynomial degree (weight not counted); -1 for zero."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def _check(self, other: "GaussPoly") -> None:
        if self.vars != other.vars:
            raise ChartMismatch(f"variables differ: {self.vars} vs {other.vars}")

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "GaussPoly") -> "GaussPoly":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.gamma != other.gamma:
            raise WeightMismatch(
                f"cannot add weights gamma={self.gamma} and gamma={other.gamma}")
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return self._like(out, clean=True)

    def __sub__(self, other: "GaussPoly") -> "GaussPoly":
        return self + (-other)

    def __neg__(self) -> "GaussPoly":
        return self._like({m: -c for m, c in self.terms.items()}, clean=True)

    def __mul__(self, other: "GaussPoly") -> "GaussPoly":
        self._check(other)
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                if m in out:
                    out[m] = out[m] + p
                else:
                    out[m] = p
        return GaussPoly(self.vars, out, self.gamma + other.gamma,
                         wick_pairs=self.wick_pairs)

    def scale(self, s: Scalar | int | Fraction) -> "GaussPoly":
        s = Scalar.of(s)
        if s.is_zero():
            return self._like({}, clean=True)
        return self._like({m: c * s for m, c in self.terms.items()}, clean=True)

    def conj(self) -> "GaussPoly":
        """Conjugate coefficients; on the holomorphic model swap z <-> zbar."""
        if not self.wick_pairs:
            return self._like({m: c.conj() for m, c in self.terms.items()},
                              clean=True)
        n = len(self.vars) // 2
        out = {}
        for m, c in self.terms.items():
            out[m[n:] + m[:n]] = c.conj()
        return self._like(out, clean=True)

    # -- calculus -----------------------------------------------------------
    def _weight_partner(self, idx: int) -> tuple[int, Fraction]:
        """Derivative of the weight w.r.t. variable idx: -coef * partner."""
        if not self.wick_pairs:
            return idx, 2 * self.gamma
        n = len(self.vars) // 2
        partner = idx + n if idx < n else idx - n
        return partner, self.gamma

    def derive(self, name: str) -> "GaussPoly":
        try:
            idx = self.vars.index(name)
        except ValueError:
            raise UnknownVariable(name) from None
        out: dict[Monomial, Scalar] = {}

        def acc(m: Monomial, c: Scalar) -> None:
            if c.is_zero():
                return
            s = out.get(m, ZERO) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s

        partner, wcoef = self._weight_partner(idx)
        for m, c in self.terms.items():
            if m[idx] > 0:
                lowered = list(m)
                lowered[idx] -= 1
                acc(tuple(lowered), c * m[idx])
            if self.gamma != 0:
                raised = list(m)
                raised[partner] += 1
                acc(tuple(raised), c * Scalar(-wcoef))
        return self._like(out, clean=True)

    def derive_multi(self, multi: Monomial) -> "GaussPoly":
        out = self
        for idx, k in enumerate(multi):
            for _ in range(k):
                out = out.derive(self.vars[idx])
        return out

    def evaluate(self, point: Sequence[Scalar | int | Fraction]) -> Value:
        """Exact substitution; the weight stays exact only where |x|^2 = 0."""
        if len(point) != len(self.vars):
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, chart has {len(self.vars)}")
        pt = [Scalar.of(x) for x in point]
        acc = ZERO
        for m, c in self.terms.items():
            v = c
            for idx, k in enumerate(m):
                for _ in range(k):
                    v = v * pt[idx]
            acc = acc + v
        if self.gamma == 0:
            return Value.exact_scalar(acc)
        if self.wick_pairs:
            n = len(self.vars) // 2
            norm = sum((pt[k] * pt[k + n] for k in range(n)), ZERO)
        else:
            norm = sum((x * x for x in pt), ZERO)
        if norm.is_zero():
            return Value.exact_scalar(acc)
        import cmath
        weight = cmath.exp(-float(self.gamma) * complex(norm))
        return Value.from_float(complex(acc) * weight)

    def substitute_zero(self, names: Iterable[str]) -> "GaussPoly":
        """Set the listed variables to zero and drop them from the tuple."""
        names = set(names)
        keep = [i for i, v in enumerate(self.vars) if v not in names]
        out: dict[Monomial, Scalar] = {}
        for m, c in self.terms.items():
            if any(m[i] > 0 for i, v in enumerate(self.vars) if v in names):
                continue
            key = tuple(m[i] for i in keep)
            s = out.get(key, ZERO) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return GaussPoly([self.vars[i] for i in keep], out, self.gamma,
                         wick_pairs=False)

    def rename_space(self, variables: Sequence[str],
                     wick_pairs: bool = False) -> "GaussPoly":
        """Reinterpret over a new variable tuple of the same arity."""
        if len(variables) != len(self.vars):
            raise DimensionMismatch("arity change in rename")
        return GaussPoly(variables, dict(self.terms), self.gamma,
                         wick_pairs=wick_pairs, _clean=True)

    def gauss_integral(self, names: Iterable[str] | None = None,
                       extra_gamma: Fraction | int = 0) -> Value:
        """Closed-form integral over the given variables (default: all).

        Every monomial factorizes into one-dimensional moments
        int x^(2m) exp(-g x^2) dx = (2m-1)!!/(2g)^m * sqrt(pi/g); odd powers
        vanish.  Variables not integrated must not occur in the polynomial.
        `extra_gamma` adds an ambient weight (a density) on the integrated
        variables.
        """
        if self.wick_pairs:
            raise UnsupportedChart("no Gaussian integration over symbol pairs")
        g = self.gamma + Fraction(extra_gamma)
        if names is None:
            names = self.vars
        names = list(names)
        for nm in names:
            if nm not in self.vars:
                raise UnknownVariable(nm)
        idxs = [self.vars.index(nm) for nm in names]
        rest = [i for i in range(len(self.vars)) if i not in idxs]
        if self.is_zero():
            return Value.exact_scalar(0)
        if g == 0:
            if any(m[i] > 0 for m in self.terms for i in idxs) or names:
                raise DivergentIntegral("flat weight over an unbounded variable")
        rational_sum = ZERO
        for m, c in self.terms.items():
            if any(m[i] > 0 for i in rest):
                raise DivergentIntegral(
                    f"free variable {self.vars[rest[0]]} left in the integrand")
            part = Fraction(1)
            odd = False
            for i in idxs:
                rat, _have = gaussian_moment(m[i], g)
                if rat == 0:
                    odd = True
                    break
                part *= rat
            if odd:
                continue
            rational_sum = rational_sum + c * Scalar(part)
        if rational_sum.is_zero():
            return Value.exact_scalar(0)
        pack = sqrt_pi_over_gamma_pack(len(idxs), g)
        return pack.scale(rational_sum)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaussPoly):
            return NotImplemented
        return (self.vars == other.vars and self.gamma == other.gamma
                and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("GaussPoly is unhashable")

    def __repr__(self) -> str:
        from .render import render_gausspoly
        return f"GaussPoly({render_gausspoly(self)})"


def poisson(f: GaussPoly, g: GaussPoly, chart: Chart) -> GaussPoly:
    """Canonical Poisson bracket sum_k (df/dq^k dg/dp_k - df/dp_k dg/dq^k)."""
    if chart.kind == WICK:
        raise UnsupportedChart("canonical coordinates only; see wick_poisson")
    out = GaussPoly.zero(f.vars, f.gamma + g.gamma)
    for k in range(1, chart.n + 1):
        qk, pk = f"q{k}", f"p{k}"
        out = out + f.derive(qk) * g.derive(pk) - f.derive(pk) * g.derive(qk)
    return out


def wick_poisson(f: GaussPoly, g: GaussPoly, chart: Chart) -> GaussPoly:
    """The same bracket written in symbol pairs: -2i sum_k (f_z g_zbar - f_zbar g_z)."""
    if chart.kind != WICK:
        raise UnsupportedChart("symbol-pair bracket needs the holomorphic model")
    out = GaussPoly.zero(f.vars, f.gamma + g.gamma, wick_pairs=True)
    for k in range(1, chart.n + 1):
        zk, zbk = f"z{k}", f"zbar{k}"
        out = out + (f.derive(zk) * g.derive(zbk)
                     - f.derive(zbk) * g.derive(zk)).scale(Scalar(0, -2))
    return out


# ---------------------------------------------------------------------------
# observables: per-component series of Gaussian polynomials
# ---------------------------------------------------------------------------

class MultiObservable:
    """One lambda-series of GaussPoly per chart component, shared window."""

    __slots__ = ("chart", "parts", "trunc")

    def __init__(self, chart: Chart, parts: Sequence[LambdaSeries], trunc: int):
        if len(parts) != chart.components:
            raise DimensionMismatch(
                f"{len(parts)} parts for {chart.components} components")
        for p in parts:
            if p.trunc != trunc:
                raise ValueError("all parts must share the window")
        self.chart = chart
        self.parts = tuple(parts)
        self.trunc = trunc

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(chart: Chart, trunc: int) -> "MultiObservable":
        return MultiObservable(
            chart, [LambdaSeries.zero(trunc) for _ in range(chart.components)],
            trunc)

    @staticmethod
    def one(chart: Chart, trunc: int) -> "MultiObservable":
        unit = GaussPoly.const(chart.variables, 1,
                               wick_pairs=(chart.kind == WICK))
        return MultiObservable(
            chart, [LambdaSeries({0: unit}, trunc)
                    for _ in range(chart.components)], trunc)

    @staticmethod
    def from_part(chart: Chart, trunc: int, component: int,
                  series: LambdaSeries) -> "MultiObservable":
        parts = [LambdaSeries.zero(trunc) for _ in range(chart.components)]
        parts[component] = series
        return MultiObservable(chart, parts, trunc)

    @staticmethod
    def coordinate(chart: Chart, trunc: int, name: str,
                   gamma: Fraction | int = 0) -> "MultiObservable":
        """The coordinate function `name` on every component."""
        g = GaussPoly.variable(chart.variables, name, gamma,
                               wick_pairs=(chart.kind == WICK))
        return MultiObservable(
            chart, [LambdaSeries({0: g}, trunc)
                    for _ in range(chart.components)], trunc)

    @staticmethod
    def from_gausspoly(chart: Chart, trunc: int, g: GaussPoly,
                       component: int | None = None) -> "MultiObservable":
        series = LambdaSeries({0: g}, trunc)
        if component is None:
            return MultiObservable(chart, [series] * chart.components, trunc)
        return MultiObservable.from_part(chart, trunc, component, series)

    # -- structure --------------------------------------------------------
    def _check(self, other: "MultiObservable") -> None:
        if self.chart != other.chart:
            raise ChartMismatch("observables live on different charts")
        if self.trunc != other.trunc:
            from .series import TruncationMismatch
            raise TruncationMismatch(
                f"windows differ: {self.trunc} vs {other.trunc}")

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def order(self):
        return min((p.order() for p in self.parts), default=float("inf"))

    def support_components(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.parts) if not p.is_zero())

    def degree(self) -> int:
        degs = [c.degree() for p in self.parts for c in p.coeffs.values()]
        return max(degs, default=-1)

    # -- algebra -----------------------------------------------------------
    def __add__(self, other: "MultiObservable") -> "MultiObservable":
        self._check(other)
        return MultiObservable(self.chart,
                               [a + b for a, b in zip(self.parts, other.parts)],
                               self.trunc)

    def __sub__(self, other: "MultiObservable") -> "MultiObservable":
        return self + (-other)

    def __neg__(self) -> "MultiObservable":
        return MultiObservable(self.chart, [-p for p in self.parts], self.trunc)

    def pointwise_mul(self, other: "MultiObservable") -> "MultiObservable":
        """Commutative coefficient-level product (order-zero part of any star)."""
        self._check(other)
        return MultiObservable(self.chart,
                               [a * b for a, b in zip(self.parts, other.parts)],
                               self.trunc)

    def scale(self, s: Scalar | int | Fraction) -> "MultiObservable":
        s = Scalar.of(s)
        return MultiObservable(
            self.chart,
            [p.map_coeffs(lambda c: c.scale(s)) for p in self.parts],
            self.trunc)

    def scale_lambda(self, s: LambdaSeries) -> "MultiObservable":
        """Multiply by a lambda-scalar (series with Scalar coefficients)."""
        out_parts = []
        for p in self.parts:
            acc: dict[int, GaussPoly] = {}
            for e1, c1 in p.coeffs.items():
                for e2, s2 in s.coeffs.items():
                    e = e1 + e2
                    if e > self.trunc:
                        continue
                    term = c1.scale(s2)
                    if e in acc:
                        acc[e] = acc[e] + term
                    else:
                        acc[e] = term
            out_parts.append(LambdaSeries(acc, self.trunc))
        return MultiObservable(self.chart, out_parts, self.trunc)

    def shift(self, k: int) -> "MultiObservable":
        return MultiObservable(self.chart, [p.shift(k) for p in self.parts],
                               self.trunc)

    def conj(self) -> "MultiObservable":
        return MultiObservable(self.chart, [p.conj() for p in self.parts],
                               self.trunc)

    def restrict(self, components: Iterable[int]) -> "MultiObservable":
        comps = set(components)
        parts = [p if i in comps else LambdaSeries.zero(self.trunc)
                 for i, p in enumerate(self.parts)]
        return MultiObservable(self.chart, parts, self.trunc)

    def permute_components(self, perm: Sequence[int]) -> "MultiObservable":
        """Move the part of component i to component perm[i]."""
        parts = [LambdaSeries.zero(self.trunc)] * self.chart.components
        for i, p in enumerate(self.parts):
            parts[perm[i]] = p
        return MultiObservable(self.chart, parts, self.trunc)

    def map_parts(self, fn) -> "MultiObservable":
        return MultiObservable(self.chart, [fn(p) for p in self.parts],
                               self.trunc)

    def derive(self, name: str) -> "MultiObservable":
        return self.map_parts(lambda p: p.map_coeffs(lambda g: g.derive(name)))

    def retrunc(self, new_trunc: int) -> "MultiObservable":
        return MultiObservable(self.chart,
                               [p.retrunc(new_trunc) for p in self.parts],
                               new_trunc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiObservable):
            return NotImplemented
        return (self.chart == other.chart and self.trunc == other.trunc
                and self.parts == other.parts)

    def __hash__(self):
        raise TypeError("MultiObservable is unhashable")

    def __repr__(self) -> str:
        from .render import render_observable
        return f"MultiObservable({render_observable(self)})"
