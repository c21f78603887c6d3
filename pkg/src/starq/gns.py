"""Positive functionals, supports, Gel'fand ideals, and GNS models.

Supports are tracked at component granularity with two symbolic refinements
(a single point; the zero section of a cotangent component), which is exactly
the resolution at which the locality statements of the theory survive a
polynomial coefficient class.  The functional zoo:

  delta     evaluation at a point of the holomorphic chart; its GNS space
            reduces to polynomials in antiholomorphic symbols ybar^k
  trace     integration against the Liouville volume on the symplectic
            plane; faithful, so the GNS space is the algebra itself
  kms       trace twisted by Exp(-beta*H); faithful, thermal
  schrodinger  integration of the zero-section restriction against the
            configuration density; GNS space reduces to wave functions
  convex    positive combination of functionals with disjoint component
            supports; GNS space splits into an orthogonal direct sum
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .coeffs import (COTANGENT, GAUSSIAN, LEBESGUE, MOYAL, WICK, Chart,
                     ChartMismatch, DivergentIntegral, GaussPoly,
                     MultiObservable)
from .scalars import DEFAULT_EPS, Scalar, Value, ZERO
from .series import LambdaSeries, ordered_sign
from .star import OrderTooLow, StarAlgebra, multi_indices, _factorial_multi


class ModelMismatch(TypeError):
    pass


class OverlappingSupports(ValueError):
    pass


# ---------------------------------------------------------------------------
# support descriptors
# ---------------------------------------------------------------------------

LEVEL_POINT = 1
LEVEL_ZEROSECTION = 2
LEVEL_FULL = 3


class SupportDescriptor:
    """Per-component support level: empty < point < zero-section < full."""

    __slots__ = ("levels",)

    def __init__(self, levels: dict[int, tuple]):
        # levels: comp -> (LEVEL_FULL,) | (LEVEL_ZEROSECTION,) | (LEVEL_POINT, coords)
        self.levels = dict(levels)

    # -- constructors ---------------------------------------------------
    @staticmethod
    def empty() -> "SupportDescriptor":
        return SupportDescriptor({})

    @staticmethod
    def full(components: int) -> "SupportDescriptor":
        return SupportDescriptor({i: (LEVEL_FULL,) for i in range(components)})

    @staticmethod
    def components(comps: Iterable[int]) -> "SupportDescriptor":
        return SupportDescriptor({i: (LEVEL_FULL,) for i in comps})

    @staticmethod
    def point(component: int, coords: tuple) -> "SupportDescriptor":
        return SupportDescriptor({component: (LEVEL_POINT, coords)})

    @staticmethod
    def zero_section(comps: Iterable[int]) -> "SupportDescriptor":
        return SupportDescriptor({i: (LEVEL_ZEROSECTION,) for i in comps})

    # -- lattice -----------------------------------------------------------
    def is_empty(self) -> bool:
        return not self.levels

    def is_full(self, components: int) -> bool:
        return all(self.levels.get(i, (0,))[0] == LEVEL_FULL
                   for i in range(components))

    def component_set(self) -> frozenset[int]:
        return frozenset(self.levels)

    def leq(self, other: "SupportDescriptor") -> bool:
        for comp, lv in self.levels.items():
            ov = other.levels.get(comp)
            if ov is None:
                return False
            if lv[0] > ov[0]:
                return False
            if lv[0] == LEVEL_POINT and ov[0] == LEVEL_POINT and lv[1] != ov[1]:
                return False
        return True

    def union(self, other: "SupportDescriptor") -> "SupportDescriptor":
        out = dict(self.levels)
        for comp, ov in other.levels.items():
            lv = out.get(comp)
            if lv is None or ov[0] > lv[0]:
                out[comp] = ov
            elif lv[0] == ov[0] == LEVEL_POINT and lv[1] != ov[1]:
                # two distinct points only fit inside the next coarser level
                out[comp] = (LEVEL_ZEROSECTION,)
        return SupportDescriptor(out)

    def intersect(self, other: "SupportDescriptor") -> "SupportDescriptor":
        out: dict[int, tuple] = {}
        for comp, lv in self.levels.items():
            ov = other.levels.get(comp)
            if ov is None:
                continue
            if lv[0] == LEVEL_POINT and ov[0] == LEVEL_POINT:
                if lv[1] == ov[1]:
                    out[comp] = lv
                continue
            out[comp] = lv if lv[0] <= ov[0] else ov
        return SupportDescriptor(out)

    def disjoint(self, other: "SupportDescriptor") -> bool:
        return self.intersect(other).is_empty()

    def restrict_components(self, comps: Iterable[int]) -> "SupportDescriptor":
        comps = set(comps)
        return SupportDescriptor({c: lv for c, lv in self.levels.items()
                                  if c in comps})

    def tag(self, components: int | None = None) -> str:
        if not self.levels:
            return "Empty"
        kinds = {lv[0] for lv in self.levels.values()}
        if kinds == {LEVEL_POINT} and len(self.levels) == 1:
            return "Point"
        if kinds == {LEVEL_ZEROSECTION}:
            return "ZeroSection"
        if kinds == {LEVEL_FULL}:
            if components is not None and self.is_full(components):
                return "Full"
            return "Components"
        return "Mixed"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SupportDescriptor):
            return NotImplemented
        return self.levels == other.levels

    def __repr__(self) -> str:
        if not self.levels:
            return "Support(Empty)"
        bits = []
        for comp in sorted(self.levels):
            lv = self.levels[comp]
            if lv[0] == LEVEL_FULL:
                bits.append(f"{comp}:full")
            elif lv[0] == LEVEL_ZEROSECTION:
                bits.append(f"{comp}:zerosection")
            else:
                bits.append(f"{comp}:point")
        return "Support(" + ", ".join(bits) + ")"


# ---------------------------------------------------------------------------
# reduced model vectors
# ---------------------------------------------------------------------------

class FockVector:
    """Polynomial in ybar^1..ybar^n with lambda-scalar coefficients."""

    __slots__ = ("n", "terms", "trunc")

    def __init__(self, n: int, terms: dict[tuple[int, ...], LambdaSeries],
                 trunc: int):
        self.n = n
        self.trunc = trunc
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    @staticmethod
    def zero(n: int, trunc: int) -> "FockVector":
        return FockVector(n, {}, trunc)

    @staticmethod
    def vacuum(n: int, trunc: int) -> "FockVector":
        one = LambdaSeries({0: Scalar(1)}, trunc)
        return FockVector(n, {(0,) * n: one}, trunc)

    @staticmethod
    def monomial(n: int, mono: tuple[int, ...], trunc: int) -> "FockVector":
        one = LambdaSeries({0: Scalar(1)}, trunc)
        return FockVector(n, {mono: one}, trunc)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def order(self):
        return min((c.order() for c in self.terms.values()),
                   default=float("inf"))

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return FockVector(self.n, out, self.trunc)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale_lambda(LambdaSeries({0: Scalar(-1)}, self.trunc))

    def scale_lambda(self, s: LambdaSeries) -> "FockVector":
        return FockVector(self.n, {m: c * s for m, c in self.terms.items()},
                          self.trunc)

    def mul_monomial(self, mono: tuple[int, ...]) -> "FockVector":
        return FockVector(self.n,
                          {tuple(a + b for a, b in zip(m, mono)): c
                           for m, c in self.terms.items()}, self.trunc)

    def derive(self, index: int) -> "FockVector":
        out = {}
        for m, c in self.terms.items():
            if m[index] == 0:
                continue
            lowered = m[:index] + (m[index] - 1,) + m[index + 1:]
            term = c.map_coeffs(lambda s: s * Scalar(m[index]))
            out[lowered] = out[lowered] + term if lowered in out else term
        return FockVector(self.n, out, self.trunc)

    def inner(self, other: "FockVector") -> LambdaSeries:
        """<ybar^a, ybar^b> = delta_ab a! (2 lam)^|a|, as a value series."""
        acc = LambdaSeries.zero(self.trunc)
        for m, c in self.terms.items():
            oc = other.terms.get(m)
            if oc is None:
                continue
            weight = Scalar(_factorial_multi(m) * 2 ** sum(m))
            pairing = (c.conj() * oc).shift(sum(m)).map_coeffs(
                lambda s: s * weight)
            acc = acc + pairing
        return acc.map_coeffs(Value.exact_scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return (self.n == other.n and self.trunc == other.trunc
                and self.terms == other.terms)

    def __repr__(self) -> str:
        names = tuple(f"ybar{k}" for k in range(1, self.n + 1))
        from .render import render_lambda_scalar, render_monomial
        bits = []
        for m in sorted(self.terms, key=lambda m: (sum(m), m)):
            mono = render_monomial(names, m) or "1"
            bits.append(f"({render_lambda_scalar(self.terms[m])})*{mono}")
        return "FockVector(" + (" + ".join(bits) if bits else "0") + ")"


class WaveFunction:
    """Per-component series of Gaussian polynomials on the configuration."""

    __slots__ = ("chart", "parts", "trunc")

    def __init__(self, chart: Chart, parts: Sequence[LambdaSeries], trunc: int):
        if chart.kind != COTANGENT:
            raise ModelMismatch("wave functions live over a cotangent chart")
        self.chart = chart
        self.parts = tuple(parts)
        self.trunc = trunc

    @staticmethod
    def zero(chart: Chart, trunc: int) -> "WaveFunction":
        return WaveFunction(chart,
                            [LambdaSeries.zero(trunc)
                             for _ in range(chart.components)], trunc)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def order(self):
        return min((p.order() for p in self.parts), default=float("inf"))

    def __add__(self, other: "WaveFunction") -> "WaveFunction":
        return WaveFunction(self.chart,
                            [a + b for a, b in zip(self.parts, other.parts)],
                            self.trunc)

    def __sub__(self, other: "WaveFunction") -> "WaveFunction":
        return WaveFunction(self.chart,
                            [a - b for a, b in zip(self.parts, other.parts)],
                            self.trunc)

    def support_components(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.parts) if not p.is_zero())

    def inner(self, other: "WaveFunction",
              components: Iterable[int] | None = None) -> LambdaSeries:
        """int conj(u) v against the configuration density, per component."""
        mode, c = self.chart.density
        comps = (range(self.chart.components) if components is None
                 else sorted(set(components)))
        acc: dict[int, Value] = {}
        for i in comps:
            up, vp = self.parts[i], other.parts[i]
            for a, ua in up.coeffs.items():
                for b, vb in vp.coeffs.items():
                    e = a + b
                    if e > self.trunc:
                        continue
                    integrand = ua.conj() * vb
                    if mode == LEBESGUE and integrand.gamma == 0:
                        if not integrand.is_zero():
                            raise DivergentIntegral(
                                "flat density needs a weighted integrand")
                        continue
                    extra = c if mode == GAUSSIAN else 0
                    val = integrand.gauss_integral(extra_gamma=extra)
                    acc[e] = acc[e] + val if e in acc else val
        return LambdaSeries(acc, self.trunc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WaveFunction):
            return NotImplemented
        return (self.chart == other.chart and self.trunc == other.trunc
                and self.parts == other.parts)

    def __repr__(self) -> str:
        from .render import render_part
        bits = [f"comp({i + 1}, {render_part(p)})"
                for i, p in enumerate(self.parts) if not p.is_zero()]
        return "WaveFunction(" + (" + ".join(bits) if bits else "0") + ")"


def pullback_to_config(g: GaussPoly, chart: Chart) -> GaussPoly:
    """iota^*: restrict to the zero section by killing the momenta."""
    momenta = [f"p{k}" for k in range(1, chart.n + 1)]
    return g.substitute_zero(momenta)


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

class Functional:
    """Base class; concrete tags below."""

    tag = "abstract"

    def __init__(self, algebra: StarAlgebra):
        self.algebra = algebra

    @property
    def chart(self) -> Chart:
        return self.algebra.chart

    @property
    def trunc(self) -> int:
        return self.algebra.trunc

    def eval(self, f: MultiObservable) -> LambdaSeries:
        raise NotImplementedError

    def support(self) -> SupportDescriptor:
        raise NotImplementedError

    def inner(self, f: MultiObservable, g: MultiObservable) -> LambdaSeries:
        """GNS Hermitian product of the classes of f and g."""
        return self.eval(self.algebra.mul(f.conj(), g))

    def _check(self, f: MultiObservable) -> None:
        if f.chart != self.chart:
            raise ChartMismatch("observable chart does not match functional")
        if f.trunc != self.trunc:
            raise ChartMismatch("observable window does not match functional")


class DeltaFunctional(Functional):
    """Evaluation at a point of one component of the holomorphic chart."""

    tag = "delta"

    def __init__(self, algebra: StarAlgebra, point: Sequence[Scalar | int | Fraction] = (),
                 component: int = 0):
        if algebra.chart.kind != WICK:
            raise ModelMismatch("point evaluation is positive on the "
                                "holomorphic product only")
        super().__init__(algebra)
        n = algebra.chart.n
        pt = [Scalar.of(x) for x in (point if point else [0] * n)]
        if len(pt) != n:
            raise ValueError(f"point needs {n} holomorphic coordinates")
        self.zpoint = tuple(pt)
        self.component = component
        # full coordinate vector (z..., zbar...)
        self.coords = tuple(pt) + tuple(x.conj() for x in pt)

    def eval(self, f: MultiObservable) -> LambdaSeries:
        self._check(f)
        part = f.parts[self.component]
        out: dict[int, Value] = {}
        for e, g in part.coeffs.items():
            v = g.evaluate(self.coords)
            if not v.is_zero(0.0):
                out[e] = v
        return LambdaSeries(out, self.trunc)

    def support(self) -> SupportDescriptor:
        return SupportDescriptor.point(self.component, self.coords)


class TraceFunctional(Functional):
    """Liouville integration; the unique positive trace of the flat product."""

    tag = "trace"

    def __init__(self, algebra: StarAlgebra,
                 components: Iterable[int] | None = None):
        if algebra.product not in ("moyal",):
            raise ModelMismatch("the positive trace is attached to the "
                                "symmetric product")
        super().__init__(algebra)
        self.comps = (tuple(range(algebra.chart.components))
                      if components is None else tuple(sorted(set(components))))

    def eval(self, f: MultiObservable) -> LambdaSeries:
        self._check(f)
        out: dict[int, Value] = {}
        for i in self.comps:
            for e, g in f.parts[i].coeffs.items():
                val = g.gauss_integral()
                out[e] = out[e] + val if e in out else val
        return LambdaSeries({e: v for e, v in out.items() if not v.is_zero(0.0)},
                            self.trunc)

    def support(self) -> SupportDescriptor:
        return SupportDescriptor.components(self.comps)


class KMSFunctional(Functional):
    """tr(Exp(-beta H) * f): the thermal functional of (H, beta)."""

    tag = "kms"

    def __init__(self, algebra: StarAlgebra, H: MultiObservable,
                 beta: Fraction | int,
                 components: Iterable[int] | None = None):
        super().__init__(algebra)
        if H.conj() != H:
            raise ValueError("the Hamiltonian must be real")
        if H.order() < 1:
            raise OrderTooLow("KMS needs a Hamiltonian of lambda-order >= 1")
        self.H = H
        self.beta = Fraction(beta)
        self.trace = TraceFunctional(algebra, components)
        self._exp_cache: dict[Fraction, MultiObservable] = {}

    def weight(self, s: Fraction | int = -1) -> MultiObservable:
        """Exp(s*beta*H), cached for the handful of needed s values."""
        s = Fraction(s)
        hit = self._exp_cache.get(s)
        if hit is None:
            hit = self.algebra.star_exp(self.H, s * self.beta)
            self._exp_cache[s] = hit
        return hit

    def eval(self, f: MultiObservable) -> LambdaSeries:
        self._check(f)
        return self.trace.eval(self.algebra.mul(self.weight(-1), f))

    def support(self) -> SupportDescriptor:
        return self.trace.support()


class SchrodingerFunctional(Functional):
    """int_Q iota^* f against the configuration density."""

    tag = "schrodinger"

    def __init__(self, algebra: StarAlgebra,
                 components: Iterable[int] | None = None):
        if algebra.product != "weyl":
            raise ModelMismatch("the zero-section functional is positive "
                                "with respect to the weyl-ordered product")
        super().__init__(algebra)
        self.comps = (tuple(range(algebra.chart.components))
                      if components is None else tuple(sorted(set(components))))

    def eval(self, f: MultiObservable) -> LambdaSeries:
        self._check(f)
        mode, c = self.chart.density
        out: dict[int, Value] = {}
        for i in self.comps:
            for e, g in f.parts[i].coeffs.items():
                u = pullback_to_config(g, self.chart)
                if u.is_zero():
                    continue
                if mode == LEBESGUE and u.gamma == 0:
                    raise DivergentIntegral(
                        "flat density needs a weighted integrand")
                extra = c if mode == GAUSSIAN else 0
                val = u.gauss_integral(extra_gamma=extra)
                out[e] = out[e] + val if e in out else val
        return LambdaSeries({e: v for e, v in out.items() if not v.is_zero(0.0)},
                            self.trunc)

    def support(self) -> SupportDescriptor:
        return SupportDescriptor.zero_section(self.comps)


class ConvexFunctional(Functional):
    """sum_i alpha_i omega_i with positive weights and disjoint supports."""

    tag = "convex"

    def __init__(self, summands: Sequence[tuple[LambdaSeries, Functional]]):
        if not summands:
            raise ValueError("empty convex combination")
        algebra = summands[0][1].algebra
        super().__init__(algebra)
        for alpha, w in summands:
            if w.algebra is not algebra and (w.chart != self.chart
                                             or w.trunc != self.trunc):
                raise ModelMismatch("summands must share the algebra")
            if ordered_sign(alpha) <= 0:
                raise ValueError("convex weights must be positive series")
        comps = [w.support().component_set() for _, w in summands]
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if comps[i] & comps[j]:
                    raise OverlappingSupports(
                        f"summands {i} and {j} share components")
        self.summands = tuple(summands)

    def eval(self, f: MultiObservable) -> LambdaSeries:
        self._check(f)
        acc = LambdaSeries.zero(self.trunc)
        for alpha, w in self.summands:
            val = w.eval(f)
            scaled: dict[int, Value] = {}
            for e1, v in val.coeffs.items():
                for e2, s in alpha.coeffs.items():
                    e = e1 + e2
                    if e > self.trunc:
                        continue
                    term = v.scale(s)
                    scaled[e] = scaled[e] + term if e in scaled else term
            acc = acc + LambdaSeries(scaled, self.trunc)
        return acc

    def support(self) -> SupportDescriptor:
        out = SupportDescriptor.empty()
        for _, w in self.summands:
            out = out.union(w.support())
        return out


# ---------------------------------------------------------------------------
# functional-level operations
# ---------------------------------------------------------------------------

def eval_functional(omega: Functional, f: MultiObservable) -> LambdaSeries:
    return omega.eval(f)


def support_of_functional(omega: Functional) -> SupportDescriptor:
    return omega.support()


def omega_square(omega: Functional, f: MultiObservable) -> MultiObservable:
    return omega.algebra.mul(f.conj(), f)


def positivity_check(omega: Functional, f: MultiObservable,
                     eps: float = DEFAULT_EPS) -> bool:
    """omega(conj(f) * f) >= 0 in the ordered-series sense."""
    series = omega.eval(omega_square(omega, f))
    for e in sorted(series.coeffs):
        v = series.coeffs[e]
        if v.is_zero(eps):
            continue
        return v.real_sign(eps) >= 0 and v.imag_magnitude() <= eps
    return True


def gelfand_member(omega: Functional, f: MultiObservable,
                   eps: float = DEFAULT_EPS, degree_bound: int = 6) -> bool:
    """f in J_omega, i.e. omega(conj(f)*f) = 0.

    For the point functional the verdict is cross-checked against the
    closed form (all antiholomorphic derivatives at the point vanish), and
    for the zero-section functional against iota^* N f = 0.
    """
    primary = omega.eval(omega_square(omega, f))
    verdict = all(v.is_zero(eps) for v in primary.coeffs.values())
    if omega.tag == "delta":
        closed = delta_ideal_closed_form(omega, f, degree_bound)
        if closed != verdict:
            raise AssertionError(
                "ideal membership and its derivative criterion disagree")
    elif omega.tag == "schrodinger":
        closed = schrodinger_reduce(omega, f).is_zero()
        if closed != verdict:
            raise AssertionError(
                "ideal membership and the wave-function criterion disagree")
    return verdict


def delta_ideal_closed_form(omega: DeltaFunctional, f: MultiObservable,
                            degree_bound: int = 6) -> bool:
    """All derivatives along the antiholomorphic symbols vanish at the point."""
    n = omega.chart.n
    part = f.parts[omega.component]
    for _e, g in part.coeffs.items():
        for total in range(0, degree_bound + 1):
            for I in multi_indices(n, total):
                multi = (0,) * n + I
                d = g.derive_multi(multi)
                if not d.evaluate(omega.coords).is_zero(0.0):
                    return False
    return True


# ---------------------------------------------------------------------------
# GNS vectors and reductions
# ---------------------------------------------------------------------------

class GnsVector:
    """Equivalence class of an observable modulo the Gel'fand ideal."""

    __slots__ = ("functional", "rep")

    def __init__(self, functional: Functional, rep: MultiObservable):
        functional._check(rep)
        self.functional = functional
        self.rep = rep

    def inner(self, other: "GnsVector") -> LambdaSeries:
        if self.functional is not other.functional:
            raise ModelMismatch("vectors belong to different GNS spaces")
        return self.functional.inner(self.rep, other.rep)

    def __add__(self, other: "GnsVector") -> "GnsVector":
        if self.functional is not other.functional:
            raise ModelMismatch("vectors belong to different GNS spaces")
        return GnsVector(self.functional, self.rep + other.rep)

    def __sub__(self, other: "GnsVector") -> "GnsVector":
        if self.functional is not other.functional:
            raise ModelMismatch("vectors belong to different GNS spaces")
        return GnsVector(self.functional, self.rep - other.rep)

    def is_null(self, eps: float = DEFAULT_EPS) -> bool:
        """Is the class zero, i.e. the representative in the ideal?"""
        norm = self.functional.eval(
            omega_square(self.functional, self.rep))
        return all(v.is_zero(eps) for v in norm.coeffs.values())

    def __repr__(self) -> str:
        return f"GnsVector({self.functional.tag}, {self.rep!r})"


def fock_reduce(omega: DeltaFunctional, f: MultiObservable,
                degree_bound: int = 8) -> FockVector:
    """Taylor map onto antiholomorphic symbols: sum_I (1/I!) d_zbar^I f(p) ybar^I."""
    n = omega.chart.n
    part = f.parts[omega.component]
    terms: dict[tuple[int, ...], LambdaSeries] = {}
    for e, g in part.coeffs.items():
        for total in range(0, degree_bound + 1):
            for I in multi_indices(n, total):
                multi = (0,) * n + I
                v = g.derive_multi(multi).evaluate(omega.coords)
                if v.is_zero(0.0):
                    continue
                if not v.is_exact or set(v.exact) - {0}:
                    raise ModelMismatch(
                        "point evaluation left the exact scalar domain")
                s = v.exact.get(0, ZERO) / Scalar(_factorial_multi(I))
                series = LambdaSeries({e: s}, f.trunc)
                terms[I] = terms[I] + series if I in terms else series
    return FockVector(n, terms, f.trunc)


def schrodinger_reduce(omega: SchrodingerFunctional,
                       f: MultiObservable) -> WaveFunction:
    """iota^* N f: the formal wave function of the class of f."""
    nf = omega.algebra.n_op(f)
    parts = []
    for i in range(omega.chart.components):
        if i in omega.comps:
            parts.append(nf.parts[i].map_coeffs(
                lambda g: pullback_to_config(g, omega.chart)))
        else:
            parts.append(LambdaSeries.zero(f.trunc))
    return WaveFunction(omega.chart, parts, f.trunc)


def gns_reduce(psi: GnsVector):
    """Model form of a GNS vector: Fock polynomial, wave function, or itself."""
    om = psi.functional
    if om.tag == "delta":
        return fock_reduce(om, psi.rep)
    if om.tag == "schrodinger":
        return schrodinger_reduce(om, psi.rep)
    if om.tag in ("trace", "kms"):
        return psi.rep
    if om.tag == "convex":
        return [GnsVector(w, psi.rep.restrict(w.support().component_set()))
                for _a, w in om.summands]
    raise ModelMismatch(f"no reduced model for {om.tag!r}")


def support_of_vector(psi: GnsVector) -> SupportDescriptor:
    om = psi.functional
    if om.tag == "delta":
        fv = fock_reduce(om, psi.rep)
        if fv.is_zero():
            return SupportDescriptor.empty()
        return om.support()
    if om.tag == "schrodinger":
        wf = schrodinger_reduce(om, psi.rep)
        return SupportDescriptor.zero_section(wf.support_components())
    if om.tag in ("trace", "kms"):
        comps = psi.rep.support_components() & frozenset(
            om.support().component_set())
        return SupportDescriptor.components(comps)
    if om.tag == "convex":
        out = SupportDescriptor.empty()
        for _a, w in om.summands:
            sub = GnsVector(w, psi.rep.restrict(w.support().component_set()))
            out = out.union(support_of_vector(sub))
        return out
    raise ModelMismatch(f"no support rule for {om.tag!r}")


def gns_repr(omega: Functional, f: MultiObservable):
    """The GNS representation operator of f (left star multiplication)."""
    from .oper import LeftMul
    omega._check(f)
    return LeftMul(f)


@dataclass
class DirectSum:
    """Orthogonal splitting of a convex-functional GNS space."""

    summands: tuple[tuple[frozenset[int], Functional], ...]
    projectors: tuple

    def split(self, psi: GnsVector) -> list[GnsVector]:
        return [GnsVector(psi.functional, psi.rep.restrict(comps))
                for comps, _w in self.summands]


def gns_direct_sum(omega: ConvexFunctional) -> DirectSum:
    from .oper import ComponentProject
    summands = tuple((frozenset(w.support().component_set()), w)
                     for _a, w in omega.summands)
    projectors = tuple(ComponentProject(comps) for comps, _ in summands)
    return DirectSum(summands, projectors)


def extend_functional(omega: Functional, f: MultiObservable) -> LambdaSeries:
    """Evaluate on the restriction to the support components.

    This is the unique extension vanishing on everything supported away
    from the functional.
    """
    comps = omega.support().component_set()
    return omega.eval(f.restrict(comps))


def basis_observables(algebra: StarAlgebra, degree: int,
                      gamma: Fraction | int = 0) -> list[MultiObservable]:
    """Monomial observables of total degree <= degree on each component."""
    chart = algebra.chart
    vars_ = chart.variables
    out = []
    for comp in range(chart.components):
        for total in range(degree + 1):
            for mono in multi_indices(len(vars_), total):
                g = GaussPoly(vars_, {mono: Scalar(1)}, gamma,
                              wick_pairs=(chart.kind == WICK))
                out.append(MultiObservable.from_part(
                    chart, algebra.trunc, comp, LambdaSeries({0: g}, algebra.trunc)))
    return out


def bargmann_fock_apply(omega: DeltaFunctional, f: MultiObservable,
                        v: FockVector, degree_bound: int = 8) -> FockVector:
    """Explicit representation on the symbol polynomials.

    pi(f) = sum_{r,s} (2 lam)^r sum_{|I|=r,|J|=s} (1/(I! J!))
            d_z^I d_zbar^J f(p) * ybar^J d_ybar^I
    """
    n = omega.chart.n
    part = f.parts[omega.component]
    out = FockVector.zero(n, f.trunc)
    for e, g in part.coeffs.items():
        for r in range(0, degree_bound + 1):
            if e + r > f.trunc and r > 0:
                break
            for I in multi_indices(n, r):
                dv = v
                for idx, k in enumerate(I):
                    for _ in range(k):
                        dv = dv.derive(idx)
                if dv.is_zero():
                    continue
                for s in range(0, degree_bound + 1):
                    for J in multi_indices(n, s):
                        c = g.derive_multi(I + J).evaluate(omega.coords)
                        if c.is_zero(0.0):
                            continue
                        if not c.is_exact or set(c.exact) - {0}:
                            raise ModelMismatch(
                                "point evaluation left the exact scalar domain")
                        scal = (c.exact.get(0, ZERO)
                                * Scalar(2 ** r)
                                / Scalar(_factorial_multi(I) * _factorial_multi(J)))
                        coef = LambdaSeries({e + r: scal}, f.trunc)
                        if coef.is_zero():
                            continue
                        out = out + dv.mul_monomial(J).scale_lambda(coef)
    return out


def schrodinger_apply(omega: SchrodingerFunctional, f: MultiObservable,
                      u: WaveFunction) -> WaveFunction:
    """Explicit representation on wave functions.

    rho(f) u = sum_r (lam/i)^r sum_{|I|=r} (1/I!) iota^*(d_p^I N f) d_q^I u
    """
    chart = omega.chart
    n = chart.n
    nf = omega.algebra.n_op(f)
    qnames = [f"q{k}" for k in range(1, n + 1)]
    parts = []
    for i in range(chart.components):
        acc = LambdaSeries.zero(f.trunc)
        if i in omega.comps:
            fpart = nf.parts[i]
            upart = u.parts[i]
            for e, g in fpart.coeffs.items():
                for r in range(0, f.trunc - e + 1):
                    factor = (Scalar(0, -1) ** r if r else Scalar(1))
                    for I in multi_indices(n, r):
                        pmulti = (0,) * n + I
                        coeff = pullback_to_config(g.derive_multi(pmulti), chart)
                        if coeff.is_zero():
                            continue
                        coeff = coeff.scale(
                            factor * Scalar(Fraction(1, _factorial_multi(I))))
                        for a, ua in upart.coeffs.items():
                            exp = e + r + a
                            if exp > f.trunc:
                                continue
                            du = ua
                            for idx, k in enumerate(I):
                                for _ in range(k):
                                    du = du.derive(qnames[idx])
                            term = coeff * du
                            if term.is_zero():
                                continue
                            acc = acc + LambdaSeries({exp: term}, f.trunc)
        parts.append(acc)
    return WaveFunction(chart, parts, f.trunc)


def faithfulness_check(omega: Functional, degree: int = 2,
                       eps: float = DEFAULT_EPS) -> bool:
    """Support covers every component, cross-checked on a monomial basis.

    Integral functionals are probed with weighted monomials so every
    probe is integrable.
    """
    full = omega.support().is_full(omega.chart.components)
    gamma = 0
    if omega.tag in ("trace", "kms", "convex"):
        gamma = 1
    elif omega.tag == "schrodinger" and omega.chart.density[0] == LEBESGUE:
        gamma = 1
    probe = all(not gelfand_member(omega, b, eps)
                for b in basis_observables(omega.algebra, degree, gamma))
    if full != probe:
        raise AssertionError("support criterion and ideal probe disagree")
    return full
