"""Operator calculus on GNS models.

Operators are syntax trees evaluated against a model: left and right star
multiplications, differential operators, lambda-scalar multiples, sums,
compositions, component projections and permutations.  On a truncated
monomial basis every operator matrixizes to lambda-scalar entries; columns
whose image leaves the basis are flagged, never trusted.

The commutant probe solves [X, M(g)] = 0 for all generators as one exact
sparse linear system, order-by-order in lambda, for X restricted to a
degree filtration; boundary columns are excluded from the equation set so
truncation cannot manufacture spurious commutant elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .coeffs import Chart, GaussPoly, MultiObservable
from .gns import (ConvexFunctional, DeltaFunctional, FockVector, Functional,
                  GnsVector, KMSFunctional, ModelMismatch,
                  SchrodingerFunctional, SupportDescriptor, TraceFunctional,
                  WaveFunction, bargmann_fock_apply, basis_observables,
                  schrodinger_apply, support_of_vector)
from .linalg import SparseEliminator, nullspace, rank_of_vectors
from .scalars import DEFAULT_EPS, Scalar
from .series import LambdaSeries
from .star import StarAlgebra, multi_indices


class NoKnownAdjoint(TypeError):
    pass


class DegenerateTruncation(ValueError):
    """Boundary exclusion removed every usable equation or unknown."""


class NotARightMultiplication(ValueError):
    pass


# ---------------------------------------------------------------------------
# operator expressions
# ---------------------------------------------------------------------------

class OperatorExpr:
    """Base node; immutable."""

    def __mul__(self, other: "OperatorExpr") -> "OperatorExpr":
        return Compose((self, other))

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        return Sum((self, other))

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        minus_one = LambdaSeries({0: Scalar(-1)}, 0)
        return Sum((self, Compose((Scale(minus_one), other))))


@dataclass(frozen=True)
class Id(OperatorExpr):
    pass


@dataclass(frozen=True)
class LeftMul(OperatorExpr):
    f: MultiObservable


@dataclass(frozen=True)
class RightMul(OperatorExpr):
    f: MultiObservable


@dataclass(frozen=True)
class Scale(OperatorExpr):
    """Multiplication by a lambda-scalar (Laurent exponents allowed)."""

    s: LambdaSeries

    def __post_init__(self):
        pass


@dataclass(frozen=True)
class Sum(OperatorExpr):
    terms: tuple


@dataclass(frozen=True)
class Compose(OperatorExpr):
    """factors[0] after factors[1] after ... (left factor applied last)."""

    factors: tuple


@dataclass(frozen=True)
class ComponentProject(OperatorExpr):
    comps: frozenset


@dataclass(frozen=True)
class ComponentPermute(OperatorExpr):
    perm: tuple


@dataclass(frozen=True)
class DiffOp(OperatorExpr):
    """sum_alpha c_alpha(x) d^alpha on a model's coordinate functions.

    space: 'observable' (chart variables), 'wave' (configuration), or
    'fock' (antiholomorphic symbols).  Coefficients are lambda-series of
    polynomials over the matching variable tuple.  An adjoint may be
    declared; none is derived.
    """

    space: str
    terms: tuple  # tuple of (multi-index, LambdaSeries of GaussPoly)
    declared_adjoint: "OperatorExpr | None" = None

    @staticmethod
    def build(space: str, table: dict, adjoint: "OperatorExpr | None" = None) -> "DiffOp":
        return DiffOp(space, tuple(sorted(table.items())), adjoint)


@dataclass(frozen=True)
class Adjoint(OperatorExpr):
    inner: OperatorExpr


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------

def _diffop_on_series(op: DiffOp, series: LambdaSeries,
                      names: Sequence[str]) -> LambdaSeries:
    acc = LambdaSeries.zero(series.trunc)
    for multi, coeff in op.terms:
        d = series
        for idx, k in enumerate(multi):
            for _ in range(k):
                d = d.map_coeffs(lambda g: g.derive(names[idx]))
        acc = acc + coeff * d
    return acc


def _apply_observable(A: OperatorExpr, x: MultiObservable,
                      algebra: StarAlgebra) -> MultiObservable:
    if isinstance(A, Id):
        return x
    if isinstance(A, LeftMul):
        return algebra.mul(A.f, x)
    if isinstance(A, RightMul):
        return algebra.mul(x, A.f)
    if isinstance(A, Scale):
        s = A.s if A.s.trunc == x.trunc else A.s.retrunc(x.trunc)
        return x.scale_lambda(s)
    if isinstance(A, Sum):
        out = MultiObservable.zero(x.chart, x.trunc)
        for t in A.terms:
            out = out + _apply_observable(t, x, algebra)
        return out
    if isinstance(A, Compose):
        out = x
        for f_ in reversed(A.factors):
            out = _apply_observable(f_, out, algebra)
        return out
    if isinstance(A, ComponentProject):
        return x.restrict(A.comps)
    if isinstance(A, ComponentPermute):
        return x.permute_components(A.perm)
    if isinstance(A, DiffOp):
        if A.space != "observable":
            raise ModelMismatch(f"differential operator on {A.space!r} space "
                                "applied to an observable")
        return x.map_parts(lambda p: _diffop_on_series(A, p, x.chart.variables))
    raise ModelMismatch(f"cannot apply {type(A).__name__} to an observable")


def _apply_fock(A: OperatorExpr, v: FockVector,
                omega: DeltaFunctional) -> FockVector:
    if isinstance(A, Id):
        return v
    if isinstance(A, LeftMul):
        return bargmann_fock_apply(omega, A.f, v)
    if isinstance(A, Scale):
        s = A.s if A.s.trunc == v.trunc else A.s.retrunc(v.trunc)
        return v.scale_lambda(s)
    if isinstance(A, Sum):
        out = FockVector.zero(v.n, v.trunc)
        for t in A.terms:
            out = out + _apply_fock(t, v, omega)
        return out
    if isinstance(A, Compose):
        out = v
        for f_ in reversed(A.factors):
            out = _apply_fock(f_, out, omega)
        return out
    if isinstance(A, DiffOp):
        if A.space != "fock":
            raise ModelMismatch("wrong space for the symbol model")
        names = tuple(f"ybar{k}" for k in range(1, v.n + 1))
        acc = FockVector.zero(v.n, v.trunc)
        for multi, coeff in A.terms:
            d = v
            for idx, k in enumerate(multi):
                for _ in range(k):
                    d = d.derive(idx)
            for mono, poly_coeff in _poly_terms(coeff):
                acc = acc + d.mul_monomial(mono).scale_lambda(poly_coeff)
        return acc
    raise ModelMismatch(f"cannot apply {type(A).__name__} on the symbol model")


def _poly_terms(coeff: LambdaSeries) -> list[tuple[tuple[int, ...], LambdaSeries]]:
    """Regroup a series of polynomials as monomial -> lambda-scalar."""
    table: dict[tuple[int, ...], dict[int, Scalar]] = {}
    for e, g in coeff.coeffs.items():
        if g.gamma != 0:
            raise ModelMismatch("symbol-model coefficients must be weightless")
        for mono, c in g.terms.items():
            table.setdefault(mono, {})[e] = c
    return [(mono, LambdaSeries(entry, coeff.trunc))
            for mono, entry in table.items()]


def _apply_wave(A: OperatorExpr, u: WaveFunction,
                omega: SchrodingerFunctional) -> WaveFunction:
    if isinstance(A, Id):
        return u
    if isinstance(A, LeftMul):
        return schrodinger_apply(omega, A.f, u)
    if isinstance(A, Scale):
        parts = []
        s = A.s if A.s.trunc == u.trunc else A.s.retrunc(u.trunc)
        for p in u.parts:
            acc: dict[int, GaussPoly] = {}
            for e1, g in p.coeffs.items():
                for e2, c in s.coeffs.items():
                    e = e1 + e2
                    if e > u.trunc:
                        continue
                    t = g.scale(c)
                    acc[e] = acc[e] + t if e in acc else t
            parts.append(LambdaSeries(acc, u.trunc))
        return WaveFunction(u.chart, parts, u.trunc)
    if isinstance(A, Sum):
        out = WaveFunction.zero(u.chart, u.trunc)
        for t in A.terms:
            out = out + _apply_wave(t, u, omega)
        return out
    if isinstance(A, Compose):
        out = u
        for f_ in reversed(A.factors):
            out = _apply_wave(f_, out, omega)
        return out
    if isinstance(A, ComponentProject):
        parts = [p if i in A.comps else LambdaSeries.zero(u.trunc)
                 for i, p in enumerate(u.parts)]
        return WaveFunction(u.chart, parts, u.trunc)
    if isinstance(A, DiffOp):
        if A.space != "wave":
            raise ModelMismatch("wrong space for the wave-function model")
        names = u.chart.config_variables()
        return WaveFunction(
            u.chart, [_diffop_on_series(A, p, names) for p in u.parts],
            u.trunc)
    raise ModelMismatch(f"cannot apply {type(A).__name__} on wave functions")


def apply_op(A: OperatorExpr, psi: GnsVector) -> GnsVector:
    """Action on GNS vectors through representatives."""
    om = psi.functional
    if isinstance(A, Adjoint):
        return apply_op(adjoint(A.inner, om), psi)
    if isinstance(A, RightMul) and om.tag in ("delta", "schrodinger"):
        raise ModelMismatch(
            "right multiplication is not well defined modulo this ideal")
    rep = _apply_observable(A, psi.rep, om.algebra)
    return GnsVector(om, rep)


# ---------------------------------------------------------------------------
# adjoints
# ---------------------------------------------------------------------------

def adjoint(A: OperatorExpr, omega: Functional) -> OperatorExpr:
    """Hermitian adjoint with respect to the functional's inner product."""
    if isinstance(A, Id):
        return A
    if isinstance(A, Adjoint):
        return A.inner
    if isinstance(A, Scale):
        return Scale(A.s.conj())
    if isinstance(A, Sum):
        return Sum(tuple(adjoint(t, omega) for t in A.terms))
    if isinstance(A, Compose):
        return Compose(tuple(adjoint(t, omega) for t in reversed(A.factors)))
    if isinstance(A, ComponentProject):
        return A
    if isinstance(A, LeftMul):
        return LeftMul(A.f.conj())
    if isinstance(A, RightMul):
        if omega.tag == "trace" or (
                omega.tag == "convex"
                and all(w.tag == "trace" for _a, w in omega.summands)):
            return RightMul(A.f.conj())
        if omega.tag == "kms":
            alg = omega.algebra
            g = alg.mul(alg.mul(omega.weight(-1), A.f.conj()), omega.weight(1))
            return RightMul(g)
        raise NoKnownAdjoint(
            f"no adjoint rule for right multiplication on {omega.tag!r}")
    if isinstance(A, DiffOp):
        if A.declared_adjoint is not None:
            return A.declared_adjoint
        raise NoKnownAdjoint("differential operator without declared adjoint")
    raise NoKnownAdjoint(f"no adjoint rule for {type(A).__name__}")


def adjoint_relation_check(A: OperatorExpr, omega: Functional,
                           degree: int = 2, gamma: Fraction | int = 1,
                           eps: float = DEFAULT_EPS) -> bool:
    """<A* psi, phi> = <psi, A phi> over the weighted monomial basis."""
    Astar = adjoint(A, omega)
    basis = [GnsVector(omega, b)
             for b in basis_observables(omega.algebra, degree, gamma)]
    for psi in basis:
        for phi in basis:
            lhs = apply_op(Astar, psi).inner(phi)
            rhs = psi.inner(apply_op(A, phi))
            diff = lhs - rhs
            if any(not v.is_zero(eps) for v in diff.coeffs.values()):
                return False
    return True


# ---------------------------------------------------------------------------
# locality
# ---------------------------------------------------------------------------

def is_local(A: OperatorExpr, omega: Functional, degree: int = 2) -> bool:
    """supp(A psi) inside supp(psi) for every basis vector."""
    for b in basis_observables(omega.algebra, degree):
        psi = GnsVector(omega, b)
        if not support_of_vector(apply_op(A, psi)).leq(support_of_vector(psi)):
            return False
    return True


def adjoint_locality_check(A: OperatorExpr, omega: Functional,
                           degree: int = 2) -> bool:
    if not is_local(A, omega, degree):
        return True
    return is_local(adjoint(A, omega), omega, degree)


# ---------------------------------------------------------------------------
# model bases and matrixization
# ---------------------------------------------------------------------------

@dataclass
class TruncatedMatrix:
    """lambda-scalar matrix of an operator on an ordered monomial basis."""

    labels: tuple
    entries: dict  # (i, j) -> LambdaSeries
    flagged_columns: frozenset
    trunc: int

    def entry(self, i: int, j: int) -> LambdaSeries:
        hit = self.entries.get((i, j))
        if hit is None:
            return LambdaSeries.zero(self.trunc)
        return hit

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedMatrix):
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self.entry(*k) == other.entry(*k) for k in keys)


class Model:
    """A GNS model with a matrixizable truncated basis."""

    def __init__(self, omega: Functional, degree: int):
        self.omega = omega
        self.degree = degree
        tag = omega.tag
        if tag == "delta":
            self.space = "fock"
        elif tag == "schrodinger":
            self.space = "wave"
        elif tag in ("trace", "kms", "convex"):
            self.space = "observable"
        else:
            raise ModelMismatch(f"no matrix model for {tag!r}")
        self.labels, self._vectors = self._build_basis()
        self.index = {lab: k for k, lab in enumerate(self.labels)}

    # -- basis ------------------------------------------------------------
    def _build_basis(self):
        om, d = self.omega, self.degree
        trunc = om.trunc
        labels: list = []
        vectors: list = []
        if self.space == "fock":
            n = om.chart.n
            for total in range(d + 1):
                for mono in multi_indices(n, total):
                    labels.append(mono)
                    vectors.append(FockVector.monomial(n, mono, trunc))
        elif self.space == "wave":
            chart = om.chart
            names = chart.config_variables()
            for comp in om.comps:
                for total in range(d + 1):
                    for mono in multi_indices(len(names), total):
                        labels.append((comp, mono))
                        g = GaussPoly(names, {mono: Scalar(1)})
                        parts = [LambdaSeries.zero(trunc)
                                 for _ in range(chart.components)]
                        parts[comp] = LambdaSeries({0: g}, trunc)
                        vectors.append(WaveFunction(chart, parts, trunc))
        else:
            chart = om.chart
            names = chart.variables
            comps = sorted(om.support().component_set())
            wick = chart.kind == "wick"
            for comp in comps:
                for total in range(d + 1):
                    for mono in multi_indices(len(names), total):
                        labels.append((comp, mono))
                        g = GaussPoly(names, {mono: Scalar(1)}, wick_pairs=wick)
                        vectors.append(MultiObservable.from_part(
                            chart, trunc, comp, LambdaSeries({0: g}, trunc)))
        return tuple(labels), tuple(vectors)

    def basis_vector(self, k: int):
        return self._vectors[k]

    def label_degree(self, label) -> int:
        mono = label if self.space == "fock" else label[1]
        return sum(mono)

    # -- application and coordinates ---------------------------------------
    def apply(self, A: OperatorExpr, v):
        if self.space == "fock":
            return _apply_fock(A, v, self.omega)  # type: ignore[arg-type]
        if self.space == "wave":
            return _apply_wave(A, v, self.omega)  # type: ignore[arg-type]
        return _apply_observable(A, v, self.omega.algebra)

    def coords(self, v) -> tuple[dict, bool]:
        """(label -> lambda-scalar) plus an escaped-content flag."""
        out: dict = {}
        flagged = False
        trunc = self.omega.trunc

        def put(label, e, c: Scalar):
            nonlocal flagged
            if label not in self.index:
                flagged = True
                return
            series = out.setdefault(label, {})
            cur = series.get(e, Scalar(0)) + c
            if cur.is_zero():
                series.pop(e, None)
            else:
                series[e] = cur

        if self.space == "fock":
            for mono, coeff in v.terms.items():
                for e, c in coeff.coeffs.items():
                    put(mono, e, c)
        elif self.space == "wave":
            for comp, p in enumerate(v.parts):
                for e, g in p.coeffs.items():
                    if g.gamma != 0 and not g.is_zero():
                        flagged = True
                        continue
                    for mono, c in g.terms.items():
                        put((comp, mono), e, c)
        else:
            for comp, p in enumerate(v.parts):
                for e, g in p.coeffs.items():
                    if g.gamma != 0 and not g.is_zero():
                        flagged = True
                        continue
                    for mono, c in g.terms.items():
                        put((comp, mono), e, c)
        return ({lab: LambdaSeries(series, trunc)
                 for lab, series in out.items() if series}, flagged)

    def matrixize(self, A: OperatorExpr) -> TruncatedMatrix:
        entries: dict = {}
        flagged = set()
        for j, lab in enumerate(self.labels):
            img = self.apply(A, self._vectors[j])
            coords, esc = self.coords(img)
            if esc:
                flagged.add(j)
            for lab_i, series in coords.items():
                entries[(self.index[lab_i], j)] = series
        return TruncatedMatrix(self.labels, entries, frozenset(flagged),
                               self.omega.trunc)


# ---------------------------------------------------------------------------
# commutant probe
# ---------------------------------------------------------------------------

@dataclass
class CommutantReport:
    dimension: int
    order0_dimension: int
    lift_dimensions: list[int]
    basis: list[dict]            # (i, j, r) -> Scalar
    excluded_columns: dict       # generator index -> set of column indices
    labels: tuple
    unconstrained_entries: int = 0

    def basis_matrices(self, trunc: int) -> list[TruncatedMatrix]:
        out = []
        for vec in self.basis:
            entries: dict = {}
            for (i, j, r), c in vec.items():
                entries.setdefault((i, j), {})[r] = c
            out.append(TruncatedMatrix(
                self.labels,
                {k: LambdaSeries(v, trunc) for k, v in entries.items()},
                frozenset(), trunc))
        return out


def _matrix_degree_raise(model: Model, mat: TruncatedMatrix) -> int:
    raise_ = 0
    for (i, j), series in mat.entries.items():
        if series.is_zero():
            continue
        raise_ = max(raise_, model.label_degree(model.labels[i])
                     - model.label_degree(model.labels[j]))
    return raise_


def commutant_probe(generators: Sequence[OperatorExpr], omega: Functional,
                    degree: int, raise_budget: int = 0,
                    x_trunc: int | None = None) -> CommutantReport:
    """Dimension and basis of {X : [X, M(g)] = 0 for all g} on the window.

    X ranges over matrices respecting the degree filtration (an entry may
    raise the degree by at most `raise_budget`) with lambda-orders
    0..x_trunc.  Equations are only formed at columns where both sides of
    the commutator stay inside the basis; everything else is excluded and
    reported.
    """
    model = Model(omega, degree)
    n_basis = len(model.labels)
    if n_basis == 0:
        raise DegenerateTruncation("empty basis")
    N = omega.trunc if x_trunc is None else x_trunc

    mats = [model.matrixize(g) for g in generators]
    raises = [_matrix_degree_raise(model, m) for m in mats]

    degs = [model.label_degree(lab) for lab in model.labels]
    unknowns = [(i, j, r)
                for i in range(n_basis) for j in range(n_basis)
                if degs[i] <= degs[j] + raise_budget
                for r in range(N + 1)]
    unknown_set = set(unknowns)

    # generator matrices as dicts j -> list of (i, order, coeff)
    packed = []
    for mat in mats:
        cols: dict[int, list[tuple[int, int, Scalar]]] = {}
        for (i, j), series in mat.entries.items():
            for s, c in series.coeffs.items():
                cols.setdefault(j, []).append((i, s, c))
        packed.append(cols)

    excluded: dict[int, set[int]] = {}
    rows: list[dict] = []
    usable = 0
    for gi, (mat, cols, rho) in enumerate(zip(mats, packed, raises)):
        excl = set(mat.flagged_columns)
        for j in range(n_basis):
            if j in mat.flagged_columns:
                continue
            if degs[j] + rho + raise_budget > degree:
                excl.add(j)
                continue
            usable += 1
            # equations: for each output row i and lambda-order e:
            #   sum_{k} sum_{r+s=e} X[i,k,r] M[k,j,s] - M[i,k,s] X[k,j,r] = 0
            eq: dict[tuple[int, int], dict] = {}

            def acc(i: int, e: int, key, c: Scalar):
                if e > N:
                    return
                row = eq.setdefault((i, e), {})
                cur = row.get(key, Scalar(0)) + c
                if cur.is_zero():
                    row.pop(key, None)
                else:
                    row[key] = cur

            for (i2, s, c) in cols.get(j, []):
                # X[i, i2, r] * M[i2, j, s] contributes to row (i, r+s)
                for i in range(n_basis):
                    if degs[i] > degs[i2] + raise_budget:
                        continue
                    for r in range(N + 1 - s if s <= N else 0):
                        acc(i, r + s, (i, i2, r), c)
            # M[i, k, s] * X[k, j, r] contributes with a minus sign
            for (i, k), series in mat.entries.items():
                if degs[k] > degs[j] + raise_budget:
                    continue
                for s, c in series.coeffs.items():
                    for r in range(N + 1 - s if s <= N else 0):
                        acc(i, r + s, (k, j, r), -c)
            rows.extend(r for r in eq.values() if r)
        excluded[gi] = excl
    if usable == 0:
        raise DegenerateTruncation(
            "boundary exclusion removed every probe column")

    # drop references to unknowns outside the filtration (defensive)
    clean_rows = []
    for row in rows:
        clean = {k: v for k, v in row.items() if k in unknown_set}
        if clean:
            clean_rows.append(clean)

    # entries the equations never touch are boundary artifacts: excluding
    # them keeps truncation from inflating the dimension
    constrained = set()
    for row in clean_rows:
        constrained.update(row)
    unconstrained = len(unknown_set) - len(constrained)
    live_unknowns = [u for u in unknowns if u in constrained]
    if not live_unknowns:
        raise DegenerateTruncation(
            "boundary exclusion removed every unknown")

    null = nullspace(clean_rows, live_unknowns)

    def proj_rank(vectors: list[dict]) -> int:
        projected = []
        for v in vectors:
            pv = {(i, j): c for (i, j, r), c in v.items() if r == 0}
            if pv:
                projected.append(pv)
        return rank_of_vectors(projected)

    lift_dims = []
    for e in range(N + 1):
        sub_unknowns = [(i, j, r) for (i, j, r) in live_unknowns if r <= e]
        sub_rows = []
        for row in clean_rows:
            max_order = max(r for (_i, _j, r) in row)
            if max_order <= e:
                sub_rows.append(row)
        sub_null = nullspace(sub_rows, sub_unknowns)
        lift_dims.append(proj_rank(sub_null))

    dimension = proj_rank(null)
    return CommutantReport(dimension=dimension,
                           order0_dimension=lift_dims[0],
                           lift_dimensions=lift_dims,
                           basis=null,
                           excluded_columns=excluded,
                           labels=model.labels,
                           unconstrained_entries=unconstrained)


# ---------------------------------------------------------------------------
# unitary equivalence of thermal functionals
# ---------------------------------------------------------------------------

def kms_equivalence(om1: KMSFunctional, om2: KMSFunctional,
                    verify: bool = True, degree: int = 1,
                    eps: float = DEFAULT_EPS) -> OperatorExpr:
    """The intertwining unitary psi_f -> psi_{f * Exp(-b/2 H) * Exp(b'/2 H')}."""
    alg = om1.algebra
    u = alg.mul(om1.weight(Fraction(-1, 2)), om2.weight(Fraction(1, 2)))
    U = RightMul(u)
    if verify:
        basis = basis_observables(alg, degree, gamma=1)
        vecs1 = [GnsVector(om1, b) for b in basis]
        for a in vecs1:
            ua = _apply_observable(U, a.rep, alg)
            for b in vecs1:
                ub = _apply_observable(U, b.rep, alg)
                lhs = om2.inner(ua, ub)
                rhs = om1.inner(a.rep, b.rep)
                diff = lhs - rhs
                if any(not v.is_zero(eps) for v in diff.coeffs.values()):
                    raise AssertionError("equivalence map failed isometry")
        probe = basis[min(1, len(basis) - 1)]
        lhs = _apply_observable(Compose((U, LeftMul(probe))), basis[0], alg)
        rhs = _apply_observable(Compose((LeftMul(probe), U)), basis[0], alg)
        if lhs != rhs:
            raise AssertionError("equivalence map failed to intertwine")
    return U
