"""Truncated formal series in the deformation parameter `lam`.

All algebra in this package happens order-by-order inside a fixed window of
exponents e <= trunc; products silently discard anything above the window.
Exponents may be negative (Laurent range), the window only bounds above.
Coefficients live in any ring exposing `+`, `-`, `*`, `.conj()`,
`.is_zero()`; scalars, Gaussian-weighted polynomials, and evaluation values
all qualify.

The lambda-adic order o(f) is the smallest exponent carrying a nonzero
coefficient (+infinity for 0), the absolute value is 2**(-o(f)), and
d(f, g) = |f - g| is an ultrametric.  Series over real rationals are
ordered by the sign of the lowest coefficient.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Generic, Iterable, TypeVar

from .scalars import Scalar

C = TypeVar("C")

INF = math.inf


class TruncationMismatch(ValueError):
    """Binary operation on series with different truncation windows."""


class LambdaSeries(Generic[C]):
    """Sparse Laurent polynomial in lam with window e <= trunc."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: dict[int, C], trunc: int, *, _clean: bool = False):
        if _clean:
            self.coeffs = coeffs
        else:
            self.coeffs = {e: c for e, c in coeffs.items()
                           if e <= trunc and not c.is_zero()}
        self.trunc = trunc

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(trunc: int) -> "LambdaSeries[C]":
        return LambdaSeries({}, trunc, _clean=True)

    @staticmethod
    def single(exponent: int, coeff: C, trunc: int) -> "LambdaSeries[C]":
        return LambdaSeries({exponent: coeff}, trunc)

    # -- structure ------------------------------------------------------
    def order(self) -> int | float:
        """Smallest exponent with a nonzero coefficient; +inf for 0."""
        if not self.coeffs:
            return INF
        return min(self.coeffs)

    def abs_lambda(self) -> Fraction:
        o = self.order()
        if o is INF:
            return Fraction(0)
        return Fraction(1, 2) ** int(o)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int, zero: C) -> C:
        return self.coeffs.get(e, zero)

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def _check(self, other: "LambdaSeries[C]") -> None:
        if self.trunc != other.trunc:
            raise TruncationMismatch(
                f"windows differ: {self.trunc} vs {other.trunc}")

    # -- ring operations -------------------------------------------------
    def __add__(self, other: "LambdaSeries[C]") -> "LambdaSeries[C]":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            if e in out:
                s = out[e] + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return LambdaSeries(out, self.trunc, _clean=True)

    def __sub__(self, other: "LambdaSeries[C]") -> "LambdaSeries[C]":
        return self + (-other)

    def __neg__(self) -> "LambdaSeries[C]":
        return LambdaSeries({e: -c for e, c in self.coeffs.items()},
                            self.trunc, _clean=True)

    def __mul__(self, other: "LambdaSeries") -> "LambdaSeries":
        """Cauchy product, discarding exponents above the window."""
        self._check(other)
        out: dict[int, C] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e > self.trunc:
                    continue
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return LambdaSeries(out, self.trunc)

    def map_coeffs(self, fn: Callable[[C], object]) -> "LambdaSeries":
        return LambdaSeries({e: fn(c) for e, c in self.coeffs.items()}, self.trunc)

    def scale(self, s) -> "LambdaSeries[C]":
        """Multiply every coefficient by a ring element (no exponent shift)."""
        return self.map_coeffs(lambda c: c * s)

    def shift(self, k: int) -> "LambdaSeries[C]":
        """Multiply by lam**k inside the same window (top spills discarded)."""
        return LambdaSeries({e + k: c for e, c in self.coeffs.items()},
                            self.trunc)

    def conj(self) -> "LambdaSeries[C]":
        """Complex conjugation; lam itself is real."""
        return LambdaSeries({e: c.conj() for e, c in self.coeffs.items()},
                            self.trunc, _clean=True)

    def retrunc(self, new_trunc: int) -> "LambdaSeries[C]":
        """Move to another window; widening adds no information."""
        return LambdaSeries({e: c for e, c in self.coeffs.items()
                             if e <= new_trunc}, new_trunc, _clean=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LambdaSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("LambdaSeries is mutable-dict backed; unhashable")

    def __repr__(self) -> str:
        terms = ", ".join(f"{e}: {c!r}" for e, c in sorted(self.coeffs.items()))
        return f"LambdaSeries({{{terms}}}, trunc={self.trunc})"


# ---------------------------------------------------------------------------
# scalar series (coefficients in the exact complex rationals)
# ---------------------------------------------------------------------------

ScalarSeries = LambdaSeries  # alias used for readability in signatures


def scalar_series(terms: dict[int, Scalar | int | Fraction], trunc: int) -> LambdaSeries[Scalar]:
    return LambdaSeries({e: Scalar.of(c) for e, c in terms.items()}, trunc)


def const_series(c: Scalar | int | Fraction, trunc: int) -> LambdaSeries[Scalar]:
    return scalar_series({0: c}, trunc)


def lam_series(trunc: int) -> LambdaSeries[Scalar]:
    return scalar_series({1: 1}, trunc)


def ultrametric_distance(f: LambdaSeries, g: LambdaSeries) -> Fraction:
    f._check(g)
    return (f - g).abs_lambda()


def ordered_sign(a: LambdaSeries[Scalar]) -> int:
    """Sign of the lowest nonzero coefficient of a real-coefficient series.

    Exactly one of a > 0, a = 0, a < 0 holds; positives are closed under
    addition and multiplication, which makes the series ring ordered.
    """
    if a.is_zero():
        return 0
    o = min(a.coeffs)
    low = a.coeffs[o]
    if not low.is_real():
        raise ValueError("ordered sign needs real coefficients")
    return 1 if low.re > 0 else -1


def ordered_is_positive(a: LambdaSeries[Scalar]) -> bool:
    return ordered_sign(a) > 0


# ---------------------------------------------------------------------------
# rational-exponent demonstration series and admissibility classes
# ---------------------------------------------------------------------------

class ExponentTail:
    """Closed-form description of an infinite tail of exponents.

    kind "arith": start, start+step, start+2*step, ...  (step != 0)
    kind "accumulating": a strictly monotone sequence approaching `limit`
    (e.g. limit - 1/n), which always has an accumulation point.
    """

    __slots__ = ("kind", "start", "step", "limit")

    def __init__(self, kind: str, start: Fraction | None = None,
                 step: Fraction | None = None, limit: Fraction | None = None):
        if kind not in ("arith", "accumulating"):
            raise ValueError(f"unknown tail kind {kind!r}")
        self.kind = kind
        self.start = Fraction(start) if start is not None else None
        self.step = Fraction(step) if step is not None else None
        self.limit = Fraction(limit) if limit is not None else None

    @staticmethod
    def arithmetic(start, step) -> "ExponentTail":
        if Fraction(step) == 0:
            raise ValueError("arithmetic tail needs a nonzero step")
        return ExponentTail("arith", start=start, step=step)

    @staticmethod
    def accumulating(limit) -> "ExponentTail":
        return ExponentTail("accumulating", limit=limit)


def admissibility_check(exponents: Iterable[Fraction | int],
                        tail: ExponentTail | None = None) -> str:
    """Classify an exponent set as 'L', 'NP', 'CNP', or 'inadmissible'.

    L: all exponents integers (and bounded below).  NP: some positive
    integer N clears all denominators.  CNP: a minimum exists and the set
    has no accumulation point.  The set is given as a finite part plus an
    optional closed-form infinite tail.
    """
    finite = [Fraction(e) for e in exponents]
    if tail is not None:
        if tail.kind == "accumulating":
            return "inadmissible"
        assert tail.start is not None and tail.step is not None
        if tail.step < 0:
            return "inadmissible"  # descending progression: no minimum
        probe = [tail.start, tail.start + tail.step]
        all_vals = finite + probe
        denominators = {e.denominator for e in finite}
        denominators.add(tail.start.denominator)
        denominators.add(tail.step.denominator)
    else:
        if not finite:
            return "L"  # empty support: the zero series is everywhere
        all_vals = finite
        denominators = {e.denominator for e in finite}

    if all(d == 1 for d in denominators):
        return "L"
    if tail is None:
        lcm = 1
        for d in denominators:
            lcm = lcm * d // math.gcd(lcm, d)
        return "NP" if lcm >= 1 else "CNP"
    # arithmetic tails have bounded denominators too
    return "NP"


def np_clearing_factor(exponents: Iterable[Fraction | int],
                       tail: ExponentTail | None = None) -> int:
    """Smallest N >= 1 with N*e integral for every exponent."""
    dens = [Fraction(e).denominator for e in exponents]
    if tail is not None and tail.kind == "arith":
        dens += [tail.start.denominator, tail.step.denominator]  # type: ignore[union-attr]
    lcm = 1
    for d in dens:
        lcm = lcm * d // math.gcd(lcm, d)
    return lcm


class QSeries(Generic[C]):
    """Series with rational exponents, kept only as an admissibility demo.

    No arithmetic is provided: the workbench does all its algebra in the
    integer-exponent window type above.
    """

    __slots__ = ("coeffs", "tail", "cls")

    def __init__(self, coeffs: dict[Fraction, C],
                 tail: ExponentTail | None = None):
        self.coeffs = {Fraction(e): c for e, c in coeffs.items()
                       if not c.is_zero()}
        self.tail = tail
        self.cls = admissibility_check(self.coeffs.keys(), tail)

    def order(self) -> Fraction | float:
        if self.cls == "inadmissible":
            raise ValueError("no order: exponent set is not admissible")
        candidates = list(self.coeffs.keys())
        if self.tail is not None and self.tail.kind == "arith":
            candidates.append(self.tail.start)  # ascending tail
        if not candidates:
            return INF
        return min(candidates)
