"""Exact complex-rational scalars and the mixed exact/float value domain.

`Scalar` is the coefficient field for all symbolic computations: Gaussian
rationals a + b*i with `fractions.Fraction` components, no rounding ever.

`Value` holds results of evaluating positive functionals.  Closed-form
Gaussian integration over an even number of variables produces exact
rational multiples of integer powers of pi; odd variable counts leave an
unpaired sqrt(pi) and demote the result to a complex float.  Arithmetic
between two exact values stays exact, anything touching a float is float.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Union

RatLike = Union[int, Fraction]

#: default tolerance for comparisons on the float path
DEFAULT_EPS = 1e-12


class Scalar:
    """Exact complex rational a + b*i."""

    __slots__ = ("re", "im")

    def __init__(self, re: RatLike = 0, im: RatLike = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- constructors ---------------------------------------------------
    @staticmethod
    def of(x: "Scalar | RatLike") -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar(x)

    # -- ring operations ------------------------------------------------
    def __add__(self, other: "Scalar | RatLike") -> "Scalar":
        o = Scalar.of(other)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: "Scalar | RatLike") -> "Scalar":
        o = Scalar.of(other)
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: "Scalar | RatLike") -> "Scalar":
        return Scalar.of(other) - self

    def __mul__(self, other: "Scalar | RatLike") -> "Scalar":
        o = Scalar.of(other)
        return Scalar(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __truediv__(self, other: "Scalar | RatLike") -> "Scalar":
        o = Scalar.of(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar((self.re * o.re + self.im * o.im) / n,
                      (self.im * o.re - self.re * o.im) / n)

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            raise ValueError("negative Scalar powers unsupported")
        out = Scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"Scalar({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        return render_scalar(self)


ONE = Scalar(1)
ZERO = Scalar(0)
I = Scalar(0, 1)


def _render_rat(x: Fraction) -> str:
    return str(x)


def render_scalar(s: Scalar) -> str:
    """Canonical text form: `3/2`, `i`, `-1/2i`, `3/2+1/2i`, `0`."""
    if s.im == 0:
        return _render_rat(s.re)
    if s.re == 0:
        if s.im == 1:
            return "i"
        if s.im == -1:
            return "-i"
        return f"{_render_rat(s.im)}i"
    im_part = "i" if s.im == 1 else ("-i" if s.im == -1 else f"{_render_rat(abs(s.im))}i")
    sign = "+" if s.im > 0 else "-"
    if s.im in (1, -1):
        return f"{_render_rat(s.re)}{sign}i"
    return f"{_render_rat(s.re)}{sign}{im_part}"


class Value:
    """Tagged exact-or-float value.

    Exact payload: polynomial in pi with Scalar coefficients, stored as a
    sparse dict {power: Scalar}.  Float payload: a complex double.
    """

    __slots__ = ("exact", "flt")

    def __init__(self, exact: dict[int, Scalar] | None, flt: complex | None):
        self.exact = exact
        self.flt = flt

    # -- constructors ---------------------------------------------------
    @staticmethod
    def exact_scalar(s: Scalar | RatLike) -> "Value":
        s = Scalar.of(s)
        return Value({} if s.is_zero() else {0: s}, None)

    @staticmethod
    def exact_pi(power: int, coeff: Scalar | RatLike) -> "Value":
        c = Scalar.of(coeff)
        return Value({} if c.is_zero() else {power: c}, None)

    @staticmethod
    def from_float(z: complex) -> "Value":
        return Value(None, complex(z))

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def as_complex(self) -> complex:
        if self.exact is not None:
            return sum((complex(c) * math.pi ** k for k, c in self.exact.items()),
                       complex(0))
        return self.flt  # type: ignore[return-value]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "Value") -> "Value":
        if self.exact is not None and other.exact is not None:
            out = dict(self.exact)
            for k, c in other.exact.items():
                s = out.get(k, ZERO) + c
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
            return Value(out, None)
        return Value.from_float(self.as_complex() + other.as_complex())

    def __sub__(self, other: "Value") -> "Value":
        return self + (-other)

    def __neg__(self) -> "Value":
        if self.exact is not None:
            return Value({k: -c for k, c in self.exact.items()}, None)
        return Value.from_float(-self.flt)  # type: ignore[operator]

    def __mul__(self, other: "Value") -> "Value":
        if self.exact is not None and other.exact is not None:
            out: dict[int, Scalar] = {}
            for k1, c1 in self.exact.items():
                for k2, c2 in other.exact.items():
                    p = c1 * c2
                    s = out.get(k1 + k2, ZERO) + p
                    if s.is_zero():
                        out.pop(k1 + k2, None)
                    else:
                        out[k1 + k2] = s
            return Value(out, None)
        return Value.from_float(self.as_complex() * other.as_complex())

    def scale(self, s: Scalar) -> "Value":
        return self * Value.exact_scalar(s)

    def conj(self) -> "Value":
        if self.exact is not None:
            return Value({k: c.conj() for k, c in self.exact.items()}, None)
        return Value.from_float(self.flt.conjugate())  # type: ignore[union-attr]

    def is_zero(self, eps: float = DEFAULT_EPS) -> bool:
        if self.exact is not None:
            return not self.exact
        return abs(self.flt) <= eps  # type: ignore[arg-type]

    def approx_eq(self, other: "Value", eps: float = DEFAULT_EPS) -> bool:
        if self.exact is not None and other.exact is not None:
            return (self - other).exact == {}
        return abs(self.as_complex() - other.as_complex()) <= eps

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Value):
            return NotImplemented
        return self.approx_eq(other)

    def __hash__(self):
        raise TypeError("Value is unhashable (tolerance-based equality)")

    def real_sign(self, eps: float = DEFAULT_EPS) -> int:
        """Sign of the real part; float path uses the tolerance band."""
        if self.exact is not None:
            x = sum(float(c.re) * math.pi ** k for k, c in self.exact.items())
            if not self.exact:
                return 0
            # exact zero handled above; pi powers are linearly independent
            # over Q so a nonzero payload has the sign of its float image
            return 0 if x == 0 else (1 if x > 0 else -1)
        x = self.flt.real  # type: ignore[union-attr]
        if abs(x) <= eps:
            return 0
        return 1 if x > 0 else -1

    def imag_magnitude(self) -> float:
        return abs(self.as_complex().imag)

    def __repr__(self) -> str:
        return f"Value({self.render()})"

    def render(self) -> str:
        if self.exact is None:
            z = self.flt
            if z.imag == 0:  # type: ignore[union-attr]
                return repr(z.real)  # type: ignore[union-attr]
            return repr(z)
        if not self.exact:
            return "0"
        parts = []
        for k in sorted(self.exact):
            c = self.exact[k]
            cs = render_scalar(c)
            if k == 0:
                parts.append(cs)
            else:
                pk = "pi" if k == 1 else f"pi^{k}"
                parts.append(pk if cs == "1" else f"{cs}*{pk}")
        return " + ".join(parts)


VALUE_ZERO = Value.exact_scalar(0)


def double_factorial(n: int) -> int:
    """(2m-1)!! for odd n; 1 for n <= 0."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def gaussian_moment(power: int, gamma: Fraction) -> tuple[Fraction, bool]:
    """One-variable moment integral of x^power * exp(-gamma x^2) over R.

    Returns (rational_part, has_sqrt_pi_over_gamma):
      even power 2m: ((2m-1)!!/(2 gamma)^m, True) -- times sqrt(pi/gamma)
      odd power: (0, False)
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive for a convergent moment")
    if power % 2 == 1:
        return Fraction(0), False
    m = power // 2
    return Fraction(double_factorial(2 * m - 1), 1) / (2 * gamma) ** m, True


def sqrt_pi_over_gamma_pack(count: int, gamma: Fraction) -> Value:
    """Value of sqrt(pi/gamma)**count: exact for even count, float otherwise."""
    if count % 2 == 0:
        j = count // 2
        return Value.exact_pi(j, Scalar(Fraction(1) / gamma ** j))
    return Value.from_float(complex(math.sqrt(math.pi / float(gamma)) ** count))
