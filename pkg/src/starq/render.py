"""Canonical text and JSON rendering.

One grammar is shared by input and output: `parse(print(x))` reproduces x.
Scalar series print like `(-3/2+1/2i)*lam^-1 + 2*lam^3` with ascending
exponents; polynomials like `3/2*q1^2*p1 - i*z1*zbar1`, with a trailing
`* gauss(c)` for a Gaussian weight.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .coeffs import GaussPoly, MultiObservable
from .scalars import Scalar, Value, render_scalar
from .series import LambdaSeries

SCHEMA = "starq/1"


def _scalar_factor(s: Scalar) -> tuple[str, bool]:
    """Render a coefficient for use in a product; returns (text, needs_parens)."""
    text = render_scalar(s)
    needs = ("+" in text[1:]) or ("-" in text[1:])
    return text, needs


def render_lambda_scalar(s: LambdaSeries) -> str:
    """Series with Scalar coefficients -> canonical text."""
    if s.is_zero():
        return "0"
    chunks: list[str] = []
    for e in sorted(s.coeffs):
        c = s.coeffs[e]
        text, needs = _scalar_factor(c)
        if e == 0:
            body = f"({text})" if needs else text
        else:
            lam = "lam" if e == 1 else f"lam^{e}"
            if text == "1":
                body = lam
            elif text == "-1":
                body = f"-{lam}"
            else:
                body = f"({text})*{lam}" if needs else f"{text}*{lam}"
        chunks.append(body)
    out = chunks[0]
    for body in chunks[1:]:
        if body.startswith("-"):
            out += f" - {body[1:]}"
        else:
            out += f" + {body}"
    return out


def render_monomial(vars_: tuple[str, ...], mono: tuple[int, ...]) -> str:
    factors = []
    for name, k in zip(vars_, mono):
        if k == 0:
            continue
        factors.append(name if k == 1 else f"{name}^{k}")
    return "*".join(factors)


def render_gausspoly(g: GaussPoly) -> str:
    if g.is_zero():
        return "0"
    items = sorted(g.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    chunks = []
    for mono, c in items:
        mtxt = render_monomial(g.vars, mono)
        ctxt, needs = _scalar_factor(c)
        if not mtxt:
            body = f"({ctxt})" if needs else ctxt
        elif ctxt == "1":
            body = mtxt
        elif ctxt == "-1":
            body = f"-{mtxt}"
        else:
            body = f"({ctxt})*{mtxt}" if needs else f"{ctxt}*{mtxt}"
        chunks.append(body)
    out = chunks[0]
    for body in chunks[1:]:
        if body.startswith("-"):
            out += f" - {body[1:]}"
        else:
            out += f" + {body}"
    if g.gamma != 0:
        wrapped = f"({out})" if (" + " in out or " - " in out) else out
        out = f"{wrapped}*gauss({g.gamma})"
    return out


def render_part(series: LambdaSeries) -> str:
    """Series with GaussPoly coefficients -> canonical text."""
    if series.is_zero():
        return "0"
    chunks = []
    for e in sorted(series.coeffs):
        g = series.coeffs[e]
        gtxt = render_gausspoly(g)
        if e == 0:
            body = gtxt
        else:
            lam = "lam" if e == 1 else f"lam^{e}"
            if gtxt == "1":
                body = lam
            elif " + " in gtxt or " - " in gtxt:
                body = f"({gtxt})*{lam}"
            else:
                body = f"{gtxt}*{lam}"
        chunks.append(body)
    out = chunks[0]
    for body in chunks[1:]:
        if body.startswith("-"):
            out += f" - {body[1:]}"
        else:
            out += f" + {body}"
    return out


def render_observable(obs: MultiObservable) -> str:
    if obs.chart.components == 1:
        return render_part(obs.parts[0])
    chunks = []
    for i, p in enumerate(obs.parts):
        if p.is_zero():
            continue
        chunks.append(f"comp({i + 1}, {render_part(p)})")
    if not chunks:
        return "0"
    return " + ".join(chunks)


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def scalar_json(s: Scalar) -> dict[str, str]:
    return {"re": str(s.re), "im": str(s.im)}


def lambda_scalar_json(s: LambdaSeries) -> dict[str, Any]:
    return {"trunc": s.trunc,
            "terms": [{"e": e, "re": str(c.re), "im": str(c.im)}
                      for e, c in sorted(s.coeffs.items())]}


def value_json(v: Value) -> dict[str, Any]:
    if v.is_exact:
        return {"tag": "exact",
                "pi_terms": [{"k": k, "re": str(c.re), "im": str(c.im)}
                             for k, c in sorted(v.exact.items())],
                "text": v.render()}
    return {"tag": "float", "re": v.flt.real, "im": v.flt.imag}


def value_series_json(s: LambdaSeries) -> dict[str, Any]:
    return {"trunc": s.trunc,
            "terms": [{"e": e, **value_json(c)}
                      for e, c in sorted(s.coeffs.items())]}


def gausspoly_json(g: GaussPoly) -> dict[str, Any]:
    return {"vars": list(g.vars), "gamma": str(g.gamma),
            "terms": [{"mono": list(m), **scalar_json(c)}
                      for m, c in sorted(g.terms.items())]}


def observable_json(obs: MultiObservable) -> dict[str, Any]:
    return {"schema": SCHEMA,
            "chart": {"kind": obs.chart.kind, "n": obs.chart.n,
                      "components": obs.chart.components},
            "trunc": obs.trunc,
            "text": render_observable(obs),
            "parts": [[{"e": e, **gausspoly_json(c)}
                       for e, c in sorted(p.coeffs.items())]
                      for p in obs.parts]}
