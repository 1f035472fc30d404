"""Text rendering compatible with :func:`walkerry.parse.parse_expr`.

Unary minus binds tighter than ``^`` in the grammar, so a leading minus is
never placed directly in front of a power; ``-1*x^2`` is emitted instead.
"""

from __future__ import annotations

from fractions import Fraction

from .expr import (
    Antideriv,
    Apply,
    Const,
    Coord,
    Coordinate,
    Expr,
    Opaque,
    Param,
    Power,
    Product,
    Sum,
)


def _frac_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _atomic(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value >= 0 and e.value.denominator == 1
    return isinstance(e, (Coordinate, Param, Opaque, Apply, Antideriv))


def render(e: Expr) -> str:
    if isinstance(e, Const):
        return _frac_text(e.value)
    if isinstance(e, Coordinate):
        return e.coord.symbol
    if isinstance(e, Param):
        return e.name
    if isinstance(e, Opaque):
        text = f"{e.name}({','.join(c.symbol for c in e.args)})"
        for c, o in zip(Coord, e.orders):
            if o == 1:
                text = f"D({text}, {c.symbol})"
            elif o > 1:
                text = f"D({text}, {c.symbol}, {o})"
        return text
    if isinstance(e, Antideriv):
        return f"INT({render(e.integrand)}, {e.var.symbol}, {_frac_text(e.lower)})"
    if isinstance(e, Apply):
        return f"{e.fn}({render(e.arg)})"
    if isinstance(e, Power):
        base = render(e.base)
        if not _atomic(e.base):
            base = f"({base})"
        r = e.exponent
        exp_text = _frac_text(r) if (r.denominator == 1 and r >= 0) else f"({_frac_text(r)})"
        return f"{base}^{exp_text}"
    if isinstance(e, Product):
        return _render_product(e.factors)
    if isinstance(e, Sum):
        return _render_sum(e.terms)
    raise TypeError(type(e).__name__)


def _factor_text(f: Expr, first: bool) -> str:
    if isinstance(f, Const):
        if first:
            return _frac_text(f.value)
        return _frac_text(f.value) if _atomic(f) else f"({_frac_text(f.value)})"
    if isinstance(f, (Sum, Product)):
        return f"({render(f)})"
    return render(f)


def _render_product(factors: tuple) -> str:
    if not factors:
        return "1"
    parts = list(factors)
    prefix = ""
    if isinstance(parts[0], Const) and parts[0].value == -1 and len(parts) > 1 and not isinstance(parts[1], (Power, Const)):
        prefix = "-"
        parts = parts[1:]
    return prefix + "*".join(_factor_text(f, i == 0) for i, f in enumerate(parts))


def _negated(t: Expr) -> Expr | None:
    """The negation of a negatively-led term, or None if the term is not negative."""
    if isinstance(t, Const) and t.value < 0:
        return Const(-t.value)
    if isinstance(t, Product) and t.factors and isinstance(t.factors[0], Const) and t.factors[0].value < 0:
        c = -t.factors[0].value
        rest = t.factors[1:]
        if c == 1:
            return rest[0] if len(rest) == 1 else Product(rest)
        return Product((Const(c),) + rest)
    return None


def _render_sum(terms: tuple) -> str:
    if not terms:
        return "0"
    out = []
    for i, t in enumerate(terms):
        text = render(t)
        if isinstance(t, Sum):
            text = f"({text})"
        if i == 0:
            out.append(text)
            continue
        neg = _negated(t)
        if neg is not None:
            ntext = render(neg)
            if isinstance(neg, Sum):
                ntext = f"({ntext})"
            out.append(f" - {ntext}")
        else:
            out.append(f" + {text}")
    return "".join(out)
