"""Differentiation, substitution and (elementary) integration."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping

from .canon import simplify, to_poly, from_poly, _is_exp
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
    as_expr,
    depends_on,
)


class SubstitutionError(ValueError):
    """A coordinate bound to a non-coordinate expression occurs where it is a
    differentiation or integration variable."""


# ---------------------------------------------------------------------------
# differentiation


def diff(e: Expr, v: Coord | str, n: int = 1) -> Expr:
    """``∂ⁿe/∂vⁿ`` in canonical form."""
    if isinstance(v, str):
        v = Coord.from_symbol(v)
    out = simplify(as_expr(e))
    for _ in range(n):
        out = _diff_canonical(out, Coord(v))
    return out


def diff_orders(e: Expr, orders) -> Expr:
    """Apply the mixed partial ``∂x^o1 ∂y^o2 ∂z^o3``."""
    out = e
    for c, o in zip(Coord, orders):
        if o:
            out = diff(out, c, o)
    return simplify(out)


@lru_cache(maxsize=100_000)
def _diff_canonical(e: Expr, v: Coord) -> Expr:
    return simplify(_d(e, v))


def _d(e: Expr, v: Coord) -> Expr:
    zero = Const(0)
    if isinstance(e, (Const, Param)):
        return zero
    if isinstance(e, Coordinate):
        return Const(1) if e.coord == v else zero
    if isinstance(e, Opaque):
        if v not in e.args:
            return zero
        orders = list(e.orders)
        orders[v - 1] += 1
        return Opaque(e.name, e.args, orders)
    if isinstance(e, Antideriv):
        if e.var == v:
            return e.integrand
        return Antideriv(_d(e.integrand, v), e.var, e.lower)
    if isinstance(e, Sum):
        return Sum(tuple(_d(t, v) for t in e.terms))
    if isinstance(e, Product):
        terms = []
        fs = e.factors
        for i, f in enumerate(fs):
            df = _d(f, v)
            if isinstance(df, Const) and df.value == 0:
                continue
            terms.append(Product(fs[:i] + (df,) + fs[i + 1:]))
        return Sum(tuple(terms)) if terms else zero
    if isinstance(e, Power):
        db = _d(e.base, v)
        if isinstance(db, Const) and db.value == 0:
            return zero
        return Product((Const(e.exponent), Power(e.base, e.exponent - 1), db))
    if isinstance(e, Apply):
        du = _d(e.arg, v)
        if isinstance(du, Const) and du.value == 0:
            return zero
        u = e.arg
        if e.fn == "exp":
            return Product((e, du))
        if e.fn == "log":
            return Product((du, Power(u, Fraction(-1))))
        if e.fn == "sin":
            return Product((Apply("cos", u), du))
        if e.fn == "cos":
            return Product((Const(-1), Apply("sin", u), du))
        if e.fn == "sqrt":
            return Product((Const(Fraction(1, 2)), Power(u, Fraction(-1, 2)), du))
    raise TypeError(f"cannot differentiate {type(e).__name__}")


# ---------------------------------------------------------------------------
# substitution


def _split_bindings(bindings: Mapping) -> tuple[dict, dict, dict]:
    params: dict[str, Expr] = {}
    funcs: dict[str, Expr] = {}
    coords: dict[Coord, Expr] = {}
    for key, value in bindings.items():
        value = as_expr(value)
        if isinstance(key, Param):
            params[key.name] = value
        elif isinstance(key, Opaque):
            funcs[key.name] = value
        elif isinstance(key, Coordinate):
            coords[key.coord] = value
        elif isinstance(key, Coord):
            coords[key] = value
        elif isinstance(key, str):
            if key in ("x", "y", "z"):
                coords[Coord.from_symbol(key)] = value
            else:
                params[key] = value
        else:
            raise TypeError(f"unsupported binding key {key!r}")
    return params, funcs, coords


def substitute(e: Expr, bindings: Mapping) -> Expr:
    """Simultaneous substitution followed by :func:`simplify`.

    Keys may be :class:`Param` (or a plain name), :class:`Opaque` (matched by
    name; derivative markers are applied to the replacement) or coordinates.
    A string key names a parameter; to bind an opaque function by name use an
    ``Opaque`` key or :func:`substitute_functions`.
    """
    params, funcs, coords = _split_bindings(bindings)
    return simplify(_subst(as_expr(e), params, funcs, coords, {}))


def substitute_functions(e: Expr, funcs: Mapping[str, Expr]) -> Expr:
    return simplify(_subst(as_expr(e), {}, {k: as_expr(v) for k, v in funcs.items()}, {}, {}))


def _coord_moved(coords: dict, c: Coord) -> bool:
    if c not in coords:
        return False
    tgt = coords[c]
    return not (isinstance(tgt, Coordinate) and tgt.coord == c)


def _subst(e: Expr, params, funcs, coords, memo) -> Expr:
    hit = memo.get(e)
    if hit is not None:
        return hit
    out: Expr
    if isinstance(e, Const):
        out = e
    elif isinstance(e, Param):
        out = params.get(e.name, e)
    elif isinstance(e, Coordinate):
        out = coords.get(e.coord, e)
    elif isinstance(e, Opaque):
        if e.name in funcs:
            out = diff_orders(funcs[e.name], e.orders)
        else:
            for c in e.args:
                if _coord_moved(coords, c):
                    raise SubstitutionError(
                        f"cannot substitute for {c.symbol}: it is an argument of {e.name}"
                    )
            out = e
    elif isinstance(e, Antideriv):
        if _coord_moved(coords, e.var):
            raise SubstitutionError(f"cannot substitute for the integration variable {e.var.symbol}")
        out = Antideriv(_subst(e.integrand, params, funcs, coords, memo), e.var, e.lower)
    elif isinstance(e, Sum):
        out = Sum(tuple(_subst(t, params, funcs, coords, memo) for t in e.terms))
    elif isinstance(e, Product):
        out = Product(tuple(_subst(t, params, funcs, coords, memo) for t in e.factors))
    elif isinstance(e, Power):
        out = Power(_subst(e.base, params, funcs, coords, memo), e.exponent)
    elif isinstance(e, Apply):
        out = Apply(e.fn, _subst(e.arg, params, funcs, coords, memo))
    else:  # pragma: no cover
        raise TypeError(type(e).__name__)
    memo[e] = out
    return out


# ---------------------------------------------------------------------------
# integration


def _split_linear(arg: Expr, v: Coord):
    """Write ``arg = α·v + β`` with α, β free of ``v``; None if impossible."""
    alpha: dict = {}
    beta: dict = {}
    vc = Coordinate(v)
    for m, c in to_poly(arg).items():
        d = dict(m)
        k = d.pop(vc, Fraction(0))
        rest = tuple(sorted(d.items(), key=lambda t: t[0].sort_key))
        if any(depends_on(b, v) for b in d):
            return None
        if k == 0:
            beta[rest] = beta.get(rest, 0) + c
        elif k == 1:
            alpha[rest] = alpha.get(rest, 0) + c
        else:
            return None
    return from_poly({m: c for m, c in alpha.items() if c}), from_poly({m: c for m, c in beta.items() if c})


def _poly_exp_antiderivative(k: int, alpha: Expr, s: Expr) -> Expr:
    """Antiderivative of ``s^k e^{αs}`` divided by ``e^{αs}``."""
    terms = []
    for j in range(k + 1):
        coef = Fraction((-1) ** j * factorial(k), factorial(k - j))
        terms.append(Product((Const(coef), Power(s, k - j), Power(alpha, -(j + 1)))))
    return Sum(tuple(terms))


def integrate(e: Expr, v: Coord | str, lower: int | Fraction = 0) -> Expr:
    """``∫_{lower}^{v} e d v`` with ``e`` written in the coordinate ``v``.

    Terms of the form (v-free)·vᵏ·exp(α v + β) are integrated in closed form
    (α is assumed nonzero whenever it is symbolic); every remaining term is
    collected into a single :class:`Antideriv` node.
    """
    if isinstance(v, str):
        v = Coord.from_symbol(v)
    lower = Fraction(lower)
    vc = Coordinate(v)
    lo = Const(lower)
    closed: list[Expr] = []
    leftover: dict = {}
    for m, c in to_poly(simplify(as_expr(e))).items():
        d = dict(m)
        k = d.pop(vc, Fraction(0))
        exp_atom = None
        for b in list(d):
            if _is_exp(b) and depends_on(b, v):
                exp_atom = b
                d.pop(b)
        rest_ok = not any(depends_on(b, v) for b in d)
        if not rest_ok or k.denominator != 1 or k < 0:
            leftover[m] = c
            continue
        k = int(k)
        coeff = from_poly({tuple(sorted(d.items(), key=lambda t: t[0].sort_key)): c})
        if exp_atom is None:
            closed.append(
                Product((coeff, Const(Fraction(1, k + 1)), Sum((Power(vc, k + 1), Product((Const(-1), Power(lo, k + 1)))))))
            )
            continue
        split = _split_linear(exp_atom.arg, v)
        if split is None:
            leftover[m] = c
            continue
        alpha, beta = split
        upper = Product((Apply("exp", exp_atom.arg), _poly_exp_antiderivative(k, alpha, vc)))
        at_lower = Product((
            Apply("exp", Sum((Product((alpha, lo)), beta))),
            _poly_exp_antiderivative(k, alpha, lo),
        ))
        closed.append(Product((coeff, Sum((upper, Product((Const(-1), at_lower)))))))
    parts = list(closed)
    if leftover:
        parts.append(Antideriv(from_poly(leftover), v, lower))
    return simplify(Sum(tuple(parts)))
