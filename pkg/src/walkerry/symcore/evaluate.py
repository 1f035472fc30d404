"""Floating-point evaluation of expressions."""

from __future__ import annotations

import math
from typing import Callable, Mapping

from scipy import integrate as _quad

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

QUAD_EPSABS = 1e-10
DIVISION_FLOOR = 1e-300

# Signature for opaque-function bindings: (name, orders, coordinate values) -> float
FunctionTable = Callable[[Opaque, Mapping[Coord, float]], float]


class DomainError(ArithmeticError):
    """Evaluation left the real domain (log/sqrt of bad values, division by ~0)."""


class NearSingular(DomainError):
    """A denominator fell below the caller's rejection threshold."""


class UnboundSymbol(KeyError):
    """A parameter or opaque function has no numeric binding."""


class Tracker:
    """Records the largest intermediate magnitude seen during evaluation."""

    __slots__ = ("max_abs",)

    def __init__(self) -> None:
        self.max_abs = 0.0


def _norm_point(point: Mapping) -> dict[Coord, float]:
    out: dict[Coord, float] = {}
    for k, val in point.items():
        if isinstance(k, str):
            k = Coord.from_symbol(k)
        elif isinstance(k, Coordinate):
            k = k.coord
        out[Coord(k)] = float(val)
    return out


def evaluate(
    e: Expr,
    point: Mapping,
    params: Mapping[str, float] | None = None,
    functions: FunctionTable | Mapping | None = None,
    *,
    tracker: Tracker | None = None,
    singular_below: float = DIVISION_FLOOR,
) -> float:
    """Evaluate ``e`` at a chart point.

    ``point`` maps coordinates (``Coord`` or ``"x"``/``"y"``/``"z"``) to
    floats, ``params`` maps parameter names to floats, and ``functions``
    supplies values for opaque function symbols, either as a callable
    ``(node, point) -> float`` or a mapping from opaque nodes to floats.
    """
    ev = _Evaluator(_norm_point(point), dict(params or {}), functions, tracker, singular_below)
    return ev.run(e)


class _Evaluator:
    def __init__(self, point, params, functions, tracker, floor):
        self.point = point
        self.params = params
        self.functions = functions
        self.tracker = tracker
        self.floor = floor
        self.memo: dict[int, float] = {}

    def run(self, e: Expr) -> float:
        return self.ev(e)

    def _note(self, value: float) -> float:
        if self.tracker is not None:
            a = abs(value)
            if a > self.tracker.max_abs:
                self.tracker.max_abs = a
        return value

    def ev(self, e: Expr) -> float:
        key = id(e)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        val = self._note(self._ev(e))
        if not math.isfinite(val):
            raise DomainError(f"non-finite value while evaluating {type(e).__name__}")
        self.memo[key] = val
        return val

    def _ev(self, e: Expr) -> float:
        if isinstance(e, Const):
            return float(e.value)
        if isinstance(e, Coordinate):
            try:
                return self.point[e.coord]
            except KeyError:
                raise UnboundSymbol(e.coord.symbol) from None
        if isinstance(e, Param):
            if e.name not in self.params:
                raise UnboundSymbol(e.name)
            return float(self.params[e.name])
        if isinstance(e, Sum):
            return math.fsum(self.ev(t) for t in e.terms)
        if isinstance(e, Product):
            out = 1.0
            for f in e.factors:
                out *= self.ev(f)
            return out
        if isinstance(e, Power):
            b = self.ev(e.base)
            r = e.exponent
            if r < 0 and abs(b) < self.floor:
                if self.floor > DIVISION_FLOOR:
                    raise NearSingular(f"denominator {b!r} below {self.floor}")
                raise DomainError("division by zero")
            if r.denominator == 1:
                return b ** int(r)
            if b < 0:
                if r.denominator % 2 == 1:
                    return -((-b) ** float(r))
                raise DomainError(f"fractional power of negative value {b!r}")
            return b ** float(r)
        if isinstance(e, Apply):
            u = self.ev(e.arg)
            if e.fn == "exp":
                try:
                    return math.exp(u)
                except OverflowError:
                    raise DomainError("exp overflow") from None
            if e.fn == "log":
                if u <= 0:
                    raise DomainError(f"log of non-positive value {u!r}")
                return math.log(u)
            if e.fn == "sin":
                return math.sin(u)
            if e.fn == "cos":
                return math.cos(u)
            if e.fn == "sqrt":
                if u < 0:
                    raise DomainError(f"sqrt of negative value {u!r}")
                return math.sqrt(u)
        if isinstance(e, Opaque):
            fns = self.functions
            if fns is None:
                raise UnboundSymbol(e.name)
            if callable(fns):
                return float(fns(e, self.point))
            if e in fns:
                return float(fns[e])
            raise UnboundSymbol(e.name)
        if isinstance(e, Antideriv):
            fns = self.functions
            if fns is not None and not callable(fns) and e in fns:
                return float(fns[e])
            upper = self.point.get(e.var)
            if upper is None:
                raise UnboundSymbol(e.var.symbol)
            lower = float(e.lower)
            if upper == lower:
                return 0.0

            def integrand(t: float) -> float:
                pt = dict(self.point)
                pt[e.var] = t
                sub = _Evaluator(pt, self.params, self.functions, self.tracker, self.floor)
                return sub.run(e.integrand)

            value, _err = _quad.quad(integrand, lower, upper, epsabs=QUAD_EPSABS, epsrel=1e-10, limit=200)
            return value
        raise TypeError(f"cannot evaluate {type(e).__name__}")
