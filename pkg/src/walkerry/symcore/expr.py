"""Immutable expression nodes.

Every node is hashable and carries a deterministic total ordering key, so
canonical forms can sort the children of sums and products.  Construction
through the Python operators builds *raw* trees; call
:func:`walkerry.symcore.simplify` to obtain the canonical form.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction]

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


class Coord(enum.IntEnum):
    """Chart coordinates; ``x = x¹``, ``y = x²``, ``z = x³``."""

    X1 = 1
    X2 = 2
    X3 = 3

    @property
    def symbol(self) -> str:
        return "xyz"[self.value - 1]

    @property
    def index(self) -> int:
        return int(self.value)

    @classmethod
    def from_index(cls, i: int) -> "Coord":
        return cls(i)

    @classmethod
    def from_symbol(cls, name: str) -> "Coord":
        try:
            return cls("xyz".index(name) + 1)
        except ValueError:
            raise KeyError(name) from None


X, Y, Z = Coord.X1, Coord.X2, Coord.X3


def _frac(value: Number | str | float) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ("_hash", "_skey")
    _rank = -1

    # structural identity -------------------------------------------------
    def _fields(self) -> tuple:  # pragma: no cover - overridden
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Expr) or type(other) is not type(self):
            return False
        return self._hash == other._hash and self._fields() == other._fields()

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return self._hash

    def _init_hash(self) -> None:
        object.__setattr__(self, "_hash", hash((self._rank, self._hash_fields())))
        object.__setattr__(self, "_skey", None)

    def _hash_fields(self) -> tuple:
        return self._fields()

    def __setattr__(self, name, value):
        raise AttributeError("Expr nodes are immutable")

    @property
    def sort_key(self) -> tuple:
        key = self._skey
        if key is None:
            key = (self._rank,) + self._sort_fields()
            object.__setattr__(self, "_skey", key)
        return key

    def _sort_fields(self) -> tuple:  # pragma: no cover - overridden
        raise NotImplementedError

    # arithmetic builders ----------------------------------------------------
    def __add__(self, other) -> "Expr":
        return Sum((self, as_expr(other)))

    def __radd__(self, other) -> "Expr":
        return Sum((as_expr(other), self))

    def __sub__(self, other) -> "Expr":
        return Sum((self, Product((Const(-1), as_expr(other)))))

    def __rsub__(self, other) -> "Expr":
        return Sum((as_expr(other), Product((Const(-1), self))))

    def __mul__(self, other) -> "Expr":
        return Product((self, as_expr(other)))

    def __rmul__(self, other) -> "Expr":
        return Product((as_expr(other), self))

    def __truediv__(self, other) -> "Expr":
        return Product((self, Power(as_expr(other), Fraction(-1))))

    def __rtruediv__(self, other) -> "Expr":
        return Product((as_expr(other), Power(self, Fraction(-1))))

    def __neg__(self) -> "Expr":
        return Product((Const(-1), self))

    def __pos__(self) -> "Expr":
        return self

    def __pow__(self, exponent) -> "Expr":
        return Power(self, _frac(exponent))

    def __repr__(self) -> str:
        from .render import render

        return f"<{type(self).__name__} {render(self)}>"

    def __str__(self) -> str:
        from .render import render

        return render(self)

    @property
    def children(self) -> tuple["Expr", ...]:
        return ()


class Const(Expr):
    """Exact rational constant."""

    __slots__ = ("value",)
    _rank = 0

    def __init__(self, value: Number | str | float):
        object.__setattr__(self, "value", _frac(value))
        self._init_hash()

    def _fields(self):
        return (self.value,)

    def _sort_fields(self):
        return (self.value,)


class Coordinate(Expr):
    __slots__ = ("coord",)
    _rank = 1

    def __init__(self, coord: Coord):
        object.__setattr__(self, "coord", Coord(coord))
        self._init_hash()

    def _fields(self):
        return (int(self.coord),)

    def _sort_fields(self):
        return (int(self.coord),)


class Param(Expr):
    """Named constant.  ``sign=True`` declares a sign symbol (ε² = 1)."""

    __slots__ = ("name", "sign")
    _rank = 2

    def __init__(self, name: str, sign: bool = False):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "sign", bool(sign))
        self._init_hash()

    def _fields(self):
        return (self.name, self.sign)

    def _sort_fields(self):
        return (self.name, self.sign)


class Opaque(Expr):
    """Unspecified smooth function of some coordinates, with derivative orders.

    ``orders`` is indexed by coordinate (x, y, z); orders for coordinates that
    are not arguments are always zero.
    """

    __slots__ = ("name", "args", "orders")
    _rank = 3

    def __init__(self, name: str, args: Iterable[Coord], orders: Iterable[int] = (0, 0, 0)):
        args_t = tuple(Coord(a) for a in args)
        if len(set(args_t)) != len(args_t):
            raise ValueError(f"repeated argument in opaque function {name!r}")
        orders_t = tuple(int(o) for o in orders)
        if len(orders_t) != 3 or any(o < 0 for o in orders_t):
            raise ValueError("orders must be three non-negative integers")
        for c in Coord:
            if c not in args_t and orders_t[c - 1]:
                raise ValueError(f"{name!r} does not depend on {c.symbol}")
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "args", args_t)
        object.__setattr__(self, "orders", orders_t)
        self._init_hash()

    def _fields(self):
        return (self.name, tuple(int(a) for a in self.args), self.orders)

    def _sort_fields(self):
        return self._fields()

    @property
    def base(self) -> "Opaque":
        return Opaque(self.name, self.args)


class Antideriv(Expr):
    """``∫_{lower}^{var} integrand d(var)``; the integrand is written in ``var``."""

    __slots__ = ("integrand", "var", "lower")
    _rank = 4

    def __init__(self, integrand: Expr, var: Coord, lower: Number = 0):
        object.__setattr__(self, "integrand", as_expr(integrand))
        object.__setattr__(self, "var", Coord(var))
        object.__setattr__(self, "lower", _frac(lower))
        self._init_hash()

    def _fields(self):
        return (self.integrand, int(self.var), self.lower)

    def _hash_fields(self):
        return (self.integrand._hash, int(self.var), self.lower)

    def _sort_fields(self):
        return (int(self.var), self.lower, self.integrand.sort_key)

    @property
    def children(self):
        return (self.integrand,)


class Apply(Expr):
    __slots__ = ("fn", "arg")
    _rank = 5

    def __init__(self, fn: str, arg: Expr):
        if fn not in FUNCTIONS:
            raise ValueError(f"unknown function {fn!r}")
        object.__setattr__(self, "fn", fn)
        object.__setattr__(self, "arg", as_expr(arg))
        self._init_hash()

    def _fields(self):
        return (self.fn, self.arg)

    def _hash_fields(self):
        return (self.fn, self.arg._hash)

    def _sort_fields(self):
        return (self.fn, self.arg.sort_key)

    @property
    def children(self):
        return (self.arg,)


class Power(Expr):
    __slots__ = ("base", "exponent")
    _rank = 6

    def __init__(self, base: Expr, exponent: Number):
        object.__setattr__(self, "base", as_expr(base))
        object.__setattr__(self, "exponent", _frac(exponent))
        self._init_hash()

    def _fields(self):
        return (self.base, self.exponent)

    def _hash_fields(self):
        return (self.base._hash, self.exponent)

    def _sort_fields(self):
        return (self.base.sort_key, self.exponent)

    @property
    def children(self):
        return (self.base,)


class Product(Expr):
    __slots__ = ("factors",)
    _rank = 7

    def __init__(self, factors: Iterable[Expr]):
        object.__setattr__(self, "factors", tuple(as_expr(f) for f in factors))
        self._init_hash()

    def _fields(self):
        return self.factors

    def _hash_fields(self):
        return tuple(f._hash for f in self.factors)

    def _sort_fields(self):
        return tuple(f.sort_key for f in self.factors)

    @property
    def children(self):
        return self.factors


class Sum(Expr):
    __slots__ = ("terms",)
    _rank = 8

    def __init__(self, terms: Iterable[Expr]):
        object.__setattr__(self, "terms", tuple(as_expr(t) for t in terms))
        self._init_hash()

    def _fields(self):
        return self.terms

    def _hash_fields(self):
        return tuple(t._hash for t in self.terms)

    def _sort_fields(self):
        return tuple(t.sort_key for t in self.terms)

    @property
    def children(self):
        return self.terms


# ---------------------------------------------------------------------------
# convenience constructors

ZERO = Const(0)
ONE = Const(1)
EPS = Param("eps", sign=True)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, Coord):  # before int: Coord is an IntEnum
        return Coordinate(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Const(value)
    raise TypeError(f"cannot convert {value!r} to an expression")


def const(value: Number | str) -> Const:
    return Const(value)


def coord(c: Coord | str) -> Coordinate:
    if isinstance(c, str):
        c = Coord.from_symbol(c)
    return Coordinate(c)


def param(name: str, sign: bool = False) -> Param:
    return Param(name, sign)


def opaque(name: str, *args: Coord | str) -> Opaque:
    return Opaque(name, [Coord.from_symbol(a) if isinstance(a, str) else a for a in args])


def exp(e) -> Expr:
    return Apply("exp", as_expr(e))


def log(e) -> Expr:
    return Apply("log", as_expr(e))


def sin(e) -> Expr:
    return Apply("sin", as_expr(e))


def cos(e) -> Expr:
    return Apply("cos", as_expr(e))


def sqrt(e) -> Expr:
    return Apply("sqrt", as_expr(e))


def antideriv(integrand, var: Coord | str, lower: Number = 0) -> Antideriv:
    if isinstance(var, str):
        var = Coord.from_symbol(var)
    return Antideriv(as_expr(integrand), var, lower)


def walk(e: Expr):
    """Pre-order traversal of all nodes."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def free_params(e: Expr) -> frozenset[Param]:
    return frozenset(n for n in walk(e) if isinstance(n, Param))


def opaque_names(e: Expr) -> frozenset[str]:
    return frozenset(n.name for n in walk(e) if isinstance(n, Opaque))


def depends_on(e: Expr, c: Coord) -> bool:
    """Conservative syntactic dependence on a coordinate."""
    for node in walk(e):
        if isinstance(node, Coordinate) and node.coord == c:
            return True
        if isinstance(node, Opaque) and c in node.args:
            return True
        if isinstance(node, Antideriv) and node.var == c:
            return True
    return False


def coordinates_of(e: Expr) -> frozenset[Coord]:
    return frozenset(c for c in Coord if depends_on(e, c))
