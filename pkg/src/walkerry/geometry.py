"""Curvature and derivative operators for the three-dimensional Walker metric

    g = 2 dx dz + ε dy² + f(x, y, z) dz²,

computed by the generic index formulas (the production path).  The
closed-form component lists used as cross-checks live in
:mod:`walkerry.closed_forms`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Callable, Iterator, Mapping

from .symcore import (
    EPS,
    Const,
    Coord,
    Expr,
    Param,
    as_expr,
    diff,
    simplify,
)

INDICES = (1, 2, 3)
PAIRS = ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))
_ZERO = Const(0)


def _c(i: int) -> Coord:
    return Coord(i)


def _sum(terms) -> Expr:
    from .symcore import Sum

    terms = [t for t in terms if not (isinstance(t, Const) and t.value == 0)]
    if not terms:
        return _ZERO
    return simplify(Sum(tuple(terms)))


def _mul(*factors) -> Expr:
    from .symcore import Product

    for f in factors:
        if isinstance(f, Const) and f.value == 0:
            return _ZERO
    return Product(tuple(as_expr(f) for f in factors))


@dataclass(frozen=True)
class WalkerMetric:
    """The metric determined by ``f`` and the sign ``epsilon`` (±1 or ε)."""

    f: Expr
    epsilon: Expr = EPS

    def __post_init__(self):
        object.__setattr__(self, "f", simplify(as_expr(self.f)))
        eps = simplify(as_expr(self.epsilon))
        if isinstance(eps, Const):
            if eps.value not in (1, -1):
                raise ValueError("epsilon must be +1 or -1")
        elif not (isinstance(eps, Param) and eps.sign):
            raise ValueError("epsilon must be ±1 or a sign symbol")
        object.__setattr__(self, "epsilon", eps)


class SymTensor2:
    """Symmetric (0,2) tensor: six components indexed by unordered pairs."""

    __slots__ = ("_c",)

    def __init__(self, components: Mapping[tuple[int, int], Expr]):
        comps: dict[tuple[int, int], Expr] = {}
        for (i, j), v in components.items():
            key = (min(i, j), max(i, j))
            comps[key] = as_expr(v)
        for key in PAIRS:
            comps.setdefault(key, _ZERO)
        self._c = comps

    @classmethod
    def from_function(cls, fn: Callable[[int, int], Expr]) -> "SymTensor2":
        return cls({(i, j): fn(i, j) for i, j in PAIRS})

    def __getitem__(self, ij: tuple[int, int]) -> Expr:
        i, j = ij
        return self._c[(min(i, j), max(i, j))]

    def items(self) -> Iterator[tuple[tuple[int, int], Expr]]:
        for key in PAIRS:
            yield key, self._c[key]

    def map(self, fn: Callable[[Expr], Expr]) -> "SymTensor2":
        return SymTensor2({k: fn(v) for k, v in self.items()})

    def simplified(self) -> "SymTensor2":
        return self.map(simplify)

    def __sub__(self, other: "SymTensor2") -> "SymTensor2":
        return SymTensor2({k: simplify(v - other[k]) for k, v in self.items()})

    def __add__(self, other: "SymTensor2") -> "SymTensor2":
        return SymTensor2({k: simplify(v + other[k]) for k, v in self.items()})

    def scale(self, s) -> "SymTensor2":
        return SymTensor2({k: simplify(as_expr(s) * v) for k, v in self.items()})

    def is_zero(self) -> bool:
        return all(isinstance(v, Const) and v.value == 0 for _, v in self.simplified().items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymTensor2):
            return NotImplemented
        return all(simplify(v) == simplify(other[k]) for k, v in self.items())

    def __repr__(self) -> str:
        inner = ", ".join(f"{i}{j}: {v}" for (i, j), v in self.items())
        return f"SymTensor2({inner})"


@dataclass(frozen=True)
class VectorField:
    components: tuple[Expr, Expr, Expr]

    def __init__(self, v1, v2, v3):
        object.__setattr__(self, "components", tuple(simplify(as_expr(v)) for v in (v1, v2, v3)))

    def __getitem__(self, k: int) -> Expr:
        """1-based access: ``V[1]`` is V¹."""
        if k not in (1, 2, 3):
            raise IndexError(f"vector index must be 1, 2 or 3, got {k!r}")
        return self.components[k - 1]

    def __iter__(self):
        return iter(self.components)


class Christoffel:
    """Γⁱ_{jk}, symmetric in the lower indices; 1-based."""

    def __init__(self, gamma: Mapping[tuple[int, int, int], Expr]):
        self._g = {}
        for (i, j, k), v in gamma.items():
            self._g[(i, min(j, k), max(j, k))] = v

    def __getitem__(self, ijk: tuple[int, int, int]) -> Expr:
        i, j, k = ijk
        return self._g.get((i, min(j, k), max(j, k)), _ZERO)

    def nonzero(self) -> dict[tuple[int, int, int], Expr]:
        return {k: v for k, v in sorted(self._g.items()) if not (isinstance(v, Const) and v.value == 0)}


# ---------------------------------------------------------------------------
# metric


def metric_components(W: WalkerMetric) -> tuple[SymTensor2, SymTensor2]:
    """``(g, g⁻¹)`` as explicit component tables."""
    eps = W.epsilon
    g = SymTensor2({(1, 3): Const(1), (2, 2): eps, (3, 3): W.f})
    ginv = SymTensor2({(1, 1): simplify(-W.f), (1, 3): Const(1), (2, 2): simplify(1 / eps)})
    return g, ginv


def determinant(T: SymTensor2) -> Expr:
    a = [[T[i, j] for j in INDICES] for i in INDICES]
    return simplify(
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def christoffel(W: WalkerMetric) -> Christoffel:
    """Γⁱ_{jk} = ½ gⁱˡ (∂_k g_{jl} + ∂_j g_{kl} − ∂_l g_{jk}), summed over l."""
    g, ginv = metric_components(W)
    dg = {(i, j, k): diff(g[i, j], _c(k)) for i, j in PAIRS for k in INDICES}

    def d(i, j, k):
        return dg[(min(i, j), max(i, j), k)]

    gamma = {}
    for i in INDICES:
        for j, k in PAIRS:
            gamma[(i, j, k)] = _sum(
                _mul(Const(1) / 2, ginv[i, l], d(j, l, k) + d(k, l, j) - d(j, k, l))
                for l in INDICES
            )
    return Christoffel(gamma)


def ricci(W: WalkerMetric, gamma: Christoffel | None = None) -> SymTensor2:
    """Ric_{ij} = ∂_l Γˡ_{ij} − ∂_j Γˡ_{il} + Γˡ_{ij}Γᵐ_{lm} − Γᵐ_{il}Γˡ_{jm}."""
    G = gamma or christoffel(W)

    def comp(i, j):
        terms = []
        for l in INDICES:
            terms.append(diff(G[l, i, j], _c(l)))
            terms.append(_mul(-1, diff(G[l, i, l], _c(j))))
            for m in INDICES:
                terms.append(_mul(G[l, i, j], G[m, l, m]))
                terms.append(_mul(-1, G[m, i, l], G[l, j, m]))
        return _sum(terms)

    return SymTensor2.from_function(comp)


def contract(ginv: SymTensor2, T: SymTensor2) -> Expr:
    """g^{ij} T_{ij}."""
    return _sum(_mul(ginv[i, j], T[i, j]) for i, j in _cartesian(INDICES, INDICES))


def scalar_curvature(W: WalkerMetric) -> Expr:
    _, ginv = metric_components(W)
    return contract(ginv, ricci(W))


def hessian(W: WalkerMetric, F: Expr, gamma: Christoffel | None = None) -> SymTensor2:
    """(∇²F)_{ij} = ∂_i∂_j F − Γᵏ_{ij} ∂_k F."""
    G = gamma or christoffel(W)
    F = simplify(as_expr(F))
    dF = {k: diff(F, _c(k)) for k in INDICES}

    def comp(i, j):
        return _sum([diff(dF[i], _c(j))] + [_mul(-1, G[k, i, j], dF[k]) for k in INDICES])

    return SymTensor2.from_function(comp)


def lie_derivative(W: WalkerMetric, V: VectorField) -> SymTensor2:
    """(L_V g)_{ij} = Vᵏ ∂_k g_{ij} + g_{kj} ∂_i Vᵏ + g_{ik} ∂_j Vᵏ."""
    g, _ = metric_components(W)

    def comp(i, j):
        terms = []
        for k in INDICES:
            terms.append(_mul(V[k], diff(g[i, j], _c(k))))
            terms.append(_mul(g[k, j], diff(V[k], _c(i))))
            terms.append(_mul(g[i, k], diff(V[k], _c(j))))
        return _sum(terms)

    return SymTensor2.from_function(comp)


def gradient(W: WalkerMetric, F: Expr) -> VectorField:
    """(∇F)ⁱ = gⁱʲ ∂_j F."""
    _, ginv = metric_components(W)
    F = simplify(as_expr(F))
    return VectorField(*(_sum(_mul(ginv[i, j], diff(F, _c(j))) for j in INDICES) for i in INDICES))


def divergence(W: WalkerMetric, Y: VectorField) -> Expr:
    """div Y = |det g|^{-1/2} ∂_i(|det g|^{1/2} Yⁱ) = ∂_i Yⁱ since |det g| = 1."""
    return _sum(diff(Y[i], _c(i)) for i in INDICES)


def laplacian(W: WalkerMetric, F: Expr) -> Expr:
    """Laplace–Beltrami operator, as the divergence of the gradient."""
    return divergence(W, gradient(W, F))
