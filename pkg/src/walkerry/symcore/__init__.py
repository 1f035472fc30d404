"""Exact symbolic expression kernel."""

from __future__ import annotations

from dataclasses import dataclass, field

from .expr import (
    EPS,
    FUNCTIONS,
    ONE,
    ZERO,
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
    X,
    Y,
    Z,
    antideriv,
    as_expr,
    const,
    coord,
    coordinates_of,
    cos,
    depends_on,
    exp,
    free_params,
    log,
    opaque,
    opaque_names,
    param,
    sin,
    sqrt,
    walk,
)
from .canon import is_structural_zero, simplify
from .calculus import SubstitutionError, diff, diff_orders, integrate, substitute, substitute_functions
from .evaluate import DomainError, NearSingular, Tracker, UnboundSymbol, evaluate
from .render import render

eval_expr = evaluate


@dataclass(frozen=True)
class Params:
    """Soliton constants β, λ, μ and the sign ε of the metric."""

    beta: Expr = field(default_factory=lambda: Param("beta"))
    lam: Expr = field(default_factory=lambda: Param("lambda"))
    mu: Expr = field(default_factory=lambda: Param("mu"))
    epsilon: Expr = EPS

    def __post_init__(self):
        for name in ("beta", "lam", "mu", "epsilon"):
            object.__setattr__(self, name, simplify(as_expr(getattr(self, name))))
        eps = self.epsilon
        if isinstance(eps, Const):
            if eps.value not in (1, -1):
                raise ValueError(f"epsilon must be +1 or -1, got {eps.value}")
        elif not (isinstance(eps, Param) and eps.sign):
            raise ValueError("epsilon must be ±1 or a declared sign symbol")

    @classmethod
    def of(cls, beta=None, lam=None, mu=None, epsilon=None) -> "Params":
        kw = {}
        if beta is not None:
            kw["beta"] = as_expr(beta)
        if lam is not None:
            kw["lam"] = as_expr(lam)
        if mu is not None:
            kw["mu"] = as_expr(mu)
        if epsilon is not None:
            kw["epsilon"] = as_expr(epsilon)
        return cls(**kw)


__all__ = [name for name in dir() if not name.startswith("_")]
