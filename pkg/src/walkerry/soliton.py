"""Ricci–Yamabe soliton residuals and the λ-classification.

A Ricci–Yamabe soliton solves ``2β Ric + L_V g = (−2λ + μ Scal) g``; it is
gradient when ``V = ∇F``, in which case ``L_V g = 2∇²F``.  Residuals are
left-hand side minus right-hand side, component by component.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    SymTensor2,
    VectorField,
    WalkerMetric,
    christoffel,
    divergence,
    hessian,
    laplacian,
    lie_derivative,
    metric_components,
    ricci,
    scalar_curvature,
)
from .symcore import Const, Expr, Params, as_expr, simplify


class SolitonKind(enum.Enum):
    EXPANDING = "expanding"
    STEADY = "steady"
    SHRINKING = "shrinking"


def classify(lam) -> SolitonKind:
    """λ < 0 expanding, λ = 0 steady, λ > 0 shrinking."""
    if isinstance(lam, Expr):
        lam = simplify(lam)
        if not isinstance(lam, Const):
            raise ValueError("classification needs a concrete λ")
        lam = lam.value
    value = Fraction(lam)
    if value < 0:
        return SolitonKind.EXPANDING
    if value == 0:
        return SolitonKind.STEADY
    return SolitonKind.SHRINKING


def _check_sign(W: WalkerMetric, P: Params) -> None:
    if W.epsilon != P.epsilon:
        raise ValueError("metric and parameters disagree on epsilon")


def _rhs_factor(W: WalkerMetric, P: Params) -> Expr:
    return simplify(-2 * P.lam + P.mu * scalar_curvature(W))


def ry_residual(W: WalkerMetric, V: VectorField, P: Params) -> SymTensor2:
    """``2β Ric + L_V g − (−2λ + μ Scal) g``."""
    _check_sign(W, P)
    g, _ = metric_components(W)
    ric = ricci(W)
    lie = lie_derivative(W, V)
    k = _rhs_factor(W, P)
    return SymTensor2.from_function(
        lambda i, j: simplify(2 * P.beta * ric[i, j] + lie[i, j] - k * g[i, j])
    )


def gradient_ry_residual(W: WalkerMetric, F: Expr, P: Params) -> SymTensor2:
    """``2β Ric + 2∇²F − (−2λ + μ Scal) g``."""
    _check_sign(W, P)
    g, _ = metric_components(W)
    gamma = christoffel(W)
    ric = ricci(W, gamma)
    hess = hessian(W, as_expr(F), gamma)
    k = _rhs_factor(W, P)
    return SymTensor2.from_function(
        lambda i, j: simplify(2 * P.beta * ric[i, j] + 2 * hess[i, j] - k * g[i, j])
    )


def gradient_ry_system(W: WalkerMetric, F: Expr, P: Params) -> SymTensor2:
    """The gradient residual divided by two: ``β Ric + ∇²F − (−λ + μ/2 Scal) g``."""
    return gradient_ry_residual(W, F, P).scale(Fraction(1, 2))


def trace_condition_residual(W: WalkerMetric, F: Expr, P: Params) -> Expr:
    """``Δ_g F − 3(−λ + (−β + μ/2) Scal)``."""
    _check_sign(W, P)
    scal = scalar_curvature(W)
    return simplify(laplacian(W, as_expr(F)) - 3 * (-P.lam + (-P.beta + P.mu / 2) * scal))


@dataclass(frozen=True)
class HodgeCheck:
    divergence: Expr
    trace: Expr

    @property
    def certified(self) -> bool:
        zero = Const(0)
        return self.divergence == zero and self.trace == zero


def hodge_soliton_check(W: WalkerMetric, Y: VectorField, F: Expr, P: Params) -> HodgeCheck:
    return HodgeCheck(simplify(divergence(W, Y)), trace_condition_residual(W, F, P))
