"""Closed-form component lists for the Walker metric.

These are the hand-reduced formulas that the generic index loops in
:mod:`walkerry.geometry` must reproduce; the test-suite compares the two.
Subscripts denote partial derivatives, ``f₁ = ∂ₓf`` and so on.
"""

from __future__ import annotations

from .geometry import Christoffel, SymTensor2, VectorField, WalkerMetric
from .symcore import Const, Expr, X, Y, Z, diff, simplify

half = Const(1) / 2


def _d(e: Expr, *cs) -> Expr:
    for c in cs:
        e = diff(e, c)
    return e


def christoffel_closed(W: WalkerMetric) -> Christoffel:
    f, eps = W.f, W.epsilon
    f1, f2, f3 = _d(f, X), _d(f, Y), _d(f, Z)
    return Christoffel({
        (1, 1, 3): simplify(half * f1),
        (1, 2, 3): simplify(half * f2),
        (1, 3, 3): simplify(half * (f * f1 + f3)),
        (2, 3, 3): simplify(-f2 / (2 * eps)),
        (3, 3, 3): simplify(-half * f1),
    })


def ricci_closed(W: WalkerMetric) -> SymTensor2:
    f, eps = W.f, W.epsilon
    f11, f12, f22 = _d(f, X, X), _d(f, X, Y), _d(f, Y, Y)
    return SymTensor2({
        (1, 3): simplify(half * f11),
        (2, 3): simplify(half * f12),
        (3, 3): simplify((eps * f * f11 - f22) / (2 * eps)),
    })


def scalar_closed(W: WalkerMetric) -> Expr:
    return _d(W.f, X, X)


def hessian_closed(W: WalkerMetric, F: Expr) -> SymTensor2:
    f, eps = W.f, W.epsilon
    f1, f2, f3 = _d(f, X), _d(f, Y), _d(f, Z)
    F1, F2, F3 = _d(F, X), _d(F, Y), _d(F, Z)
    return SymTensor2({
        (1, 1): _d(F, X, X),
        (1, 2): _d(F, X, Y),
        (1, 3): simplify(_d(F, X, Z) - half * f1 * F1),
        (2, 2): _d(F, Y, Y),
        (2, 3): simplify(_d(F, Y, Z) - half * f2 * F1),
        (3, 3): simplify(
            _d(F, Z, Z) - half * (f * f1 + f3) * F1 + f2 * F2 / (2 * eps) + half * f1 * F3
        ),
    })


def lie_closed(W: WalkerMetric, V: VectorField) -> SymTensor2:
    f, eps = W.f, W.epsilon
    V1, V2, V3 = V
    return SymTensor2({
        (1, 1): simplify(2 * _d(V3, X)),
        (1, 2): simplify(eps * _d(V2, X) + _d(V3, Y)),
        (1, 3): simplify(_d(V1, X) + _d(V3, Z) + f * _d(V3, X)),
        (2, 2): simplify(2 * eps * _d(V2, Y)),
        (2, 3): simplify(_d(V1, Y) + f * _d(V3, Y) + eps * _d(V2, Z)),
        (3, 3): simplify(
            V1 * _d(f, X) + V2 * _d(f, Y) + V3 * _d(f, Z) + 2 * _d(V1, Z) + 2 * f * _d(V3, Z)
        ),
    })


def laplacian_closed(W: WalkerMetric, F: Expr) -> Expr:
    f, eps = W.f, W.epsilon
    return simplify(
        -f * _d(F, X, X) - _d(f, X) * _d(F, X) + eps * _d(F, Y, Y) + 2 * _d(F, X, Z)
    )


def gradient_closed(W: WalkerMetric, F: Expr) -> VectorField:
    return VectorField(-W.f * _d(F, X) + _d(F, Z), W.epsilon * _d(F, Y), _d(F, X))
