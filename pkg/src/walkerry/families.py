"""Constructors for the classified soliton families.

Each constructor takes the free inputs of a family (functions of prescribed
coordinates and the constants), assembles the metric function ``f`` together
with the vector field or potential, and lists the side conditions the family
leaves open.  Every side condition is a component of the residual tensor up
to a rational factor: ``residual[check][component] == scale * expr``.

Integrals in ``y`` are computed in closed form when the integrand is a
polynomial times an exponential of a linear function of ``y`` and are kept
as antiderivative nodes otherwise; the lower limit is always 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .geometry import SymTensor2, VectorField, WalkerMetric, gradient
from .scenario import GradientSpec, Scenario, VectorSpec, Sampling
from .soliton import gradient_ry_residual, ry_residual
from .symcore import (
    Const,
    Coord,
    Expr,
    Param,
    Params,
    X,
    Y,
    Z,
    as_expr,
    coordinates_of,
    diff,
    exp,
    integrate,
    simplify,
    substitute,
)


class FamilyError(ValueError):
    """Base class for violated family preconditions."""


class MuZero(FamilyError):
    pass


class BetaEqualsMu(FamilyError):
    pass


class ZeroDenominator(FamilyError):
    pass


class ArgumentViolation(FamilyError):
    pass


class CaseMismatch(FamilyError):
    pass


class Theorem(enum.Enum):
    T1_HODGE = "t1-hodge"
    T2 = "t2"
    T3 = "t3"
    C1 = "c1"
    C2 = "c2"
    T1_GRADIENT = "t1-gradient"
    TT_CASE_1A = "tt-1a"
    TT_CASE_1B = "tt-1b"
    TT_CASE_2A = "tt-2a"
    TT_CASE_2B = "tt-2b"
    BETA0_MU0 = "beta0-mu0"
    BETA0_MU_NONZERO = "beta0-mu-nonzero"
    FIN = "fin"


@dataclass(frozen=True)
class Constraint:
    """A side condition: ``residual[check][component] == scale * expr``."""

    name: str
    expr: Expr
    check: str = "ry"
    component: str | None = None
    scale: Fraction = Fraction(1)


@dataclass(frozen=True)
class BuiltScenario:
    name: str
    metric: WalkerMetric
    params: Params
    field: VectorField | None = None
    potential: Expr | None = None
    constraints: tuple[Constraint, ...] = ()
    checks: tuple[str, ...] = ("ry",)

    @property
    def f(self) -> Expr:
        return self.metric.f

    def residual(self, check: str | None = None) -> SymTensor2:
        check = check or self.checks[0]
        if check == "ry":
            V = self.field if self.field is not None else gradient(self.metric, self.potential)
            return ry_residual(self.metric, V, self.params)
        if check == "gradient_ry":
            return gradient_ry_residual(self.metric, self.potential, self.params)
        raise ValueError(f"no tensor residual for check {check!r}")

    def scenario(
        self,
        name: str | None = None,
        sampling: Sampling | None = None,
        *,
        epsilon: int | None = None,
        constants: Mapping[str, Expr | None] | None = None,
    ) -> Scenario:
        """Package the family as a scenario document.

        A family built with a symbolic ε needs ``epsilon``; the sign is then
        substituted into every expression.  ``constants`` overrides the
        values of β, λ, μ written to the document (``None`` means free).
        """
        eps = self.metric.epsilon
        if isinstance(eps, Const):
            if epsilon is not None and epsilon != eps.value:
                raise ValueError("epsilon disagrees with the built family")
            epsilon = int(eps.value)
        elif epsilon is None:
            raise ValueError("a scenario document needs a concrete epsilon")
        binds = {eps: Const(epsilon)} if not isinstance(eps, Const) else {}

        def fix(e: Expr) -> Expr:
            return simplify(substitute(e, binds)) if binds else e

        values = {}
        for key, value, default in (
            ("beta", self.params.beta, "beta"),
            ("lambda", self.params.lam, "lambda"),
            ("mu", self.params.mu, "mu"),
        ):
            values[key] = None if value == Param(default) else fix(value)
        if constants:
            values.update(constants)
        if self.potential is not None and self.field is None:
            fld = GradientSpec(fix(self.potential))
        else:
            fld = VectorSpec(tuple(fix(c) for c in self.field))
        return Scenario(
            name or self.name,
            epsilon,
            values,
            fix(self.metric.f),
            fld,
            self.checks,
            sampling or Sampling(),
        )


@dataclass(frozen=True)
class FamilySpec:
    theorem: Theorem
    inputs: Mapping[str, Expr]
    params: Params
    case: str | None = None
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers


def _is_zero(e: Expr) -> bool:
    s = simplify(e)
    return isinstance(s, Const) and s.value == 0


def _only(name: str, e: Expr, allowed: set[Coord]) -> Expr:
    e = simplify(as_expr(e))
    extra = coordinates_of(e) - allowed
    if extra:
        coords = ", ".join(sorted(c.symbol for c in extra))
        want = ", ".join(sorted(c.symbol for c in allowed)) or "no coordinates"
        raise ArgumentViolation(f"input {name!r} depends on {coords}; allowed: {want}")
    return e


def _d(e: Expr, *cs: Coord) -> Expr:
    for c in cs:
        e = diff(e, c)
    return e


def _get(inputs: Mapping[str, Expr], key: str, default=None) -> Expr:
    if key in inputs:
        return as_expr(inputs[key])
    if default is None:
        raise KeyError(f"missing input {key!r}")
    return as_expr(default)


_YZ = {Y, Z}
_XZ = {X, Z}
_ZO = {Z}


# ---------------------------------------------------------------------------
# Ricci–Yamabe solitons with μ ≠ 0


def build_t2(inputs: Mapping[str, Expr], P: Params, name: str = "t2") -> BuiltScenario:
    """Family with ``V³ = a``, ``V² = (−x a_y + b)/ε`` and

    ``f = −ε x³ a_yy/(3μ) + (ε b_y + λ) x²/μ + x c + v``.
    """
    if _is_zero(P.mu):
        raise MuZero("this family needs mu != 0")
    a = _only("a", _get(inputs, "a"), _YZ)
    b = _only("b", _get(inputs, "b"), _YZ)
    c = _only("c", _get(inputs, "c"), _YZ)
    v = _only("v", _get(inputs, "v"), _YZ)
    xi = _only("xi", _get(inputs, "xi"), _XZ)
    eps, beta, lam, mu = P.epsilon, P.beta, P.lam, P.mu
    x = as_expr(X)
    a_y, a_yy, b_y = _d(a, Y), _d(a, Y, Y), _d(b, Y)
    f = simplify(-eps * x**3 * a_yy / (3 * mu) + (eps * b_y + lam) * x**2 / mu + x * c + v)
    V3 = a
    V2 = simplify((-x * a_y + b) / eps)
    V1 = simplify(
        xi
        - beta * ((-eps * x**2 * a_yy + 2 * eps * x * b_y) / mu + c)
        - integrate(f * a_y, Y)
        - (-x * _d(a, Z) + integrate(_d(b, Z), Y))
    )
    W = WalkerMetric(f, eps)
    V = VectorField(V1, V2, V3)
    f1, f2, f3, f11, f22 = _d(f, X), _d(f, Y), _d(f, Z), _d(f, X, X), _d(f, Y, Y)
    dyV2 = _d(V2, Y)
    c33 = simplify(
        beta * (eps * f * f11 - f22) / eps
        + (V1 * f1 + V2 * f2 + V3 * f3 + 2 * _d(V1, Z) + 2 * f * _d(V3, Z))
        - 2 * dyV2 * f
    )
    c13 = simplify(2 * beta * f11 / 2 + _d(V1, X) + _d(V3, Z) - 2 * dyV2)
    cons = (
        Constraint("line (3,3)", c33, "ry", "33"),
        Constraint("line (1,3)", c13, "ry", "13"),
    )
    return BuiltScenario(name, W, P, V, None, cons, ("ry",))


# ---------------------------------------------------------------------------
# Ricci–Yamabe solitons with μ = 0


def _t3_constraints(W: WalkerMetric, V: VectorField, P: Params, Z1, Z3, xi) -> tuple[Constraint, ...]:
    f, eps, beta, lam = W.f, P.epsilon, P.beta, P.lam
    x = as_expr(X)
    l5 = simplify(-2 * x * _d(Z1, Z) + _d(xi, Y) + f * Z1 + eps * _d(Z3, Z))
    V1, V2, V3 = V
    l6 = simplify(
        beta * (eps * f * _d(f, X, X) - _d(f, Y, Y)) / eps
        + V1 * _d(f, X) + V2 * _d(f, Y) + V3 * _d(f, Z)
        + 2 * _d(V1, Z)
        + 2 * f * (_d(V3, Z) + lam)
    )
    return (Constraint("l5", l5, "ry", "23"), Constraint("l6", l6, "ry", "33"))


def build_t3(inputs: Mapping[str, Expr], P: Params, name: str = "t3") -> BuiltScenario:
    """Family with μ = 0: ``V² = −ε Z₁ x − λ y + Z₃``, ``V³ = Z₁ y + Z₂``.

    When ``Z₁ ≡ 0`` (the first corollary) or ``f`` does not depend on ``x``,
    ``ξ`` may be omitted and is then taken as the solution of the ``l5``
    condition, ``ξ = −k∫₀ʸ f − ε y Z₃' + Z₄`` with ``k`` the constant ``Z₁``.
    """
    if not _is_zero(P.mu):
        raise CaseMismatch("this family needs mu = 0")
    eps, beta, lam = P.epsilon, P.beta, P.lam
    Z1 = _only("Z1", _get(inputs, "Z1"), _ZO)
    Z2 = _only("Z2", _get(inputs, "Z2"), _ZO)
    Z3 = _only("Z3", _get(inputs, "Z3"), _ZO)
    Z4 = _only("Z4", _get(inputs, "Z4", 0), _ZO)
    f = simplify(_get(inputs, "f"))
    x, y = as_expr(X), as_expr(Y)
    x_free = X not in coordinates_of(f)
    if "xi" in inputs:
        xi = _only("xi", inputs["xi"], _YZ)
    elif _is_zero(Z1) or x_free:
        if Z not in coordinates_of(Z1) or _is_zero(Z1):
            k = Z1
        else:
            raise ArgumentViolation("with an x-free f the function Z1 must be constant")
        if X in coordinates_of(f) and not _is_zero(k):
            raise ArgumentViolation("xi can only be derived for x-free f or Z1 = 0")
        xi = simplify(-k * integrate(f, Y) - eps * y * _d(Z3, Z) + Z4)
    else:
        raise KeyError("missing input 'xi'")
    V1 = simplify(-beta * _d(f, X) - y * x * _d(Z1, Z) - x * _d(Z2, Z) - 2 * lam * x + xi)
    V2 = simplify(-eps * Z1 * x - lam * y + Z3)
    V3 = simplify(Z1 * y + Z2)
    W = WalkerMetric(f, eps)
    V = VectorField(V1, V2, V3)
    return BuiltScenario(name, W, P, V, None, _t3_constraints(W, V, P, Z1, Z3, xi), ("ry",))


def build_c1(inputs: Mapping[str, Expr], P: Params, name: str = "c1") -> BuiltScenario:
    """The ``Z₁ ≡ 0`` branch: ``V¹ = −β f_x − x Z₂' − 2λx − ε y Z₃' + Z₄``."""
    merged = dict(inputs)
    merged["Z1"] = Const(0)
    return build_t3(merged, P, name)


def build_c2(inputs: Mapping[str, Expr], P: Params, name: str = "c2") -> BuiltScenario:
    """The ``Z₁ ≠ 0`` branch, where ``l5`` is solved for ``f``."""
    if not _is_zero(P.mu):
        raise CaseMismatch("this family needs mu = 0")
    Z1 = _only("Z1", _get(inputs, "Z1"), _ZO)
    if _is_zero(Z1):
        raise ZeroDenominator("Z1 must be a nonzero function")
    Z3 = _only("Z3", _get(inputs, "Z3"), _ZO)
    xi = _only("xi", _get(inputs, "xi"), _YZ)
    x = as_expr(X)
    f = simplify((2 * x * _d(Z1, Z) - _d(xi, Y) - P.epsilon * _d(Z3, Z)) / Z1)
    built = build_t3({**inputs, "f": f, "xi": xi}, P, name)
    # l5 holds identically here; the remaining side condition is l6
    return BuiltScenario(
        name, built.metric, P, built.field, None, tuple(c for c in built.constraints if c.name == "l6"), ("ry",)
    )


# ---------------------------------------------------------------------------
# gradient solitons


def build_t1_gradient(inputs: Mapping[str, Expr], P: Params, name: str = "t1-gradient") -> BuiltScenario:
    """Gradient family with a potential depending on ``y`` only:

    ``F = ελβ/(2(μ−β)) y² + a y + b`` and
    ``f = λ x²/(μ−β) + R x + C ∫₀ʸ exp((a/β)s + ελ s²/(2(μ−β))) ds + D``.
    """
    beta, lam, mu, eps = P.beta, P.lam, P.mu, P.epsilon
    if _is_zero(beta - mu):
        raise BetaEqualsMu("this family needs beta != mu")
    if _is_zero(beta) or _is_zero(lam):
        raise CaseMismatch("this family needs nonzero beta and lambda")
    a = _only("a", _get(inputs, "a"), set())
    b = _only("b", _get(inputs, "b"), set())
    R = _only("R", _get(inputs, "R"), _ZO)
    C = _only("C", _get(inputs, "C"), _ZO)
    D = _only("D", _get(inputs, "D"), _ZO)
    x, y = as_expr(X), as_expr(Y)
    F = simplify(eps * lam * beta / (2 * (mu - beta)) * y**2 + a * y + b)
    kernel = exp(a / beta * y + eps * lam / (2 * (mu - beta)) * y**2)
    f = simplify(lam / (mu - beta) * x**2 + R * x + C * integrate(kernel, Y) + D)
    W = WalkerMetric(f, eps)
    return BuiltScenario(name, W, P, None, F, (), ("gradient_ry",))


def _steady(P: Params) -> None:
    if not _is_zero(P.lam):
        raise CaseMismatch("steady solitons need lambda = 0")


def _half_33(W: WalkerMetric, F: Expr, P: Params, name: str) -> Constraint:
    T = gradient_ry_residual(W, F, P)
    return Constraint(name, simplify(T[3, 3] / 2), "gradient_ry", "33", Fraction(2))


def build_tt(case: str, inputs: Mapping[str, Expr], P: Params, name: str | None = None) -> BuiltScenario:
    """Steady gradient solitons with a potential independent of ``x``.

    ``case`` is one of ``"1a"`` (β = μ = 0), ``"1b"`` (β = μ ≠ 0),
    ``"2a"`` (β = 0 ≠ μ) and ``"2b"`` (β ≠ 0, β ≠ μ).
    """
    _steady(P)
    beta, mu, eps = P.beta, P.mu, P.epsilon
    x, y = as_expr(X), as_expr(Y)
    name = name or f"tt-{case}"
    if case == "1a":
        if not (_is_zero(beta) and _is_zero(mu)):
            raise CaseMismatch("case 1a needs beta = mu = 0")
        a = _only("a", _get(inputs, "a"), set())
        G = _only("F", _get(inputs, "F"), _ZO)
        f = simplify(_get(inputs, "f"))
        F = simplify(a * y + G)
        W = WalkerMetric(f, eps)
        ode = simplify(_d(G, Z, Z) + _d(f, X) / 2 * _d(G, Z) + eps * a / 2 * _d(f, Y))
        return BuiltScenario(
            name, W, P, None, F, (Constraint("S3", ode, "gradient_ry", "33", Fraction(2)),), ("gradient_ry",)
        )
    if case == "1b":
        if not _is_zero(beta - mu) or _is_zero(mu):
            raise CaseMismatch("case 1b needs beta = mu != 0")
        F1 = _only("F1", _get(inputs, "F1"), _ZO)
        F2 = _only("F2", _get(inputs, "F2"), _ZO)
        h = _only("h", _get(inputs, "h", 0), _ZO)
        A = _only("A", _get(inputs, "A", 0), _ZO)
        B = _only("B", _get(inputs, "B", 0), _ZO)
        F = simplify(F1 * y + F2)
        f1 = simplify(-2 / mu * _d(F1, Z) * y + h)
        r = simplify(F1 / mu)
        q = simplify(2 * eps / mu * (_d(F1, Z, Z) * y + _d(F2, Z, Z) + f1 / 2 * (_d(F1, Z) * y + _d(F2, Z))))
        inner = integrate(q * exp(-r * y), Y)
        f2 = simplify(B + integrate(exp(r * y) * (A + inner), Y))
        f = simplify(f1 * x + f2)
        W = WalkerMetric(f, eps)
        cons = ()
        if Z in coordinates_of(F1):
            cons = (Constraint("s3 (x-part)", simplify(-2 * eps * x * F1 * _d(F1, Z) / mu), "gradient_ry", "33"),)
        return BuiltScenario(name, W, P, None, F, cons, ("gradient_ry",))
    if case == "2a":
        if not _is_zero(beta) or _is_zero(mu):
            raise CaseMismatch("case 2a needs beta = 0 and mu != 0")
        a = _only("a", _get(inputs, "a", 0), set())
        if _is_zero(a):
            bb = _only("b", _get(inputs, "b"), set())
            cc = _only("c", _get(inputs, "c"), set())
            f1 = _only("f1", _get(inputs, "f1"), _YZ)
            f2 = _only("f2", _get(inputs, "f2"), _YZ)
            F = simplify(bb * as_expr(Z) + cc)
            W = WalkerMetric(simplify(x * f1 + f2), eps)
            return BuiltScenario(name, W, P, None, F, (_half_33(W, F, P, "L6"),), ("gradient_ry",))
        F2 = _only("F2", _get(inputs, "F2"), _ZO)
        F3 = _only("F3", _get(inputs, "F3"), _ZO)
        F4 = _only("F4", _get(inputs, "F4"), _ZO)
        F = simplify(a * y + F2)
        f = simplify(x * F3 - 2 * eps / a * y * (_d(F2, Z, Z) + _d(F2, Z) * F3 / 2) + F4)
        return BuiltScenario(name, WalkerMetric(f, eps), P, None, F, (), ("gradient_ry",))
    if case == "2b":
        if _is_zero(beta) or _is_zero(beta - mu):
            raise CaseMismatch("case 2b needs beta != 0 and beta != mu")
        F2 = _only("F2", _get(inputs, "F2"), _ZO)
        F5 = _only("F5", _get(inputs, "F5"), _ZO)
        F6 = _only("F6", _get(inputs, "F6"), _ZO)
        F7 = _only("F7", _get(inputs, "F7"), _ZO)
        f = simplify(x * F5 + (_d(F2, Z, Z) + F5 * _d(F2, Z) / 2) / (beta * eps) * y**2 + F6 * y + F7)
        return BuiltScenario(name, WalkerMetric(f, eps), P, None, F2, (), ("gradient_ry",))
    raise CaseMismatch(f"unknown case {case!r}")


def build_beta0(branch: str, inputs: Mapping[str, Expr], P: Params, name: str | None = None) -> BuiltScenario:
    """Gradient solitons with β = 0 and a potential linear in ``x``."""
    if not _is_zero(P.beta):
        raise CaseMismatch("this family needs beta = 0")
    eps, lam, mu = P.epsilon, P.lam, P.mu
    x, y = as_expr(X), as_expr(Y)
    Fz = _only("F", _get(inputs, "F"), _ZO)
    if _is_zero(Fz):
        raise ZeroDenominator("F must be a nonzero function")
    name = name or f"beta0-{branch}"
    if branch == "mu_zero":
        if not _is_zero(mu):
            raise CaseMismatch("branch mu_zero needs mu = 0")
        a = _only("a", _get(inputs, "a"), _ZO)
        b = _only("b", _get(inputs, "b"), _ZO)
        c = _only("c", _get(inputs, "c"), _ZO)
        F = simplify(Fz * x - eps * lam / 2 * y**2 + a * y + b)
        f = simplify((2 * y * _d(a, Z) + 2 * _d(b, Z)) / Fz + 2 * (lam + _d(Fz, Z)) / Fz * x + c)
        W = WalkerMetric(f, eps)
        return BuiltScenario(name, W, P, None, F, (_half_33(W, F, P, "c6"),), ("gradient_ry",))
    if branch == "mu_nonzero":
        if _is_zero(mu):
            raise CaseMismatch("branch mu_nonzero needs mu != 0")
        F2 = _only("F2", _get(inputs, "F2"), _YZ)
        F4 = _only("F4", _get(inputs, "F4"), _ZO)
        F5 = _only("F5", _get(inputs, "F5"), _ZO)
        F = simplify(Fz * x + F2)
        f = simplify(2 * _d(F2, Z) / Fz + (eps * lam + _d(F2, Y, Y)) / (eps * mu) * x**2 + F4 * x + F5)
        W = WalkerMetric(f, eps)
        T = gradient_ry_residual(W, F, P)
        cons = (
            Constraint("c3", simplify(T[1, 3] / 2), "gradient_ry", "13", Fraction(2)),
            Constraint("c6", simplify(T[3, 3] / 2), "gradient_ry", "33", Fraction(2)),
            Constraint("c5 (x^2-part)", T[2, 3], "gradient_ry", "23"),
        )
        return BuiltScenario(name, W, P, None, F, cons, ("gradient_ry",))
    raise CaseMismatch(f"unknown branch {branch!r}")


def build_fin(inputs: Mapping[str, Expr], P: Params, name: str = "fin") -> BuiltScenario:
    """Gradient solitons with β ≠ 0 and ``F = F(z) x + F₂(y, z)``:

    ``f = exp(x F/β) ∫₀ʸ a(s, z) ds + 2 ∂_z F₂ / F + b(x, z)``.

    The optional input ``F1`` replaces the coefficient of ``x`` in the
    potential (keeping ``F`` in ``f``); with ``F1 ≠ F`` the result is in
    general not a soliton and the residual shows where it fails.
    """
    beta, eps = P.beta, P.epsilon
    if _is_zero(beta):
        raise CaseMismatch("this family needs beta != 0")
    Fz = _only("F", _get(inputs, "F"), _ZO)
    if _is_zero(Fz):
        raise ZeroDenominator("F must be a nonzero function")
    F2 = _only("F2", _get(inputs, "F2"), _YZ)
    a = _only("a", _get(inputs, "a"), _YZ)
    b = _only("b", _get(inputs, "b"), _XZ)
    F1 = _only("F1", inputs["F1"], _YZ) if "F1" in inputs else Fz
    x = as_expr(X)
    F = simplify(F1 * x + F2)
    f = simplify(exp(x * Fz / beta) * integrate(a, Y) + 2 * _d(F2, Z) / Fz + b)
    W = WalkerMetric(f, eps)
    T = gradient_ry_residual(W, F, P)
    cons = (
        Constraint("m3", simplify(T[1, 3] / 2), "gradient_ry", "13", Fraction(2)),
        Constraint("m4", simplify(T[2, 2] / 2), "gradient_ry", "22", Fraction(2)),
        Constraint("m6", simplify(T[3, 3] / 2), "gradient_ry", "33", Fraction(2)),
    )
    return BuiltScenario(name, W, P, None, F, cons, ("gradient_ry",))


def build(spec: FamilySpec, name: str | None = None) -> BuiltScenario:
    """Dispatch a :class:`FamilySpec` to its constructor."""
    t = spec.theorem
    kw = {"name": name} if name else {}
    if t is Theorem.T2:
        return build_t2(spec.inputs, spec.params, **kw)
    if t is Theorem.T3:
        return build_t3(spec.inputs, spec.params, **kw)
    if t is Theorem.C1:
        return build_c1(spec.inputs, spec.params, **kw)
    if t is Theorem.C2:
        return build_c2(spec.inputs, spec.params, **kw)
    if t is Theorem.T1_GRADIENT:
        return build_t1_gradient(spec.inputs, spec.params, **kw)
    if t is Theorem.TT_CASE_1A:
        return build_tt("1a", spec.inputs, spec.params, **kw)
    if t is Theorem.TT_CASE_1B:
        return build_tt("1b", spec.inputs, spec.params, **kw)
    if t is Theorem.TT_CASE_2A:
        return build_tt("2a", spec.inputs, spec.params, **kw)
    if t is Theorem.TT_CASE_2B:
        return build_tt("2b", spec.inputs, spec.params, **kw)
    if t is Theorem.BETA0_MU0:
        return build_beta0("mu_zero", spec.inputs, spec.params, **kw)
    if t is Theorem.BETA0_MU_NONZERO:
        return build_beta0("mu_nonzero", spec.inputs, spec.params, **kw)
    if t is Theorem.FIN:
        return build_fin(spec.inputs, spec.params, **kw)
    if t is Theorem.T1_HODGE:
        raise CaseMismatch("the Hodge trace criterion has no constructor; use a hodge scenario")
    raise CaseMismatch(str(t))
