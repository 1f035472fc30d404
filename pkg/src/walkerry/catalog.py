"""Worked examples bundled with their expected verdicts.

Each :class:`CatalogEntry` pairs a scenario document with

* the verdict kind expected for every residual component of its checks,
* *identities*: auxiliary expressions (reduced constraints, stated side
  conditions at specific constants, …) with the verdict kind each must get,
* *diagnostics*: residual components compared against a closed form; they
  are reported but never decide whether the entry reproduces.

Taken together the entries show that nonzero soliton fields exist for
suitable constants β, λ, μ and sign ε.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .families import BuiltScenario, build_c1, build_c2, build_fin, build_t1_gradient, build_t2, build_tt
from .geometry import WalkerMetric
from .parse import parse_expr
from .scenario import HodgeSpec, Sampling, Scenario
from .soliton import gradient_ry_residual, trace_condition_residual
from .symcore import EPS, Const, Expr, Param, Params, simplify, substitute
from .verify import NonZero, ProvedZero, SamplingPolicy, Verdict, check_scenario, is_zero, verdict_to_dict

ZERO6 = ("11", "12", "13", "22", "23", "33")


class UnknownName(KeyError):
    """No catalog entry with the requested name."""


@dataclass(frozen=True)
class Identity:
    name: str
    expr: Expr
    expected: str = "ProvedZero"


@dataclass(frozen=True)
class Diagnostic:
    name: str
    actual: Expr
    expected: Expr


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    summary: str
    scenario: Scenario
    expected: Mapping[str, Mapping[str, str]]
    identities: tuple[Identity, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = ()
    built: BuiltScenario | None = None
    # when set, the check verdicts are reported but not compared
    checks_are_diagnostic: bool = False


def _p(text: str) -> Expr:
    return parse_expr(text)


def _all(kind: str = "ProvedZero") -> dict[str, str]:
    return {k: kind for k in ZERO6}


def _at(e: Expr, **values) -> Expr:
    binds = {("eps" if k == "epsilon" else "lambda" if k == "lam" else k): Const(v) for k, v in values.items()}
    return simplify(substitute(e, binds))


# ---------------------------------------------------------------------------
# entries


def _thm1(sign: int) -> CatalogEntry:
    name = "ex-thm1-plus" if sign == 1 else "ex-thm1-minus"
    f = _p("y*z*exp(-x)")
    beta = Param("beta")
    P = Params.of(beta=beta, lam=0, mu=2 * beta, epsilon=sign)
    W = WalkerMetric(f, Const(sign))

    def trace(profile: str) -> Expr:
        return trace_condition_residual(W, _p(f"({profile})*exp(x + z)"), P)

    if sign == 1:
        main = "cos(2^(1/2)*y)"
        others = ("sin(2^(1/2)*y)", "A*cos(2^(1/2)*y) + B*sin(2^(1/2)*y)")
    else:
        main = "exp(2^(1/2)*y)"
        others = ("exp(-1*2^(1/2)*y)", "C*exp(2^(1/2)*y) + K*exp(-1*2^(1/2)*y)")
    sc = Scenario(
        name,
        sign,
        {"beta": None, "lambda": Const(0), "mu": _p("2*beta")},
        f,
        HodgeSpec(_p(f"({main})*exp(x + z)"), (_p("y"), _p("z"), _p("x"))),
        ("trace", "divergence"),
        Sampling(),
    )
    idents = tuple(Identity(f"trace residual, Y = {o}", trace(o)) for o in others)
    idents += (Identity("trace residual, Y = y", trace("y"), "NonZero"),)
    return CatalogEntry(
        name,
        "trace criterion for f = y z e^{-x}, F = Y(y) e^{x+z}, lambda = 0, mu = 2 beta",
        sc,
        {"trace": {"value": "ProvedZero"}, "divergence": {"value": "ProvedZero"}},
        idents,
    )


def _e1() -> CatalogEntry:
    inputs = {"a": _p("0"), "b": _p("y"), "c": _p("0"), "v": _p("0"), "xi": _p("x")}
    generic = build_t2(inputs, Params(), "ex-E1")
    sc = generic.scenario(epsilon=1, constants={"beta": Const(1), "lambda": Const(1), "mu": Const(2)})
    stated1 = _p("2*eps*beta*(1 + lambda)^2 + 2*eps*mu*(1 + lambda)*(1 - 2*beta/mu) - 2*mu*(1 + lambda)")
    stated2 = _p("2*beta*(1 + lambda)/mu + 1 - 2*beta/mu - 2/eps")
    good = dict(epsilon=1, lam=1, beta=1, mu=2)
    bad = dict(epsilon=1, lam=1, beta=1, mu=1)
    idents = (
        Identity("first constraint at (eps, lambda, beta, mu) = (1, 1, 1, 2)", _at(stated1, **good)),
        Identity("second constraint at (eps, lambda, beta, mu) = (1, 1, 1, 2)", _at(stated2, **good)),
        Identity("second constraint at (eps, lambda, beta, mu) = (1, 1, 1, 1)", _at(stated2, **bad), "NonZero"),
    )
    idents += tuple(
        Identity(f"family constraint {c.name} at (1, 1, 1, 2)", _at(c.expr, **good)) for c in generic.constraints
    )
    return CatalogEntry(
        "ex-E1",
        "a = c = v = 0, b = y, xi = x with eps = lambda = beta = 1, mu = 2",
        sc,
        {"ry": _all()},
        idents,
        built=generic,
    )


def _c1() -> CatalogEntry:
    z5 = _p("eps*(a1*z + a2)^(-1)")
    P = Params.of(lam=0, mu=0)
    built = build_c1(
        {"Z2": _p("a1*z + a2"), "Z3": _p("a*z + b"), "Z4": _p("c"), "f": z5}, P, "ex-C1"
    )
    sc = built.scenario(epsilon=1)
    z2 = _p("a1*z + a2")
    reduced = simplify(
        z2 * _p("D(eps*(a1*z + a2)^(-1), z)") - 2 * _p("x") * _p("D(a1*z + a2, z, 2)") + z5 * _p("D(a1*z + a2, z)")
    )
    expected = _all()
    expected["33"] = "NonZero"
    T = built.residual()
    return CatalogEntry(
        "ex-C1",
        "Z1 = 0, f = Z5 = eps/(a1 z + a2), Z2 = a1 z + a2, Z3 = a z + b, Z4 = c, lambda = 0",
        sc,
        {"ry": expected},
        (Identity("reduced constraint Z2 Z5' - 2x Z2'' + Z5 Z2'", _at(reduced, epsilon=1)),),
        (Diagnostic("ry (3,3)", _at(T[3, 3], epsilon=1), _p("a1*(a1*z + a2)^(-1)")),),
        built=built,
    )


def _c2() -> CatalogEntry:
    P = Params.of(lam=1, mu=0, epsilon=1)
    inputs = {"Z1": _p("1"), "Z2": _p("0"), "Z3": _p("z^2"), "xi": _p("2*z*y + 2*z^2 + b0")}
    built = build_c2(inputs, P, "ex-C2")
    V1, V2, V3 = built.field
    f = built.f
    Z1 = inputs["Z1"]
    beta = Param("beta")
    stated = simplify(
        beta * _p("D(D(D(2*z*y + 2*z^2 + b0, y), y), y)") / Z1
        + V1 * _p("D(1, z)") / Z1
        - V2 * _p("D(D(2*z*y + 2*z^2 + b0, y), y)") / Z1
        + V3 * _d_z(f)
        + 2 * _d_z(V1)
        + 2 * f * (_d_z(V3) + 1)
    )
    return CatalogEntry(
        "ex-C2",
        "Z1 = 1, Z2 = 0, Z3 = z^2, xi = 2zy + 2z^2 + b0, eps = lambda = 1",
        built.scenario(),
        {"ry": _all()},
        (Identity("stated constraint", stated),),
        built=built,
    )


def _d_z(e: Expr) -> Expr:
    from .symcore import Z, diff

    return diff(e, Z)


def _t1() -> CatalogEntry:
    P = Params()
    inputs = {"a": _p("0"), "b": _p("b"), "R": _p("R(z)"), "C": _p("0"), "D": _p("D0(z)")}
    built = build_t1_gradient(inputs, P, "ex-t1-reduced")
    # the potential with coefficient ελβ/(4(μ−β)) leaves a constant (2,2) residual
    F_quarter = _p("eps*lambda*beta/(4*(mu - beta))*y^2 + b")
    T = gradient_ry_residual(built.metric, F_quarter, P)
    return CatalogEntry(
        "ex-t1-reduced",
        "a = 0, C = 0, symbolic R(z), D(z), beta != mu",
        built.scenario(epsilon=1),
        {"gradient_ry": _all()},
        (),
        (Diagnostic("(2,2) with quarter coefficient", _at(T[2, 2], epsilon=1), _p("lambda*beta/(beta - mu)")),),
        built=built,
    )


def _tt_ode() -> CatalogEntry:
    P = Params.of(beta=0, lam=0, mu=0)
    G = _p("INT(exp(-a1/2*z)*(-eps*a/2*INT(exp(a1/2*z)*H(z), z, 0) + C1), z, 0) + C2")
    f = _p("a1*x + H(z)*y")
    built = build_tt("1a", {"a": _p("a"), "F": G, "f": f}, P, "ex-TT-ode")
    generic = build_tt("1a", {"a": _p("a"), "F": _p("G(z)"), "f": f}, P)
    ode = generic.constraints[0].expr
    factor = simplify(
        _p("D(exp(a1/2*z)*U(z), z)") - _p("exp(a1/2*z)") * (_p("D(U(z), z)") + _p("a1/2") * _p("U(z)"))
    )
    idents = (
        Identity("constraint is G'' + (a1/2) G' + (eps a/2) H", simplify(ode - _p("D(G(z), z, 2) + a1/2*D(G(z), z) + eps*a/2*H(z)"))),
        Identity("integrating factor exp(a1 z/2)", factor),
        Identity("emitted constraint for the solution", _at(built.constraints[0].expr, epsilon=1)),
    )
    return CatalogEntry(
        "ex-TT-ode",
        "beta = mu = lambda = 0, f = a1 x + H(z) y, F = a y + G(z) with G from the integrating factor",
        built.scenario(epsilon=1),
        {"gradient_ry": _all()},
        idents,
        built=built,
    )


def _fin() -> CatalogEntry:
    P = Params.of(lam=1)
    inputs = {
        "F": _p("1"),
        "F2": _p("-eps/2*y^2 - C/2*exp(-2*z)"),
        "a": _p("0"),
        "b": _p("0"),
        "F1": _p("alpha*y - z"),
    }
    built = build_fin(inputs, P, "ex-fin")
    Fp = built.potential
    f = built.f
    from .symcore import X, Y, Z, diff

    lam = Const(1)
    idents = (
        Identity("D(F, x, z) = -lambda", simplify(diff(diff(Fp, X), Z) + lam)),
        Identity("D(F, y, y) = -eps lambda", simplify(diff(Fp, Y, 2) + EPS * lam)),
        Identity("D(F, z, z) = -lambda f", simplify(diff(Fp, Z, 2) + lam * f)),
    )
    idents = tuple(Identity(i.name, _at(i.expr, epsilon=1)) for i in idents)
    T = built.residual()
    diags = (
        Diagnostic("gradient_ry (3,3)", _at(T[3, 3], epsilon=1), _p("4*C*exp(-2*z)*(alpha*y - z)")),
        Diagnostic("gradient_ry (1,2)", _at(T[1, 2], epsilon=1), _p("2*alpha")),
    )
    return CatalogEntry(
        "ex-fin",
        "lambda = 1, F = 1, a = b = 0, potential (alpha y - z) x - (eps/2) y^2 - (C/2) e^{-2z}",
        built.scenario(epsilon=1),
        {},
        idents,
        diags,
        built=built,
        checks_are_diagnostic=True,
    )


NAMES = ("ex-thm1-plus", "ex-thm1-minus", "ex-E1", "ex-C1", "ex-C2", "ex-t1-reduced", "ex-TT-ode", "ex-fin")


@lru_cache(maxsize=None)
def catalog() -> tuple[CatalogEntry, ...]:
    return (_thm1(1), _thm1(-1), _e1(), _c1(), _c2(), _t1(), _tt_ode(), _fin())


def names() -> tuple[str, ...]:
    return NAMES


def lookup(name: str) -> CatalogEntry:
    for entry in catalog():
        if entry.name == name:
            return entry
    raise UnknownName(name)


# ---------------------------------------------------------------------------
# reproduction


@dataclass
class Reproduction:
    entry: str
    matched: bool
    report: dict
    identities: list[dict] = field(default_factory=list)
    diagnostics: list[dict] = field(default_factory=list)
    mismatches: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.entry,
            "matched": self.matched,
            "mismatches": self.mismatches,
            "checks": self.report["checks"],
            "identities": self.identities,
            "diagnostics": self.diagnostics,
        }


def _kind_matches(expected: str, got: Verdict) -> bool:
    if expected == "ProvedZero":
        return isinstance(got, ProvedZero)
    if expected == "NonZero":
        return isinstance(got, NonZero)
    return got.kind == expected


def reproduce(entry: CatalogEntry, policy: SamplingPolicy | None = None, version: str = "") -> Reproduction:
    """Run an entry's checks and identities and compare with its expectations."""
    policy = policy or SamplingPolicy.from_sampling(entry.scenario.sampling)
    report = check_scenario(entry.scenario, policy)
    mismatches: list[str] = []
    if not entry.checks_are_diagnostic:
        for check, comps in entry.expected.items():
            got = report.checks[check].components
            for comp, kind in comps.items():
                if not _kind_matches(kind, got[comp]):
                    mismatches.append(f"{check}[{comp}]: expected {kind}, got {got[comp].kind}")
    idents = []
    for i, ident in enumerate(entry.identities):
        v = is_zero(ident.expr, policy, stream=100 + i)
        ok = _kind_matches(ident.expected, v)
        if not ok:
            mismatches.append(f"identity {ident.name!r}: expected {ident.expected}, got {v.kind}")
        idents.append({"name": ident.name, "expected": ident.expected, "verdict": verdict_to_dict(v), "matched": ok})
    diags = []
    for i, d in enumerate(entry.diagnostics):
        v = is_zero(simplify(d.actual - d.expected), policy, stream=200 + i)
        diags.append({"name": d.name, "verdict": verdict_to_dict(v), "matches_closed_form": v.kind in ("ProvedZero", "NumericallyZero")})
    return Reproduction(entry.name, not mismatches, report.to_dict(version), idents, diags, mismatches)
