"""Zero testing for expressions and tensors, and scenario reports.

The decision procedure has two stages.  First the expression is put in
canonical form; a structural zero is a proof.  Otherwise it is evaluated at
seeded random points: coordinates and unbound parameters are drawn uniformly
from the sampling range, the sign symbol from {−1, +1}, and every opaque
function symbol is replaced by a random smooth function (a cubic polynomial
plus an exponential term) so that all its derivatives are mutually
consistent.  Points where a denominator is smaller than ``1e-6`` or the
expression leaves its real domain are rejected and redrawn.

For a nonzero polynomial of total degree ``d`` in the sampled quantities,
a random point from a continuous distribution is a root with probability
zero; with floating-point evaluation the practical false-zero rate at the
default 64 samples is negligible for the expression sizes used here.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from dataclasses import dataclass, field, replace
from itertools import product as _cartesian
from typing import Mapping, Union

import numpy as np

from .geometry import PAIRS, SymTensor2
from .symcore import (
    Const,
    Coord,
    DomainError,
    Expr,
    Opaque,
    Param,
    Tracker,
    as_expr,
    diff,
    evaluate,
    render,
    simplify,
    substitute,
    walk,
)

REJECT_BELOW = 1e-6
FD_STEP = 1e-5
_FN_DEGREE = 3


class SamplingExhausted(RuntimeError):
    """No admissible sample point was found within the attempt budget."""


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class ProvedZero:
    kind = "ProvedZero"


@dataclass(frozen=True)
class NumericallyZero:
    samples: int
    max_abs: float
    kind = "NumericallyZero"


@dataclass(frozen=True)
class NonZero:
    witness: dict
    value: float
    kind = "NonZero"


@dataclass(frozen=True)
class Conditional:
    residual: Expr
    kind = "Conditional"


Verdict = Union[ProvedZero, NumericallyZero, NonZero, Conditional]


def is_pass(v: Verdict) -> bool:
    return isinstance(v, (ProvedZero, NumericallyZero))


def verdict_to_dict(v: Verdict) -> dict:
    if isinstance(v, ProvedZero):
        return {"kind": v.kind}
    if isinstance(v, NumericallyZero):
        return {"kind": v.kind, "samples": v.samples, "max_abs": v.max_abs}
    if isinstance(v, NonZero):
        return {"kind": v.kind, "value": v.value, "witness": v.witness}
    return {"kind": v.kind, "residual": render(v.residual)}


# ---------------------------------------------------------------------------
# policy


@dataclass(frozen=True)
class SamplingPolicy:
    """How non-structural zeros are decided.

    ``mode="numeric"`` samples every parameter; ``mode="certificate"`` keeps
    parameters symbolic and answers :class:`Conditional` when a residual that
    is not provably zero still mentions one.
    """

    count: int = 64
    lo: float = -2.0
    hi: float = 2.0
    seed: int = 42
    tol: float = 1e-9
    mode: str = "numeric"
    max_attempts_factor: int = 100

    def __post_init__(self):
        if self.mode not in ("numeric", "certificate"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not self.lo < self.hi:
            raise ValueError("range must satisfy lo < hi")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    @classmethod
    def from_sampling(cls, sampling, mode: str = "numeric") -> "SamplingPolicy":
        return cls(sampling.count, sampling.lo, sampling.hi, sampling.seed, sampling.tol, mode)


# ---------------------------------------------------------------------------
# random smooth functions standing in for opaque symbols


class RandomFunction:
    """``Σ c_α t^α (|α| ≤ 3) + a·exp(r·t)`` in the function's own arguments."""

    def __init__(self, args: tuple[Coord, ...], rng: np.random.Generator):
        self.args = args
        n = len(args)
        self.monomials = [
            m for m in _cartesian(range(_FN_DEGREE + 1), repeat=n) if sum(m) <= _FN_DEGREE
        ]
        self.coeffs = [float(c) for c in rng.uniform(-1.0, 1.0, size=len(self.monomials))]
        self.amp = float(rng.uniform(0.5, 1.5))
        self.rates = [float(r) for r in rng.uniform(-1.0, 1.0, size=n)]

    def value(self, orders: tuple[int, ...], point: Mapping[Coord, float]) -> float:
        t = [point[a] for a in self.args]
        o = [orders[a - 1] for a in self.args]
        total = 0.0
        for m, c in zip(self.monomials, self.coeffs):
            term = c
            for ti, mi, oi in zip(t, m, o):
                if oi > mi:
                    term = 0.0
                    break
                term *= math.perm(mi, oi) * ti ** (mi - oi)
            total += term
        lin = sum(r * ti for r, ti in zip(self.rates, t))
        scale = self.amp
        for r, oi in zip(self.rates, o):
            scale *= r**oi
        return total + scale * math.exp(lin)

    def to_dict(self) -> dict:
        return {
            "args": "".join(a.symbol for a in self.args),
            "monomials": [list(m) for m in self.monomials],
            "coefficients": self.coeffs,
            "amplitude": self.amp,
            "rates": self.rates,
        }


def _opaque_signatures(e: Expr) -> dict[str, tuple[Coord, ...]]:
    sig: dict[str, tuple[Coord, ...]] = {}
    for node in walk(e):
        if isinstance(node, Opaque):
            prev = sig.get(node.name)
            if prev is not None and prev != node.args:
                raise ValueError(f"opaque function {node.name!r} used with different arguments")
            sig[node.name] = node.args
    return sig


def _exact_bindings(e: Expr, params: Mapping[str, object]) -> dict:
    binds = {}
    for node in walk(e):
        if isinstance(node, Param) and node.name in params:
            value = params[node.name]
            if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
                if node.sign and value not in (1, -1):
                    raise ValueError(f"sign symbol {node.name!r} must be bound to +1 or -1")
                binds[node] = Const(value)
    return binds


def _param_names(e: Expr) -> tuple[list[str], list[str]]:
    plain, signs = set(), set()
    for node in walk(e):
        if isinstance(node, Param):
            (signs if node.sign else plain).add(node.name)
    return sorted(plain), sorted(signs)


@dataclass
class _Sample:
    point: dict
    params: dict
    functions: dict

    def lookup(self, node: Opaque, point: Mapping[Coord, float]) -> float:
        return self.functions[node.name].value(node.orders, point)

    def witness(self) -> dict:
        return {
            "point": {c.symbol: v for c, v in sorted(self.point.items())},
            "params": dict(sorted(self.params.items())),
            "functions": {k: fn.to_dict() for k, fn in sorted(self.functions.items())},
        }


def _draw(rng, policy, plain, signs, sigs, bound) -> _Sample:
    pt = {c: float(rng.uniform(policy.lo, policy.hi)) for c in Coord}
    params = dict(bound)
    for name in plain:
        if name not in bound:
            params[name] = float(rng.uniform(policy.lo, policy.hi))
    for name in signs:
        if name not in bound:
            params[name] = float(rng.choice([-1.0, 1.0]))
    functions = {name: RandomFunction(args, rng) for name, args in sorted(sigs.items())}
    return _Sample(pt, params, functions)


def evaluate_sample(e: Expr, sample: _Sample, tracker: Tracker | None = None, floor: float = REJECT_BELOW) -> float:
    return evaluate(e, sample.point, sample.params, sample.lookup, tracker=tracker, singular_below=floor)


def is_zero(
    e: Expr,
    policy: SamplingPolicy | None = None,
    params: Mapping[str, float] | None = None,
    *,
    stream: int = 0,
    force_sampling: bool = False,
) -> Verdict:
    """Decide whether ``e`` vanishes identically.

    ``stream`` selects the random stream (component index) so that tensor
    components are sampled independently but reproducibly.  With
    ``force_sampling`` a structural zero is still sampled (used to audit the
    simplifier); the verdict is then the numeric one.

    Exact values in ``params`` (ints, fractions) are substituted symbolically
    before simplification, so a constraint that vanishes at those constants
    is proved zero; float values are only used as sampling bindings.
    """
    policy = policy or SamplingPolicy()
    params = dict(params or {})
    s = as_expr(e)
    exact = _exact_bindings(s, params)
    if exact:
        s = substitute(s, exact)
    bound = {k: float(v) for k, v in params.items()}
    s = simplify(s)
    if isinstance(s, Const) and s.value == 0 and not force_sampling:
        return ProvedZero()
    plain, signs = _param_names(s)
    if policy.mode == "certificate" and any(p not in bound for p in plain):
        return Conditional(s)
    sigs = _opaque_signatures(s)
    rng = np.random.default_rng([policy.seed, stream])
    accepted = 0
    max_abs = 0.0
    attempts = 0
    budget = policy.count * policy.max_attempts_factor
    while accepted < policy.count and attempts < budget:
        attempts += 1
        sample = _draw(rng, policy, plain, signs, sigs, bound)
        tracker = Tracker()
        try:
            value = evaluate_sample(s, sample, tracker)
        except DomainError:
            continue
        accepted += 1
        if abs(value) > policy.tol * (1.0 + tracker.max_abs):
            return NonZero(sample.witness(), value)
        max_abs = max(max_abs, abs(value))
    if accepted == 0:
        raise SamplingExhausted(f"no admissible sample in {attempts} attempts")
    return NumericallyZero(accepted, max_abs)


def recheck_witness(e: Expr, witness: dict) -> float:
    """Re-evaluate ``e`` at a stored :class:`NonZero` witness."""
    sample = sample_from_witness(witness)
    return evaluate_sample(simplify(e), sample, floor=1e-300)


def sample_from_witness(witness: dict) -> _Sample:
    point = {Coord.from_symbol(k): v for k, v in witness["point"].items()}
    functions = {}
    for name, spec in witness.get("functions", {}).items():
        fn = RandomFunction.__new__(RandomFunction)
        fn.args = tuple(Coord.from_symbol(a) for a in spec["args"])
        fn.monomials = [tuple(m) for m in spec["monomials"]]
        fn.coeffs = list(spec["coefficients"])
        fn.amp = spec["amplitude"]
        fn.rates = list(spec["rates"])
        functions[name] = fn
    return _Sample(point, dict(witness["params"]), functions)


def verify_tensor(
    T: SymTensor2, policy: SamplingPolicy | None = None, params: Mapping[str, float] | None = None
) -> dict[str, Verdict]:
    """Zero-test all six components (component ``k`` uses random stream ``k``)."""
    return {
        f"{i}{j}": is_zero(T[i, j], policy, params, stream=k) for k, (i, j) in enumerate(PAIRS)
    }


def finite_diff_check(
    e: Expr,
    v: Coord | str,
    point: Mapping,
    params: Mapping[str, float] | None = None,
    functions=None,
    h: float = FD_STEP,
) -> float:
    """``|∂e/∂v − central difference|`` at ``point``."""
    if isinstance(v, str):
        v = Coord.from_symbol(v)
    pt = {(Coord.from_symbol(k) if isinstance(k, str) else Coord(k)): float(x) for k, x in point.items()}
    exact = evaluate(diff(e, v), pt, params, functions)
    up, down = dict(pt), dict(pt)
    up[v] += h
    down[v] -= h
    approx = (evaluate(e, up, params, functions) - evaluate(e, down, params, functions)) / (2 * h)
    return abs(exact - approx)


# ---------------------------------------------------------------------------
# scenario reports


@dataclass(frozen=True)
class CheckResult:
    components: dict[str, Verdict]

    @property
    def overall(self) -> str:
        return _overall(self.components.values())


def _overall(verdicts) -> str:
    verdicts = list(verdicts)
    if any(isinstance(v, NonZero) for v in verdicts):
        return "fail"
    if all(is_pass(v) for v in verdicts):
        return "pass"
    return "conditional"


@dataclass(frozen=True)
class VerificationReport:
    name: str
    checks: dict[str, CheckResult]
    sampling: dict
    extra: dict = field(default_factory=dict)

    @property
    def overall(self) -> str:
        return _overall(v for c in self.checks.values() for v in c.components.values())

    def to_dict(self, version: str) -> dict:
        doc = {
            "name": self.name,
            "checks": {
                name: {
                    "components": {k: verdict_to_dict(v) for k, v in res.components.items()},
                    "overall": res.overall,
                }
                for name, res in self.checks.items()
            },
            "overall": self.overall,
            "sampling": self.sampling,
            "version": version,
        }
        doc.update(self.extra)
        return doc

    def to_json(self, version: str) -> str:
        return json.dumps(self.to_dict(version), indent=2, ensure_ascii=False) + "\n"


def scenario_residuals(sc) -> dict[str, dict[str, Expr]]:
    """The residual expressions for every requested check of a scenario."""
    from .soliton import gradient_ry_residual, hodge_soliton_check, ry_residual

    W = sc.metric()
    P = sc.params()
    out: dict[str, dict[str, Expr]] = {}
    for check in sc.checks:
        if check == "ry":
            T = ry_residual(W, sc.vector_field(), P)
            out[check] = {f"{i}{j}": v for (i, j), v in T.items()}
        elif check == "gradient_ry":
            T = gradient_ry_residual(W, sc.potential(), P)
            out[check] = {f"{i}{j}": v for (i, j), v in T.items()}
        elif check == "trace":
            from .soliton import trace_condition_residual

            out[check] = {"value": trace_condition_residual(W, sc.potential(), P)}
        elif check == "divergence":
            hc = hodge_soliton_check(W, sc.divergence_free_part(), Const(0), P)
            out[check] = {"value": hc.divergence}
    return out


def check_scenario(sc, policy: SamplingPolicy | None = None) -> VerificationReport:
    policy = policy or SamplingPolicy.from_sampling(sc.sampling)
    residuals = scenario_residuals(sc)
    checks = {}
    for name, comps in residuals.items():
        checks[name] = CheckResult(
            {k: is_zero(e, policy, stream=i) for i, (k, e) in enumerate(comps.items())}
        )
    sampling = {
        "count": policy.count,
        "range": [policy.lo, policy.hi],
        "seed": policy.seed,
        "tol": policy.tol,
        "mode": policy.mode,
    }
    return VerificationReport(sc.name, checks, sampling)


def with_policy_overrides(policy: SamplingPolicy, **kw) -> SamplingPolicy:
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(policy, **kw)
