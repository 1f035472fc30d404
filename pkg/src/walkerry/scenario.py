"""Scenario documents: a metric, a field or potential, constants and checks.

Scenario files are UTF-8 JSON::

    {"name": str, "epsilon": ±1, "beta": str, "lambda": str, "mu": str,
     "f": str,
     "field": {"vector": [str, str, str]} | {"gradient": str}
              | {"hodge": {"potential": str, "y": [str, str, str]}},
     "checks": [str, ...],
     "sampling": {"count": int, "range": [num, num], "seed": int, "tol": num}}

``beta``, ``lambda`` and ``mu`` are either ``"free"`` or an expression (an
expression may mention the free constants, e.g. ``"mu": "2*beta"``).
``sampling`` is optional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Union

from .geometry import VectorField, WalkerMetric
from .parse import ParseError, parse_expr
from .symcore import Const, Expr, Param, Params, free_params, render, substitute

CHECKS = ("ry", "gradient_ry", "trace", "divergence")
CONSTANTS = ("beta", "lambda", "mu")
_TOP_KEYS = ("name", "epsilon", "beta", "lambda", "mu", "f", "field", "checks", "sampling")
_REQUIRED = ("name", "epsilon", "beta", "lambda", "mu", "f", "field", "checks")
_SAMPLING_KEYS = ("count", "range", "seed", "tol")
_U64 = 2**64


class SchemaError(Exception):
    """The document does not match the scenario schema."""


@dataclass(frozen=True)
class Sampling:
    count: int = 64
    lo: float = -2.0
    hi: float = 2.0
    seed: int = 42
    tol: float = 1e-9

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sampling count must be at least 1")
        if not self.lo < self.hi:
            raise ValueError("sampling range must satisfy lo < hi")
        if not self.tol > 0:
            raise ValueError("sampling tol must be positive")
        if not 0 <= self.seed < _U64:
            raise ValueError("sampling seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class VectorSpec:
    components: tuple[Expr, Expr, Expr]


@dataclass(frozen=True)
class GradientSpec:
    potential: Expr


@dataclass(frozen=True)
class HodgeSpec:
    potential: Expr
    y: tuple[Expr, Expr, Expr]


FieldSpec = Union[VectorSpec, GradientSpec, HodgeSpec]


@dataclass(frozen=True)
class Scenario:
    name: str
    epsilon: int
    constants: dict  # "beta"/"lambda"/"mu" -> Expr, or None when free
    f: Expr
    field: FieldSpec
    checks: tuple[str, ...]
    sampling: Sampling = field(default_factory=Sampling)

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")
        if not self.checks:
            raise ValueError("at least one check is required")
        for c in self.checks:
            if c not in CHECKS:
                raise ValueError(f"unknown check {c!r}")
        _validate_checks(self.field, self.checks, self.constants)

    # derived views ---------------------------------------------------------
    @property
    def free(self) -> frozenset[str]:
        return frozenset(k for k in CONSTANTS if self.constants.get(k) is None)

    def _bindings(self) -> dict:
        binds: dict = {"eps": Const(self.epsilon)}
        for k in CONSTANTS:
            v = self.constants.get(k)
            if v is not None:
                binds[k] = v
        # resolve constants defined in terms of each other (acyclic by validation)
        for _ in range(len(CONSTANTS)):
            binds = {k: (substitute(v, binds) if k != "eps" else v) for k, v in binds.items()}
        return binds

    def bind(self, e: Expr) -> Expr:
        """Instantiate ε and the non-free constants in ``e``."""
        return substitute(e, self._bindings())

    def params(self) -> Params:
        b = self._bindings()
        return Params(
            beta=b.get("beta", Param("beta")),
            lam=b.get("lambda", Param("lambda")),
            mu=b.get("mu", Param("mu")),
            epsilon=Const(self.epsilon),
        )

    def metric(self) -> WalkerMetric:
        return WalkerMetric(self.bind(self.f), Const(self.epsilon))

    def vector_field(self) -> VectorField | None:
        from .geometry import gradient

        fld = self.field
        if isinstance(fld, VectorSpec):
            return VectorField(*(self.bind(c) for c in fld.components))
        grad = gradient(self.metric(), self.bind(fld.potential))
        if isinstance(fld, GradientSpec):
            return grad
        return VectorField(*(self.bind(y) + g for y, g in zip(fld.y, grad)))

    def potential(self) -> Expr | None:
        fld = self.field
        if isinstance(fld, (GradientSpec, HodgeSpec)):
            return self.bind(fld.potential)
        return None

    def divergence_free_part(self) -> VectorField | None:
        if isinstance(self.field, HodgeSpec):
            return VectorField(*(self.bind(y) for y in self.field.y))
        return None

    def with_sampling(self, **overrides) -> "Scenario":
        return replace(self, sampling=replace(self.sampling, **overrides))


def _validate_checks(fld, checks, constants) -> None:
    for c in checks:
        if c in ("gradient_ry", "trace") and not isinstance(fld, (GradientSpec, HodgeSpec)):
            raise ValueError(f"check {c!r} needs a gradient or hodge potential")
        if c == "divergence" and not isinstance(fld, HodgeSpec):
            raise ValueError("check 'divergence' needs a hodge field")
        if c == "trace" and constants.get("mu") is None:
            raise ValueError("check 'trace' needs a concrete mu")
    # constants may refer to free constants but must not form cycles
    deps = {
        k: {p.name for p in free_params(v)} & set(CONSTANTS)
        for k, v in constants.items()
        if v is not None
    }
    for k in deps:
        seen, stack = set(), [k]
        while stack:
            cur = stack.pop()
            for nxt in deps.get(cur, ()):
                if nxt == k:
                    raise ValueError(f"constant {k!r} is defined in terms of itself")
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)


# ---------------------------------------------------------------------------
# parsing


def _expect_type(value, types, where: str):
    if isinstance(value, bool) or not isinstance(value, types):
        names = types.__name__ if isinstance(types, type) else "/".join(t.__name__ for t in types)
        raise SchemaError(f"{where}: expected {names}")
    return value


def _expr(value, where: str) -> Expr:
    _expect_type(value, str, where)
    try:
        return parse_expr(value)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc.args[0]}", exc.offset, exc.expected) from None


def _expr_triple(value, where: str) -> tuple[Expr, Expr, Expr]:
    _expect_type(value, list, where)
    if len(value) != 3:
        raise SchemaError(f"{where}: expected three components")
    return tuple(_expr(v, f"{where}[{i}]") for i, v in enumerate(value))


def _field(value) -> FieldSpec:
    _expect_type(value, dict, "field")
    if len(value) != 1:
        raise SchemaError("field: expected exactly one of vector, gradient, hodge")
    (kind, body), = value.items()
    if kind == "vector":
        return VectorSpec(_expr_triple(body, "field.vector"))
    if kind == "gradient":
        return GradientSpec(_expr(body, "field.gradient"))
    if kind == "hodge":
        _expect_type(body, dict, "field.hodge")
        unknown = set(body) - {"potential", "y"}
        if unknown:
            raise SchemaError(f"field.hodge: unknown key {sorted(unknown)[0]!r}")
        for k in ("potential", "y"):
            if k not in body:
                raise SchemaError(f"field.hodge: missing key {k!r}")
        return HodgeSpec(_expr(body["potential"], "field.hodge.potential"), _expr_triple(body["y"], "field.hodge.y"))
    raise SchemaError(f"field: unknown kind {kind!r}")


def _sampling(value) -> Sampling:
    _expect_type(value, dict, "sampling")
    unknown = set(value) - set(_SAMPLING_KEYS)
    if unknown:
        raise SchemaError(f"sampling: unknown key {sorted(unknown)[0]!r}")
    kw = {}
    if "count" in value:
        kw["count"] = _expect_type(value["count"], int, "sampling.count")
    if "range" in value:
        rng = _expect_type(value["range"], list, "sampling.range")
        if len(rng) != 2:
            raise SchemaError("sampling.range: expected [lo, hi]")
        lo, hi = (float(_expect_type(v, (int, float), "sampling.range")) for v in rng)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("sampling.range must be finite")
        kw["lo"], kw["hi"] = lo, hi
    if "seed" in value:
        kw["seed"] = _expect_type(value["seed"], int, "sampling.seed")
    if "tol" in value:
        kw["tol"] = float(_expect_type(value["tol"], (int, float), "sampling.tol"))
    return Sampling(**kw)


def scenario_from_dict(doc) -> Scenario:
    _expect_type(doc, dict, "document")
    for k in doc:
        if k not in _TOP_KEYS:
            raise SchemaError(f"unknown key {k!r}")
    for k in _REQUIRED:
        if k not in doc:
            raise SchemaError(f"missing key {k!r}")
    name = _expect_type(doc["name"], str, "name")
    eps = _expect_type(doc["epsilon"], int, "epsilon")
    if eps not in (1, -1):
        raise ValueError(f"epsilon must be +1 or -1, got {eps}")
    constants = {}
    for k in CONSTANTS:
        raw = _expect_type(doc[k], str, k)
        constants[k] = None if raw.strip() == "free" else _expr(raw, k)
    f = _expr(doc["f"], "f")
    fld = _field(doc["field"])
    checks_raw = _expect_type(doc["checks"], list, "checks")
    checks = []
    for c in checks_raw:
        _expect_type(c, str, "checks")
        if c not in CHECKS:
            raise SchemaError(f"checks: unknown check {c!r}")
        if c in checks:
            raise SchemaError(f"checks: duplicate check {c!r}")
        checks.append(c)
    if not checks:
        raise ValueError("checks must be nonempty")
    sampling = _sampling(doc["sampling"]) if "sampling" in doc else Sampling()
    return Scenario(name, eps, constants, f, fld, tuple(checks), sampling)


def parse_scenario(document: bytes | str) -> Scenario:
    """Parse and fully validate a scenario document."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"document is not UTF-8: {exc}") from None
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return scenario_from_dict(doc)


# ---------------------------------------------------------------------------
# serialisation


def _num(v: float):
    return int(v) if float(v).is_integer() else v


def scenario_to_dict(sc: Scenario) -> dict:
    fld = sc.field
    if isinstance(fld, VectorSpec):
        fdoc: dict = {"vector": [render(c) for c in fld.components]}
    elif isinstance(fld, GradientSpec):
        fdoc = {"gradient": render(fld.potential)}
    else:
        fdoc = {"hodge": {"potential": render(fld.potential), "y": [render(c) for c in fld.y]}}
    doc = {"name": sc.name, "epsilon": sc.epsilon}
    for k in CONSTANTS:
        v = sc.constants.get(k)
        doc[k] = "free" if v is None else render(v)
    doc["f"] = render(sc.f)
    doc["field"] = fdoc
    doc["checks"] = list(sc.checks)
    s = sc.sampling
    doc["sampling"] = {"count": s.count, "range": [_num(s.lo), _num(s.hi)], "seed": s.seed, "tol": s.tol}
    return doc


def scenario_to_json(sc: Scenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2, ensure_ascii=False) + "\n"
