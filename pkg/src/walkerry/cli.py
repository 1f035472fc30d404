"""Command-line front end.

Subcommands::

    walkerry check SCENARIO.json      verify a scenario document
    walkerry build FAMILY INPUTS.json --out OUT.json
    walkerry reproduce NAME|all       rerun catalog entries against expectations
    walkerry list                     print catalog names

Exit codes: 0 pass, 1 a check failed (or a catalog expectation was not
met), 3 only conditional verdicts remain, 2 I/O / parse / schema / family
input errors, 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .families import FamilyError, Theorem, build_beta0, build_c1, build_c2, build_fin, build_t1_gradient, build_t2, build_t3, build_tt
from .parse import ParseError, parse_expr
from .scenario import SchemaError, parse_scenario, scenario_to_json
from .symcore import Const, Params, Param, render
from .verify import SamplingPolicy, check_scenario, with_policy_overrides

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_CONDITIONAL = 3
EXIT_USAGE = 64

_OVERALL_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "conditional": EXIT_CONDITIONAL}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, help="sampling seed (overrides the scenario)")
    common.add_argument("--samples", type=_positive_int, help="number of accepted samples")
    common.add_argument("--tol", type=_positive_float, help="relative tolerance for numeric zeros")
    common.add_argument("--format", choices=("json", "text"), default="json", help="output format")
    common.add_argument("--quiet", action="store_true", help="print nothing; report through the exit code")
    common.add_argument("--out", help="write the report (or built scenario) to this path")

    p = _Parser(prog="walkerry", description="Ricci-Yamabe soliton checks on Walker 3-manifolds")
    p.add_argument("--version", action="version", version=f"walkerry {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("check", parents=[common], help="verify a scenario document")
    c.add_argument("path")
    c.add_argument(
        "--numeric",
        action="store_true",
        help="sample free constants instead of reporting them as conditional",
    )

    b = sub.add_parser("build", parents=[common], help="instantiate a solution family")
    b.add_argument("family", choices=[t.value for t in Theorem if t is not Theorem.T1_HODGE])
    b.add_argument("inputs", help="JSON file with the family inputs and constants")

    r = sub.add_parser("reproduce", parents=[common], help="rerun catalog entries")
    r.add_argument("name", help="catalog name or 'all'")

    sub.add_parser("list", parents=[common], help="print catalog names")
    return p


# ---------------------------------------------------------------------------
# output helpers


def _colour(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") is not None or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


_STATUS_COLOUR = {"pass": "32", "fail": "31", "conditional": "33", "matched": "32", "mismatch": "31"}


def _status(word: str) -> str:
    return _colour(word, _STATUS_COLOUR.get(word, "0"))


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    elif not args.quiet:
        sys.stdout.write(text)


def _policy(args, base: SamplingPolicy) -> SamplingPolicy:
    return with_policy_overrides(base, seed=args.seed, count=args.samples, tol=args.tol)


def _report_text(doc: dict) -> str:
    lines = [f"{doc['name']}: {_status(doc['overall'])}"]
    for check, res in doc["checks"].items():
        lines.append(f"  {check}: {_status(res['overall'])}")
        for comp, v in res["components"].items():
            extra = ""
            if v["kind"] == "NonZero":
                extra = f" value={v['value']:.6g}"
            elif v["kind"] == "NumericallyZero":
                extra = f" samples={v['samples']} max_abs={v['max_abs']:.3g}"
            elif v["kind"] == "Conditional":
                extra = f" residual={v['residual']}"
            lines.append(f"    {comp}: {v['kind']}{extra}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args) -> int:
    try:
        data = Path(args.path).read_bytes()
    except OSError as exc:
        print(f"walkerry: cannot read {args.path}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    sc = parse_scenario(data)
    mode = "numeric" if args.numeric else "certificate"
    policy = _policy(args, SamplingPolicy.from_sampling(sc.sampling, mode))
    report = check_scenario(sc, policy)
    if args.format == "json":
        _emit(args, report.to_json(__version__))
    else:
        _emit(args, _report_text(report.to_dict(__version__)))
    return _OVERALL_EXIT[report.overall]


_BUILDERS = {
    Theorem.T2: lambda i, P, n: build_t2(i, P, n),
    Theorem.T3: lambda i, P, n: build_t3(i, P, n),
    Theorem.C1: lambda i, P, n: build_c1(i, P, n),
    Theorem.C2: lambda i, P, n: build_c2(i, P, n),
    Theorem.T1_GRADIENT: lambda i, P, n: build_t1_gradient(i, P, n),
    Theorem.TT_CASE_1A: lambda i, P, n: build_tt("1a", i, P, n),
    Theorem.TT_CASE_1B: lambda i, P, n: build_tt("1b", i, P, n),
    Theorem.TT_CASE_2A: lambda i, P, n: build_tt("2a", i, P, n),
    Theorem.TT_CASE_2B: lambda i, P, n: build_tt("2b", i, P, n),
    Theorem.BETA0_MU0: lambda i, P, n: build_beta0("mu_zero", i, P, n),
    Theorem.BETA0_MU_NONZERO: lambda i, P, n: build_beta0("mu_nonzero", i, P, n),
    Theorem.FIN: lambda i, P, n: build_fin(i, P, n),
}


def _load_family_inputs(path: str):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("inputs document must be an object")
    unknown = set(doc) - {"name", "epsilon", "beta", "lambda", "mu", "inputs"}
    if unknown:
        raise SchemaError(f"unknown key {sorted(unknown)[0]!r}")
    raw_inputs = doc.get("inputs", {})
    if not isinstance(raw_inputs, dict) or not all(isinstance(v, str) for v in raw_inputs.values()):
        raise SchemaError("inputs: expected an object of expression strings")
    inputs = {k: parse_expr(v) for k, v in raw_inputs.items()}
    eps = doc.get("epsilon", 1)
    if isinstance(eps, bool) or eps not in (1, -1):
        raise SchemaError("epsilon must be 1 or -1")
    consts = {}
    for key, default in (("beta", "beta"), ("lambda", "lambda"), ("mu", "mu")):
        raw = doc.get(key, "free")
        if not isinstance(raw, str):
            raise SchemaError(f"{key}: expected an expression string or 'free'")
        consts[key] = Param(default) if raw.strip() == "free" else parse_expr(raw)
    P = Params(beta=consts["beta"], lam=consts["lambda"], mu=consts["mu"], epsilon=Const(eps))
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("name: expected a string")
    return inputs, P, name


def _constraints_path(out: str) -> Path:
    p = Path(out)
    stem = p.name[: -len(".json")] if p.name.endswith(".json") else p.name
    return p.with_name(stem + ".constraints.json")


def _cmd_build(args) -> int:
    theorem = Theorem(args.family)
    inputs, P, name = _load_family_inputs(args.inputs)
    try:
        built = _BUILDERS[theorem](inputs, P, name or theorem.value)
    except KeyError as exc:
        raise SchemaError(f"missing family input {exc.args[0]}") from None
    sc = built.scenario()
    if any(v is not None for v in (args.seed, args.samples, args.tol)):
        kw = {"seed": args.seed, "count": args.samples, "tol": args.tol}
        sc = sc.with_sampling(**{k: v for k, v in kw.items() if v is not None})
    text = scenario_to_json(sc)
    cons = [
        {
            "name": c.name,
            "check": c.check,
            "component": c.component,
            "scale": str(c.scale),
            "expr": render(c.expr),
        }
        for c in built.constraints
    ]
    cons_text = json.dumps({"name": sc.name, "constraints": cons}, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _constraints_path(args.out).write_text(cons_text, encoding="utf-8")
    elif not args.quiet:
        sys.stdout.write(text)
        sys.stdout.write(cons_text)
    return EXIT_PASS


def _cmd_reproduce(args) -> int:
    from .catalog import catalog, lookup, reproduce

    if args.name == "all":
        entries = list(catalog())
    else:
        try:
            entries = [lookup(args.name)]
        except KeyError:
            raise UsageError(f"unknown catalog entry {args.name!r}") from None
    results = []
    for entry in entries:
        policy = _policy(args, SamplingPolicy.from_sampling(entry.scenario.sampling, "numeric"))
        results.append(reproduce(entry, policy, __version__))
    matched = sum(r.matched for r in results)
    if args.format == "json":
        doc = {
            "entries": [r.to_dict() for r in results],
            "matched": matched,
            "total": len(results),
            "version": __version__,
        }
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    else:
        lines = []
        for r in results:
            lines.append(f"{r.entry}: {_status('matched' if r.matched else 'mismatch')}")
            lines.extend(f"  {m}" for m in r.mismatches)
            for d in r.diagnostics:
                tag = "matches closed form" if d["matches_closed_form"] else "differs from closed form"
                lines.append(f"  diagnostic {d['name']}: {tag}")
        lines.append(f"{matched}/{len(results)} expected verdicts matched")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_PASS if matched == len(results) else EXIT_FAIL


def _cmd_list(args) -> int:
    from .catalog import catalog

    entries = catalog()
    if args.format == "json":
        text = json.dumps([{"name": e.name, "summary": e.summary} for e in entries], indent=2) + "\n"
    else:
        text = "".join(f"{e.name}\t{e.summary}\n" for e in entries)
    _emit(args, text)
    return EXIT_PASS


_COMMANDS = {"check": _cmd_check, "build": _cmd_build, "reproduce": _cmd_reproduce, "list": _cmd_list}


def run(argv: Sequence[str] | None = None) -> int:
    """Run the command line ``argv`` and return the exit code."""
    parser = _parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:  # --help, --version or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"walkerry: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"walkerry: parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SchemaError, ValueError, FamilyError) as exc:
        print(f"walkerry: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"walkerry: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
