"""Command line front end.

Every run prints one report (text or JSON) and exits with

* 0 when all checked properties hold,
* 1 on a property failure,
* 2 on a usage error,
* 3 when the input fails validation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from . import graphs as G
from . import suites
from .envelope import EnvelopeError, w_algebra_basis
from .graphs import GraphError
from .liealg import (
    LieAlgebraError,
    PolarizationError,
    build_polarization,
    catalog,
    check_jacobi,
    load_algebra,
    polarization_violations,
    trace_ad,
    triple_from_json,
)
from .operators import OperatorError, ReductionValue, check_degree_lemma, eval_reduction, eval_two_point
from .poly import PolyRing, PolynomialError, parse, source_aliases, to_text
from .reduction import ReductionError, kernel_d1

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

DEFAULTS = {
    "algebra": "sl2",
    "algebra_file": None,
    "nilpotent": "principal",
    "affine_sign": "minus-chi",
    "format": "text",
    "out": None,
    "max_deg": 8,
    "max_level": 8,
    "seed": 0,
    "samples": 50,
}

AFFINE_SIGNS = {"minus-chi": -1, "plus-chi": 1}

VERIFY_IDS = {
    "bernoulli": "bernoulli",
    "wheel": "wheel",
    "homogenize": "homogenize",
    "two-point": "two-point",
    "wheel-weights": "wheel-weights",
    "exterior-wheels": "exterior-wheels",
    "exterior-bernoulli": "exterior-bernoulli",
    "rho": "rho",
    "gutt": "gutt",
    "duflo": "duflo",
    "2.3": "bernoulli",
    "2.4": "wheel",
    "2.6-structure": "homogenize",
    "2.8": "two-point",
    "remark-2.9": "wheel-weights",
    "eq-13": "exterior-wheels",
    "eq-14": "exterior-bernoulli",
}

FAMILIES = ("bernoulli", "wheel", "bw", "q_n2")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# argument parsing and configuration
# --------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--algebra", help="catalog algebra (sl2, sl3)")
    p.add_argument("--algebra-file", help="structure-constant JSON file")
    p.add_argument("--nilpotent", help="named triple, or a JSON object with e, h, f coordinate lists")
    p.add_argument("--affine-sign", choices=sorted(AFFINE_SIGNS))
    p.add_argument("--format", choices=("text", "machine"))
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--config", help="JSON file with default values for these flags")
    p.add_argument("--max-deg", type=int)
    p.add_argument("--max-level", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="kazhdanw", description="Kazhdan-degree checks for reduction and W-algebras.")
    parser.add_argument("--version", action="version", version=f"kazhdanw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    algebra = sub.add_parser("algebra", help="structure-constant checks")
    algebra_sub = algebra.add_subparsers(dest="action", required=True, parser_class=_Parser)
    algebra_sub.add_parser("check", parents=[common], help="Jacobi identity and triples")

    sub.add_parser("polarize", parents=[common], help="build m, q and the character")

    graphs = sub.add_parser("graphs", help="graph families")
    graphs_sub = graphs.add_subparsers(dest="action", required=True, parser_class=_Parser)
    enum = graphs_sub.add_parser("enumerate", parents=[common], help="list a family")
    enum.add_argument("--family", choices=FAMILIES, required=True)
    enum.add_argument("--size", type=int, required=True)
    enum.add_argument("--edge-orders", action="store_true", help="list every per-vertex edge ordering")

    op = sub.add_parser("operator", help="graph operators")
    op_sub = op.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ev = op_sub.add_parser("eval", parents=[common], help="evaluate a graph on functions")
    ev.add_argument("--graph", required=True, help=f"one of {sorted(G.NAMED_GRAPHS)} or the text form")
    ev.add_argument("--F", dest="F", required=True)
    ev.add_argument("--G", dest="G")
    ev.add_argument("--colored", action="store_true", help="colored evaluation for two-point graphs")

    verify = sub.add_parser("verify", parents=[common], help="run a property suite")
    verify.add_argument("suite", help="suite id: " + ", ".join(VERIFY_IDS))
    verify.add_argument("--max-n", type=int, default=3, help="largest n for two-point graphs")

    red = sub.add_parser("reduction", help="first-order reduction equations")
    red_sub = red.add_subparsers(dest="action", required=True, parser_class=_Parser)
    red_sub.add_parser("kernel", parents=[common], help="graded kernel of d1")

    wal = sub.add_parser("walgebra", help="enveloping-algebra oracle")
    wal_sub = wal.add_subparsers(dest="action", required=True, parser_class=_Parser)
    wal_sub.add_parser("oracle", parents=[common], help="graded invariants of the quotient")

    sub.add_parser("compare", parents=[common], help="kernel against oracle, degree by degree")
    return parser


def resolve_config(args: argparse.Namespace) -> Dict[str, object]:
    """Flags override the config file, which overrides the defaults."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(doc, dict):
            raise InputError("config file must hold a JSON object")
        for key, value in doc.items():
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise InputError(f"unknown config key {key!r}")
            cfg[key] = value
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["affine_sign"] not in AFFINE_SIGNS:
        raise InputError(f"affine_sign must be one of {sorted(AFFINE_SIGNS)}")
    if cfg["format"] not in ("text", "machine"):
        raise InputError("format must be text or machine")
    for key in ("max_deg", "max_level", "samples"):
        if not isinstance(cfg[key], int) or cfg[key] < 0:
            raise InputError(f"{key} must be a non-negative integer")
    return cfg


def load_polarization(cfg):
    try:
        if cfg["algebra_file"]:
            alg, triples = load_algebra(cfg["algebra_file"])
        else:
            alg, triples = catalog(cfg["algebra"])
        nil = cfg["nilpotent"]
        if isinstance(nil, str) and nil.lstrip().startswith("{"):
            triple = triple_from_json(json.loads(nil), alg.dim)
        elif isinstance(nil, dict):
            triple = triple_from_json(nil, alg.dim)
        elif nil in triples:
            triple = triples[nil]
        else:
            raise InputError(f"unknown nilpotent {nil!r}; available: {sorted(triples)}")
        return alg, build_polarization(alg, triple, AFFINE_SIGNS[cfg["affine_sign"]])
    except OSError as exc:
        raise InputError(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid nilpotent JSON: {exc}") from None


def load_algebra_only(cfg):
    try:
        if cfg["algebra_file"]:
            return load_algebra(cfg["algebra_file"])
        return catalog(cfg["algebra"])
    except OSError as exc:
        raise InputError(str(exc)) from None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _rat(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def cmd_algebra_check(args, cfg):
    alg, triples = load_algebra_only(cfg)
    jac = check_jacobi(alg)
    triple_status = {}
    for name, t in sorted(triples.items()):
        try:
            t.validate(alg)
            triple_status[name] = "valid"
        except (LieAlgebraError, PolarizationError) as exc:
            triple_status[name] = f"invalid: {exc}"
    result = {
        "dim": alg.dim,
        "basis": list(alg.basis_names),
        "jacobi": {"pass": jac.passed, "failing_triples": [list(t) for t in jac.failures]},
        "triples": triple_status,
    }
    ok = jac.passed and all(v == "valid" for v in triple_status.values())
    return result, ok


def cmd_polarize(args, cfg):
    _, pol = load_polarization(cfg)
    names = pol.names
    violations = polarization_violations(pol)
    rho = {}
    for i in pol.m_indices:
        vec = tuple(Fraction(int(k == i)) for k in range(pol.dim))
        rho[names[i]] = _rat(trace_ad(pol.algebra, vec))
    result = {
        "basis": list(names),
        "weights": {names[i]: pol.weights[i] for i in range(pol.dim)},
        "m": [names[i] for i in pol.m_indices],
        "q": [names[i] for i in pol.q_indices],
        "chi": {names[i]: _rat(c) for i, c in sorted(pol.chi.items())},
        "r": pol.r,
        "s": pol.s,
        "affine_sign": cfg["affine_sign"],
        "violations": violations,
        "trace_ad_m": rho,
    }
    return result, not violations and all(v == "0" for v in rho.values())


def cmd_graphs_enumerate(args, cfg):
    fam, n = args.family, args.size
    try:
        if fam == "bernoulli":
            gs = G.enumerate_bernoulli(n, edge_orders=args.edge_orders)
        elif fam == "wheel":
            gs = G.enumerate_wheels(n, edge_orders=args.edge_orders)
        elif fam == "bw":
            gs = G.enumerate_bw(n, edge_orders=args.edge_orders)
        else:
            gs = G.enumerate_q_n2(n)
    except GraphError as exc:
        raise InputError(str(exc)) from None
    tags = [str(G.classify(g)) for g in gs]
    expected = {"bernoulli": "B", "wheel": "W", "bw": "BW", "q_n2": "Q_n2"}[fam]
    ok = all(G.classify(g).kind == expected for g in gs)
    result = {
        "family": fam,
        "size": n,
        "count": len(gs),
        "graphs": [{"graph": g.to_text(), "class": t} for g, t in zip(gs, tags)],
    }
    return result, ok


def _graph_from_arg(text: str):
    if text in G.NAMED_GRAPHS:
        return G.NAMED_GRAPHS[text]()
    return G.from_text(text)


def cmd_operator_eval(args, cfg):
    _, pol = load_polarization(cfg)
    ring = PolyRing.from_polarization(pol)
    aliases = source_aliases(pol)
    g = _graph_from_arg(args.graph)
    F = parse(args.F, ring, aliases)
    tag = G.classify(g)
    result: Dict[str, object] = {"graph": g.to_text(), "family": str(tag), "F": to_text(F)}
    if tag.kind == "Q_n2":
        if args.G is None:
            raise UsageError("two-point graphs need --G")
        Gp = parse(args.G, ring, aliases)
        result["G"] = to_text(Gp)
        out = eval_two_point(g, F, Gp, pol, colored=args.colored)
        result["value"] = to_text(out)
        funcs = (F, Gp)
    else:
        out = eval_reduction(g, F, pol)
        result["value"] = out.to_record(pol.names) if isinstance(out, ReductionValue) else to_text(out)
        funcs = (F,)
    ok = True
    if all(f and f.is_kazhdan_homogeneous() for f in funcs):
        kwargs = {"G": funcs[1], "colored": args.colored} if len(funcs) == 2 else {}
        report = check_degree_lemma(g, F, pol, **kwargs)
        result["degree_check"] = report.to_record(pol.names)
        ok = report.passed
    return result, ok


def cmd_verify(args, cfg):
    suite = VERIFY_IDS.get(args.suite)
    if suite is None:
        raise UsageError(f"unknown suite id {args.suite!r}; choose from {', '.join(VERIFY_IDS)}")
    seed, samples = cfg["seed"], cfg["samples"]
    runs: List[suites.SuiteResult] = []
    if suite == "homogenize":
        runs.append(suites.homogenize_suite(seed))
    elif suite == "duflo":
        runs.append(suites.duflo_suite())
    else:
        _, pol = load_polarization(cfg)
        if suite == "bernoulli":
            runs.append(suites.bernoulli_suite(pol, samples, seed=seed))
        elif suite == "wheel":
            runs.append(suites.wheel_suite(pol, samples, seed=seed))
        elif suite == "wheel-weights":
            runs.append(suites.wheel_weight_suite(pol, samples, seed=seed))
        elif suite == "two-point":
            runs.append(suites.two_point_suite(pol, max_n=args.max_n, seed=seed))
            runs.append(suites.labeled_chain_example())
        elif suite == "exterior-wheels":
            runs.append(suites.exterior_wheel_suite(pol, samples, seed=seed))
        elif suite == "exterior-bernoulli":
            runs.append(suites.exterior_bernoulli_suite(pol, samples, seed=seed))
        elif suite == "rho":
            runs.append(suites.rho_suite([(cfg["algebra_file"] or cfg["algebra"], pol)]))
        elif suite == "gutt":
            runs.append(suites.gutt_suite(pol, samples, seed=seed))
    result = {"suite": suite, "runs": [r.to_record() for r in runs]}
    return result, all(r.passed for r in runs)


def cmd_reduction_kernel(args, cfg):
    _, pol = load_polarization(cfg)
    K = kernel_d1(cfg["max_deg"], pol)
    return K.to_record(), True


def cmd_walgebra_oracle(args, cfg):
    _, pol = load_polarization(cfg)
    W = w_algebra_basis(cfg["max_level"], pol)
    return W.to_record(), True


def cmd_compare(args, cfg):
    _, pol = load_polarization(cfg)
    rows = suites.compare_tables(pol, cfg["max_deg"])
    return {"rows": rows}, all(r["equal"] for r in rows)


COMMANDS = {
    ("algebra", "check"): cmd_algebra_check,
    ("polarize", None): cmd_polarize,
    ("graphs", "enumerate"): cmd_graphs_enumerate,
    ("operator", "eval"): cmd_operator_eval,
    ("verify", None): cmd_verify,
    ("reduction", "kernel"): cmd_reduction_kernel,
    ("walgebra", "oracle"): cmd_walgebra_oracle,
    ("compare", None): cmd_compare,
}


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------


def _render_text(obj, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if _flat(value):
                lines.append(f"{pad}{key}: [{', '.join(_scalar(v) for v in value)}]")
            elif isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(obj, list):
        for item in obj:
            if _flat(item):
                lines.append(f"{pad}- [{', '.join(_scalar(v) for v in item)}]")
            elif isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and bool(v) and not any(isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "machine":
        return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    return "\n".join(_render_text(report)) + "\n"


def _emit(report: dict, fmt: str, out: Optional[str]) -> None:
    text = render(report, fmt)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    command = " ".join(a for a in argv[:2] if not a.startswith("-"))
    fmt, out = "text", None
    if "--format" in argv[:-1]:
        fmt = argv[argv.index("--format") + 1]
        fmt = fmt if fmt in ("text", "machine") else "text"
    try:
        parser = build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help / --version
            return int(exc.code or 0)
        cfg = resolve_config(args)
        fmt, out = cfg["format"], cfg["out"]
        key = (args.command, getattr(args, "action", None))
        result, ok = COMMANDS[key](args, cfg)
        report = {
            "tool": "kazhdanw",
            "version": __version__,
            "command": " ".join(k for k in key if k),
            # the destination is left out so reports compare byte for byte
            "config": {k: v for k, v in cfg.items() if k != "out"},
            "exact": True,
            "result": result,
            "pass": ok,
        }
        _emit(report, fmt, out)
        return EXIT_PASS if ok else EXIT_FAIL
    except UsageError as exc:
        return _error(command, "usage", str(exc), fmt, out, EXIT_USAGE)
    except (InputError, LieAlgebraError, PolarizationError, PolynomialError, GraphError,
            OperatorError, ReductionError, EnvelopeError) as exc:
        return _error(command, "input", str(exc), fmt, out, EXIT_INPUT)
    except Exception as exc:  # noqa: BLE001 - every failure becomes a record
        return _error(command, "internal", f"{type(exc).__name__}: {exc}", fmt, out, EXIT_FAIL)


def _error(command, kind, message, fmt, out, code) -> int:
    report = {
        "tool": "kazhdanw",
        "version": __version__,
        "command": command,
        "error": {"kind": kind, "message": message},
        "pass": False,
    }
    try:
        _emit(report, fmt, out)
    except OSError:
        _emit(report, fmt, None)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
