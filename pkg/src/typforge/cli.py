"""Command-line front end.

Exit codes: 0 when a verdict was computed, 1 when ``verify-cert`` rejects a
certificate, 2 on input errors, 3 when a verdict is Unknown.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import List, Optional

from . import __version__
from .errors import NotBipartite, ParseError, SchemaError, TypforgeError, UnsupportedFormat
from .graphs import (
    SeparatedGraph,
    STANDARD_NAMES,
    adjacency_matrix,
    build_graph,
    every_cycle_has_entry,
    graph_to_spec,
    is_bipartite,
    is_cofinal,
    is_simple_graph_algebra,
    reduced_adjacency,
    satisfies_three_twos,
    standard_graph,
    to_dot,
    trivially_separated,
)
from .monoids import (
    CyclicBounds,
    Presentation,
    SearchBudget,
    cancellation_report,
    check_claim,
    cyclic_monoid,
    cyclic_type,
    decide_equal,
    decide_leq,
    is_stably_finite,
    iter_claims,
    separated_monoid,
    tarski_measure,
    verdict_json,
)

UNKNOWN = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


# ----------------------------------------------------------------- input

def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_input(path: str):
    """Load a JSON input and build the object its shape describes."""
    from .selfsimilar import action_from_json

    data = _read_json(path)
    if not isinstance(data, dict):
        raise SchemaError("top-level JSON value must be an object")
    if "vertices" in data:
        return build_graph(data)
    if "generators" in data and "relations" in data:
        return Presentation.from_json(data)
    return action_from_json(data)


def _graph_arg(args):
    if getattr(args, "graph", None):
        g = parse_input(args.graph)
        if isinstance(g, Presentation):
            raise SchemaError("expected a graph, got a presentation")
        if not hasattr(g, "vertices"):
            raise SchemaError("expected a graph specification")
        return g
    if getattr(args, "name", None):
        return standard_graph(args.name, n=args.n, m=args.m)
    raise ParseError("give --graph FILE or --name NAME")


def _separated(g):
    return g if isinstance(g, SeparatedGraph) else trivially_separated(g)


def _presentation_arg(args) -> Presentation:
    if getattr(args, "presentation", None):
        p = parse_input(args.presentation)
        if not isinstance(p, Presentation):
            return separated_monoid(_separated(p))
        return p
    if getattr(args, "cyclic", None):
        try:
            p_, q_ = (int(s) for s in args.cyclic.split(","))
        except ValueError:
            raise ParseError("--cyclic expects P,Q") from None
        return cyclic_monoid(p_, q_)
    return separated_monoid(_separated(_graph_arg(args)))


def _budget(args) -> SearchBudget:
    return SearchBudget(depth=args.depth, frontier=args.frontier, timeout_ms=args.timeout_ms)


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _input_json(obj):
    if isinstance(obj, Presentation):
        return obj.to_json()
    if hasattr(obj, "vertices"):
        return graph_to_spec(obj)
    return repr(obj)


# ----------------------------------------------------------------- commands

def cmd_graph(args):
    g = _graph_arg(args)
    base = g.graph if isinstance(g, SeparatedGraph) else g
    if args.format == "dot":
        return {"_dot": to_dot(g)}, _input_json(g), False
    if args.action == "info":
        labels, rows = reduced_adjacency(base)
        bip = is_bipartite(g)
        result = {
            "vertices": list(base.vertices), "edges": list(base.edges),
            "adjacency": adjacency_matrix(base),
            "reduced_adjacency": {"rows": labels, "matrix": rows},
            "sources": list(base.sources()), "sinks": list(base.sinks()),
            "every_cycle_has_entry": every_cycle_has_entry(base),
            "cofinal": is_cofinal(base), "simple": is_simple_graph_algebra(base),
            "bipartite": bip.bipartite,
        }
    elif args.action == "simple":
        result = {"verdict": is_simple_graph_algebra(base), "cofinal": is_cofinal(base),
                  "every_cycle_has_entry": every_cycle_has_entry(base)}
    else:
        bip = is_bipartite(g)
        result = {"verdict": bip.bipartite, "range_part": list(bip.range_part),
                  "source_part": list(bip.source_part),
                  "three_twos": satisfies_three_twos(_separated(g))}
    return result, _input_json(g), False


def cmd_monoid(args):
    p = _presentation_arg(args)
    budget = _budget(args)
    unknown = False
    if args.action in ("eq", "le"):
        x, y = p.element(_need(args.x, "--x")), p.element(_need(args.y, "--y"))
        fn = decide_equal if args.action == "eq" else decide_leq
        res = fn(p, x, y, budget)
        result = verdict_json(p, x, y, res)
        unknown = res.verdict == "Unknown"
    elif args.action == "type":
        x = p.element(_need(args.x, "--x"))
        r = cyclic_type(p, x, budget, max_n=args.max_n)
        result = r.to_json()
        unknown = result["verdict"] == "Unknown"
    elif args.action == "stablyfinite":
        r = is_stably_finite(p, budget)
        result = r.to_json()
        unknown = r.verdict == "Unknown"
    elif args.action == "tarski":
        e = p.element(_need(args.e or args.x, "--e"))
        r = tarski_measure(p, e, budget)
        result = r.to_json()
        unknown = r.verdict == "Unknown"
    else:
        report = cancellation_report(p, args.max_degree, budget)
        result = {k: v.to_json() for k, v in report.items()}
    result = {"presentation": p.to_json(), **result}
    return result, p.to_json(), unknown


def cmd_selfsim(args):
    from .selfsimilar import (
        LAMPLIGHTER, automaton_action, dichotomy_report, is_pseudo_free, katsura_action,
        quotient_graph, swap_example, trivial_action, type_monoid_selfsimilar, verify_cocycle)

    if args.action_file:
        act = parse_input(args.action_file)
        if isinstance(act, Presentation):
            raise SchemaError("expected an action bundle")
        if hasattr(act, "vertices"):
            act = trivial_action(act)
        source = _read_json(args.action_file)
    else:
        builtin = args.builtin or "lamplighter"
        if builtin == "lamplighter":
            act, source = automaton_action(LAMPLIGHTER), LAMPLIGHTER.to_json()
        elif builtin == "swap":
            act, source = swap_example(), "swap"
        elif builtin == "odometer":
            source = {"A": [[2]], "B": [[1]]}
            act = katsura_action(source)
        else:
            raise ParseError(f"unknown builtin action {builtin!r}")
    unknown = False
    if args.action == "check":
        result = verify_cocycle(act, max_path_length=args.path_length, bound=args.bound).to_json()
    elif args.action == "pseudofree":
        r = is_pseudo_free(act, args.bound)
        result = r.to_json()
        unknown = r.verdict == "Unknown"
    elif args.action == "quotient":
        if args.format == "dot":
            return {"_dot": to_dot(quotient_graph(act), "EG")}, source, False
        result = graph_to_spec(quotient_graph(act))
    elif args.action == "typ":
        result = type_monoid_selfsimilar(act).to_json()
    else:
        result = dichotomy_report(act, _budget(args), args.max_degree)
    return result, source, unknown


def cmd_resolve(args):
    from .resolution import bratteli_dot, export_bratteli, resolve_tower

    g = _separated(_graph_arg(args))
    tower = resolve_tower(g, args.depth)
    fmt = args.emit or args.format
    if fmt == "dot":
        return {"_dot": bratteli_dot(tower)}, _input_json(g), False
    result = export_bratteli(tower)
    result["layer_sizes"] = [len(layer) for layer in result["layers"]]
    result["transitions"] = [tower.transition(n)[1].to_json() for n in range(len(tower.levels) - 1)]
    return result, _input_json(g), False


def cmd_typ(args):
    from .resolution import resolve_tower

    g = _separated(_graph_arg(args))
    tower = resolve_tower(g, args.depth)
    x = tower.element(args.level_x, _need(args.x, "--x"))
    y = tower.element(args.level_y, _need(args.y, "--y"))
    budget = SearchBudget(depth=args.search_depth, frontier=args.frontier, timeout_ms=args.timeout_ms)
    query = tower.typ_equal if args.action == "eq" else tower.typ_leq
    level, px, py, res = query(x, y, budget)
    p = tower.monoid(level)
    result = {"level": level, **verdict_json(p, px, py, res)}
    return result, _input_json(g), res.verdict == "Unknown"


def cmd_shift(args):
    from .resolution import fullshift_monoid

    p = fullshift_monoid(args.n)
    return {"n": args.n, "graded": p.graded, "presentation": p.to_json()}, {"n": args.n}, False


def cmd_configspace(args):
    from .configspace import count_balls, crosscheck_counts, enumerate_balls

    g = _separated(_graph_arg(args))
    check = is_bipartite(g)
    if not check:
        raise NotBipartite("configuration spaces need a bipartite separated graph")
    base = args.base or check.range_part[0]
    if args.action == "count":
        result = {"base": base, "counts": [count_balls(g, r, base) for r in range(args.radius + 1)]}
        if args.crosscheck:
            result["crosscheck"] = crosscheck_counts(g, args.radius, [base])
    else:
        result = {"base": base, "radius": args.radius,
                  "configurations": [c.to_json() for c in enumerate_balls(g, args.radius, base)]}
    return result, _input_json(g), False


def cmd_ktheory(args):
    from .ktheory import graph_k_theory, katsura_k_theory

    if args.action == "graph":
        g = _graph_arg(args)
        k0, k1 = graph_k_theory(g)
        source = _input_json(g)
    else:
        source = _read_json(_need(args.spec, "--spec"))
        k0, k1 = katsura_k_theory(source)
    return {"K0": k0.to_json(), "K1": k1.to_json(), "K0_text": str(k0), "K1_text": str(k1)}, source, False


def cmd_verify(args):
    data = _read_json(args.file)
    claims = list(iter_claims(data))
    failed = []
    for k, claim in enumerate(claims):
        try:
            ok = check_claim(claim)
        except (TypforgeError, KeyError, TypeError, ValueError):
            ok = False
        if not ok:
            failed.append(k)
    result = {"verdict": "Verified" if not failed else "Rejected", "claims": len(claims),
              "verified": len(claims) - len(failed), "failed": failed}
    return result, data, False


def _need(value, flag):
    if value is None:
        raise ParseError(f"missing {flag}")
    return value


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--frontier", type=int, default=100_000, help="max states kept by searches")
    common.add_argument("--timeout-ms", type=int, default=None, help="wall-clock cap per search")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; output is identical")
    common.add_argument("--timing", action="store_true", help="add elapsed time to the report")

    graph_in = _Parser(add_help=False)
    graph_in.add_argument("--graph", help="GraphSpec JSON file ('-' for stdin)")
    graph_in.add_argument("--name", choices=STANDARD_NAMES)
    graph_in.add_argument("--n", "-n", type=int)
    graph_in.add_argument("--m", type=int)

    parser = _Parser(prog="typforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", parents=[common, graph_in])
    p.add_argument("action", choices=("info", "simple", "bipartite"))
    p.add_argument("--depth", type=int, default=12)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("monoid", parents=[common, graph_in])
    p.add_argument("action", choices=("eq", "le", "type", "stablyfinite", "tarski", "cancellation"))
    p.add_argument("--presentation", help="presentation or graph JSON file")
    p.add_argument("--cyclic", help="P,Q for <a | Pa = Qa>")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--e")
    p.add_argument("--depth", type=int, default=12, help="search depth")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--max-n", type=int, default=8)
    p.set_defaults(func=cmd_monoid)

    p = sub.add_parser("selfsim", parents=[common])
    p.add_argument("action", choices=("check", "pseudofree", "quotient", "typ", "dichotomy"))
    p.add_argument("--action-file", "--spec", dest="action_file",
                   help="Katsura, automaton or permutation-bundle JSON")
    p.add_argument("--builtin", choices=("lamplighter", "swap", "odometer"))
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--path-length", type=int, default=2)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--max-degree", type=int, default=3)
    p.set_defaults(func=cmd_selfsim)

    p = sub.add_parser("resolve", parents=[common, graph_in])
    p.add_argument("--depth", type=int, default=1, help="number of resolution steps")
    p.add_argument("--emit", choices=("json", "dot"))
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("typ", parents=[common, graph_in])
    p.add_argument("action", choices=("eq", "le"))
    p.add_argument("--depth", type=int, default=1, help="number of resolution steps")
    p.add_argument("--search-depth", type=int, default=12)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--level-x", type=int, default=0)
    p.add_argument("--level-y", type=int, default=0)
    p.set_defaults(func=cmd_typ)

    p = sub.add_parser("shift", parents=[common])
    p.add_argument("action", choices=("monoid",))
    p.add_argument("-n", "--n", type=int, required=True)
    p.add_argument("--depth", type=int, default=12)
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("configspace", parents=[common, graph_in])
    p.add_argument("action", choices=("count", "enumerate"))
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--base")
    p.add_argument("--crosscheck", action="store_true")
    p.add_argument("--depth", type=int, default=12)
    p.set_defaults(func=cmd_configspace)

    p = sub.add_parser("ktheory", parents=[common, graph_in])
    p.add_argument("action", choices=("graph", "katsura"))
    p.add_argument("--spec", help="Katsura JSON file")
    p.add_argument("--depth", type=int, default=12)
    p.set_defaults(func=cmd_ktheory)

    p = sub.add_parser("verify-cert", parents=[common])
    p.add_argument("file", help="report or claim JSON ('-' for stdin)")
    p.add_argument("--depth", type=int, default=12)
    p.set_defaults(func=cmd_verify)
    return parser


_DOT_COMMANDS = {("graph", "info"), ("graph", "bipartite"), ("graph", "simple"),
                 ("resolve", None), ("selfsim", "quotient")}


def _echo(argv: List[str]) -> List[str]:
    """The invocation without flags that must not affect the report."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--threads":
            skip = True
            continue
        if tok.startswith("--threads=") or tok == "--timing":
            continue
        out.append(tok)
    return out


def _verdict_line(result) -> str:
    if isinstance(result, dict):
        for key in ("verdict",):
            if key in result:
                return f"verdict: {result[key]}"
    return "verdict: computed"


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        lines = [_verdict_line(report["result"])]
        for key, value in report["result"].items():
            if key == "verdict":
                continue
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
        lines.append(f"input_digest: {report['input_digest']}")
        return "\n".join(lines) + "\n"
    raise UnsupportedFormat(f"format {fmt!r} is not available for this command")


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        wants_dot = args.format == "dot" or getattr(args, "emit", None) == "dot"
        if wants_dot and (args.command, getattr(args, "action", None)) not in _DOT_COMMANDS \
                and (args.command, None) not in _DOT_COMMANDS:
            raise UnsupportedFormat(f"dot output is not available for {args.command}")
        result, source, unknown = args.func(args)
        if "_dot" in result:
            stdout.write(result["_dot"])
            return 0
        report = {"command": _echo(argv), "input_digest": _digest(source),
                  "tool_version": __version__, "result": result}
        if args.timing:
            report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        stdout.write(emit(report, args.format))
        if args.command == "verify-cert" and result["verdict"] != "Verified":
            return 1
        return UNKNOWN if unknown else 0
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except TypforgeError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except RecursionError:
        sys.stderr.write("error: input too deeply nested\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
