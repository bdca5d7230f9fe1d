"""Command-line front end: ``wconn <command> ...``.

Exit codes: 0 success (any verdict), 1 parse error, 2 resolution error,
3 evaluation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .algebra import AlgebraError, UnknownPortError, WaiTerm, evaluate, wai_equiv
from .connectors import ConnectorError, congruence_oracle, congruence_report, degree, translate
from .dsl import (DslError, Model, parse, parse_gamma, parse_interaction, parse_wac, parse_wai,
                  pretty_gamma, pretty_query, pretty_wac)
from .schemes import SCHEMES, SchemeError, canonical_gamma, scheme
from .semiring import (SemiringError, check_laws, default_samples, format_value,
                       get_semiring)
from .tables import TableError, build_table


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# -- helpers ------------------------------------------------------------------------

def load_model(path: str) -> Model:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", 1) from None
    return parse(text)


def resolve_term(model: Model, text: str):
    """A term name from the model, or an inline expression."""
    text = text.strip()
    if text in model.wai:
        return "wai", model.wai[text]
    if text in model.wac:
        return "wac", model.wac[text]
    if "[" in text:
        return "wac", parse_wac(text, model)
    return "wai", parse_wai(text, model)


def as_wai(kind_term) -> WaiTerm:
    kind, t = kind_term
    return translate(t) if kind == "wac" else t


def resolve_gamma(model: Model, text: str) -> frozenset:
    text = text.strip()
    if text.startswith("{"):
        return parse_gamma(text, model)
    return model.gamma(text)


def pick_semiring(model: Model, name: str | None):
    if name:
        s = get_semiring(name, model.universe)
    else:
        s = model.semiring
        if s is None:
            raise CliError("no semiring: declare one in the model or pass --semiring", 2)
    s.require_idempotent()
    return s


def model_weights(model: Model, s):
    w = dict(model.ports.weights or {})
    return {p: s.check(v) for p, v in w.items()}


def fmt_set(model: Model, a) -> str:
    return "{" + ", ".join(model.ports.sort(a)) + "}"


# -- commands -----------------------------------------------------------------------

def cmd_eval(args):
    model = load_model(args.model)
    z = as_wai(resolve_term(model, args.term))
    g = resolve_gamma(model, args.gamma)
    s = pick_semiring(model, args.semiring)
    v = evaluate(z, g, model.ports, s, model_weights(model, s))
    text = format_value(s, v)
    inputs = {"model": args.model, "term": args.term, "gamma": args.gamma, "semiring": s.name}
    return text, inputs, text


def cmd_equiv(args):
    model = load_model(args.model)
    a, b = resolve_term(model, args.lhs), resolve_term(model, args.rhs)
    inputs = {"model": args.model, "lhs": args.lhs, "rhs": args.rhs, "mode": args.mode}
    if args.mode == "concrete":
        s = pick_semiring(model, args.semiring)
        ok = wai_equiv(as_wai(a), as_wai(b), model.ports, "concrete", s, model_weights(model, s))
        inputs["semiring"] = s.name
    else:
        ok = wai_equiv(as_wai(a), as_wai(b), model.ports)
    verdict = "EQUIV" if ok else "NOT-EQUIV"
    return verdict, inputs, {"verdict": verdict, "equivalent": ok}


def cmd_congruent(args):
    model = load_model(args.model)
    (ka, a), (kb, b) = resolve_term(model, args.lhs), resolve_term(model, args.rhs)
    if ka != "wac" or kb != "wac":
        raise CliError("congruence is defined for connectors (wac terms)", 2)
    rep = congruence_report(a, b, model.ports)
    da, db = degree(a), degree(b)
    verdict = "CONGRUENT" if rep.congruent else "NOT-CONGRUENT"
    head = verdict if rep.congruent else f"{verdict} ({'; '.join(rep.failed())})"
    lines = [head,
             f"  condition 1, equivalence: {'pass' if rep.equivalent else 'fail'}",
             f"  condition 2, equivalence after fusing [1]': {'pass' if rep.trigger_one_equivalent else 'fail'}",
             f"  condition 3, degree parity: {'pass' if rep.degree_parity else 'fail'}"
             f" (#T {da.triggers} vs {db.triggers})"]
    result = {"verdict": verdict, "congruent": rep.congruent,
              "conditions": {"equivalence": rep.equivalent,
                             "trigger_one_equivalence": rep.trigger_one_equivalent,
                             "degree_parity": rep.degree_parity},
              "degrees": [da.triggers, db.triggers]}
    if args.oracle:
        orc = congruence_oracle(a, b, model.ports, depth=args.depth, n=args.contexts, seed=args.seed)
        if orc.found:
            lines.append(f"  oracle: counterexample context {pretty_wac(orc.counterexample)}"
                         f" after {orc.checked} contexts")
            lines.append(f"    {pretty_wac(orc.lhs)}  vs  {pretty_wac(orc.rhs)}")
        else:
            lines.append(f"  oracle: no counterexample in {orc.checked} contexts")
        result["oracle"] = {"counterexample": pretty_wac(orc.counterexample) if orc.found else None,
                            "checked": orc.checked}
    inputs = {"model": args.model, "lhs": args.lhs, "rhs": args.rhs}
    return "\n".join(lines), inputs, result


def cmd_table(args):
    model = load_model(args.model)
    z = as_wai(resolve_term(model, args.term))
    a = parse_interaction(args.interaction, model) if args.interaction.strip().startswith("{") \
        else frozenset(x.strip() for x in args.interaction.split(",") if x.strip())
    P = model.ports
    for p in a:
        P.index(p)
    if args.semiring or args.numeric:
        s = pick_semiring(model, args.semiring)
        t = build_table(z, a, P, s, model_weights(model, s), args.split, args.nested)
    else:
        t = build_table(z, a, P, None, None, args.split, args.nested)
    inputs = {"model": args.model, "term": args.term, "interaction": P.sort(a),
              "split": args.split, "nested": args.nested}
    return t.render_all(), inputs, t.to_json()


def cmd_scheme(args):
    c = scheme(args.kind, args.sender, args.receivers)
    g = canonical_gamma(args.kind, args.sender, args.receivers)
    order = [args.sender] + list(args.receivers)
    text = "\n".join([f"port {', '.join(order)};",
                      f"wac c = {pretty_wac(c)};",
                      f"gamma g = {pretty_gamma(g, order)};"])
    inputs = {"kind": args.kind, "sender": args.sender, "receivers": list(args.receivers)}
    return text, inputs, {"connector": pretty_wac(c), "gamma": pretty_gamma(g, order)}


def _parse_sample(s, raw: str):
    raw = raw.strip()
    if s.name == "boolean":
        return raw.lower() in ("1", "true")
    if s.name == "natural":
        return int(raw)
    if s.name == "powerset":
        return frozenset(x for x in raw.strip("{}").split("|") if x)
    return float(raw)


def cmd_laws(args):
    universe = args.universe.split(",") if args.universe else None
    s = get_semiring(args.semiring, universe)
    samples = [_parse_sample(s, x) for x in args.samples.split(",")] if args.samples else default_samples(s)
    rep = check_laws(s, samples)
    lines = [f"{s.name}: {'all laws hold' if rep.ok else 'some laws FAIL'} on {len(samples)} samples"]
    for r in rep.results:
        w = "" if r.passed else "  witness " + ", ".join(format_value(s, x) for x in r.witness)
        lines.append(f"  {'PASS' if r.passed else 'FAIL'} {r.law}{w}")
    result = {"ok": rep.ok, "laws": [{"law": r.law, "passed": r.passed,
                                      "witness": None if r.passed else [format_value(s, x) for x in r.witness]}
                                     for r in rep.results]}
    return "\n".join(lines), {"semiring": s.name, "samples": [format_value(s, x) for x in samples]}, result


def cmd_check(args):
    m = load_model(args.model)
    summary = {"semiring": m.semiring_name, "ports": list(m.ports.ports),
               "wai": sorted(m.wai), "wac": sorted(m.wac), "gammas": sorted(m.gammas),
               "queries": len(m.queries)}
    text = (f"OK: {len(m.ports)} ports, {len(m.wai) + len(m.wac)} terms, "
            f"{len(m.gammas)} interaction sets, {len(m.queries)} queries")
    return text, {"model": args.model}, summary


def cmd_run(args):
    """Answer every query in the model, one block per query."""
    m = load_model(args.model)
    out, results = [], []
    for q in m.queries:
        ns = argparse.Namespace(model=args.model, semiring=args.semiring, json=False)
        if q.kind == "eval":
            term, g = q.args
            ns.term = term
            ns.gamma = g if isinstance(g, str) else pretty_gamma(g)
            text, _, res = cmd_eval(ns)
        elif q.kind == "equiv":
            ns.lhs, ns.rhs, ns.mode = q.args[0], q.args[1], q.mode or "universal"
            text, _, res = cmd_equiv(ns)
        elif q.kind == "congruent":
            ns.lhs, ns.rhs, ns.oracle = q.args[0], q.args[1], False
            text, _, res = cmd_congruent(ns)
        elif q.kind == "table":
            ns.term, ns.interaction = q.args[0], "{" + ",".join(q.args[1]) + "}"
            ns.split, ns.nested, ns.numeric = 1, False, False
            text, _, res = cmd_table(ns)
        else:
            ns.kind, ns.sender, ns.receivers = q.args
            text, _, res = cmd_scheme(ns)
        header = "query " + pretty_query(q, m.ports.ports)
        out.append(f"{header}\n{text}")
        results.append({"query": header, "result": res})
    return "\n\n".join(out), {"model": args.model}, results


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--semiring", help="override the model's semiring")

    p = argparse.ArgumentParser(prog="wconn", description="Weighted connector algebra toolkit.")
    p.add_argument("--version", action="version", version=f"wconn {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="weight of a term on an interaction set")
    e.add_argument("model")
    e.add_argument("term", help="term name or inline expression")
    e.add_argument("gamma", help="interaction-set name or literal such as '{{s},{s,r1}}'")
    e.set_defaults(func=cmd_eval)

    q = sub.add_parser("equiv", parents=[common], help="decide equivalence")
    q.add_argument("model")
    q.add_argument("lhs")
    q.add_argument("rhs")
    q.add_argument("--mode", choices=("universal", "concrete"), default="universal")
    q.set_defaults(func=cmd_equiv)

    c = sub.add_parser("congruent", parents=[common], help="decide congruence of connectors")
    c.add_argument("model")
    c.add_argument("lhs")
    c.add_argument("rhs")
    c.add_argument("--oracle", action="store_true", help="also search for a distinguishing context")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--contexts", type=int, default=500)
    c.add_argument("--depth", type=int, default=3)
    c.set_defaults(func=cmd_congruent)

    t = sub.add_parser("table", parents=[common], help="cover-by-cover analysis table")
    t.add_argument("model")
    t.add_argument("term")
    t.add_argument("interaction", help="e.g. '{s,r1}'")
    t.add_argument("--split", type=int, default=1, help="split after the K-th top-level operand")
    t.add_argument("--nested", action="store_true", help="also print tables for the right part")
    t.add_argument("--numeric", action="store_true", help="use the model's weights instead of k_p symbols")
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("scheme", parents=[common], help="print a coordination scheme")
    s.add_argument("kind", choices=SCHEMES)
    s.add_argument("sender")
    s.add_argument("receivers", nargs="+")
    s.set_defaults(func=cmd_scheme)

    lw = sub.add_parser("laws", parents=[common], help="check the semiring axioms")
    lw.add_argument("semiring_name", metavar="semiring")
    lw.add_argument("--samples", help="comma-separated sample values")
    lw.add_argument("--universe", help="comma-separated universe for powerset")
    lw.set_defaults(func=cmd_laws)

    k = sub.add_parser("check", parents=[common], help="parse and resolve a model")
    k.add_argument("model")
    k.set_defaults(func=cmd_check)

    r = sub.add_parser("run", parents=[common], help="answer the queries of a model")
    r.add_argument("model")
    r.set_defaults(func=cmd_run)
    return p


def _error_code(e: Exception) -> int:
    if isinstance(e, CliError):
        return e.code
    if isinstance(e, DslError):
        return e.exit_code
    if isinstance(e, SchemeError):
        return 2
    if isinstance(e, (SemiringError, AlgebraError, ConnectorError, TableError)):
        # unknown names are resolution problems, the rest happen while evaluating
        if isinstance(e, UnknownPortError) or "unknown semiring" in str(e):
            return 2
        return 3
    raise e


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "laws":
        args.semiring = args.semiring_name
    try:
        text, inputs, result = args.func(args)
    except Exception as e:  # noqa: BLE001 - mapped to exit codes below
        code = _error_code(e)
        diag = {"level": "error", "message": str(e), "exit_code": code}
        if isinstance(e, DslError):
            diag.update(line=e.line, col=e.col, expected=sorted(e.expected))
        print(f"wconn {args.command}: error: {e}", file=sys.stderr)
        if args.json:
            print(json.dumps({"command": args.command, "inputs": vars_for_json(args),
                              "result": None, "diagnostics": [diag]}, ensure_ascii=False, indent=2))
        return code
    if args.json:
        print(json.dumps({"command": args.command, "inputs": inputs, "result": result,
                          "diagnostics": []}, ensure_ascii=False, indent=2))
    else:
        print(text)
    return 0


def vars_for_json(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "json") and v is not None}


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
