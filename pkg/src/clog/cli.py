"""Command-line front end: ``clog <command> FILE [options]``.

Exit status is 0 on success, 1 when a semantic check says no (``check``
rejects, ``compare`` finds a counterexample), and 2 on usage, parse or
guard errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bridge import analyze, compare_semantics, fo_weakening, translate_to_foclog
from .edlp import EdlpError, stable_models
from .engine import DEFAULT_BUDGET, check_model, enumerate_models, run_process
from .io import (
    load_structure,
    parse_domain,
    structure_text,
    structure_to_json,
    trace_text,
    trace_to_dot,
    trace_to_json,
)
from .logic import LogicError, Structure
from .parser import ParseError, parse_file
from .render import render, render_formula
from .syntax import CausalTheory, EDisjProgram, FOClogTheory, classify_symbols


class UsageError(Exception):
    pass


def _seed(args) -> int:
    env = os.environ.get("CLOG_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CLOG_SEED must be an integer, got {env!r}") from None
    return args.seed


def _theory(args, kinds):
    t = parse_file(args.file)
    if not isinstance(t, kinds):
        want = " or ".join(k.__name__ for k in kinds)
        raise UsageError(f"{args.file}: expected a {want} file")
    return t


def _domain(args) -> list:
    return parse_domain(args.domain) if getattr(args, "domain", None) else []


def _exo(args) -> Structure:
    extra = _domain(args)
    if getattr(args, "exo", None):
        return load_structure(args.exo, extra)
    return Structure(extra)


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


# ------------------------------------------------------------- commands


def cmd_parse(args):
    t = parse_file(args.file)
    if args.format == "json":
        if isinstance(t, EDisjProgram):
            data = {
                "kind": "edlp",
                "rules": [
                    {"text": render(r), "universal": list(r.universal), "existential": list(r.existential), "constraint": r.is_constraint}
                    for r in t.rules
                ],
            }
        else:
            endo, exo = classify_symbols(t)
            data = {
                "kind": "clog" if isinstance(t, CausalTheory) else "foclog",
                "text": render(t),
                "endogenous": sorted(endo),
                "exogenous": sorted(exo),
                "constants": sorted(t.vocabulary.constants),
            }
        return _dump(data), 0
    return render(t), 0


def cmd_models(args):
    t = _theory(args, (CausalTheory, FOClogTheory))
    ms = enumerate_models(t, _exo(args), args.budget, args.method)
    if args.format == "json":
        return _dump(
            {
                "budget": ms.budget,
                "method": ms.method,
                "models": [structure_to_json(m) for m in ms.models],
                "truncated": [structure_to_json(m) for m in ms.truncated],
            }
        ), 0
    lines = [f"% creation budget {ms.budget}, method {ms.method}"]
    for i, m in enumerate(ms.models, 1):
        lines.append(f"model {i}: {structure_text(m)}")
    lines.append(f"{len(ms.models)} model(s)")
    for i, m in enumerate(ms.truncated, 1):
        lines.append(f"truncated {i}: {structure_text(m)}")
    if ms.truncated:
        lines.append(f"{len(ms.truncated)} branch(es) cut off by the budget; the list above is not exhaustive")
    return "\n".join(lines) + "\n", 0


def _merge(candidate: Structure, exo: Structure) -> Structure:
    rels = {p: ts for p, ts in exo.relations.items() if p not in candidate.relations or not candidate.relations[p]}
    rels.update({p: ts for p, ts in candidate.relations.items() if ts or p not in rels})
    domain = list(exo.domain) + [e for e in candidate.domain if e not in set(exo.domain)]
    return Structure(domain, rels, created=candidate.created, constants={**exo.constants, **candidate.constants})


def cmd_check(args):
    t = _theory(args, (CausalTheory, FOClogTheory))
    cand = load_structure(args.candidate)
    if args.exo or args.domain:
        cand = _merge(cand, _exo(args))
    v = check_model(t, cand, args.budget)
    if args.format == "json":
        out = {"accepted": v.accepted, "reason": v.reason, "budget": args.budget}
        if v.trace:
            out["trace"] = trace_to_json(v.trace)
        return _dump(out), 0 if v else 1
    if args.format == "dot":
        if not v.trace:
            return f"// rejected: {v.reason}\n", 1
        return trace_to_dot(v.trace), 0
    text = ("accepted" if v else f"rejected: {v.reason}") + f"  (creation budget {args.budget})\n"
    if v.trace:
        text += trace_text(v.trace)
    return text, 0 if v else 1


def cmd_trace(args):
    t = _theory(args, (CausalTheory, FOClogTheory))
    tr = run_process(t, _exo(args), seed=_seed(args), budget=args.budget, chooser=args.chooser)
    if args.format == "json":
        return _dump(trace_to_json(tr)), 0
    if args.format == "dot":
        return trace_to_dot(tr), 0
    return f"% creation budget {args.budget}\n" + trace_text(tr), 0


def _program(args) -> EDisjProgram:
    return _theory(args, (EDisjProgram,))


def cmd_stable(args):
    p = _program(args)
    ms = stable_models(p, _domain(args))
    if args.format == "json":
        return _dump({"stable": [[str(a) for a in m.sorted_atoms()] for m in ms]}), 0
    lines = [f"stable {i}: {structure_text(m)}" for i, m in enumerate(ms, 1)]
    lines.append(f"{len(ms)} stable model(s)")
    return "\n".join(lines) + "\n", 0


def cmd_translate(args):
    return render(translate_to_foclog(_program(args))), 0


def cmd_weaken(args):
    t = _theory(args, (CausalTheory, FOClogTheory))
    return "".join(render_formula(f) + ".\n" for f in fo_weakening(t)), 0


def cmd_analyze(args):
    p = _program(args)
    rep = analyze(p, _domain(args))
    if args.format == "json":
        return _dump(rep.to_json()), 0
    lines = [f"non-overlapping: {'yes' if rep.non_overlapping else 'no'}"]
    if rep.overlap_witness:
        a, b = rep.overlap_witness
        lines.append(f"  {a.atom} occurs in rule {a.rule} at {a.index} and in rule {b.rule} at {b.index}")
    lines.append(f"recursion over negation: {'yes' if rep.neg_recursion else 'no'}")
    if rep.cycle:
        lines.append("  cycle: " + " -> ".join(rep.cycle))
    lines.append("head symbols: " + ", ".join(sorted(rep.head_symbols)))
    lines.append("never in a head: " + ", ".join(sorted(rep.never_in_head)))
    return "\n".join(lines) + "\n", 0


def cmd_compare(args):
    p = _program(args)
    rep = compare_semantics(p, _domain(args), args.budget, include_weakening=not args.no_weakening)
    status = 1 if rep.counterexamples else 0
    if args.format == "json":
        return _dump(rep.to_json()), status
    data = rep.to_json()
    lines = [f"% creation budget {rep.budget}, domain {{{', '.join(map(str, rep.domain))}}}"]
    for name in ("stable", "foclog", "fo_weak"):
        if data[name] is not None:
            lines.append(f"{name}: " + " ".join("{" + ", ".join(m) + "}" for m in data[name]))
    for k, v in rep.relations.items():
        lines.append(f"{k}: {v}")
    for k, v in rep.expectations.items():
        lines.append(f"expect {k}: {'yes' if v else 'not applicable'}")
    for c in rep.counterexamples:
        lines.append(f"COUNTEREXAMPLE {c['expectation']}: {{{', '.join(c['structure'])}}} missing from {c['missing_from']}")
    return "\n".join(lines) + "\n", status


COMMANDS = {
    "parse": (cmd_parse, "parse a file and print it in canonical form"),
    "models": (cmd_models, "enumerate the models of a causal or FO(C-Log) theory"),
    "check": (cmd_check, "check whether a candidate structure is a model"),
    "trace": (cmd_trace, "run one causal process from the default state"),
    "stable": (cmd_stable, "stable models of an E-disjunctive program"),
    "translate": (cmd_translate, "translate an E-disjunctive program to FO(C-Log)"),
    "weaken": (cmd_weaken, "FO weakening of a creation-free theory"),
    "analyze": (cmd_analyze, "overlap and negative-recursion analysis of a program"),
    "compare": (cmd_compare, "compare stable, FO(C-Log) and FO-weakening semantics"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clog", description="Causal effect expressions, FO(C-Log) and E-disjunctive programs.")
    ap.add_argument("--version", action="version", version=f"clog {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("file", help="input .clog, .foclog or .edlp file")
        p.add_argument("--format", choices=["text", "json", "dot"], default="text")
        p.add_argument("-o", "--output", help="write the result to this file instead of stdout")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of created elements (default %(default)s)")
        p.add_argument("--domain", help="extra initial elements, e.g. a,b,0..3")
        p.add_argument("--seed", type=int, default=0, help="random seed (CLOG_SEED overrides)")
        if name in ("models", "check", "trace"):
            p.add_argument("--exo", help="JSON file with the exogenous interpretation")
        if name == "check":
            p.add_argument("--candidate", required=True, help="JSON file with the candidate structure")
        if name == "models":
            p.add_argument("--method", choices=["search", "brute"], default="search")
        if name == "trace":
            p.add_argument("--chooser", choices=["random", "first"], default="random")
        if name == "compare":
            p.add_argument("--no-weakening", action="store_true", help="skip the FO-weakening enumeration")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.budget < 0:
            raise UsageError("--budget must be non-negative")
        if args.format == "dot" and args.command not in ("trace", "check"):
            raise UsageError("--format dot is only available for trace and check")
        handler = COMMANDS[args.command][0]
        text, status = handler(args)
    except FileNotFoundError as e:
        print(f"clog: error: no such file: {e.filename}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"clog: parse error: {getattr(args, 'file', '')}:{e}", file=sys.stderr)
        return 2
    except (UsageError, LogicError, EdlpError) as e:
        print(f"clog: error: {e}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
