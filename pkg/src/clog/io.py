"""JSON fixtures for structures and JSON/DOT/text export of engine results.

Structure JSON::

    {"domain": ["a", 0], "created": ["_c1"], "integers": [0, 8],
     "predicates": {"P": [["a"], ["_c1"]], "Q": [[]]},
     "constants": {"D": 1}}

``integers`` adds a segment of integers to the domain; a true 0-ary atom
is written ``[[]]``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .logic import Structure, StructureError, atom_key, element_key, element_str


def parse_domain(spec: str) -> list:
    """``"a,b,0..3"`` -> ``["a", "b", 0, 1, 2, 3]``."""
    out = []
    for part in (p.strip() for p in spec.split(",")):
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            try:
                out.extend(range(int(lo), int(hi) + 1))
            except ValueError:
                raise StructureError(f"bad integer segment {part!r}") from None
        else:
            out.append(int(part) if part.lstrip("-").isdigit() else part)
    return out


def structure_from_json(data: dict, extra_domain=()) -> Structure:
    unknown = set(data) - {"domain", "created", "integers", "predicates", "constants"}
    if unknown:
        raise StructureError(f"unknown structure field(s): {', '.join(sorted(unknown))}")
    domain = list(data.get("domain", []))
    if "integers" in data:
        lo, hi = data["integers"]
        domain.extend(range(lo, hi + 1))
    created = list(data.get("created", []))
    domain.extend(extra_domain)
    domain.extend(c for c in created if c not in domain)
    preds = data.get("predicates", {})
    for name, tuples in preds.items():
        for t in tuples:
            for e in t:
                if e not in domain:
                    domain.append(e)
    return Structure(domain, {p: [tuple(t) for t in ts] for p, ts in preds.items()}, created=created, constants=data.get("constants", {}))


def load_structure(path, extra_domain=()) -> Structure:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise StructureError(f"{path}: invalid JSON: {e}") from None
    return structure_from_json(data, extra_domain)


def structure_to_json(s: Structure, preds=None) -> dict:
    keep = s.relations.keys() if preds is None else preds
    return {
        "domain": sorted((e for e in s.domain if e not in s.created), key=element_key),
        "created": sorted(s.created, key=element_key),
        "predicates": {
            p: sorted((list(t) for t in s.relations[p]), key=lambda t: [element_key(e) for e in t])
            for p in sorted(keep)
            if p in s.relations and s.relations[p]
        },
        **({"constants": dict(sorted(s.constants.items()))} if s.constants else {}),
    }


def atoms_text(s: Structure, preds=None) -> str:
    return "{" + ", ".join(str(a) for a in s.sorted_atoms(preds)) + "}"


def structure_text(s: Structure, preds=None) -> str:
    text = atoms_text(s, preds)
    if s.created:
        text += "  created: " + ", ".join(element_str(e) for e in sorted(s.created, key=element_key))
    return text


def trace_to_json(trace, preds=None) -> dict:
    return {
        "budget": trace.budget,
        "truncated": trace.truncated,
        "blocked": [str(e) for e in trace.blocked],
        "verdict": trace.verdict,
        "note": trace.note,
        "steps": [
            {
                "state": [str(a) for a in step.state.sorted_atoms(preds)],
                "created": sorted((element_str(e) for e in step.state.created)),
                "fired": [
                    {
                        "event": str(f.event),
                        "effect": str(f.atom) if f.atom is not None else "new " + element_str(f.created),
                        "conditions": len(f.conditions),
                    }
                    for f in step.fired
                ],
                "delta": [str(a) for a in sorted(step.delta_atoms, key=atom_key)],
                "delta_created": [element_str(e) for e in step.delta_created],
            }
            for step in trace.steps
        ],
    }


def trace_text(trace, preds=None) -> str:
    lines = []
    for i, step in enumerate(trace.steps):
        lines.append(f"{i}: {structure_text(step.state, preds)}")
        for f in step.fired:
            lines.append(f"     fired {f}")
    if trace.truncated:
        lines.append(f"truncated: creation budget {trace.budget} exhausted")
    for e in trace.blocked:
        lines.append(f"blocked Sel {e}")
    if trace.note:
        lines.append(trace.note)
    return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def trace_to_dot(trace, preds=None) -> str:
    lines = ["digraph trace {", "  rankdir=LR;", "  node [shape=box];"]
    for i, step in enumerate(trace.steps):
        label = _dot_escape(structure_text(step.state, preds))
        lines.append(f'  s{i} [label="{label}"];')
    for i, step in enumerate(trace.steps[1:], 1):
        fired = "\\n".join(_dot_escape(str(f)) for f in step.fired)
        lines.append(f'  s{i - 1} -> s{i} [label="{fired}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
