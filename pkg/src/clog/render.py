"""Canonical pretty-printing; ``parse(render(x)) == x`` for every AST.

Parentheses are inserted only where the precedence table needs them, plus
around every quantifier (and every rule) that appears as an operand, since
their bodies would otherwise swallow what follows.
"""

from __future__ import annotations

import json
import re

from .logic import (
    Add,
    Atom,
    Bottom,
    Compare,
    Conj,
    Const,
    Disj,
    Equals,
    Exists,
    Forall,
    Iff,
    Implies,
    Int,
    Not,
    Top,
    Var,
)
from .parser import CEE_KEYWORDS, EDLP_KEYWORDS, FORMULA_KEYWORDS, clog_is_var, edlp_is_var
from .syntax import (
    All,
    And,
    AtomExpr,
    CausalTheory,
    EDisjProgram,
    EDisjRule,
    FOClogTheory,
    New,
    Or,
    Rule,
    Sel,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def _const(name: str, is_var, keywords) -> str:
    if _IDENT.match(name) and not is_var(name) and name not in keywords:
        return name
    return json.dumps(name)


class _Style:
    def __init__(self, is_var, keywords):
        self.is_var = is_var
        self.keywords = keywords | FORMULA_KEYWORDS

    def term(self, t) -> str:
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Const):
            return _const(t.name, self.is_var, self.keywords)
        if isinstance(t, Int):
            return str(t.value)
        if isinstance(t, Add):
            return f"{self.term(t.left)} + {self.term(t.right)}"
        raise TypeError(f"not a term: {t!r}")

    def atom(self, a: Atom) -> str:
        if not a.args:
            return a.pred
        return f"{a.pred}({', '.join(self.term(t) for t in a.args)})"


CLOG = _Style(clog_is_var, CEE_KEYWORDS)
EDLP = _Style(edlp_is_var, EDLP_KEYWORDS)

_FPREC = {Iff: 1, Implies: 2, Disj: 3, Conj: 4}


def render_formula(f, ctx: int = 0, style: _Style = CLOG) -> str:
    if isinstance(f, (Forall, Exists)):
        sym = "!" if isinstance(f, Forall) else "?"
        names = [f.var]
        while isinstance(f.body, type(f)) and isinstance(f.qual, Top):
            f = f.body
            names.append(f.var)
        qual = "" if isinstance(f.qual, Top) else f" [{render_formula(f.qual, 0, style)}]"
        text = f"{sym} {', '.join(names)}{qual}: {render_formula(f.body, 0, style)}"
        return f"({text})" if ctx > 0 else text
    if type(f) in _FPREC:
        p = _FPREC[type(f)]
        op = {Iff: "<=>", Implies: "=>", Disj: "|", Conj: "&"}[type(f)]
        if isinstance(f, Implies):
            lp, rp = p + 1, p
        else:
            lp, rp = p, p + 1
        text = f"{render_formula(f.left, lp, style)} {op} {render_formula(f.right, rp, style)}"
        return f"({text})" if p < ctx else text
    if isinstance(f, Not):
        if isinstance(f.body, Equals):
            return f"{style.term(f.body.left)} != {style.term(f.body.right)}"
        return "~" + render_formula(f.body, 5, style)
    if isinstance(f, Atom):
        return style.atom(f)
    if isinstance(f, Equals):
        return f"{style.term(f.left)} = {style.term(f.right)}"
    if isinstance(f, Compare):
        return f"{style.term(f.left)} {f.op} {style.term(f.right)}"
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    raise TypeError(f"not a formula: {f!r}")


def render_cee(c, ctx: int = 0) -> str:
    if isinstance(c, AtomExpr):
        return CLOG.atom(c.atom)
    if isinstance(c, Rule):
        text = f"{render_cee(c.head, 1)} <- {render_formula(c.body)}"
        return f"({text})" if ctx > 1 else text
    if isinstance(c, (Or, And)):
        p, op = (2, "Or") if isinstance(c, Or) else (3, "And")
        text = f"{render_cee(c.left, p)} {op} {render_cee(c.right, p + 1)}"
        return f"({text})" if p < ctx else text
    if isinstance(c, (All, Sel)):
        kw = "All" if isinstance(c, All) else "Sel"
        names = [c.var]
        while isinstance(c.body, type(c)) and isinstance(c.qual, Top):
            c = c.body
            names.append(c.var)
        text = f"{kw} {', '.join(names)} : {render_formula(c.qual)} -> {render_cee(c.body)}"
        return f"({text})" if ctx > 0 else text
    if isinstance(c, New):
        names = [c.var]
        while isinstance(c.body, New):
            c = c.body
            names.append(c.var)
        text = f"New {', '.join(names)} -> {render_cee(c.body)}"
        return f"({text})" if ctx > 0 else text
    raise TypeError(f"not a CEE: {c!r}")


def render_edlp_rule(r: EDisjRule) -> str:
    head = " ; ".join(EDLP.atom(a) for a in r.head)
    body = [EDLP.atom(a) for a in r.pos] + ["not " + EDLP.atom(a) for a in r.neg]
    if not body:
        return head + "."
    return f"{head + ' ' if head else ''}:- {', '.join(body)}."


def render(ast) -> str:
    """Render any AST node or theory to its canonical surface text."""
    if isinstance(ast, CausalTheory):
        return "".join(render_cee(e) + ".\n" for e in ast.effects)
    if isinstance(ast, FOClogTheory):
        out = []
        if ast.causal is not None:
            out.append("{\n")
            out.extend(f"  {render_cee(e)}.\n" for e in ast.causal.effects)
            out.append("}\n")
        out.extend(render_formula(s) + ".\n" for s in ast.sentences)
        return "".join(out)
    if isinstance(ast, EDisjProgram):
        return "".join(render_edlp_rule(r) + "\n" for r in ast.rules)
    if isinstance(ast, EDisjRule):
        return render_edlp_rule(ast)
    if isinstance(ast, (AtomExpr, Rule, And, Or, All, Sel, New)):
        return render_cee(ast) + "."
    return render_formula(ast)


__all__ = ["render", "render_cee", "render_formula", "render_edlp_rule"]
