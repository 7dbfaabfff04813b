"""Seeded random generators for ASTs, causal theories and programs.

All parameters live in ``data/generator.json`` so runs are reproducible;
callers pass a ``random.Random`` and optionally override the config.
"""

from __future__ import annotations

import json
import random
from functools import lru_cache
from importlib import resources

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
    Structure,
    Top,
    Var,
)
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


@lru_cache(maxsize=None)
def _load() -> str:
    return resources.files("clog").joinpath("data/generator.json").read_text(encoding="utf-8")


def config() -> dict:
    return json.loads(_load())


# ------------------------------------------------------ round-trip ASTs


class _AstGen:
    def __init__(self, rng: random.Random, cfg: dict, edlp=False):
        self.rng = rng
        self.cfg = cfg
        if edlp:
            self.preds = [tuple(p) for p in cfg["edlp_predicates"]]
            self.consts = cfg["edlp_constants"]
            self.vars = cfg["edlp_variables"]
        else:
            self.preds = [tuple(p) for p in cfg["predicates"]]
            self.consts = cfg["constants"]
            self.vars = cfg["variables"]

    def simple(self, scope):
        r = self.rng.random()
        if scope and r < 0.45:
            return Var(self.rng.choice(scope))
        if r < 0.75:
            return Const(self.rng.choice(self.consts))
        return Int(self.rng.randint(0, self.cfg["max_int"]))

    def term(self, scope):
        t = self.simple(scope)
        while self.rng.random() < 0.15:
            t = Add(t, self.simple(scope))
        return t

    def atom(self, scope):
        name, arity = self.rng.choice(self.preds)
        return Atom(name, tuple(self.term(scope) for _ in range(arity)))

    def formula(self, scope, depth):
        rng = self.rng
        if depth <= 0 or rng.random() < 0.3:
            k = rng.random()
            if k < 0.6:
                return self.atom(scope)
            if k < 0.7:
                return Equals(self.term(scope), self.term(scope))
            if k < 0.8:
                return Compare(rng.choice(["<", "<=", ">", ">="]), self.term(scope), self.term(scope))
            if k < 0.9:
                return Not(Equals(self.term(scope), self.term(scope)))
            return rng.choice([Top(), Bottom()])
        k = rng.randrange(7)
        d = depth - 1
        if k == 0:
            return Not(self.formula(scope, d))
        if k in (1, 2, 3, 4):
            cls = [Conj, Disj, Implies, Iff][k - 1]
            return cls(self.formula(scope, d), self.formula(scope, d))
        v = rng.choice(self.vars)
        inner = scope + [v]
        qual = Top() if rng.random() < 0.5 else self.formula(inner, d)
        return rng.choice([Forall, Exists])(v, qual, self.formula(inner, d))

    def cee(self, scope, depth):
        rng = self.rng
        if depth <= 0 or rng.random() < 0.25:
            return AtomExpr(self.atom(scope))
        k = rng.randrange(7)
        d = depth - 1
        if k == 0:
            return Rule(self.cee(scope, d), self.formula(scope, d))
        if k == 1:
            return And(self.cee(scope, d), self.cee(scope, d))
        if k == 2:
            return Or(self.cee(scope, d), self.cee(scope, d))
        v = rng.choice(self.vars)
        inner = scope + [v]
        if k == 6:
            return New(v, self.cee(inner, d))
        qual = Top() if rng.random() < 0.3 else self.formula(inner, d)
        return (All if k in (3, 4) else Sel)(v, qual, self.cee(inner, d))


def random_causal_theory(rng: random.Random, cfg=None) -> CausalTheory:
    cfg = cfg or config()["roundtrip"]
    g = _AstGen(rng, cfg)
    n = rng.randint(0, cfg["max_effects"])
    return CausalTheory(tuple(g.cee([], cfg["max_depth"]) for _ in range(n)))


def random_foclog_theory(rng: random.Random, cfg=None) -> FOClogTheory:
    cfg = cfg or config()["roundtrip"]
    g = _AstGen(rng, cfg)
    causal = None
    if rng.random() < 0.8:
        causal = CausalTheory(tuple(g.cee([], cfg["max_depth"]) for _ in range(rng.randint(0, cfg["max_effects"]))))
    sentences = tuple(g.formula([], cfg["max_depth"]) for _ in range(rng.randint(0, cfg["max_sentences"])))
    return FOClogTheory(causal, sentences)


def _edlp_rule(rng, g: _AstGen, body_max: int, width: int, p_neg: float, p_constraint: float, p_exist: float):
    body_vars = list(g.vars)
    pos = []
    for _ in range(rng.randint(0, body_max)):
        name, arity = rng.choice(g.preds)
        pos.append(Atom(name, tuple(_edlp_term(rng, g, body_vars) for _ in range(arity))))
    bound = sorted({t.name for a in pos for t in a.args if isinstance(t, Var)})
    neg = []
    for _ in range(rng.randint(0, body_max)):
        if rng.random() >= p_neg:
            continue
        name, arity = rng.choice(g.preds)
        neg.append(Atom(name, tuple(_edlp_term(rng, g, bound) for _ in range(arity))))
    head = []
    if not (pos or neg) or rng.random() >= p_constraint:
        head_vars = bound + ([rng.choice([v for v in g.vars if v not in bound] or g.vars)] if rng.random() < p_exist else [])
        for _ in range(rng.randint(1, width)):
            name, arity = rng.choice(g.preds)
            head.append(Atom(name, tuple(_edlp_term(rng, g, head_vars) for _ in range(arity))))
    return EDisjRule(tuple(head), tuple(pos), tuple(neg))


def _edlp_term(rng, g, scope):
    if scope and rng.random() < 0.6:
        return Var(rng.choice(scope))
    max_int = getattr(g, "cfg", {}).get("max_int")
    if max_int is None or rng.random() < 0.8:
        return Const(rng.choice(g.consts))
    return Int(rng.randint(0, max_int))


def random_edlp_program(rng: random.Random, cfg=None) -> EDisjProgram:
    """Arbitrary (safe) programs for parser round trips."""
    cfg = cfg or config()["roundtrip"]
    g = _AstGen(rng, cfg, edlp=True)
    rules = [_edlp_rule(rng, g, 3, 3, 0.5, 0.2, 0.3) for _ in range(rng.randint(0, cfg["max_rules"]))]
    return EDisjProgram(tuple(rules))


# ---------------------------------------------- theorem-test instances


class _Small:
    """Generator view for small semantic instances (fixed vocabulary)."""

    def __init__(self, preds, consts, variables):
        self.preds = preds
        self.consts = consts
        self.vars = variables


def random_program_instance(rng: random.Random, cfg=None):
    """A program over ``p q r s t`` and a domain keeping ground heads small.

    Returns ``(program, domain)``.
    """
    cfg = cfg or config()["programs"]
    preds = [tuple(p) for p in cfg["predicates"]]
    while True:
        size = rng.randint(1, cfg["max_domain"])
        domain = ["a", "b", "c"][:size]
        g = _Small(preds, domain[:1], ["X", "Y"])
        rules = [
            _edlp_rule(rng, g, cfg["body_max"], cfg["disjunction_width"], cfg["negation"], cfg["constraint"], cfg["existential"])
            for _ in range(rng.randint(1, cfg["max_rules"]))
        ]
        p = EDisjProgram(tuple(rules))
        arities = dict(preds)
        heads = p.head_predicates
        n = sum(len(domain) ** arities[h] for h in heads)
        if n <= cfg["max_head_atoms"]:
            return p, domain


def random_creation_free_instance(rng: random.Random, cfg=None):
    """A creation-free causal theory with a random exogenous structure.

    Returns ``(theory, exo_part)``.
    """
    cfg = cfg or config()["theories"]
    endo = [tuple(p) for p in cfg["endogenous"]]
    exo = [tuple(p) for p in cfg["exogenous"]]
    size = rng.randint(1, cfg["max_domain"])
    domain = ["A", "B", "C"][:size]
    weights = cfg["weights"]
    kinds = list(weights)
    p_neg = cfg["negation"]
    variables = ["x", "y"]

    def atom(preds, scope):
        name, arity = rng.choice(preds)
        return Atom(name, tuple(Var(rng.choice(scope)) if scope and rng.random() < 0.8 else Const(rng.choice(domain)) for _ in range(arity)))

    def condition(scope, depth):
        if depth <= 0 or rng.random() < 0.5:
            a = atom(endo + exo, scope)
            return Not(a) if rng.random() < p_neg else a
        k = rng.randrange(4)
        if k == 0:
            return Conj(condition(scope, depth - 1), condition(scope, depth - 1))
        if k == 1:
            return Disj(condition(scope, depth - 1), condition(scope, depth - 1))
        if k == 2:
            return Not(condition(scope, depth - 1))
        v = rng.choice(variables)
        return Exists(v, Top(), condition(scope + [v], depth - 1))

    def cee(scope, depth):
        k = "atom" if depth <= 0 else rng.choices(kinds, [weights[x] for x in kinds])[0]
        d = depth - 1
        if k == "atom":
            return AtomExpr(atom(endo, scope))
        if k == "rule":
            return Rule(cee(scope, d), condition(scope, 1))
        if k == "and":
            return And(cee(scope, d), cee(scope, d))
        if k == "or":
            return Or(cee(scope, d), cee(scope, d))
        v = rng.choice(variables)
        inner = scope + [v]
        qual = Top() if rng.random() < 0.4 else condition(inner, 1)
        return (All if k == "all" else Sel)(v, qual, cee(inner, d))

    theory = CausalTheory(tuple(cee([], cfg["max_depth"]) for _ in range(rng.randint(1, cfg["max_effects"]))))
    used = {name for name, _ in theory.vocabulary.predicates}
    rels = {}
    for name, arity in exo:
        if name not in used:
            continue
        if arity == 0:
            rels[name] = [()] if rng.random() < 0.5 else []
        else:
            rels[name] = [(e,) for e in domain if rng.random() < 0.5]
    return theory, Structure(domain, rels)


__all__ = [
    "config",
    "random_causal_theory",
    "random_foclog_theory",
    "random_edlp_program",
    "random_program_instance",
    "random_creation_free_instance",
]
