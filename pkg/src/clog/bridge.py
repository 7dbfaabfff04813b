"""Translations between E-disjunctive programs, causal theories and FO, the
static analyses that gate the equivalence results, and a comparator that
treats those results as testable expectations."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .edlp import domain_atoms, program_domain, stable_models
from .engine import DEFAULT_BUDGET, GuardError, enumerate_models
from .logic import (
    Atom,
    Conj,
    Const,
    Disj,
    EvaluationError,
    Exists,
    Forall,
    GroundAtom,
    Implies,
    Int,
    Add,
    LogicError,
    Not,
    Structure,
    TRUE,
    Var,
    atom_key,
    conjoin,
    evaluate_formula,
    ground_args,
)
from .edlp import _Env
from .syntax import (
    All,
    And,
    AtomExpr,
    CausalTheory,
    EDisjProgram,
    FOClogTheory,
    New,
    Or,
    Rule,
    Sel,
    as_foclog,
)

WEAKENING_LIMIT = 20


class BridgeError(LogicError):
    pass


# ----------------------------------------------------------- translation


def _clog_var(name: str) -> str:
    return name[0].lower() + name[1:]


def _term(t):
    if isinstance(t, Var):
        return Var(_clog_var(t.name))
    if isinstance(t, Add):
        return Add(_term(t.left), _term(t.right))
    return t


def _atom(a: Atom) -> Atom:
    return Atom(a.pred, tuple(_term(t) for t in a.args))


def _body(r) -> object:
    return conjoin([_atom(a) for a in r.pos] + [Not(_atom(a)) for a in r.neg])


def translate_to_foclog(p: EDisjProgram) -> FOClogTheory:
    """The corresponding FO(C-Log) theory of ``p``.

    Each rule with a head becomes ``All x : true -> ... All x : body ->
    Sel y : true -> (a1 Or ... Or am)``; constraints become sentences
    ``! x: ~body``; every predicate absent from all heads gets ``! x: ~P(x)``.
    Variables are renamed to the lowercase convention of causal theories.
    """
    effects, sentences = [], []
    for r in p.rules:
        xs = [_clog_var(v) for v in r.universal]
        body = _body(r)
        if r.is_constraint:
            f = Not(body)
            for x in reversed(xs):
                f = Forall(x, TRUE, f)
            sentences.append(f)
            continue
        heads = [AtomExpr(_atom(a)) for a in r.head]
        c = heads[-1]
        for h in reversed(heads[:-1]):
            c = Or(h, c)
        for y in reversed([_clog_var(v) for v in r.existential]):
            c = Sel(y, TRUE, c)
        if xs:
            c = All(xs[-1], body, c)
            for x in reversed(xs[:-1]):
                c = All(x, TRUE, c)
        elif r.pos or r.neg:
            c = Rule(c, body)
        effects.append(c)
    heads = p.head_predicates
    for name, arity in sorted(p.vocabulary.predicates):
        if name in heads:
            continue
        xs = [f"x{i + 1}" for i in range(arity)]
        f = Not(Atom(name, tuple(Var(x) for x in xs)))
        for x in reversed(xs):
            f = Forall(x, TRUE, f)
        sentences.append(f)
    return FOClogTheory(CausalTheory(tuple(effects)), tuple(sentences))


def _weaken(c):
    if isinstance(c, AtomExpr):
        return c.atom
    if isinstance(c, Rule):
        return Implies(c.body, _weaken(c.head))
    if isinstance(c, And):
        return Conj(_weaken(c.left), _weaken(c.right))
    if isinstance(c, Or):
        return Disj(_weaken(c.left), _weaken(c.right))
    if isinstance(c, All):
        return Forall(c.var, c.qual, _weaken(c.body))
    if isinstance(c, Sel):
        return Exists(c.var, c.qual, _weaken(c.body))
    if isinstance(c, New):
        raise BridgeError("FO weakening needs a creation-free theory, found a New expression")
    raise TypeError(f"not a CEE: {c!r}")


def fo_weakening(delta) -> tuple:
    """Replace All/Sel/Or/And/<- by their FO counterparts, one sentence per
    CEE. FO sentences of an FO(C-Log) theory are passed through."""
    th = as_foclog(delta)
    effects = th.causal.effects if th.causal else ()
    return tuple(_weaken(e) for e in effects) + tuple(th.sentences)


# ------------------------------------------------------------- analysis


@dataclass(frozen=True)
class OccurrenceWitness:
    """``atom`` is head ``index`` of rule ``rule`` under ``eta``."""

    rule: int
    index: int
    eta: tuple  # ((var, element), ...)
    atom: GroundAtom

    def to_json(self):
        return {"rule": self.rule, "index": self.index, "eta": {v: e for v, e in self.eta}, "atom": str(self.atom)}


@dataclass(frozen=True)
class AnalysisReport:
    non_overlapping: bool
    overlap_witness: Optional[tuple]
    neg_recursion: bool
    cycle: Optional[tuple]  # predicate names, first == last
    head_symbols: frozenset
    never_in_head: frozenset

    def to_json(self):
        return {
            "non_overlapping": self.non_overlapping,
            "overlap_witness": [w.to_json() for w in self.overlap_witness] if self.overlap_witness else None,
            "neg_recursion": self.neg_recursion,
            "cycle": list(self.cycle) if self.cycle else None,
            "head_symbols": sorted(self.head_symbols),
            "never_in_head": sorted(self.never_in_head),
        }


def occurrences(p: EDisjProgram, domain):
    """Every (rule, head index, assignment of all rule variables) triple."""
    dom = program_domain(p, domain)
    reader = _Env(dom)
    for ri, r in enumerate(p.rules):
        vs = r.variables
        for values in itertools.product(dom, repeat=len(vs)):
            env = dict(zip(vs, values))
            for i, a in enumerate(r.head):
                args = ground_args(a.args, env, reader)
                if args is not None:
                    yield OccurrenceWitness(ri, i, tuple(zip(vs, values)), GroundAtom(a.pred, args))


def dependency_graph(p: EDisjProgram) -> nx.MultiDiGraph:
    """Head predicates point to body predicates; edges carry ``negative``."""
    g = nx.MultiDiGraph()
    g.add_nodes_from(name for name, _ in p.vocabulary.predicates)
    for r in p.rules:
        for h in r.head:
            for b in r.pos:
                g.add_edge(h.pred, b.pred, negative=False)
            for b in r.neg:
                g.add_edge(h.pred, b.pred, negative=True)
    return g


def negative_cycle(p: EDisjProgram) -> Optional[tuple]:
    g = dependency_graph(p)
    comp = {}
    for i, scc in enumerate(nx.strongly_connected_components(g)):
        for n in scc:
            comp[n] = i
    best = None
    for u, v, data in sorted(g.edges(data=True), key=lambda e: (e[0], e[1])):
        if data["negative"] and comp[u] == comp[v]:
            back = nx.shortest_path(g, v, u)
            cycle = (u,) + tuple(back)
            if best is None or len(cycle) < len(best):
                best = cycle
    return best


def analyze(p: EDisjProgram, domain) -> AnalysisReport:
    disjunctive = {i for i, r in enumerate(p.rules) if r.is_disjunctive}
    by_atom = {}
    for w in occurrences(p, domain):
        by_atom.setdefault(w.atom, []).append(w)
    witness = None
    for atom in sorted(by_atom, key=atom_key):
        occ = by_atom[atom]
        if len(occ) > 1 and any(w.rule in disjunctive for w in occ):
            first = next(w for w in occ if w.rule in disjunctive)
            other = next(w for w in occ if w != first)
            witness = (first, other)
            break
    cycle = negative_cycle(p)
    heads = p.head_predicates
    allp = {name for name, _ in p.vocabulary.predicates}
    return AnalysisReport(
        witness is None,
        witness,
        cycle is not None,
        cycle,
        frozenset(heads),
        frozenset(allp - heads),
    )


# ------------------------------------------------------------ comparison


def _atomset(s: Structure) -> frozenset:
    return frozenset(s.atoms())


def _show(atoms) -> list:
    return [str(a) for a in sorted(atoms, key=atom_key)]


@dataclass
class ComparisonReport:
    domain: tuple
    budget: int
    stable: list
    foclog: list
    fo_weak: Optional[list]
    analysis: AnalysisReport
    relations: dict = field(default_factory=dict)
    expectations: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    def to_json(self):
        return {
            "domain": list(self.domain),
            "budget": self.budget,
            "stable": [_show(m) for m in self.stable],
            "foclog": [_show(m) for m in self.foclog],
            "fo_weak": None if self.fo_weak is None else [_show(m) for m in self.fo_weak],
            "analysis": self.analysis.to_json(),
            "relations": self.relations,
            "expectations": self.expectations,
            "counterexamples": self.counterexamples,
        }


def relation(a: set, b: set) -> str:
    if a == b:
        return "EQUAL"
    if a < b:
        return "SUBSET"
    if a > b:
        return "SUPERSET"
    return "INCOMPARABLE"


def exo_structure(p: EDisjProgram, domain) -> Structure:
    """Interpretation of the never-in-head predicates: all empty."""
    dom = program_domain(p, domain)
    heads = p.head_predicates
    arities = {n: a for n, a in p.vocabulary.predicates if n not in heads}
    return Structure(dom, {n: () for n in arities}, arities=arities)


def weakening_models(theory: FOClogTheory, exo: Structure, atoms: list) -> list:
    sentences = fo_weakening(theory)
    if len(atoms) > WEAKENING_LIMIT:
        raise GuardError(f"weakening enumeration refused: {len(atoms)} atoms (limit {WEAKENING_LIMIT})")
    arities = dict(exo.arities)
    arities.update(theory.vocabulary.arities)
    out = []
    for r in range(len(atoms) + 1):
        for subset in itertools.combinations(atoms, r):
            rels = {n: set() for n in arities}
            rels.update({n: set(ts) for n, ts in exo.relations.items()})
            for a in subset:
                rels[a.pred].add(a.args)
            s = Structure(exo.domain, rels, constants=exo.constants, arities=arities)
            if all(evaluate_formula(f, s) for f in sentences):
                out.append(frozenset(subset))
    return out


def compare_semantics(
    p: EDisjProgram, domain, budget: int = DEFAULT_BUDGET, include_weakening: bool = True
) -> ComparisonReport:
    """Stable models versus FO(C-Log) models of the translation, and the
    FO weakening of that translation, with the expected relations checked."""
    dom = program_domain(p, domain)
    report = analyze(p, dom)
    theory = translate_to_foclog(p)
    exo = exo_structure(p, dom)
    heads = p.head_predicates
    # the three computations are independent; results are joined in a fixed order
    with ThreadPoolExecutor(max_workers=3) as pool:
        f_stable = pool.submit(lambda: {_atomset(s) for s in stable_models(p, dom)})
        f_foclog = pool.submit(lambda: {_atomset(s) for s in enumerate_models(theory, exo, budget)})
        f_weak = None
        if include_weakening:
            atoms = [a for a in domain_atoms(p, dom) if a.pred in heads]
            f_weak = pool.submit(lambda: set(weakening_models(theory, exo, atoms)))
        stable = f_stable.result()
        foclog = f_foclog.result()
        weak = None if f_weak is None else f_weak.result()

    def order(ms):
        return sorted(ms, key=lambda m: (len(m), sorted(map(atom_key, m))))

    out = ComparisonReport(dom, budget, order(stable), order(foclog), None if weak is None else order(weak), report)
    out.relations["stable_vs_foclog"] = relation(stable, foclog)
    if weak is not None:
        out.relations["foclog_vs_fo_weak"] = relation(foclog, weak)
    thm2 = report.non_overlapping and not report.neg_recursion
    thm3 = not report.neg_recursion
    out.expectations["equal"] = thm2
    out.expectations["stable_subset_foclog"] = thm3
    out.expectations["foclog_subset_fo_weak"] = weak is not None
    if thm3:
        for m in order(stable - foclog):
            out.counterexamples.append({"expectation": "stable_subset_foclog", "structure": _show(m), "missing_from": "foclog"})
    if thm2:
        for m in order(foclog - stable):
            out.counterexamples.append({"expectation": "equal", "structure": _show(m), "missing_from": "stable"})
    if weak is not None:
        for m in order(foclog - weak):
            out.counterexamples.append({"expectation": "foclog_subset_fo_weak", "structure": _show(m), "missing_from": "fo_weak"})
    return out


__all__ = [
    "BridgeError",
    "translate_to_foclog",
    "fo_weakening",
    "OccurrenceWitness",
    "AnalysisReport",
    "analyze",
    "occurrences",
    "dependency_graph",
    "negative_cycle",
    "ComparisonReport",
    "compare_semantics",
    "exo_structure",
    "weakening_models",
    "relation",
]
