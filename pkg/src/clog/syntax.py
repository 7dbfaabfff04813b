"""Abstract syntax for causal effect expressions, FO(C-Log) theories and
E-disjunctive programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .logic import (
    Atom,
    Const,
    Int,
    Formula,
    Vocabulary,
    formula_atoms,
    formula_terms,
    free_vars,
    term_constants,
    term_vars,
)

# ------------------------------------------------------------------ CEEs


@dataclass(frozen=True)
class AtomExpr:
    atom: Atom
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Rule:
    """``head <- body``: causes the head's effects when the body holds."""

    head: "CEE"
    body: Formula
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class And:
    left: "CEE"
    right: "CEE"
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Or:
    left: "CEE"
    right: "CEE"
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class All:
    var: str
    qual: Formula
    body: "CEE"
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sel:
    var: str
    qual: Formula
    body: "CEE"
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class New:
    var: str
    body: "CEE"
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


CEE = Union[AtomExpr, Rule, And, Or, All, Sel, New]


def children(c: CEE) -> tuple:
    """Sub-expressions in path order (index i is path component i)."""
    if isinstance(c, AtomExpr):
        return ()
    if isinstance(c, (Rule,)):
        return (c.head,)
    if isinstance(c, (And, Or)):
        return (c.left, c.right)
    return (c.body,)


def walk(c: CEE) -> Iterator[CEE]:
    yield c
    for ch in children(c):
        yield from walk(ch)


def cee_formulas(c: CEE) -> Iterator[Formula]:
    for node in walk(c):
        if isinstance(node, Rule):
            yield node.body
        elif isinstance(node, (All, Sel)):
            yield node.qual


def cee_free_vars(c: CEE) -> set:
    if isinstance(c, AtomExpr):
        return free_vars(c.atom)
    if isinstance(c, Rule):
        return cee_free_vars(c.head) | free_vars(c.body)
    if isinstance(c, (And, Or)):
        return cee_free_vars(c.left) | cee_free_vars(c.right)
    if isinstance(c, (All, Sel)):
        return (free_vars(c.qual) | cee_free_vars(c.body)) - {c.var}
    return cee_free_vars(c.body) - {c.var}


def is_creation_free(c: CEE) -> bool:
    return not any(isinstance(n, New) for n in walk(c))


# --------------------------------------------------------------- theories


@dataclass(frozen=True)
class CausalTheory:
    """A set of CEEs, read as their And-conjunction."""

    effects: tuple = ()

    def as_cee(self) -> Optional[CEE]:
        """Left-to-right And-fold; ``None`` for the empty (neutral) theory."""
        result = None
        for e in self.effects:
            result = e if result is None else And(result, e)
        return result

    @property
    def endogenous(self) -> frozenset:
        return frozenset(n.atom.pred for e in self.effects for n in walk(e) if isinstance(n, AtomExpr))

    @property
    def vocabulary(self) -> Vocabulary:
        preds, consts = set(), set()
        for e in self.effects:
            for n in walk(e):
                if isinstance(n, AtomExpr):
                    preds.add((n.atom.pred, len(n.atom.args)))
                    for t in n.atom.args:
                        consts.update(term_constants(t))
            v = Vocabulary.of_formulas(cee_formulas(e))
            preds |= v.predicates
            consts |= v.constants
        return Vocabulary(frozenset(preds), frozenset(consts))

    def is_closed(self) -> bool:
        return all(not cee_free_vars(e) for e in self.effects)


@dataclass(frozen=True)
class FOClogTheory:
    causal: Optional[CausalTheory] = None
    sentences: tuple = ()

    @property
    def endogenous(self) -> frozenset:
        return self.causal.endogenous if self.causal else frozenset()

    @property
    def vocabulary(self) -> Vocabulary:
        v = Vocabulary.of_formulas(self.sentences)
        return v.merge(self.causal.vocabulary) if self.causal else v


Theory = Union[CausalTheory, FOClogTheory]


def as_foclog(theory: Theory) -> FOClogTheory:
    if isinstance(theory, FOClogTheory):
        return theory
    return FOClogTheory(causal=theory, sentences=())


def classify_symbols(theory: Theory) -> tuple:
    """Split the predicates of ``theory`` into (endogenous, exogenous).

    A predicate is endogenous when it is the symbol of some (possibly
    nested) atom-expression; everything else is exogenous.
    """
    endo = theory.endogenous
    allp = {name for name, _ in theory.vocabulary.predicates}
    return frozenset(endo), frozenset(allp - endo)


# ------------------------------------------------------ E-disjunctive LP


def _first_seen(names) -> tuple:
    return tuple(dict.fromkeys(names))


@dataclass(frozen=True)
class EDisjRule:
    """``a1 ; ... ; am :- b1, ..., bk, not g1, ..., not gn.``

    Universal variables are those of the body; head variables absent from
    the body are existential.
    """

    head: tuple = ()
    pos: tuple = ()
    neg: tuple = ()
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)

    @property
    def universal(self) -> tuple:
        return _first_seen(v for a in self.pos + self.neg for t in a.args for v in term_vars(t))

    @property
    def existential(self) -> tuple:
        body = set(self.universal)
        return _first_seen(v for a in self.head for t in a.args for v in term_vars(t) if v not in body)

    @property
    def variables(self) -> tuple:
        return self.universal + self.existential

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_disjunctive(self) -> bool:
        return bool(self.existential) or len(self.head) > 1


@dataclass(frozen=True)
class EDisjProgram:
    rules: tuple = ()

    @property
    def vocabulary(self) -> Vocabulary:
        atoms = [a for r in self.rules for a in r.head + r.pos + r.neg]
        return Vocabulary.of_formulas(atoms)

    @property
    def head_predicates(self) -> frozenset:
        return frozenset(a.pred for r in self.rules for a in r.head)

    @property
    def constants(self) -> tuple:
        """Constant and integer terms in order of first appearance."""
        out = []
        for r in self.rules:
            for a in r.head + r.pos + r.neg:
                for t in a.args:
                    if isinstance(t, Const):
                        out.append(t.name)
                    elif isinstance(t, Int):
                        out.append(t.value)
        return _first_seen(out)


__all__ = [
    "AtomExpr",
    "Rule",
    "And",
    "Or",
    "All",
    "Sel",
    "New",
    "CEE",
    "CausalTheory",
    "FOClogTheory",
    "EDisjRule",
    "EDisjProgram",
    "classify_symbols",
    "as_foclog",
    "children",
    "walk",
    "formula_atoms",
    "formula_terms",
]
