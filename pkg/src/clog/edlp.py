"""Grounding and brute-force stable models of E-disjunctive programs.

This is the trusted oracle for the translation theorems, so it follows the
definition literally: ``M`` is stable when it is a minimal set ``X`` such
that for every ground rule, if ``X`` contains the positive body and every
negative body atom is false in ``M``, then ``X`` contains some head
instance. Existential head variables range over ``dom(M)``. A constraint
has no head instance, so a fired constraint makes the condition fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .logic import GroundAtom, LogicError, Structure, atom_key, element_key, ground_args, Reader
from .syntax import EDisjProgram, EDisjRule

MAX_ATOMS = 24


class EdlpError(LogicError):
    pass


@dataclass(frozen=True)
class GroundRule:
    """One rule instantiated by ``eta`` on its universal variables.

    ``heads`` lists, per head position, every instance over the
    existential variables (the theta step).
    """

    rule: int
    eta: tuple  # ((var, element), ...)
    heads: tuple  # tuple of tuples of GroundAtom
    pos: tuple
    neg: tuple

    @property
    def head_atoms(self) -> frozenset:
        return frozenset(a for alts in self.heads for a in alts)

    @property
    def is_constraint(self) -> bool:
        return not self.heads


def program_domain(p: EDisjProgram, domain: Iterable) -> tuple:
    """The given elements followed by the program's own constants."""
    dom = list(dict.fromkeys(domain))
    for c in p.constants:
        if c not in dom:
            dom.append(c)
    return tuple(dom)


class _Env(Reader):
    def __init__(self, domain):
        self.domain = tuple(domain)
        self._dset = set(self.domain)

    def constant(self, name):
        return name


def _ground_atom(a, env, reader):
    args = ground_args(a.args, env, reader)
    return None if args is None else GroundAtom(a.pred, args)


def ground_rule(p: EDisjProgram, i: int, r: EDisjRule, domain) -> list:
    reader = _Env(domain)
    out = []
    for values in itertools.product(reader.domain, repeat=len(r.universal)):
        env = dict(zip(r.universal, values))
        pos = [_ground_atom(a, env, reader) for a in r.pos]
        if any(a is None for a in pos):
            continue  # an undefined positive atom is never entailed
        neg = tuple(a for a in (_ground_atom(a, env, reader) for a in r.neg) if a is not None)
        heads = []
        for a in r.head:
            alts = []
            for theta in itertools.product(reader.domain, repeat=len(r.existential)):
                g = _ground_atom(a, {**env, **dict(zip(r.existential, theta))}, reader)
                if g is not None:
                    alts.append(g)
            heads.append(tuple(dict.fromkeys(alts)))
        out.append(GroundRule(i, tuple(zip(r.universal, values)), tuple(heads), tuple(pos), neg))
    return out


def ground_program(p: EDisjProgram, domain) -> list:
    """One :class:`GroundRule` per rule and assignment of its universal
    variables; constants of the program join the domain."""
    dom = program_domain(p, domain)
    if not dom and any(r.variables for r in p.rules):
        raise EdlpError("cannot ground a program with variables over an empty domain")
    return [g for i, r in enumerate(p.rules) for g in ground_rule(p, i, r, dom)]


def domain_atoms(p: EDisjProgram, domain) -> list:
    dom = program_domain(p, domain)
    atoms = [
        GroundAtom(name, args)
        for name, arity in sorted(p.vocabulary.predicates)
        for args in itertools.product(dom, repeat=arity)
    ]
    return sorted(atoms, key=atom_key)


def minus_set(m: Structure, atoms: Iterable[GroundAtom] = None) -> frozenset:
    """``M^-``: the false domain atoms of ``m``, as ``("not", atom)`` pairs.

    By default the domain atoms are all atoms over ``m``'s interpreted
    predicates and domain.
    """
    if atoms is None:
        atoms = [
            GroundAtom(pred, args)
            for pred, arity in m.arities.items()
            for args in itertools.product(m.domain, repeat=arity)
        ]
    true = m.atoms()
    return frozenset(("not", a) for a in atoms if a not in true)


class _Masks:
    """Bit-level view of a ground program for fast subset checks."""

    def __init__(self, ground: list, universe: list):
        self.universe = universe
        self.index = {a: i for i, a in enumerate(universe)}
        self.rules = []
        for g in ground:
            pos = self._mask(g.pos)
            if pos is None:
                continue  # a positive atom outside the universe is never in X
            head = self._mask(g.head_atoms, partial=True)
            neg = self._mask(g.neg, partial=True)
            self.rules.append((pos, neg, head))

    def _mask(self, atoms, partial=False):
        m = 0
        for a in atoms:
            i = self.index.get(a)
            if i is None:
                if partial:
                    continue
                return None
            m |= 1 << i
        return m

    def closed(self, x: int, m: int) -> bool:
        for pos, neg, head in self.rules:
            if pos & ~x == 0 and neg & m == 0 and head & x == 0:
                return False
        return True

    def minimal(self, m: int) -> bool:
        sub = (m - 1) & m
        while True:
            if sub != m and self.closed(sub, m):
                return False
            if sub == 0:
                return True
            sub = (sub - 1) & m

    def atoms(self, mask: int) -> list:
        return [a for i, a in enumerate(self.universe) if mask >> i & 1]


def _structure(p: EDisjProgram, dom, atoms) -> Structure:
    rels = {name: [] for name, _ in p.vocabulary.predicates}
    for a in atoms:
        rels[a.pred].append(a.args)
    return Structure(dom, rels, arities=p.vocabulary.arities)


def is_stable(p: EDisjProgram, m: Structure) -> bool:
    """Whether ``m`` is a stable model of ``p`` (grounded over ``dom(m)``)."""
    ground = ground_program(p, m.domain)
    true = sorted(m.atoms(), key=atom_key)
    universe = sorted(set(true) | {a for g in ground for a in g.head_atoms}, key=atom_key)
    masks = _Masks(ground, universe)
    mm = masks._mask(true)
    if len(true) > MAX_ATOMS:
        raise EdlpError(f"minimality check refused: {len(true)} true atoms (limit {MAX_ATOMS})")
    return masks.closed(mm, mm) and masks.minimal(mm)


def stable_models(p: EDisjProgram, domain) -> list:
    """All stable models over ``domain`` (plus the program's constants).

    Only atoms that occur in some ground head can be in a stable model,
    so candidates range over subsets of those.
    """
    dom = program_domain(p, domain)
    ground = ground_program(p, dom)
    universe = sorted({a for g in ground for a in g.head_atoms}, key=atom_key)
    n = len(universe)
    if n > MAX_ATOMS:
        raise EdlpError(f"stable model search refused: N = {n} head atoms (limit {MAX_ATOMS})")
    masks = _Masks(ground, universe)
    found = []
    for mm in range(1 << n):
        if masks.closed(mm, mm) and masks.minimal(mm):
            found.append(_structure(p, dom, masks.atoms(mm)))
    found.sort(key=lambda s: (len(s.atoms()), sorted(map(atom_key, s.atoms()))))
    return found


__all__ = [
    "EdlpError",
    "GroundRule",
    "ground_program",
    "ground_rule",
    "domain_atoms",
    "program_domain",
    "minus_set",
    "is_stable",
    "stable_models",
    "MAX_ATOMS",
]
