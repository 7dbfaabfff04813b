"""First-order substrate shared by every other module.

Terms, formulas with restricted quantifiers, vocabularies, finite
structures whose domain is split into initial and created elements, and
Tarskian satisfaction over such structures.

Integers are ordinary domain elements. ``t + d`` is a partial built-in:
it denotes an element only when both sides are integers and the sum is
itself in the domain; an atom with an undefined argument is false.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Union

Element = Union[str, int]


class LogicError(Exception):
    """Base class for errors raised by the logic core."""


class EvaluationError(LogicError):
    pass


class StructureError(LogicError):
    pass


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Add:
    """Integer addition; the right operand is always a simple term."""

    left: "Term"
    right: "Term"


Term = Union[Var, Const, Int, Add]


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, Add):
        yield from term_vars(t.left)
        yield from term_vars(t.right)


def term_constants(t: Term) -> Iterator[str]:
    if isinstance(t, Const):
        yield t.name
    elif isinstance(t, Add):
        yield from term_constants(t.left)
        yield from term_constants(t.right)


# ------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Compare:
    """Integer order comparison; false whenever a side is not an integer."""

    op: str  # one of < <= > >=
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    """``! var [qual]: body`` -- the body holds for every var satisfying qual."""

    var: str
    qual: "Formula"
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    qual: "Formula"
    body: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


Formula = Union[Atom, Equals, Compare, Not, Conj, Disj, Implies, Iff, Forall, Exists, Top, Bottom]

TRUE = Top()
FALSE = Bottom()

COMPARISONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Left-folded conjunction; ``true`` for no parts."""
    result = None
    for p in parts:
        result = p if result is None else Conj(result, p)
    return TRUE if result is None else result


def desugar(f: Formula) -> Formula:
    """Rewrite restricted quantifiers into plain ones.

    ``![x:q]: b`` becomes ``!x: q => b`` and ``?[x:q]: b`` becomes
    ``?x: q & b``; plain quantifiers keep ``true`` as qualification.
    """
    if isinstance(f, Forall):
        return Forall(f.var, TRUE, Implies(desugar(f.qual), desugar(f.body)))
    if isinstance(f, Exists):
        return Exists(f.var, TRUE, Conj(desugar(f.qual), desugar(f.body)))
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, (Conj, Disj, Implies, Iff)):
        return type(f)(desugar(f.left), desugar(f.right))
    return f


def free_vars(f: Formula) -> set:
    if isinstance(f, Atom):
        return {v for a in f.args for v in term_vars(a)}
    if isinstance(f, (Equals, Compare)):
        return set(term_vars(f.left)) | set(term_vars(f.right))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (Conj, Disj, Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        return (free_vars(f.qual) | free_vars(f.body)) - {f.var}
    return set()


def formula_atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from formula_atoms(f.body)
    elif isinstance(f, (Conj, Disj, Implies, Iff)):
        yield from formula_atoms(f.left)
        yield from formula_atoms(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from formula_atoms(f.qual)
        yield from formula_atoms(f.body)


def formula_terms(f: Formula) -> Iterator[Term]:
    if isinstance(f, Atom):
        yield from f.args
    elif isinstance(f, (Equals, Compare)):
        yield f.left
        yield f.right
    elif isinstance(f, Not):
        yield from formula_terms(f.body)
    elif isinstance(f, (Conj, Disj, Implies, Iff)):
        yield from formula_terms(f.left)
        yield from formula_terms(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from formula_terms(f.qual)
        yield from formula_terms(f.body)


# ----------------------------------------------------------- vocabulary


@dataclass(frozen=True)
class Vocabulary:
    predicates: frozenset = frozenset()  # of (name, arity)
    constants: frozenset = frozenset()

    def __post_init__(self):
        seen = {}
        for name, arity in self.predicates:
            if not isinstance(arity, int) or arity < 0:
                raise StructureError(f"bad arity {arity!r} for predicate {name}")
            if seen.setdefault(name, arity) != arity:
                raise StructureError(f"predicate {name} used with arities {seen[name]} and {arity}")

    @property
    def arities(self) -> dict:
        return dict(self.predicates)

    def merge(self, other: "Vocabulary") -> "Vocabulary":
        return Vocabulary(self.predicates | other.predicates, self.constants | other.constants)

    @classmethod
    def of_formulas(cls, formulas: Iterable[Formula]) -> "Vocabulary":
        preds, consts = set(), set()
        for f in formulas:
            for a in formula_atoms(f):
                preds.add((a.pred, len(a.args)))
            for t in formula_terms(f):
                consts.update(term_constants(t))
        return cls(frozenset(preds), frozenset(consts))


# ------------------------------------------------------------ structures


class GroundAtom(NamedTuple):
    pred: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(element_str(e) for e in self.args)})"


_PLAIN = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def element_str(e: Element) -> str:
    if isinstance(e, int) or _PLAIN.match(e):
        return str(e)
    return '"' + e.replace("\\", "\\\\").replace('"', '\\"') + '"'


def element_key(e: Element):
    """Total order on elements: integers first, then names (natural order)."""
    if isinstance(e, int):
        return (0, e, "")
    m = re.match(r"(.*?)(\d+)\Z", e)
    if m:
        return (1, int(m.group(2)), e) if m.group(1) == "_c" else (2, 0, e)
    return (2, 0, e)


def atom_key(a: GroundAtom):
    return (a.pred, tuple(element_key(e) for e in a.args))


class Structure:
    """A finite interpretation.

    ``domain`` is ordered (the order is the element's stable ordinal);
    ``created`` marks the elements invented by a causal process, the rest
    are initial. Relations map predicate names to sets of tuples.
    """

    __slots__ = ("domain", "created", "relations", "arities", "constants", "_dset", "_key")

    def __init__(
        self,
        domain: Iterable[Element] = (),
        relations: Optional[Mapping[str, Iterable]] = None,
        *,
        created: Iterable[Element] = (),
        constants: Optional[Mapping[str, Element]] = None,
        arities: Optional[Mapping[str, int]] = None,
    ):
        dom = tuple(dict.fromkeys(domain))
        dset = frozenset(dom)
        created = frozenset(created)
        if not created <= dset:
            raise StructureError(f"created elements {sorted(map(str, created - dset))} not in domain")
        rels, ar = {}, dict(arities or {})
        for pred, tuples in (relations or {}).items():
            ts = frozenset(tuple(t) for t in tuples)
            for t in ts:
                if ar.setdefault(pred, len(t)) != len(t):
                    raise StructureError(f"arity mismatch in relation {pred}: {t}")
                for e in t:
                    if e not in dset:
                        raise StructureError(f"element {e!r} of {pred}{t} is not in the domain")
            rels[pred] = ts
        for pred in ar:
            rels.setdefault(pred, frozenset())
        consts = dict(constants or {})
        for name, e in consts.items():
            if e not in dset or e in created:
                raise StructureError(f"constant {name} must denote an initial element, got {e!r}")
        self.domain = dom
        self.created = created
        self.relations = rels
        self.arities = ar
        self.constants = consts
        self._dset = dset
        self._key = None

    # -- identity
    def key(self):
        if self._key is None:
            self._key = (
                frozenset(self.domain),
                frozenset(self.created),
                frozenset((p, ts) for p, ts in self.relations.items() if ts),
                frozenset(self.constants.items()),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, Structure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        atoms = ", ".join(str(a) for a in self.sorted_atoms())
        return f"Structure({{{atoms}}}, domain={list(self.domain)}, created={sorted(self.created, key=element_key)})"

    # -- queries
    @property
    def initial(self) -> tuple:
        return tuple(e for e in self.domain if e not in self.created)

    def contains(self, e: Element) -> bool:
        return e in self._dset

    def holds(self, pred: str, args: tuple) -> bool:
        try:
            rel = self.relations[pred]
        except KeyError:
            raise StructureError(f"predicate {pred} is not interpreted") from None
        arity = self.arities.get(pred)
        if arity is not None and arity != len(args):
            raise StructureError(f"predicate {pred} has arity {arity}, applied to {len(args)} arguments")
        return tuple(args) in rel

    def constant(self, name: str) -> Element:
        if name in self.constants:
            return self.constants[name]
        if name in self._dset and name not in self.created:
            return name
        raise EvaluationError(f"constant {name} does not denote an initial domain element")

    def atoms(self, preds: Optional[Iterable[str]] = None) -> frozenset:
        preds = self.relations.keys() if preds is None else preds
        return frozenset(GroundAtom(p, t) for p in preds for t in self.relations.get(p, ()))

    def sorted_atoms(self, preds=None) -> list:
        return sorted(self.atoms(preds), key=atom_key)

    # -- derived structures
    def with_relations(self, updates: Mapping[str, Iterable], arities=None) -> "Structure":
        rels = dict(self.relations)
        rels.update(updates)
        ar = dict(self.arities)
        ar.update(arities or {})
        return Structure(self.domain, rels, created=self.created, constants=self.constants, arities=ar)

    def with_atoms(self, atoms: Iterable[GroundAtom], created: Iterable[Element] = ()) -> "Structure":
        """Add atoms (and the elements they are created over) to a copy."""
        created = tuple(created)
        rels = {p: set(ts) for p, ts in self.relations.items()}
        for a in atoms:
            rels.setdefault(a.pred, set()).add(tuple(a.args))
        return Structure(
            self.domain + created,
            rels,
            created=self.created | set(created),
            constants=self.constants,
            arities=self.arities,
        )

    def restrict(self, preds: Iterable[str]) -> "Structure":
        preds = set(preds)
        return Structure(
            self.domain,
            {p: ts for p, ts in self.relations.items() if p in preds},
            created=self.created,
            constants=self.constants,
            arities={p: a for p, a in self.arities.items() if p in preds},
        )

    def rename(self, mapping: Mapping[Element, Element]) -> "Structure":
        def m(e):
            return mapping.get(e, e)

        return Structure(
            [m(e) for e in self.domain],
            {p: {tuple(m(e) for e in t) for t in ts} for p, ts in self.relations.items()},
            created={m(e) for e in self.created},
            constants={k: m(v) for k, v in self.constants.items()},
            arities=self.arities,
        )


def default_state(vocab: Vocabulary, exo_part: Structure, endogenous: Iterable[str]) -> Structure:
    """The state a causal process starts from: every endogenous atom false."""
    endogenous = set(endogenous)
    clash = sorted(p for p in endogenous if exo_part.relations.get(p))
    if clash:
        raise StructureError(f"exogenous part interprets endogenous predicate(s) {', '.join(clash)}")
    if exo_part.created:
        raise StructureError("exogenous part may not contain created elements")
    arities = vocab.arities
    return exo_part.with_relations(
        {p: () for p in endogenous}, arities={p: arities[p] for p in endogenous if p in arities}
    )


# ------------------------------------------------------------ evaluation


class Reader:
    """Where the evaluator gets its domain and atom truth values from.

    The plain reader reads everything from one structure. Subclasses in the
    causal engine read positive and negative occurrences from different
    states.
    """

    def __init__(self, structure: Structure):
        self.structure = structure
        self.domain = structure.domain
        self._dset = set(structure.domain)

    def contains(self, e) -> bool:
        return e in self._dset

    def atom(self, pred: str, args: tuple, positive: bool) -> bool:
        return self.structure.holds(pred, args)

    def constant(self, name: str) -> Element:
        return self.structure.constant(name)


def eval_term(t: Term, env: Mapping[str, Element], reader: Reader) -> Optional[Element]:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name}") from None
    if isinstance(t, Const):
        return reader.constant(t.name)
    if isinstance(t, Int):
        return t.value
    if isinstance(t, Add):
        a, b = eval_term(t.left, env, reader), eval_term(t.right, env, reader)
        if type(a) is int and type(b) is int and reader.contains(a + b):
            return a + b
        return None
    raise TypeError(f"not a term: {t!r}")


def ground_args(args: tuple, env, reader) -> Optional[tuple]:
    out = []
    for t in args:
        v = eval_term(t, env, reader)
        if v is None:
            return None
        out.append(v)
    return tuple(out)


def holds(f: Formula, env: Mapping[str, Element], reader: Reader, positive: bool = True) -> bool:
    """Truth of ``f`` under ``env``; ``positive`` tracks the occurrence polarity."""
    if isinstance(f, Atom):
        args = ground_args(f.args, env, reader)
        return args is not None and reader.atom(f.pred, args, positive)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Equals):
        a, b = eval_term(f.left, env, reader), eval_term(f.right, env, reader)
        return a is not None and a == b
    if isinstance(f, Compare):
        a, b = eval_term(f.left, env, reader), eval_term(f.right, env, reader)
        return type(a) is int and type(b) is int and COMPARISONS[f.op](a, b)
    if isinstance(f, Not):
        return not holds(f.body, env, reader, not positive)
    if isinstance(f, Conj):
        return holds(f.left, env, reader, positive) and holds(f.right, env, reader, positive)
    if isinstance(f, Disj):
        return holds(f.left, env, reader, positive) or holds(f.right, env, reader, positive)
    if isinstance(f, Implies):
        return not holds(f.left, env, reader, not positive) or holds(f.right, env, reader, positive)
    if isinstance(f, Iff):
        return (not holds(f.left, env, reader, not positive) or holds(f.right, env, reader, positive)) and (
            not holds(f.right, env, reader, not positive) or holds(f.left, env, reader, positive)
        )
    if isinstance(f, Forall):
        inner = dict(env)
        for d in reader.domain:
            inner[f.var] = d
            if holds(f.qual, inner, reader, not positive) and not holds(f.body, inner, reader, positive):
                return False
        return True
    if isinstance(f, Exists):
        inner = dict(env)
        for d in reader.domain:
            inner[f.var] = d
            if holds(f.qual, inner, reader, positive) and holds(f.body, inner, reader, positive):
                return True
        return False
    raise TypeError(f"not a formula: {f!r}")


def evaluate_formula(f: Formula, s: Structure, a: Optional[Mapping[str, Element]] = None) -> bool:
    """Tarskian satisfaction of ``f`` in ``s`` under assignment ``a``.

    Quantifiers range over the whole domain of ``s``.
    """
    a = dict(a or {})
    for v, e in a.items():
        if not s.contains(e):
            raise EvaluationError(f"variable {v} is assigned {e!r}, which is not in the domain")
    return holds(f, a, Reader(s))
