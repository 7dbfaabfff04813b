"""Causal processes, csets and model checking/enumeration for causal theories.

An *event instance* is a leaf effect (an atom-expression or a ``New``) of
the theory tree together with the values of the enclosing ``All``/``Sel``/
``New`` variables; each instance fires at most once. ``Or``, ``Sel`` and
``New`` nodes are resolved by a *policy*, a map from ``(kind, instance)``
to a branch index, a witness or a created element.

A candidate structure ``M`` is accepted by :func:`check_model` when

* every FO sentence holds in ``M``;
* some policy, evaluated with every condition read in ``M``, causes exactly
  the endogenous atoms of ``M`` and creates exactly its created elements;
* the same policy drives a process from the default state that ends in
  ``M``. During that process positive endogenous occurrences read the
  current state, negative ones read ``M``, exogenous atoms read the given
  interpretation, and quantifiers range over the elements that exist so
  far. A ``Sel`` fires in the first round where its witness exists and
  satisfies the qualification; one still waiting at the end blocks.
  When a ``Sel`` body does not mention its variable every witness has the
  same effect, so the first valid one is taken instead of branching.

Every search is bounded by a creation budget.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .logic import (
    Atom,
    Bottom,
    Compare,
    Conj,
    Disj,
    Equals,
    EvaluationError,
    Exists,
    Forall,
    GroundAtom,
    Iff,
    Implies,
    LogicError,
    Not,
    Reader,
    Structure,
    StructureError,
    Top,
    COMPARISONS,
    atom_key,
    element_key,
    element_str,
    eval_term,
    evaluate_formula,
    ground_args,
    holds,
)
from .syntax import All, And, AtomExpr, New, Or, Rule, Sel, as_foclog, cee_free_vars, is_creation_free

DEFAULT_BUDGET = 4
BRUTE_FORCE_LIMIT = 20


class EngineError(LogicError):
    pass


class GuardError(EngineError):
    """Raised when a brute-force search would exceed its size guard."""


# ------------------------------------------------------------- records


@dataclass(frozen=True)
class EventInstance:
    path: tuple
    binding: tuple = ()  # ((var, element), ...), outermost binder first

    def __str__(self):
        p = ".".join(map(str, self.path))
        if not self.binding:
            return p
        return p + "[" + ", ".join(f"{v}={element_str(e)}" for v, e in self.binding) + "]"

    def sort_key(self):
        return (self.path, tuple((v, element_key(e)) for v, e in self.binding))


@dataclass(frozen=True)
class Firing:
    """One fired leaf: either an atom was caused or an element created."""

    event: EventInstance
    atom: Optional[GroundAtom] = None
    created: object = None
    conditions: tuple = ()

    def __str__(self):
        what = str(self.atom) if self.atom is not None else f"new {element_str(self.created)}"
        return f"{self.event}: {what}"


@dataclass(frozen=True)
class CSet:
    atoms: frozenset
    created: tuple = ()
    justifications: dict = field(default_factory=dict, compare=False, hash=False)

    def key(self):
        return (tuple(sorted(self.atoms, key=atom_key)), self.created)

    def sorted_atoms(self) -> list:
        return sorted(self.atoms, key=atom_key)


@dataclass(frozen=True)
class CSetFailure:
    """A policy branch that could not produce a cset (an empty ``Sel``)."""

    blocked: EventInstance
    decisions: tuple = ()


@dataclass(frozen=True)
class CSetResult:
    csets: tuple
    failures: tuple
    truncated: bool
    budget: int


@dataclass(frozen=True)
class TraceStep:
    state: Structure
    fired: tuple = ()  # of Firing
    delta_atoms: frozenset = frozenset()
    delta_created: tuple = ()


@dataclass
class ProcessTrace:
    steps: list
    budget: int
    truncated: bool = False
    blocked: tuple = ()  # Sel instances still waiting at the end
    verdict: Optional[bool] = None
    note: str = ""

    @property
    def final(self) -> Structure:
        return self.steps[-1].state

    def fired_events(self) -> list:
        return [f.event for s in self.steps for f in s.fired]


@dataclass
class Verdict:
    accepted: bool
    reason: str = ""
    trace: Optional[ProcessTrace] = None
    policy: Optional[dict] = None

    def __bool__(self):
        return self.accepted


@dataclass(frozen=True)
class ModelSet:
    models: tuple
    truncated: tuple
    budget: int
    method: str

    def __iter__(self):
        return iter(self.models)

    def __len__(self):
        return len(self.models)


# ------------------------------------------------------ decision search


class NeedChoice(Exception):
    def __init__(self, key, options):
        self.key = key
        self.options = tuple(options)


class _Dead(Exception):
    """The current branch cannot lead to a result."""


class _Blocked(Exception):
    def __init__(self, event):
        self.event = event


def explore(run: Callable[[dict], object]):
    """Depth-first search over decisions; ``run`` replays a decision prefix.

    ``run`` raises :class:`NeedChoice` at the first undecided point; each
    option is tried in order. Yields ``(decisions, result)`` pairs.
    """
    stack = [{}]
    while stack:
        d = stack.pop()
        try:
            result = run(d)
        except NeedChoice as nc:
            for o in reversed(nc.options):
                stack.append({**d, nc.key: o})
            continue
        except _Dead:
            continue
        yield d, result


def _decide(decisions: dict, key, options):
    if key in decisions:
        return decisions[key]
    if len(options) == 1:
        return options[0]
    raise NeedChoice(key, options)


# ------------------------------------------------------------ readers


class StateReader(Reader):
    """Endogenous atoms come from ``pos`` (and ``neg`` for negative
    occurrences when given); everything else comes from ``base``."""

    def __init__(self, base: Structure, endo, pos, neg=None, domain=None):
        self.structure = base
        self.endo = endo
        self.pos = pos
        self.neg = neg
        self.domain = tuple(base.domain if domain is None else domain)
        self._dset = set(self.domain)

    def extended(self, e) -> "StateReader":
        if e in self._dset:
            return self
        return StateReader(self.structure, self.endo, self.pos, self.neg, self.domain + (e,))

    def atom(self, pred, args, positive):
        if pred in self.endo:
            a = GroundAtom(pred, args)
            if positive or self.neg is None:
                return a in self.pos
            return self.neg(a)
        try:
            return args in self.structure.relations[pred]
        except KeyError:
            raise StructureError(f"predicate {pred} is not interpreted") from None


# ------------------------------------------------------- setup helpers


def fresh_names(taken: Iterable, n: int) -> tuple:
    """The first ``n`` names ``_c1, _c2, ...`` not in ``taken``."""
    taken = set(taken)
    out, i = [], 0
    while len(out) < n:
        i += 1
        if f"_c{i}" not in taken:
            out.append(f"_c{i}")
    return tuple(out)


class _Setup:
    """A theory with its symbol classification and a completed base."""

    def __init__(self, theory, structure: Structure, *, base_is_candidate=False):
        th = as_foclog(theory)
        self.theory = th
        self.effects = th.causal.effects if th.causal else ()
        self.sentences = th.sentences
        self.endo = th.endogenous
        vocab = th.vocabulary
        self.vocab = vocab
        arities = vocab.arities
        for p, ts in structure.relations.items():
            if p not in arities:
                # an exogenous part may carry unrelated facts; a candidate may not
                if ts and base_is_candidate:
                    raise StructureError(f"structure interprets {p}, which is not in the vocabulary")
                continue
            if p in structure.arities and structure.arities[p] != arities[p]:
                raise StructureError(f"predicate {p} has arity {arities[p]}, structure uses {structure.arities[p]}")
        if not base_is_candidate:
            clash = sorted(p for p in self.endo if structure.relations.get(p))
            if clash:
                raise StructureError(f"exogenous part interprets endogenous predicate(s) {', '.join(clash)}")
            if structure.created:
                raise StructureError("exogenous part may not contain created elements")
        # constants that denote themselves join the initial domain
        extra = [c for c in sorted(vocab.constants) if c not in structure.constants and not structure.contains(c)]
        rels = {p: ts for p, ts in structure.relations.items() if p in arities}
        for p in arities:
            rels.setdefault(p, frozenset())
        self.structure = Structure(
            tuple(structure.initial) + tuple(extra) + tuple(e for e in structure.domain if e in structure.created),
            rels,
            created=structure.created,
            constants=structure.constants,
            arities=arities,
        )
        exo_rels = {p: ts for p, ts in self.structure.relations.items() if p not in self.endo}
        exo_rels.update({p: frozenset() for p in self.endo})
        self.base = Structure(
            self.structure.domain,
            exo_rels,
            created=self.structure.created,
            constants=self.structure.constants,
            arities=arities,
        )
        self.initial = self.structure.initial

    def state(self, atoms, created) -> Structure:
        """The structure with initial elements, ``created`` and ``atoms``."""
        domain = tuple(self.initial) + tuple(created)
        dset = set(domain)
        rels = {
            p: {t for t in ts if all(e in dset for e in t)}
            for p, ts in self.base.relations.items()
            if p not in self.endo
        }
        for p in self.endo:
            rels[p] = set()
        for a in atoms:
            rels[a.pred].add(tuple(a.args))
        return Structure(domain, rels, created=created, constants=self.base.constants, arities=self.base.arities)


# ------------------------------------------------------------ traversal


def _traverse(node, path, env, bind, reader, conds, ctx):
    if isinstance(node, AtomExpr):
        key = EventInstance(path, bind)
        if ctx.is_fired(key):
            return
        args = ground_args(node.atom.args, env, reader)
        if args is not None:
            ctx.emit_atom(key, GroundAtom(node.atom.pred, args), conds)
    elif isinstance(node, Rule):
        if holds(node.body, env, reader):
            _traverse(node.head, path + (0,), env, bind, reader, conds + (node.body,), ctx)
    elif isinstance(node, And):
        _traverse(node.left, path + (0,), env, bind, reader, conds, ctx)
        _traverse(node.right, path + (1,), env, bind, reader, conds, ctx)
    elif isinstance(node, Or):
        c = ctx.choose_or(EventInstance(path, bind))
        _traverse(node.right if c else node.left, path + (c,), env, bind, reader, conds, ctx)
    elif isinstance(node, All):
        inner = dict(env)
        for d in reader.domain:
            inner[node.var] = d
            if holds(node.qual, inner, reader):
                _traverse(node.body, path + (0,), dict(inner), bind + ((node.var, d),), reader, conds + (node.qual,), ctx)
    elif isinstance(node, Sel):
        key = EventInstance(path, bind)
        lazy = _witness_irrelevant(node)
        if key in ctx.sel_done:
            w = ctx.sel_done[key]
        else:
            w = ctx.first_sel(key, node, env, reader) if lazy else ctx.choose_sel(key, node, env, reader)
            if w is _PENDING:
                return
            ctx.sel_done[key] = w
        inner = {**env, node.var: w}
        # when the body ignores the witness, the witness is not part of the event names below
        inner_bind = bind if lazy else bind + ((node.var, w),)
        _traverse(node.body, path + (0,), inner, inner_bind, reader, conds + (node.qual,), ctx)
    elif isinstance(node, New):
        key = EventInstance(path, bind)
        if key in ctx.new_done:
            e = ctx.new_done[key]
        else:
            e = ctx.new_element(key, conds)
            if e is _PENDING:
                return
            ctx.new_done[key] = e
        inner = {**env, node.var: e}
        _traverse(node.body, path + (0,), inner, bind + ((node.var, e),), reader.extended(e), conds, ctx)
    else:
        raise TypeError(f"not a CEE: {node!r}")


_PENDING = object()


_IRRELEVANT: dict = {}


def _witness_irrelevant(node) -> bool:
    """True when a Sel's body does not mention its variable.

    Every witness then has the same effect, so only whether one exists
    matters and the first valid one can be taken without branching.
    """
    hit = _IRRELEVANT.get(id(node))
    if hit is None or hit[0] is not node:
        hit = (node, node.var not in cee_free_vars(node.body))
        _IRRELEVANT[id(node)] = hit
    return hit[1]


def _first_valid(node, env, reader):
    for d in reader.domain:
        if holds(node.qual, {**env, node.var: d}, reader):
            return d
    return _PENDING


def _sel_valid(node, env, reader, w) -> bool:
    return reader.contains(w) and holds(node.qual, {**env, node.var: w}, reader)


def _traverse_theory(effects, reader, ctx):
    for i, e in enumerate(effects):
        _traverse(e, (i,), {}, (), reader, (), ctx)


# -------------------------------------------------- static evaluation


class _Static:
    """One compositional evaluation with all conditions read in one state.

    ``mode`` is ``"cset"`` (fresh creation, empty Sel blocks the branch) or
    ``"model"`` (creation draws from the candidate's created elements and
    every caused atom must already be true in the candidate).
    """

    def __init__(self, decisions, *, mode, fresh=(), target=None, created_pool=()):
        self.decisions = decisions
        self.mode = mode
        self.fresh = list(fresh)
        self.target = target
        self.pool = tuple(created_pool)
        self.atoms = set()
        self.created = []
        self.firings = []
        self.sel_done = {}
        self.new_done = {}
        self.truncated = False

    def is_fired(self, key):
        return False

    def emit_atom(self, key, atom, conds):
        if self.target is not None and atom not in self.target:
            raise _Dead
        self.atoms.add(atom)
        self.firings.append(Firing(key, atom=atom, conditions=conds))

    def choose_or(self, key):
        return _decide(self.decisions, ("or", key), (0, 1))

    def choose_sel(self, key, node, env, reader):
        options = [d for d in reader.domain if holds(node.qual, {**env, node.var: d}, reader)]
        if not options:
            if self.mode == "model":
                raise _Dead
            raise _Blocked(key)
        return _decide(self.decisions, ("sel", key), options)

    def first_sel(self, key, node, env, reader):
        w = _first_valid(node, env, reader)
        if w is _PENDING:
            if self.mode == "model":
                raise _Dead
            raise _Blocked(key)
        return w

    def new_element(self, key, conds):
        if self.mode == "model":
            options = [e for e in self.pool if e not in self.created]
            if not options:
                raise _Dead
            e = _decide(self.decisions, ("new", key), options)
        else:
            if len(self.created) >= len(self.fresh):
                self.truncated = True
                raise _Dead
            e = self.fresh[len(self.created)]
        self.created.append(e)
        self.firings.append(Firing(key, created=e, conditions=conds))
        return e


def enumerate_csets(delta, s: Structure, budget: int = DEFAULT_BUDGET) -> CSetResult:
    """All csets of ``delta`` in state ``s`` (conditions read in ``s``).

    New elements are fresh names; branches needing more than ``budget``
    creations are pruned and flagged. Branches blocked by a ``Sel`` with an
    empty qualification are reported as failures, not as empty csets.
    """
    if budget < 0:
        raise EngineError("budget must be non-negative")
    setup = _Setup(delta, s, base_is_candidate=True)
    st = setup.structure
    reader = StateReader(st, setup.endo, frozenset(st.atoms(setup.endo)))
    fresh = fresh_names(st.domain, budget)
    seen, csets, failures = set(), [], []
    truncated = False

    def run(decisions):
        nonlocal truncated
        ctx = _Static(decisions, mode="cset", fresh=fresh)
        try:
            _traverse_theory(setup.effects, reader, ctx)
        except _Dead:
            truncated = truncated or ctx.truncated
            raise
        except _Blocked as b:
            return CSetFailure(b.event, tuple(sorted(decisions.items(), key=lambda kv: str(kv))))
        return ctx

    for _, res in explore(run):
        if isinstance(res, CSetFailure):
            failures.append(res)
            continue
        just = {}
        for f in res.firings:
            k = f.atom if f.atom is not None else f.created
            just.setdefault(k, []).append((f.event, f.conditions))
        c = CSet(frozenset(res.atoms), tuple(res.created), {k: tuple(v) for k, v in just.items()})
        if c.key() not in seen:
            seen.add(c.key())
            csets.append(c)
    csets.sort(key=lambda c: (len(c.created), len(c.atoms), [atom_key(a) for a in c.sorted_atoms()]))
    return CSetResult(tuple(csets), tuple(failures), truncated, budget)


# ------------------------------------------------------------ processes


class _Process:
    """A causal process from the default state, one round at a time."""

    def __init__(self, setup: _Setup, policy, budget: int):
        self.setup = setup
        self.policy = policy
        self.budget = budget
        self.atoms = set()
        self.created = []
        self.fired = set()
        self.sel_done = {}
        self.new_done = {}
        self.or_done = {}
        self.pending = set()
        self.truncated = False
        self.steps = [TraceStep(setup.state((), ()))]
        policy.proc = self

    # ctx interface used by _traverse
    def is_fired(self, key):
        return key in self.fired or key in self._round_keys

    def emit_atom(self, key, atom, conds):
        self._round_keys.add(key)
        self._round.append(Firing(key, atom=atom, conditions=conds))
        self.policy.on_cause(atom)

    def choose_or(self, key):
        if key not in self.or_done:
            self.or_done[key] = self.policy.choose_or(key)
        return self.or_done[key]

    def choose_sel(self, key, node, env, reader):
        w = self.policy.choose_sel(key, node, env, reader)
        if w is _PENDING:
            self.pending.add(key)
        else:
            self._progress = True
        return w

    def first_sel(self, key, node, env, reader):
        w = _first_valid(node, env, reader)
        if w is _PENDING:
            self.pending.add(key)
        else:
            self._progress = True
        return w

    def new_element(self, key, conds):
        if len(self.created) + len(self._round_created) >= self.budget and not self.policy.preassigned:
            self.truncated = True
            return _PENDING
        e = self.policy.new_element(key, len(self.created) + len(self._round_created))
        self._round_created.append(e)
        self._round.append(Firing(key, created=e, conditions=conds))
        return e

    def round(self) -> bool:
        self._round, self._round_keys, self._round_created = [], set(), []
        self._progress = False
        self.pending = set()
        domain = tuple(self.setup.initial) + tuple(self.created)
        reader = StateReader(self.setup.base, self.setup.endo, frozenset(self.atoms), self.policy.neg, domain)
        _traverse_theory(self.setup.effects, reader, self)
        if not self._round and not self._progress:
            return False
        new_atoms = {f.atom for f in self._round if f.atom is not None} - self.atoms
        self.atoms |= new_atoms
        self.created.extend(self._round_created)
        self.fired |= self._round_keys | {f.event for f in self._round if f.atom is None}
        fired = tuple(self._round)
        if new_atoms or self._round_created:
            self.steps.append(
                TraceStep(self.setup.state(self.atoms, self.created), fired, frozenset(new_atoms), tuple(self._round_created))
            )
        else:
            last = self.steps[-1]
            self.steps[-1] = TraceStep(last.state, last.fired + fired, last.delta_atoms, last.delta_created)
        return True

    def run(self, max_rounds: int = 100000):
        for _ in range(max_rounds):
            if not self.round() or self.truncated:
                break
        return self

    @property
    def final(self) -> Structure:
        return self.steps[-1].state

    def trace(self) -> ProcessTrace:
        blocked = tuple(sorted(self.pending, key=EventInstance.sort_key)) if not self.truncated else ()
        return ProcessTrace(list(self.steps), self.budget, self.truncated, blocked)


class _Divergence(Exception):
    def __init__(self, event):
        self.event = event


class _ReplayPolicy:
    """Replays a fixed policy in reduct mode against a candidate."""

    preassigned = True

    def __init__(self, policy: dict, candidate_atoms):
        self.policy = policy
        self.neg = candidate_atoms.__contains__

    def on_cause(self, atom):
        pass

    def choose_or(self, key):
        try:
            return self.policy[("or", key)]
        except KeyError:
            raise _Divergence(key) from None

    def choose_sel(self, key, node, env, reader):
        try:
            w = self.policy[("sel", key)]
        except KeyError:
            raise _Divergence(key) from None
        return w if _sel_valid(node, env, reader, w) else _PENDING

    def new_element(self, key, index):
        try:
            return self.policy[("new", key)]
        except KeyError:
            raise _Divergence(key) from None


class _ForwardPolicy:
    """Pure forward mode: every condition reads the current state."""

    preassigned = False
    neg = None

    def __init__(self, rng: Optional[random.Random], fresh):
        self.rng = rng
        self.fresh = fresh

    def on_cause(self, atom):
        pass

    def _pick(self, options):
        return options[0] if self.rng is None else self.rng.choice(options)

    def choose_or(self, key):
        return self._pick([0, 1])

    def choose_sel(self, key, node, env, reader):
        options = [d for d in reader.domain if holds(node.qual, {**env, node.var: d}, reader)]
        return self._pick(options) if options else _PENDING

    def new_element(self, key, index):
        return self.fresh[index]


class _SearchPolicy:
    """Builds a candidate model by guessing negative reads."""

    preassigned = False

    def __init__(self, decisions, potential, fresh):
        self.decisions = decisions
        self.potential = potential
        self.fresh = fresh

    def neg(self, atom):
        if atom in self.proc.atoms:
            return True
        return _decide(self.decisions, ("guess", atom), (False, True))

    def on_cause(self, atom):
        if self.decisions.get(("guess", atom)) is False:
            raise _Dead

    def choose_or(self, key):
        return _decide(self.decisions, ("or", key), (0, 1))

    def choose_sel(self, key, node, env, reader):
        w = _decide(self.decisions, ("sel", key), self.potential)
        return w if _sel_valid(node, env, reader, w) else _PENDING

    def new_element(self, key, index):
        return self.fresh[index]


# ------------------------------------------------------------ checking


def _candidate_policies(setup: _Setup, m: Structure):
    """Policies whose full evaluation in ``m`` reproduces ``m`` exactly."""
    target = frozenset(m.atoms(setup.endo))
    reader = StateReader(setup.structure, setup.endo, target)
    created = frozenset(m.created)

    def run(decisions):
        ctx = _Static(decisions, mode="model", target=target, created_pool=sorted(created, key=element_key))
        _traverse_theory(setup.effects, reader, ctx)
        if ctx.atoms != target or set(ctx.created) != created:
            raise _Dead
        return ctx

    for decisions, ctx in explore(run):
        policy = dict(decisions)
        # record the forced (single-option) choices as well
        policy.update({("sel", k): w for k, w in ctx.sel_done.items()})
        policy.update({("new", k): e for k, e in ctx.new_done.items()})
        yield policy


def check_model(theory, candidate: Structure, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Decide whether ``candidate`` is a model; see the module docstring."""
    if budget < 0:
        raise EngineError("budget must be non-negative")
    if len(candidate.created) > budget:
        raise EngineError(f"candidate has {len(candidate.created)} created elements, budget is {budget}")
    setup = _Setup(theory, candidate, base_is_candidate=True)
    m = setup.structure
    for s in setup.sentences:
        try:
            ok = evaluate_formula(s, m)
        except EvaluationError as e:
            raise EngineError(f"cannot evaluate sentence: {e}") from None
        if not ok:
            from .render import render_formula

            return Verdict(False, f"FO sentence fails: {render_formula(s)}")
    target = frozenset(m.atoms(setup.endo))
    reason = "no policy causes exactly the candidate's endogenous atoms and created elements"
    for policy in _candidate_policies(setup, m):
        proc = _Process(setup, _ReplayPolicy(policy, target), budget)
        try:
            proc.run()
        except _Divergence as d:
            reason = f"process reaches event {d.event} which the candidate does not account for"
            continue
        trace = proc.trace()
        if trace.blocked:
            reason = f"Sel {trace.blocked[0]} never finds its witness in the process"
            continue
        if proc.atoms != set(target) or set(proc.created) != set(m.created):
            missing = sorted(set(target) - proc.atoms, key=atom_key)
            extra = sorted(proc.atoms - set(target), key=atom_key)
            if missing:
                reason = f"unfounded: {', '.join(map(str, missing))} never caused from the default state"
            elif extra:
                reason = f"process also causes {', '.join(map(str, extra))}"
            else:
                reason = "created elements are not all produced by the process"
            continue
        trace.verdict = True
        return Verdict(True, "accepted", trace, policy)
    return Verdict(False, reason)


# --------------------------------------------------------- enumeration


def canonical(s: Structure, fresh=None) -> Structure:
    """Rename created elements to the least isomorphic copy."""
    created = sorted(s.created, key=element_key)
    if not created:
        return s
    names = fresh or fresh_names(s.initial, len(created))
    best, best_key = None, None
    for perm in itertools.permutations(names[: len(created)]):
        r = s.rename(dict(zip(created, perm)))
        r = Structure(
            tuple(s.initial) + tuple(names[: len(created)]),
            r.relations,
            created=r.created,
            constants=r.constants,
            arities=r.arities,
        )
        k = sorted(map(atom_key, r.atoms()))
        if best_key is None or k < best_key:
            best, best_key = r, k
    return best


def structure_order(s: Structure):
    return (len(s.created), len(s.atoms()), sorted(map(atom_key, s.atoms())))


def enumerate_models(theory, exo_part: Structure, budget: int = DEFAULT_BUDGET, method: str = "search") -> ModelSet:
    """All models (up to renaming created elements) over ``exo_part``.

    ``search`` runs reduct-mode processes that guess negative reads and
    verifies each end state with :func:`check_model`; ``brute`` checks
    every subset of the atoms that could possibly be caused.
    """
    if budget < 0:
        raise EngineError("budget must be non-negative")
    setup = _Setup(theory, exo_part)
    if method == "search":
        models, truncated = _search(setup, budget)
    elif method == "brute":
        models, truncated = _brute(setup, budget), ()
    else:
        raise EngineError(f"unknown method {method!r}")
    return ModelSet(tuple(sorted(models, key=structure_order)), tuple(sorted(truncated, key=structure_order)), budget, method)


def _search(setup: _Setup, budget: int):
    fresh = fresh_names(setup.initial, budget)
    # a Sel can only pick a fresh name if some New may create it
    creates = not all(is_creation_free(c) for c in setup.effects)
    potential = tuple(setup.initial) + (fresh if creates else ())

    def run(decisions):
        proc = _Process(setup, _SearchPolicy(decisions, potential, fresh), budget)
        proc.run()
        if proc.truncated:
            return ("truncated", proc)
        if proc.pending:
            raise _Dead
        for k, v in decisions.items():
            if k[0] == "guess" and v != (k[1] in proc.atoms):
                raise _Dead
        return ("final", proc)

    models, truncated, seen = set(), set(), set()
    for _, (kind, proc) in explore(run):
        final = proc.final
        if kind == "truncated":
            truncated.add(canonical(final, fresh))
            continue
        key = final.key()
        if key in seen:
            continue
        seen.add(key)
        if check_model(setup.theory, final, budget):
            models.add(canonical(final, fresh))
    return models, truncated


# three-valued evaluation: None is unknown


def holds3(f, env, reader) -> Optional[bool]:
    if isinstance(f, Atom):
        args = ground_args(f.args, env, reader)
        if args is None:
            return False
        if f.pred in reader.endo:
            return None
        return reader.atom(f.pred, args, True)
    if isinstance(f, (Top, Bottom, Equals, Compare)):
        return holds(f, env, reader)
    if isinstance(f, Not):
        v = holds3(f.body, env, reader)
        return None if v is None else not v
    if isinstance(f, Conj):
        return _and3(holds3(f.left, env, reader), holds3(f.right, env, reader))
    if isinstance(f, Disj):
        return _or3(holds3(f.left, env, reader), holds3(f.right, env, reader))
    if isinstance(f, Implies):
        left = holds3(f.left, env, reader)
        return _or3(None if left is None else not left, holds3(f.right, env, reader))
    if isinstance(f, Iff):
        a, b = holds3(f.left, env, reader), holds3(f.right, env, reader)
        return None if a is None or b is None else a == b
    if isinstance(f, (Forall, Exists)):
        result = isinstance(f, Forall)
        inner = dict(env)
        for d in reader.domain:
            inner[f.var] = d
            q = holds3(f.qual, inner, reader)
            b = holds3(f.body, inner, reader)
            if isinstance(f, Forall):
                result = _and3(result, _or3(None if q is None else not q, b))
            else:
                result = _or3(result, _and3(q, b))
        return result
    raise TypeError(f"not a formula: {f!r}")


def _and3(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or3(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def possible_atoms(setup: _Setup, created: tuple) -> set:
    """Over-approximation of the atoms some process could cause."""
    reader = StateReader(setup.base, setup.endo, frozenset(), domain=tuple(setup.initial) + tuple(created))
    out = set()

    def walk(node, env):
        if isinstance(node, AtomExpr):
            args = ground_args(node.atom.args, env, reader)
            if args is not None:
                out.add(GroundAtom(node.atom.pred, args))
        elif isinstance(node, Rule):
            if holds3(node.body, env, reader) is not False:
                walk(node.head, env)
        elif isinstance(node, (And, Or)):
            walk(node.left, env)
            walk(node.right, env)
        elif isinstance(node, (All, Sel)):
            for d in reader.domain:
                inner = {**env, node.var: d}
                if holds3(node.qual, inner, reader) is not False:
                    walk(node.body, inner)
        elif isinstance(node, New):
            for e in created:
                walk(node.body, {**env, node.var: e})

    for e in setup.effects:
        walk(e, {})
    return out


def _brute(setup: _Setup, budget: int) -> set:
    fresh = fresh_names(setup.initial, budget)
    models = set()
    creates = not all(is_creation_free(c) for c in setup.effects)
    for k in range(budget + 1 if creates else 1):
        created = fresh[:k]
        atoms = sorted(possible_atoms(setup, created), key=atom_key)
        if len(atoms) > BRUTE_FORCE_LIMIT:
            raise GuardError(f"brute force refused: {len(atoms)} possible atoms (limit {BRUTE_FORCE_LIMIT})")
        for r in range(len(atoms) + 1):
            for subset in itertools.combinations(atoms, r):
                cand = setup.state(subset, created)
                if check_model(setup.theory, cand, budget):
                    models.add(canonical(cand, fresh))
    return models


# ------------------------------------------------------------ run_process


def run_process(
    theory, exo_part: Structure, *, seed: Optional[int] = 0, budget: int = DEFAULT_BUDGET, chooser: str = "random"
) -> ProcessTrace:
    """Execute one forward process from the default state.

    Every condition reads the current state. Choices are drawn from a
    seeded generator (``chooser="random"``) or always take the first
    option (``"first"``). The final state is re-checked with
    :func:`check_model` and the verdict recorded on the trace.
    """
    if budget < 0:
        raise EngineError("budget must be non-negative")
    setup = _Setup(theory, exo_part)
    rng = random.Random(seed) if chooser == "random" else None
    proc = _Process(setup, _ForwardPolicy(rng, fresh_names(setup.initial, budget)), budget)
    proc.run()
    trace = proc.trace()
    if trace.truncated:
        trace.note = f"creation budget {budget} exhausted; trace truncated"
    elif trace.blocked:
        trace.verdict = False
        trace.note = f"Sel {trace.blocked[0]} blocked: no witness"
    else:
        v = check_model(setup.theory, trace.final, budget)
        trace.verdict = v.accepted
        trace.note = "final state is a model" if v else f"final state is not a model: {v.reason}"
    return trace


__all__ = [
    "DEFAULT_BUDGET",
    "EngineError",
    "GuardError",
    "EventInstance",
    "Firing",
    "CSet",
    "CSetFailure",
    "CSetResult",
    "TraceStep",
    "ProcessTrace",
    "Verdict",
    "ModelSet",
    "enumerate_csets",
    "check_model",
    "enumerate_models",
    "run_process",
    "canonical",
    "possible_atoms",
    "fresh_names",
]
