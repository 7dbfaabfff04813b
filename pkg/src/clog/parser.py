"""Recursive-descent parsers for ``.clog``, ``.foclog`` and ``.edlp`` text.

Term conventions differ per language. In causal theories and FO sentences
a lowercase (or ``_``) identifier in term position is a variable and must
be bound by an enclosing quantifier; a capitalised identifier or a quoted
string is a constant. In E-disjunctive programs it is the other way round,
as usual for ASP: capitalised identifiers are variables.

Operator precedence for CEEs, loosest first: ``<-``, ``Or``, ``And``.
``All``/``Sel``/``New`` bodies extend as far right as possible. Formulas:
``<=>``, ``=>`` (right associative), ``|``, ``&``, then ``~`` and the
quantifiers ``!``/``?``, whose bodies also extend maximally.
"""

from __future__ import annotations

import json
import re
from typing import Optional

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
    Vocabulary,
    LogicError,
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

CEE_KEYWORDS = frozenset({"All", "Sel", "New", "And", "Or"})
FORMULA_KEYWORDS = frozenset({"true", "false"})
EDLP_KEYWORDS = frozenset({"not"})


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<skip>\s+|//[^\n]*|%[^\n]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><=>|=>|<=|>=|<-|->|!=|:-|[=<>&|~!?:;,.()\[\]{}+])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list:
    tokens, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "skip":
            tokens.append((kind, m.group(), line, pos - line_start + 1))
        for i in range(m.start(), m.end()):
            if text[i] == "\n":
                line += 1
                line_start = i + 1
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


def clog_is_var(name: str) -> bool:
    return name[0].islower() or name[0] == "_"


def edlp_is_var(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


class _Parser:
    def __init__(self, text: str, is_var, keywords=frozenset()):
        self.toks = tokenize(text)
        self.i = 0
        self.is_var = is_var
        self.keywords = keywords | FORMULA_KEYWORDS
        self.scope: list = []
        self.arities: dict = {}

    # -- token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str, k=0) -> bool:
        kind, val, _, _ = self.peek(k)
        return kind in ("op", "id") and val == text

    def error(self, msg: str, tok=None):
        _, _, line, col = tok or self.tok
        return ParseError(msg, line, col)

    def advance(self):
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str):
        if not self.at(text):
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_eof(self):
        if self.tok[0] != "eof":
            raise self.error(f"unexpected {self.tok[1]!r}")

    def ident(self, what="identifier") -> tuple:
        kind, val, line, col = self.tok
        if kind != "id" or val in self.keywords:
            raise self.error(f"expected {what}, found {val or 'end of input'!r}")
        self.advance()
        return val, (line, col)

    def note_arity(self, pred: str, n: int, tok):
        if self.arities.setdefault(pred, n) != n:
            raise self.error(f"predicate {pred} used with arities {self.arities[pred]} and {n}", tok)

    # -- terms
    def simple_term(self):
        kind, val, line, col = self.tok
        if kind == "int":
            self.advance()
            return Int(int(val))
        if kind == "str":
            self.advance()
            return Const(json.loads(val))
        if kind == "id" and val not in self.keywords:
            self.advance()
            if self.is_var(val):
                if self.scope is not None and val not in self.scope:
                    raise ParseError(f"free variable {val}", line, col)
                return Var(val)
            return Const(val)
        raise self.error(f"expected a term, found {val or 'end of input'!r}")

    def term(self):
        t = self.simple_term()
        while self.at("+"):
            self.advance()
            t = Add(t, self.simple_term())
        return t

    def atom(self) -> Atom:
        tok = self.tok
        name, pos = self.ident("predicate")
        args = []
        if self.at("("):
            self.advance()
            args.append(self.term())
            while self.at(","):
                self.advance()
                args.append(self.term())
            self.expect(")")
        self.note_arity(name, len(args), tok)
        return Atom(name, tuple(args), pos)

    # -- formulas
    def formula(self):
        f = self.implication()
        while self.at("<=>"):
            self.advance()
            f = Iff(f, self.implication())
        return f

    def implication(self):
        f = self.disjunction()
        if self.at("=>"):
            self.advance()
            return Implies(f, self.implication())
        return f

    def disjunction(self):
        f = self.conjunction()
        while self.at("|"):
            self.advance()
            f = Disj(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.at("&"):
            self.advance()
            f = Conj(f, self.unary())
        return f

    def varlist(self) -> list:
        names = []
        while True:
            kind, val, line, col = self.tok
            if kind != "id" or val in self.keywords or not self.is_var(val):
                raise self.error(f"expected a variable name, found {val or 'end of input'!r}")
            self.advance()
            names.append(val)
            if not self.at(","):
                return names
            self.advance()

    def unary(self):
        if self.at("~"):
            self.advance()
            return Not(self.unary())
        if self.at("!") or self.at("?"):
            kind = Forall if self.advance()[1] == "!" else Exists
            names = self.varlist()
            self.scope.extend(names)
            qual = Top()
            if self.at("["):
                self.advance()
                qual = self.formula()
                self.expect("]")
            self.expect(":")
            body = self.formula()
            del self.scope[-len(names):]
            for n in reversed(names[1:]):
                body, qual = kind(n, qual, body), Top()
            return kind(names[0], qual, body)
        return self.primary()

    def primary(self):
        kind, val, line, col = self.tok
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "id" and val == "true":
            self.advance()
            return Top()
        if kind == "id" and val == "false":
            self.advance()
            return Bottom()
        nxt = self.peek(1)
        if kind == "id" and val not in self.keywords and (nxt[1] == "(" or not self._comparison_ahead()):
            return self.atom()
        left = self.term()
        op = self.tok[1]
        if op not in ("=", "!=", "<", "<=", ">", ">="):
            raise self.error(f"expected a comparison after term, found {op or 'end of input'!r}")
        self.advance()
        right = self.term()
        if op == "=":
            return Equals(left, right)
        if op == "!=":
            return Not(Equals(left, right))
        return Compare(op, left, right)

    def _comparison_ahead(self) -> bool:
        # identifier followed by + or a comparison operator is a term
        return self.peek(1)[1] in ("+", "=", "!=", "<", "<=", ">", ">=")

    # -- CEEs
    def cee(self):
        c = self.cee_or()
        while self.at("<-"):
            tok = self.advance()
            c = Rule(c, self.formula(), pos=tok[2:])
        return c

    def cee_or(self):
        c = self.cee_and()
        while self.at("Or"):
            tok = self.advance()
            c = Or(c, self.cee_and(), pos=tok[2:])
        return c

    def cee_and(self):
        c = self.cee_prim()
        while self.at("And"):
            tok = self.advance()
            c = And(c, self.cee_prim(), pos=tok[2:])
        return c

    def cee_prim(self):
        tok = self.tok
        if self.at("("):
            self.advance()
            c = self.cee()
            self.expect(")")
            return c
        if self.at("All") or self.at("Sel"):
            kind = All if self.advance()[1] == "All" else Sel
            names = self.varlist()
            self.scope.extend(names)
            self.expect(":")
            qual = self.formula()
            self.expect("->")
            body = self.cee()
            del self.scope[-len(names):]
            for n in reversed(names[1:]):
                body, qual = kind(n, qual, body, pos=tok[2:]), Top()
            return kind(names[0], qual, body, pos=tok[2:])
        if self.at("New"):
            self.advance()
            names = self.varlist()
            self.scope.extend(names)
            self.expect("->")
            body = self.cee()
            del self.scope[-len(names):]
            for n in reversed(names):
                body = New(n, body, pos=tok[2:])
            return body
        a = self.atom()
        return AtomExpr(a, pos=a.pos)

    def statements(self, item, stop=("eof",)):
        out = []
        while self.tok[0] not in stop and not any(self.at(s) for s in stop):
            out.append(item())
            self.expect(".")
        return out


def parse_clog(text: str) -> CausalTheory:
    """Parse a causal theory: a sequence of ``.``-terminated CEEs."""
    p = _Parser(text, clog_is_var, CEE_KEYWORDS)
    effects = p.statements(p.cee)
    p.expect_eof()
    return _checked(CausalTheory(tuple(effects)))


def parse_foclog(text: str) -> FOClogTheory:
    """Parse ``{ cee. ... }`` followed by ``.``-terminated FO sentences.

    The causal block is optional; a file with only CEEs outside braces is
    rejected so the two parts are never confused.
    """
    p = _Parser(text, clog_is_var, CEE_KEYWORDS)
    causal = None
    if p.at("{"):
        p.advance()
        causal = CausalTheory(tuple(p.statements(p.cee, stop=("}",))))
        p.expect("}")
    sentences = p.statements(p.formula)
    p.expect_eof()
    theory = FOClogTheory(causal, tuple(sentences))
    if causal is not None:
        _checked(causal)
    theory.vocabulary  # arity conflicts across both parts
    return theory


def parse_formula(text: str, free=()) -> object:
    """Parse one FO formula; ``free`` lists variables allowed to occur free."""
    p = _Parser(text, clog_is_var, CEE_KEYWORDS)
    p.scope = list(free)
    f = p.formula()
    p.expect_eof()
    return f


def parse_cee(text: str, free=()) -> object:
    p = _Parser(text, clog_is_var, CEE_KEYWORDS)
    p.scope = list(free)
    c = p.cee()
    if p.at("."):
        p.advance()
    p.expect_eof()
    return c


def _checked(theory: CausalTheory) -> CausalTheory:
    try:
        theory.vocabulary
    except LogicError as e:
        raise ParseError(str(e)) from None
    return theory


# ------------------------------------------------------------------ edlp


class _EdlpParser(_Parser):
    def __init__(self, text):
        super().__init__(text, edlp_is_var, EDLP_KEYWORDS)
        self.scope = None  # variables need no binder in rules

    def literal(self):
        if self.at("not"):
            self.advance()
            return False, self.atom()
        return True, self.atom()

    def rule(self) -> EDisjRule:
        start = self.tok
        head, pos, neg = [], [], []
        if not self.at(":-"):
            head.append(self.atom())
            while self.at(";"):
                self.advance()
                head.append(self.atom())
        if self.at(":-"):
            self.advance()
            while True:
                sign, a = self.literal()
                (pos if sign else neg).append(a)
                if not self.at(","):
                    break
                self.advance()
        self.expect(".")
        r = EDisjRule(tuple(head), tuple(pos), tuple(neg), loc=start[2:])
        bound = {v for a in pos for t in a.args for v in _vars(t)}
        for a in neg:
            for t in a.args:
                for v in _vars(t):
                    if v not in bound:
                        raise ParseError(
                            f"unsafe rule: variable {v} of negative literal {a.pred} is not in the positive body",
                            *start[2:],
                        )
        return r


def _vars(t):
    from .logic import term_vars

    return term_vars(t)


def parse_edlp(text: str) -> EDisjProgram:
    """Parse an E-disjunctive program (one rule per ``.``)."""
    p = _EdlpParser(text)
    rules = []
    while p.tok[0] != "eof":
        rules.append(p.rule())
    return EDisjProgram(tuple(rules))


def parse_file(path) -> object:
    """Dispatch on the file extension."""
    from pathlib import Path

    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".clog":
        return parse_clog(text)
    if path.suffix == ".foclog":
        return parse_foclog(text)
    if path.suffix == ".edlp":
        return parse_edlp(text)
    raise ParseError(f"unknown file type {path.suffix!r} (expected .clog, .foclog or .edlp)")


__all__ = [
    "ParseError",
    "tokenize",
    "parse_clog",
    "parse_foclog",
    "parse_edlp",
    "parse_formula",
    "parse_cee",
    "parse_file",
    "Vocabulary",
]
