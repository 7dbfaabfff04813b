import pytest

from clog import ParseError, parse_clog, parse_edlp, parse_file, parse_foclog, parse_formula, render
from clog.logic import Add, Atom, Const, Conj, Disj, Exists, Forall, Implies, Int, Not, Equals, Top, Var
from clog.syntax import All, And, AtomExpr, New, Or, Rule, Sel
from helpers import CORPUS


def A(pred, *args):
    return Atom(pred, tuple(args))


def test_bicycle_rules():
    th = parse_file(CORPUS / "bicycle.clog")
    assert len(th.effects) == 3
    assert all(isinstance(e, Rule) for e in th.effects)
    assert th.effects[0] == Rule(AtomExpr(A("Turn", Const("BigGear"))), A("Pedal"))
    assert isinstance(th.as_cee(), And)


def test_or():
    th = parse_clog("P Or Q.")
    assert th.effects == (Or(AtomExpr(A("P")), AtomExpr(A("Q"))),)


def test_empty_file_is_neutral():
    th = parse_clog("")
    assert th.effects == () and th.as_cee() is None


def test_cee_precedence():
    (e,) = parse_clog("P Or Q And R <- S.").effects
    # <- binds loosest, And tighter than Or
    assert e == Rule(Or(AtomExpr(A("P")), And(AtomExpr(A("Q")), AtomExpr(A("R")))), A("S"))


def test_rule_is_left_associative():
    (e,) = parse_clog("P <- Q <- R.").effects
    assert e == Rule(Rule(AtomExpr(A("P")), A("Q")), A("R"))


def test_quantifier_takes_maximal_scope():
    (e,) = parse_clog("All x : Q(x) -> P(x) And R(x).").effects
    assert isinstance(e, All) and isinstance(e.body, And)


def test_multi_variable_quantifier_nests():
    (e,) = parse_clog("All m, t : HitSend(m, t) -> P(m, t).").effects
    assert e.var == "m" and e.qual == Top()
    assert e.body.var == "t" and e.body.qual == A("HitSend", Var("m"), Var("t"))


def test_new_and_sel():
    (e,) = parse_clog("New p -> Sel d : d > 0 -> R(p, d).").effects
    assert isinstance(e, New) and isinstance(e.body, Sel)


def test_plus_right_operand_is_simple():
    f = parse_formula("P(1 + 2 + 3)")
    assert f.args[0] == Add(Add(Int(1), Int(2)), Int(3))


def test_formula_precedence():
    f = parse_formula("P | Q & R => S")
    assert f == Implies(Disj(A("P"), Conj(A("Q"), A("R"))), A("S"))
    g = parse_formula("P => Q => R")
    assert g == Implies(A("P"), Implies(A("Q"), A("R")))


def test_not_equals():
    f = parse_formula("? x, y: x != y")
    assert f.body.body == Not(Equals(Var("x"), Var("y")))


def test_quoted_constant():
    (e,) = parse_file(CORPUS / "jboss.clog").effects
    msg = e.body.body.right.atom.args[1]
    assert msg == Const("validation.customer.missing")


def test_free_variable_is_located():
    with pytest.raises(ParseError) as info:
        parse_clog("P.\nQ(x).")
    assert info.value.line == 2
    assert "x" in str(info.value)


def test_arity_conflict_rejected():
    with pytest.raises(ParseError):
        parse_clog("P. P(A).")


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        parse_clog("P Or .")
    assert info.value.line == 1 and info.value.col == 6


def test_foclog_sections():
    th = parse_file(CORPUS / "oven.foclog")
    assert len(th.causal.effects) == 1 and len(th.sentences) == 1


def test_foclog_without_causal_part():
    th = parse_foclog("! x: P(x).")
    assert th.causal is None and len(th.sentences) == 1


def test_edlp_overlap():
    p = parse_edlp("p.  p ; q.")
    assert len(p.rules) == 2
    assert len(p.rules[1].head) == 2 and p.rules[1].is_disjunctive
    assert not p.rules[0].is_disjunctive


def test_edlp_constraint():
    (r,) = parse_edlp(":- not q.").rules
    assert r.is_constraint and len(r.head) == 0 and len(r.neg) == 1


def test_edlp_existential():
    (r,) = parse_edlp("permres(X) :- lottery.").rules
    assert r.existential == ("X",) and r.universal == ()
    assert r.is_disjunctive


@pytest.mark.parametrize("text", ["p(X) :- not q(X).", "p :- q(X), not r(Y)."])
def test_edlp_unsafe_rule(text):
    with pytest.raises(ParseError, match="unsafe"):
        parse_edlp(text)


def test_edlp_existential_vars_are_head_minus_body():
    for r in parse_edlp("p(X, Y) ; q(Z) :- r(X).  s(X) :- t(X, Y), not u(Y).").rules:
        head = {t.name for a in r.head for t in a.args if isinstance(t, Var)}
        body = {t.name for a in r.pos + r.neg for t in a.args if isinstance(t, Var)}
        assert set(r.existential) == head - body


def test_render_or():
    assert render(parse_clog("P Or Q.")) == "P Or Q.\n"


def parse_file_text(name, text):
    return parse_foclog(text) if name.endswith(".foclog") else parse_clog(text)


@pytest.mark.parametrize("name", ["mail.clog", "lottery.clog", "sel_new_sel.clog", "nat.clog", "oven.foclog", "mail_observation.foclog"])
def test_corpus_round_trip(name):
    th = parse_file(CORPUS / name)
    text = render(th)
    assert parse_file_text(name, text) == th
    assert render(parse_file_text(name, text)) == text


@pytest.mark.parametrize("name", ["overlap.edlp", "lottery.edlp", "robot.edlp", "negrec.edlp"])
def test_edlp_round_trip(name):
    p = parse_file(CORPUS / name)
    assert parse_edlp(render(p)) == p


def test_render_quotes_lookalike_constants():
    th = parse_clog('P("x") And Q("All") And R("a b").')
    text = render(th)
    assert parse_clog(text) == th
    assert '"x"' in text and '"All"' in text


def test_render_parenthesizes_quantifier_operands():
    th = parse_clog("(All x : P(x) -> Q(x)) And R.")
    assert render(th) == "(All x : P(x) -> Q(x)) And R.\n"
    assert parse_clog(render(th)) == th


def test_render_collapses_top_quantifiers():
    th = parse_clog("All m, t : HitSend(m, t) -> P(m, t).")
    assert render(th) == "All m, t : HitSend(m, t) -> P(m, t).\n"


def test_comments_are_skipped():
    assert parse_clog("% comment\nP. // another\n").effects == (AtomExpr(A("P")),)


def test_exists_formula_shape():
    f = parse_formula("? x [P(x)]: Q(x)")
    assert f == Exists("x", A("P", Var("x")), A("Q", Var("x")))
    g = parse_formula("! x: Q(x)")
    assert g == Forall("x", Top(), A("Q", Var("x")))
