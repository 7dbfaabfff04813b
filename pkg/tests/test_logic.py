import itertools

import pytest

from clog import parse_clog, parse_file, parse_formula
from clog.logic import (
    Add,
    Const,
    EvaluationError,
    GroundAtom,
    Int,
    Structure,
    StructureError,
    Var,
    Vocabulary,
    default_state,
    desugar,
    eval_term,
    evaluate_formula,
    Reader,
)
from clog.syntax import classify_symbols
from helpers import CORPUS


def test_atom_in_final_bicycle_state():
    s = Structure(["BigGear", "SmallGear"], {"Pedal": [()], "Turn": [("BigGear",), ("SmallGear",)]})
    assert evaluate_formula(parse_formula("Turn(SmallGear)"), s)


def test_universal_over_empty_extension():
    s = Structure(["a", "b"], {"P": []}, arities={"P": 1})
    assert evaluate_formula(parse_formula("! x: ~P(x)"), s)


def test_oven_constraint_violated():
    s = Structure(["b1", "b2", 3], {"In": [("b1", 3), ("b2", 3)]})
    f = parse_formula("~(? t, b, b2 [b != b2]: In(b, t) & In(b2, t))")
    assert not evaluate_formula(f, s)


def test_arithmetic_is_partial():
    r = Reader(Structure([0, 1, 2]))
    assert eval_term(Add(Int(1), Int(1)), {}, r) == 2
    assert eval_term(Add(Int(2), Int(1)), {}, r) is None
    assert eval_term(Add(Const("a"), Int(1)), {}, Reader(Structure(["a", 0, 1]))) is None


def test_undefined_term_makes_atom_false():
    s = Structure([0, 1], {"P": [(1,)]})
    assert evaluate_formula(parse_formula("P(0 + 1)"), s)
    assert not evaluate_formula(parse_formula("P(1 + 1)"), s)
    assert evaluate_formula(parse_formula("~P(1 + 1)"), s)


def test_free_variable_needs_assignment():
    with pytest.raises(EvaluationError):
        evaluate_formula(parse_formula("P(x)", free=["x"]), Structure(["a"], {"P": [("a",)]}))
    assert evaluate_formula(parse_formula("P(x)", free=["x"]), Structure(["a"], {"P": [("a",)]}), {"x": "a"})


def test_classify_lottery():
    endo, exo = classify_symbols(parse_file(CORPUS / "lottery.clog"))
    assert endo == {"PermRes"}
    assert exo == {"Apply", "PassedTest", "Play", "Lottery"}


def test_classify_single_atom():
    endo, exo = classify_symbols(parse_clog("P."))
    assert endo == {"P"} and not exo


def test_classify_mail():
    endo, exo = classify_symbols(parse_file(CORPUS / "mail.clog"))
    assert endo == {"Pack", "Cont", "OnCh", "Received"}
    assert exo == {"Mail", "HitSend"}


def test_default_state_bicycle():
    th = parse_file(CORPUS / "bicycle.clog")
    exo = Structure(["BigGear", "SmallGear"], {"Pedal": [()]})
    s = default_state(th.vocabulary, exo, {"Turn"})
    assert s.holds("Pedal", ())
    assert not s.atoms(["Turn"])
    assert not s.created


def test_default_state_empty():
    s = default_state(Vocabulary(), Structure([]), set())
    assert s.domain == () and not s.atoms()


def test_default_state_mail():
    th = parse_file(CORPUS / "mail.clog")
    exo = Structure(["MyMail", *range(9)], {"Mail": [("MyMail",)], "HitSend": [("MyMail", 0)]})
    endo = {"Pack", "Cont", "OnCh", "Received"}
    s = default_state(th.vocabulary, exo, endo)
    assert all(not s.atoms([p]) for p in endo)


def test_default_state_rejects_endogenous():
    th = parse_file(CORPUS / "bicycle.clog")
    with pytest.raises(StructureError):
        default_state(th.vocabulary, Structure(["BigGear"], {"Turn": [("BigGear",)]}), {"Turn"})


def test_structure_equality_ignores_order():
    a = Structure(["a", "b"], {"P": [("a",), ("b",)]})
    b = Structure(["b", "a"], {"P": [("b",), ("a",)]})
    assert a == b and hash(a) == hash(b)


def test_ground_atom_str():
    assert str(GroundAtom("Message", ("x", "validation.customer.missing"))) == 'Message(x, "validation.customer.missing")'
    assert str(GroundAtom("P", ())) == "P"


def _structures(domain):
    atoms = [("P", (d,)) for d in domain] + [("Q", (d,)) for d in domain]
    for bits in itertools.product([False, True], repeat=len(atoms)):
        rels = {"P": [], "Q": []}
        for (p, args), b in zip(atoms, bits):
            if b:
                rels[p].append(args)
        yield Structure(domain, rels, arities={"P": 1, "Q": 1})


@pytest.mark.parametrize("text", ["! x [P(x)]: Q(x)", "? x [P(x)]: Q(x)", "! x [~P(x)]: ? y [Q(y)]: P(y)"])
def test_restricted_quantifier_matches_desugared(text):
    f = parse_formula(text)
    g = desugar(f)
    for n in range(4):
        for s in _structures(["a", "b", "c"][:n]):
            assert evaluate_formula(f, s) == evaluate_formula(g, s)
