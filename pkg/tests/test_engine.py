import pytest

from clog import check_model, enumerate_csets, enumerate_models, parse_clog, parse_edlp, parse_file, run_process
from clog.bridge import translate_to_foclog
from clog.engine import EngineError, GuardError, fresh_names
from clog.io import load_structure, structure_from_json
from clog.logic import GroundAtom, Structure, StructureError
from helpers import CORPUS
from oracles import atoms_of


def S(atoms, domain=(), created=()):
    rels = {}
    for a in atoms:
        pred, _, rest = a.partition("(")
        args = tuple(x.strip() for x in rest.rstrip(")").split(",")) if rest else ()
        rels.setdefault(pred, []).append(args)
    return Structure(list(domain) + list(created), rels, created=created)


# csets


def test_lottery_csets_two_players():
    delta = parse_file(CORPUS / "lottery.clog")
    s = structure_from_json(
        {
            "domain": ["a", "b", "d1", "d2"],
            "predicates": {"Apply": [["a"], ["b"]], "PassedTest": [["a"]], "Play": [["d1"], ["d2"]], "Lottery": [[]]},
        }
    )
    got = {frozenset(map(str, c.atoms)) for c in enumerate_csets(delta, s).csets}
    assert got == {frozenset({"PermRes(a)", "PermRes(d1)"}), frozenset({"PermRes(a)", "PermRes(d2)"})}


def test_or_csets():
    got = {frozenset(map(str, c.atoms)) for c in enumerate_csets(parse_clog("P Or Q."), Structure([])).csets}
    assert got == {frozenset({"P"}), frozenset({"Q"})}


def test_atom_cset():
    (c,) = enumerate_csets(parse_clog("P."), Structure([])).csets
    assert set(map(str, c.atoms)) == {"P"}
    assert len(c.justifications[GroundAtom("P", ())]) == 1


def test_empty_sel_is_a_failure_not_an_empty_cset():
    res = enumerate_csets(parse_clog("Sel x : Q(x) -> P."), Structure(["a"], {"Q": []}, arities={"Q": 1}))
    assert res.csets == ()
    assert len(res.failures) == 1


def test_cset_budget_truncates():
    res = enumerate_csets(parse_clog("New x -> P(x). New y -> Q(y)."), Structure([]), budget=1)
    assert res.truncated and res.csets == ()
    res = enumerate_csets(parse_clog("New x -> P(x). New y -> Q(y)."), Structure([]), budget=2)
    (c,) = res.csets
    assert len(c.created) == 2 and not res.truncated


# check_model


def test_or_rejects_both():
    th = parse_clog("P Or Q.")
    assert not check_model(th, S(["P", "Q"]))
    assert check_model(th, S(["P"]))


def test_bicycle_accepted_with_trace():
    th = parse_file(CORPUS / "bicycle.clog")
    v = check_model(th, load_structure(CORPUS / "bicycle_model.json"))
    assert v.accepted
    assert len(v.trace.steps) == 3
    assert v.trace.verdict is True


def test_bicycle_unfounded_rejected():
    th = parse_file(CORPUS / "bicycle.clog")
    v = check_model(th, load_structure(CORPUS / "bicycle_unfounded.json"))
    assert not v.accepted and "unfounded" in v.reason


def test_self_defeat():
    th = parse_file(CORPUS / "self_defeat.clog")
    assert check_model(th, S(["P"]))
    assert not check_model(th, S(["P", "C"]))
    assert not check_model(th, S([]))
    assert [atoms_of(m) for m in enumerate_models(th, Structure([]), method="brute").models] == [frozenset({("P", ())})]


def test_sel_new_sel_model():
    th = parse_file(CORPUS / "sel_new_sel.clog")
    assert check_model(th, load_structure(CORPUS / "sel_new_sel_model.json"))
    # a one-element domain never works
    assert not check_model(th, S(["P(A)", "Q(A)", "R(A)"], created=["A"]))


def test_fo_sentence_failure_reported():
    th = parse_file(CORPUS / "oven.foclog")
    exo = load_structure(CORPUS / "oven_exo.json")
    cand = exo.with_atoms([GroundAtom("In", ("B1", 0)), GroundAtom("In", ("B2", 0)), GroundAtom("Out", ("B1", 1)), GroundAtom("Out", ("B2", 1))])
    v = check_model(th, cand)
    assert not v.accepted and "FO sentence" in v.reason


def test_candidate_outside_vocabulary():
    with pytest.raises(StructureError):
        check_model(parse_clog("P."), S(["P", "Z"]))


def test_candidate_over_budget():
    with pytest.raises(EngineError):
        check_model(parse_clog("New x -> P(x)."), S(["P(c)"], created=["c"]), budget=0)


# enumeration


def test_por_models():
    ms = enumerate_models(parse_clog("P Or Q."), Structure([]))
    assert [set(map(str, m.atoms())) for m in ms.models] == [{"P"}, {"Q"}]


def test_empty_theory_single_model():
    ms = enumerate_models(parse_clog(""), Structure([]))
    assert len(ms.models) == 1 and not ms.models[0].atoms()


def test_translation_of_overlap_has_non_minimal_model():
    th = translate_to_foclog(parse_edlp("p. p ; q."))
    for method in ("search", "brute"):
        got = {frozenset(map(str, m.atoms())) for m in enumerate_models(th, Structure([]), method=method).models}
        assert got == {frozenset({"p"}), frozenset({"p", "q"})}


def test_oven_models():
    th = parse_file(CORPUS / "oven.foclog")
    exo = load_structure(CORPUS / "oven_exo.json")
    search = enumerate_models(th, exo)
    # B1 enters at any of 0..2 and B2 at another time; Out(b, 3) is undefined
    assert len(search.models) == 6
    assert set(search.models) == set(enumerate_models(th, exo, method="brute").models)


def test_robot_models():
    ms = enumerate_models(parse_file(CORPUS / "robot.clog"), load_structure(CORPUS / "robot_exo.json"))
    # both closed leaves no door to leave through
    assert len(ms.models) == 4
    for m in ms.models:
        (left,) = m.atoms(["Leave"])
        assert m.holds("Open", left.args)


def test_mail_observation_counts():
    th = parse_file(CORPUS / "mail_observation.foclog")
    exo = load_structure(CORPUS / "mail_observation_exo.json")
    causal = enumerate_models(th.causal, exo, budget=2)
    observed = enumerate_models(th, exo, budget=2)
    # package 1 (sent at 0): delay 1..5. Package 2 (sent at 2): delay 1..3, or
    # a delay whose arrival time falls outside 0..5, so it is never received.
    assert len(causal.models) == 5 * 4
    # package 2 is on the channel at 3 in every run; package 1 must still be there
    assert len(observed.models) == 3 * 4
    assert set(observed.models) <= set(causal.models)


def test_nat_is_truncated_at_budget():
    ms = enumerate_models(parse_file(CORPUS / "nat.clog"), Structure([]), budget=2)
    assert ms.models == () and len(ms.truncated) == 1
    assert len(ms.truncated[0].created) == 2


def test_models_are_canonical_and_deduplicated():
    ms = enumerate_models(parse_clog("New x -> P(x). New y -> P(y)."), Structure([]))
    (m,) = ms.models
    assert set(m.created) == {"_c1", "_c2"}


def test_fresh_names_skip_taken():
    assert fresh_names(["_c1", "a"], 2) == ("_c2", "_c3")


def test_constants_join_domain():
    ms = enumerate_models(parse_clog("P(A)."), Structure([]))
    (m,) = ms.models
    assert m.domain == ("A",)


def test_brute_force_guard():
    th = parse_clog("All x : true -> All y : true -> R(x, y) Or S(x, y).")
    with pytest.raises(GuardError):
        enumerate_models(th, Structure(["a", "b", "c", "d"]), method="brute")


def test_unknown_method():
    with pytest.raises(EngineError):
        enumerate_models(parse_clog("P."), Structure([]), method="magic")


def test_exogenous_part_may_not_interpret_endogenous():
    with pytest.raises(StructureError):
        enumerate_models(parse_clog("P."), S(["P"]))


# processes


def test_new_only_trace():
    tr = run_process(parse_clog("New x -> Q(x)."), Structure([]), budget=1)
    assert len(tr.steps) == 2
    assert list(tr.final.created) == ["_c1"] and tr.final.holds("Q", ("_c1",))
    assert tr.verdict is True


def test_trace_truncation_flagged():
    tr = run_process(parse_file(CORPUS / "nat.clog"), Structure([]), budget=2)
    assert tr.truncated and tr.verdict is None
    assert "budget" in tr.note


def test_blocked_sel_reported():
    tr = run_process(parse_clog("Sel x : Q(x) -> P."), Structure(["a"], {"Q": []}, arities={"Q": 1}))
    assert tr.blocked and tr.verdict is False


def test_forward_mode_can_end_outside_the_models():
    # pure forward mode fires C before P is caused; the end state is annotated
    tr = run_process(parse_file(CORPUS / "self_defeat.clog"), Structure([]))
    assert tr.final.holds("C", ()) and tr.verdict is False
    assert "not a model" in tr.note


@pytest.mark.parametrize("seed", range(4))
def test_seeded_runs_repeat(seed):
    th = parse_file(CORPUS / "mail.clog")
    exo = load_structure(CORPUS / "mail_exo.json")
    a = run_process(th, exo, seed=seed, budget=1)
    b = run_process(th, exo, seed=seed, budget=1)
    assert [s.state for s in a.steps] == [s.state for s in b.steps]


def test_first_chooser_is_deterministic():
    tr = run_process(parse_clog("P Or Q."), Structure([]), chooser="first")
    assert set(map(str, tr.final.atoms())) == {"P"}
