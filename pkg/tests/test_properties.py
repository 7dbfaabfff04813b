"""Property tests over randomly generated theories and programs."""

import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from clog import check_model, enumerate_models, is_stable, parse_clog, parse_edlp, parse_foclog, render, run_process, stable_models
from clog.generate import random_causal_theory, random_creation_free_instance, random_edlp_program, random_foclog_theory, random_program_instance
from clog.syntax import classify_symbols
from oracles import atoms_of, naive_stable

seeds = st.integers(min_value=0, max_value=2**32 - 1)
SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@SETTINGS
@given(seeds, seeds)
def test_traces_fire_once_and_grow(seed, run_seed):
    theory, exo = random_creation_free_instance(random.Random(seed))
    tr = run_process(theory, exo, seed=run_seed)
    events = tr.fired_events()
    assert len(events) == len(set(events))
    for before, after in zip(tr.steps, tr.steps[1:]):
        assert set(before.state.atoms()) <= set(after.state.atoms())
        assert set(after.state.atoms()) - set(before.state.atoms()) == set(after.delta_atoms)


@SETTINGS
@given(seeds)
def test_search_agrees_with_brute_force(seed):
    theory, exo = random_creation_free_instance(random.Random(seed))
    search = enumerate_models(theory, exo, method="search")
    brute = enumerate_models(theory, exo, method="brute")
    assert set(search.models) == set(brute.models)


@SETTINGS
@given(seeds)
def test_enumerated_models_pass_the_check(seed):
    theory, exo = random_creation_free_instance(random.Random(seed))
    for m in enumerate_models(theory, exo).models:
        assert check_model(theory, m)


@SETTINGS
@given(seeds)
def test_classify_partitions_vocabulary(seed):
    theory = random_causal_theory(random.Random(seed))
    endo, exo = classify_symbols(theory)
    assert not endo & exo
    assert endo | exo == {name for name, _ in theory.vocabulary.predicates}


@SETTINGS
@given(seeds)
def test_stable_models_match_reference(seed):
    p, dom = random_program_instance(random.Random(seed))
    ms = stable_models(p, dom)
    assert {atoms_of(m) for m in ms} == set(naive_stable(p, dom))
    for m in ms:
        assert is_stable(p, m)
    # stable models are pairwise incomparable
    sets = [atoms_of(m) for m in ms]
    assert not any(a < b for a in sets for b in sets)


@SETTINGS
@given(seeds)
def test_round_trip_clog(seed):
    th = random_causal_theory(random.Random(seed))
    assert parse_clog(render(th)) == th


@SETTINGS
@given(seeds)
def test_round_trip_foclog(seed):
    th = random_foclog_theory(random.Random(seed))
    assert parse_foclog(render(th)) == th


@SETTINGS
@given(seeds)
def test_round_trip_edlp(seed):
    p = random_edlp_program(random.Random(seed))
    assert parse_edlp(render(p)) == p
