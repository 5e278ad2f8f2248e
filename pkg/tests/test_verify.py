import json

import pytest

from totref import mutants
from totref.errors import UnknownProperty
from totref.library import algebra_A, algebra_B
from totref.verify import (
    ALL,
    DETECTORS,
    REGISTRY,
    builtin_corpus,
    generate_corpus,
    mutant_check,
    run_properties,
    run_property,
)


@pytest.fixture(scope="module")
def corpus_B():
    return builtin_corpus(algebra_B())


@pytest.fixture(scope="module")
def corpus_A():
    return builtin_corpus(algebra_A())


def test_registry_is_complete():
    assert ALL == [f"P{i}" for i in range(1, 14)]
    assert set(DETECTORS) == set(mutants.REGISTRY)
    for pids in DETECTORS.values():
        assert set(pids) <= set(REGISTRY)


def test_builtin_corpus_contents(corpus_B):
    labels = [e.label for e in corpus_B.entries]
    assert labels[:3] == ["B", "k", "omega_B"]
    assert "B/(x)" in labels
    cert = corpus_B.certified()
    assert any(M.label == "B/(x)" for M in cert)
    assert all(M.label != "k" for M in cert)


def test_all_properties_pass_on_builtin_corpora(corpus_A, corpus_B):
    for c in (corpus_A, corpus_B):
        reps = run_properties(ALL, c)
        bad = [(r.id, r.failures[:1]) for r in reps if not r.passed]
        assert not bad
        assert sum(r.instances for r in reps) > 50


def test_unknown_property(corpus_A):
    with pytest.raises(UnknownProperty):
        run_property("P99", corpus_A)


def test_mutants_are_caught(corpus_B):
    res = mutant_check(corpus_B)
    assert [r.mutant for r in res] == list(mutants.REGISTRY)
    assert all(r.detected for r in res), [r.mutant for r in res if not r.detected]


def test_mutant_failure_has_witness(corpus_B):
    with mutants.inject("skip-p-quotient"):
        rep = run_property("P7", corpus_B)
    assert not rep.passed
    assert rep.failures[0].witness


def test_inject_unknown_mutant():
    with pytest.raises(KeyError):
        with mutants.inject("no-such-defect"):
            pass


def test_inject_is_scoped():
    with mutants.inject("nonminimal-cover"):
        assert mutants.active("nonminimal-cover")
    assert not mutants.any_active()


def test_generated_corpus_is_deterministic():
    A = algebra_A()
    c1 = generate_corpus(A, seed=5, size=4)
    c2 = generate_corpus(A, seed=5, size=4)
    assert json.dumps(c1.to_json()) == json.dumps(c2.to_json())
    reps1 = [r.to_json() for r in run_properties(["P1", "P7"], c1)]
    reps2 = [r.to_json() for r in run_properties(["P1", "P7"], c2)]
    assert reps1 == reps2


def test_generated_corpus_has_no_isomorphic_duplicates():
    from totref.gtheory import iso_test
    c = generate_corpus(algebra_A(), seed=2, size=5)
    mods = c.modules
    for i in range(len(mods)):
        for j in range(i):
            if mods[i].dim == mods[j].dim:
                assert not iso_test(mods[i], mods[j])


def test_report_json_excludes_timing_by_default(corpus_A):
    rep = run_property("P1", corpus_A)
    assert "seconds" not in rep.to_json()
    assert "seconds" in rep.to_json(timing=True)
