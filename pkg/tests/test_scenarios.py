from __future__ import annotations

import pytest

from thhfq.ktheory import REFERENCE_PAIRS, classify, reference_params
from thhfq.scenarios import (SCENARIOS, UNIT_AWARE, possible_differentials, sset3_conjectural, suite,
                             veen_bounds, veen_tor, verify_theorem)
from thhfq.specseq import BigradedPage
from thhfq.presets import sset2_e2

RUNS = [(name, case) for name, sc in SCENARIOS.items() for case in sc.cases]


@pytest.mark.parametrize("name,case", RUNS, ids=[f"{n}-{c}" for n, c in RUNS])
def test_scenario_passes_on_the_reference_pair(name, case, validate):
    rep = verify_theorem(name, classify(*REFERENCE_PAIRS[case]))
    assert rep.passed, rep.to_text()
    validate(rep.to_json(), "report")


@pytest.mark.parametrize("name,case", RUNS, ids=[f"{n}-{c}" for n, c in RUNS])
def test_scenario_passes_at_p7(name, case):
    rep = verify_theorem(name, reference_params(case, 7))
    assert rep.passed, rep.to_text()


@pytest.mark.parametrize("name", UNIT_AWARE)
@pytest.mark.parametrize("unit", [2, 3, 4])
def test_differentials_rescaled_by_units_give_the_same_answer(name, unit):
    sc = SCENARIOS[name]
    rep = verify_theorem(name, classify(*REFERENCE_PAIRS[sc.cases[0]]), unit=unit)
    assert rep.passed, rep.to_text()
    assert rep.params["unit"] == unit


def test_unknown_scenario():
    with pytest.raises(KeyError):
        verify_theorem("nope", classify(2, 5))


def test_scenario_for_the_wrong_case():
    with pytest.raises(ValueError):
        verify_theorem("dga-case1", classify(7, 5))


def test_negative_bound_and_bad_unit():
    with pytest.raises(ValueError):
        verify_theorem("v0ten", classify(2, 5), D=-1)
    with pytest.raises(ValueError):
        verify_theorem("sset2-case1", classify(2, 5), unit=5)


def test_smaller_bound_is_honoured():
    rep = verify_theorem("sset2-case1", classify(2, 5), D=40)
    assert rep.params["max_degree"] == 40 and rep.passed


def test_veen_bounds_case_2():
    tor = veen_tor(classify(7, 5), 51)
    assert veen_bounds(tor, 8) == (1, 1)
    assert veen_bounds(tor, 10) == (0, 0)
    assert veen_bounds(tor, 49) == (2, 2)
    assert veen_bounds(tor, 50) == (1, 1)


def test_possible_differentials_on_lambda1():
    c = classify(2, 5)
    E = BigradedPage.initial(sset2_e2(c, 40), 42)
    assert possible_differentials(E, (9, 0)) == [(9, (0, 8), 1)]


@pytest.mark.parametrize("q", [49, 4])
def test_conjectural_differentials_are_labelled(q):
    page, rep = sset3_conjectural(classify(q, 5), 40)
    assert any("hypothesis" in n for n in rep.notes)
    assert all(h["conjectural"] for h in page.history)


def test_conjectural_helper_refuses_proven_cases():
    with pytest.raises(ValueError):
        sset3_conjectural(classify(2, 5), 40)


def test_suite_covers_every_applicable_pair():
    reports = suite(D=None, names=["fg-check", "ahl3"])
    assert [(r.scenario, r.params["case"]) for r in reports] == [
        ("fg-check", 1), ("fg-check", 2), ("fg-check", 3), ("fg-check", 4), ("ahl3", 4)]
    assert all(r.passed for r in reports)


def test_suite_in_worker_processes_matches_serial():
    serial = suite(names=["v0ten"])
    parallel = suite(names=["v0ten"], workers=2)
    assert [r.to_json() for r in serial] == [r.to_json() for r in parallel]
