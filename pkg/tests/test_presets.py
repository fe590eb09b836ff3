from __future__ import annotations

import pytest

from thhfq.algebra import Presentation
from thhfq.ktheory import classify, reference_params
from thhfq.presets import PRESETS, build_preset, get_preset, omega_infinity, thhkfp_claim

from oracles import free_series


def _cases(preset):
    return [preset.case] if preset.case else [1, 2, 3, 4]


@pytest.mark.parametrize("name", sorted(PRESETS))
@pytest.mark.parametrize("p", [5, 7])
def test_every_preset_builds_and_round_trips(name, p, validate):
    pr = get_preset(name)
    for case in _cases(pr):
        params = reference_params(case, p)
        try:
            pres = build_preset(name, params, 40)
        except ValueError as exc:
            # a few presets exist only for some cases (case (4) needs r > 1, hfp-K excludes case (4))
            assert case == 4 or "case" in str(exc)
            continue
        data = pres.to_json(40)
        validate(data, "presentation")
        again = Presentation.from_json(data)
        assert list(again.poincare(40).dims) == data["dims"]


def test_case_mismatch_is_rejected():
    with pytest.raises(ValueError):
        build_preset("omega-infinity", classify(7, 5), 40)


def test_unknown_preset_lists_known_names():
    with pytest.raises(KeyError, match="omega-infinity"):
        get_preset("omega")


def test_v1_thh_case2_through_20():
    pres = build_preset("v1-thh-case2", classify(7, 5), 20)
    expect = free_series([("exterior", 7), ("exterior", 9), ("exterior", 49), ("polynomial", 50),
                          ("divided", 8)], 20)
    assert list(pres.poincare(20).dims) == expect


def test_omega_infinity_generator_degrees_follow_p():
    for p in (5, 7, 11):
        om = omega_infinity(reference_params(1, p), 4 * p * p)
        degs = {g.name: g.degree for g in om.generators}
        assert degs == {"x": 2 * p - 3, "e": p * (2 * p - 2) + 1, "c": 2 * p * p + 2 * p - 4, "d": 4 * p * p - 2 * p}


@pytest.mark.parametrize("q", [2, 7, 49, 4])
def test_thhkfp_claim_is_bigraded_with_expected_generators(q):
    c = classify(q, 5)
    pres = thhkfp_claim(c, 100)
    names = {g.name for g in pres.generators}
    assert ("mu1p" in names) == (c.case_id in (1, 2))
    assert all(g.total > 0 for g in pres.generators)


def test_sset2_generators_sit_where_the_differentials_need_them():
    c = classify(2, 5)
    pres = build_preset("sset2-e2", c, 60)
    bideg = {g.name: g.bidegree for g in pres.generators}
    assert bideg["lambda1"] == (2 * 5 - 1, 0)
    assert bideg["mu1"] == (2 * 5, 0)
    assert bideg["sigma_x"] == (0, 2 * c.r)
    assert bideg["sigma_y"] == (0, 2 * c.r + 1)
