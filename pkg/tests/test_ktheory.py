from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from thhfq.ktheory import (FGOperators, REFERENCE_PAIRS, bockstein_torsion_table, classify, fg_operator_check,
                           fiber_v0, multf_algebra, reference_params, sweep_pairs, v0_closed_form, v0_of_K,
                           v1_closed_form, v1_of_K, valuation)

from oracles import case_of, free_series, p_valuation

PRIME_POWERS = [q for q in range(2, 400) if any(q == b ** e for b in (2, 3, 5, 7, 11, 13, 17, 19) for e in range(1, 9))
                or all(q % d for d in range(2, int(q ** 0.5) + 1))]


@pytest.mark.parametrize("case,expected", [(1, (4, 1)), (2, (4, 2)), (3, (2, 2)), (4, (2, 1))])
def test_reference_pairs(case, expected):
    c = classify(*REFERENCE_PAIRS[case])
    assert (c.r, c.v, c.case_id) == (*expected, case)


@given(st.sampled_from(PRIME_POWERS), st.sampled_from([5, 7, 11, 13]))
def test_classification_matches_direct_arithmetic(q, p):
    if q % p == 0:
        with pytest.raises(ValueError):
            classify(q, p)
        return
    c = classify(q, p)
    assert (c.r, c.v, c.case_id) == case_of(q, p)
    assert c.k == (p - 1) // c.r


@pytest.mark.parametrize("q,p", [(6, 5), (2, 4), (2, 3), (10, 7), (5, 5)])
def test_classify_preconditions(q, p):
    with pytest.raises(ValueError):
        classify(q, p)


@given(st.integers(1, 10 ** 6), st.sampled_from([2, 3, 5, 7]))
def test_valuation(n, p):
    assert valuation(n, p) == p_valuation(n, p)


@pytest.mark.parametrize("q", [2, 7, 49, 4])
def test_v0_from_long_exact_sequence_matches_closed_form(q):
    c = classify(q, 5)
    expect = free_series([("exterior", 2 * c.r - 1), ("polynomial", 2 * c.r)], 60)
    assert list(v0_of_K(c, 60).dims) == expect
    assert list(v0_closed_form(c).poincare(60).dims) == expect
    assert list(fiber_v0(c, 60).dims) == expect


@pytest.mark.parametrize("q", [2, 7, 49, 4])
def test_v1_from_long_exact_sequence_matches_closed_form(q):
    c = classify(q, 5)
    expect = free_series([("exterior", 2 * c.r - 1), ("truncated", 2 * c.r, c.k)], 60) if c.k > 1 else \
        free_series([("exterior", 2 * c.r - 1)], 60)
    assert list(v1_of_K(c, 60).dims) == expect
    assert list(v1_closed_form(c).poincare(60).dims) == expect


@given(st.sampled_from([q for q in PRIME_POWERS if q % 7]))
def test_v1_closed_form_at_p7(q):
    c = classify(q, 7)
    assert list(v1_of_K(c, 50).dims) == list(v1_closed_form(c).poincare(50).dims)


def test_bockstein_pages():
    c = classify(7, 5)
    table = bockstein_torsion_table(c, 24)
    assert table[0] == (0, None)
    assert table[1] == (8, 2)  # v_5(7^4 - 1) = 2
    assert all(page >= 2 for _, page in table[1:])


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_reference_params_other_primes(case):
    c = reference_params(case, 7)
    assert c.case_id == case and c.p == 7
    assert classify(c.q, 7) == c


def test_reference_params_unknown_case():
    with pytest.raises(ValueError):
        reference_params(5)


def test_sweep_skips_non_prime_powers():
    assert [c.q for c in sweep_pairs(range(2, 12), 5)] == [2, 3, 4, 7, 8, 9, 11]


def test_multf_algebra_shape():
    c = classify(49, 5)
    A = multf_algebra(c)
    assert [g.name for g in A.generators] == ["u", "sigma_x"]
    assert list(A.poincare(10).dims) == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]


@pytest.mark.parametrize("q", [2, 7, 49, 4])
@pytest.mark.parametrize("unit", [1, 2, 3, 4])
def test_fg_identities_hold_for_every_unit(q, unit):
    rep = fg_operator_check(classify(q, 5), D=40, unit=unit)
    assert rep.passed, rep.first_failure()


def test_f_lowers_degree_by_two():
    ops = FGOperators(classify(49, 5))
    A = ops.pres
    for d in range(2, 30, 2):
        for m in A.basis(d):
            for mm in ops.F({m: 1}):
                assert A.degree(mm) == d - 2
