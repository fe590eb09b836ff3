from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from thhfq.algebra import Presentation, ext, poly, dpow
from thhfq.derivation import Assignment, DifferentialError, DifferentialSpec
from thhfq.ktheory import classify
from thhfq.presets import sset2_e2, thhkfp_claim, thhkfp_mapping
from thhfq.specseq import HOMOLOGICAL, BigradedPage, check_collapse, einfty_compare, run_page

P = 5


def toy(r: int, m: int, e: int) -> Presentation:
    """E(a) ⊗ P(b) with b at (0, 2m) and a placed so that d^r(a) can be b^e."""
    return Presentation(P, (ext("a", 2 * m * e - r + 1, r), poly("b", 2 * m)))


@st.composite
def toys(draw):
    r = draw(st.integers(2, 6))
    m = draw(st.integers(1, 4))
    e = draw(st.integers(1, 4))
    if 2 * m * e < r - 1:
        e = (r - 1) // (2 * m) + 1
    return r, m, e, draw(st.integers(1, P - 1))


@given(toys())
def test_toy_differential_leaves_truncated_polynomial(data):
    r, m, e, unit = data
    pres = toy(r, m, e)
    D = 2 * m * (e + 3)
    E = BigradedPage.initial(pres, D + 2, r=r)
    spec = DifferentialSpec.of(r, a=f"{unit}*b^{e}")
    F = run_page(E, spec)
    expected = [1 if n % (2 * m) == 0 and n < 2 * m * e else 0 for n in range(D + 1)]
    assert list(F.total_dims(D).dims) == expected
    ok, witness = check_collapse(F, D)
    assert ok, witness


@given(toys())
def test_euler_characteristic_is_invariant(data):
    r, m, e, unit = data
    E = BigradedPage.initial(toy(r, m, e), 40, r=r)
    F = run_page(E, DifferentialSpec.of(r, a=f"{unit}*b^{e}"))
    assert E.euler() == F.euler()


def test_page_jump_is_recorded_as_assumed_zero():
    E = BigradedPage.initial(toy(5, 1, 3), 20)
    F = run_page(E, DifferentialSpec.of(5, a="b^3"))
    assert F.r == 6
    assert F.history[-1]["assumed_zero_pages"] == [2, 3, 4]
    assert F.exact_through == E.exact_through - 1


def test_earlier_page_is_rejected():
    E = BigradedPage.initial(toy(3, 1, 2), 20, r=4)
    with pytest.raises(DifferentialError):
        run_page(E, DifferentialSpec.of(3, a="b^2"))


def test_differential_off_the_shift_is_rejected():
    E = BigradedPage.initial(toy(3, 1, 2), 20)
    with pytest.raises(DifferentialError):
        run_page(E, DifferentialSpec.of(4, a="b^2"))


def test_unknown_convention():
    with pytest.raises(ValueError):
        BigradedPage.initial(toy(3, 1, 2), 20, convention="cohomological")


def test_homological_convention_gives_the_same_page():
    pres = toy(3, 1, 2)
    a = run_page(BigradedPage.initial(pres, 20), DifferentialSpec.of(3, a="b^2"))
    b = run_page(BigradedPage.initial(pres, 20, convention=HOMOLOGICAL), DifferentialSpec.of(3, a="b^2"))
    assert a.dims() == b.dims()


def test_classify_and_products_on_a_page():
    E = run_page(BigradedPage.initial(toy(3, 1, 2), 20), DifferentialSpec.of(3, a="b^2"))
    b = E.pres.gen("b")
    assert E.classify(b)[0] == (0, 2)
    assert E.multiply(b, b) is not None and E.is_zero_class(E.pres.multiply(b, b))
    with pytest.raises(ValueError):
        E.classify(E.pres.gen("a"))  # not a cycle


def test_check_collapse_reports_a_witness():
    E = BigradedPage.initial(toy(3, 1, 2), 20)
    ok, witness = check_collapse(E, 20)
    assert not ok and witness == ((3, 2), (0, 4), 3)
    # by Leibniz only the generator a matters; once d^3(a) = 0 is known, nothing can move
    assert check_collapse(E, 20, generators=[(3, 2), (0, 2)], verified_zero=[((3, 2), 3)])[0]


def test_einfty_compare_flags_mismatches():
    E = run_page(BigradedPage.initial(toy(3, 1, 2), 20), DifferentialSpec.of(3, a="b^2"))
    right = Presentation(P, (poly("b", 2),)).with_relations(["b^2"])
    wrong = Presentation(P, (poly("b", 2),))
    assert einfty_compare(E, right, 18).ok
    rep = einfty_compare(E, wrong, 18)
    assert not rep.ok and rep.mismatches


def test_structure_check_uses_the_mapping():
    params = classify(2, 5)
    pres = sset2_e2(params, 60)
    E = BigradedPage.initial(pres, 62)
    E = run_page(E, DifferentialSpec.of(9, lambda1="sigma_x"))
    E = run_page(E, DifferentialSpec.of(10, mu1="sigma_y"))
    rep = einfty_compare(E, thhkfp_claim(params, 59), 59, mapping=thhkfp_mapping(params))
    assert rep.ok, rep.mismatches[:3]
    bad = dict(thhkfp_mapping(params), mu1p="mu1")
    rep = einfty_compare(E, thhkfp_claim(params, 59), 59, mapping=bad)
    assert rep.structure_match is False


def test_page_json_validates(validate):
    E = run_page(BigradedPage.initial(toy(3, 1, 2), 20), DifferentialSpec.of(3, a="b^2"))
    validate(E.to_json(), "page")
    assert "|" in E.chart()


def test_divided_power_differential_with_offset_on_a_page():
    pres = Presentation(P, (dpow("s", 9, 1), ext("t", 48, 1)))
    E = BigradedPage.initial(pres, 60)
    F = run_page(E, DifferentialSpec(4, (Assignment("s", "t", offset=P),)))
    # gamma_5(s) hits t; everything else survives
    assert E.total_dims(55).dims[49] - 1 == F.total_dims(54).dims[49]
