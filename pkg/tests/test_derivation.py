from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from thhfq.algebra import Presentation, dpow, ext, poly, trunc
from thhfq.algebra import add_into
from thhfq.derivation import Assignment, Derivation, DifferentialError, DifferentialSpec, shift

P = 5
# Koszul-type algebra: d(x) = y, d(z) = y^2 on E(x, z) ⊗ P(y), all in filtration 0
KOSZUL = Presentation(P, (ext("x", 3), poly("y", 2), ext("z", 5)))
KOSZUL_D = Derivation(KOSZUL, DifferentialSpec.of(0, x="y", z="y^2"))


def _basis(pres, D):
    return [(d, m) for d in range(D + 1) for m in pres.basis(d)]


@given(st.data())
def test_leibniz_rule(data):
    basis = _basis(KOSZUL, 16)
    (da, a) = data.draw(st.sampled_from(basis))
    (db, b) = data.draw(st.sampled_from(basis))
    d = KOSZUL_D
    lhs = d.apply(KOSZUL.multiply({a: 1}, {b: 1}))
    rhs: dict = {}
    add_into(rhs, KOSZUL.multiply(d.apply_monomial(a), {b: 1}), 1, P)
    add_into(rhs, KOSZUL.multiply({a: 1}, d.apply_monomial(b)), -1 if da % 2 else 1, P)
    assert lhs == rhs


def test_square_zero_on_koszul_algebra():
    KOSZUL_D.check_square_zero(30)


def test_shift_is_minus_r_r_minus_1():
    assert shift(0) == (0, -1)
    assert shift(9) == (-9, 8)


def test_divided_power_offset_rule():
    G = Presentation(P, (dpow("s", 9, 1), ext("t", 46, 1)))
    # d^(p-1) shifts by (-(p-1), p-2): gamma_p(s) at (5, 45) -> (1, 48)
    with pytest.raises(DifferentialError):
        Derivation(G, DifferentialSpec(4, (Assignment("s", "t", offset=P),)))
    H = Presentation(P, (dpow("s", 9, 1), ext("t", 48, 1)))
    d = Derivation(H, DifferentialSpec(4, (Assignment("s", "t", offset=P),)))
    assert d.apply(H.gen("s", 4)) == {}
    assert d.apply(H.gen("s", 5)) == H.gen("t")
    assert d.apply(H.gen("s", 7)) == H.multiply(H.gen("t"), H.gen("s", 2))


def test_unit_scaling_multiplies_the_target():
    d2 = Derivation(KOSZUL, DifferentialSpec(0, (Assignment("x", "y", unit=3),)))
    assert d2.apply(KOSZUL.gen("x")) == {(0, 1, 0): 3}


def test_rescaled_spec_keeps_everything_but_units():
    spec = DifferentialSpec.of(0, "koszul", x="y", z="y^2")
    re = spec.rescaled([2, 4])
    assert [a.unit for a in re.assignments] == [2, 4]
    assert [a.target for a in re.assignments] == ["y", "y^2"]
    assert re.label == "koszul"


@given(st.integers(0, 12), st.booleans(), st.integers(1, 4))
def test_spec_json_round_trip(page, conj, unit):
    spec = DifferentialSpec(page, (Assignment("a", "b*c", 1, unit),), "lbl", conj)
    assert DifferentialSpec.from_json(spec.to_json()) == spec


def test_spec_json_validates_against_schema(validate):
    validate(DifferentialSpec.of(9, "d", lambda1="sigma_x").to_json(), "differential_spec")


def test_polynomial_rule_vanishes_on_pth_powers():
    d = Derivation(KOSZUL, DifferentialSpec.of(0, y="0"))
    assert d.apply(KOSZUL.gen("y", P)) == {}


@pytest.mark.parametrize("spec", [
    DifferentialSpec(0, (Assignment("x", "z"),)),                    # wrong bidegree
    DifferentialSpec(0, (Assignment("x", "y"), Assignment("x", "y"))),  # duplicate
    DifferentialSpec(0, (Assignment("x", "y", unit=5),)),             # unit zero mod p
    DifferentialSpec(0, (Assignment("x", "y", offset=2),)),           # offset on exterior
])
def test_bad_specs_are_rejected(spec):
    with pytest.raises(DifferentialError):
        Derivation(KOSZUL, spec)


def test_truncation_compatibility_is_checked():
    T = Presentation(P, (trunc("y", 2, 3), ext("x", 1)))
    with pytest.raises(DifferentialError):
        Derivation(T, DifferentialSpec.of(0, y="x"))


def test_relations_must_be_preserved():
    Q = Presentation(P, (ext("x", 3), poly("y", 2), ext("w", 5))).with_relations(["x*w"])
    with pytest.raises(DifferentialError):
        Derivation(Q, DifferentialSpec.of(0, x="y"))
