"""Finite Dieudonne-complex models and their checkers.

The affine-line fixture is validated by the axiom checker (its operator
matrices were derived from rewrite rules, so `check_axioms` is the oracle
for the construction), and the checkers themselves are shown to have
teeth on a hand-written non-saturated model.
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from wittcert.dieudonne import (
    BasisElement,
    DieudonneModel,
    a1_model,
    check_axioms,
    compare_wr_with_cohomology,
    f_cancellation_check,
    frobenius_injectivity_degree0_check,
    hn_mod_pr,
    quotient_is_zero,
    saturation_witness,
    trivial_model,
    w1_vanishing_propagation_check,
    weight_from_pair,
    weight_pair,
    wr_quotient,
    zero_model,
)

DATA = Path(__file__).parent / "data"


def nonsaturated_model():
    with open(DATA / "nonsaturated_model.json", "r", encoding="utf-8") as fh:
        return DieudonneModel.from_json(json.load(fh))


# -- fixtures and validation ----------------------------------------------------


def test_weight_encoding_round_trip():
    assert weight_pair(2, Fraction(3, 4)) == (3, 2)
    assert weight_pair(2, Fraction(4)) == (4, 0)
    assert weight_from_pair(3, (5, 2)) == Fraction(5, 9)
    with pytest.raises(ValueError):
        weight_pair(2, Fraction(1, 3))


def test_grading_discipline_enforced():
    basis = [BasisElement("a", 0, Fraction(1)), BasisElement("b", 1, Fraction(2))]
    with pytest.raises(ValueError):
        DieudonneModel(2, 3, basis, {"a": {"b": 1}}, {}, {})  # d must preserve weight
    with pytest.raises(ValueError):
        DieudonneModel(2, 3, basis, {}, {"b": {"a": 1}}, {})  # F must scale weight by p
    with pytest.raises(ValueError):
        DieudonneModel(2, 3, basis + basis, {}, {}, {})  # duplicate labels
    good = DieudonneModel(2, 3, basis, {}, {"a": {"b": 0}}, {})
    assert good.defined("F", "a") and good.apply("F", {"a": 1}) == {}
    assert not good.defined("F", "b")
    assert good.apply("F", {"b": 1}) is None


def test_trivial_model_axioms_and_quotient():
    m = trivial_model(3, 3)
    report = check_axioms(m)
    assert report.passed and not report.inconclusive
    w1 = wr_quotient(m, 0, 1)
    assert w1.factors_at(Fraction(0)) == (1,)  # Z/p
    h1 = hn_mod_pr(m, 0, 1)
    assert h1.factors_at(Fraction(0)) == (1,)
    assert saturation_witness(m).passed
    assert f_cancellation_check(m, 1).passed
    assert frobenius_injectivity_degree0_check(m).passed


def test_zero_model_everything_vacuous():
    m = zero_model(2, 3)
    assert check_axioms(m).passed
    assert saturation_witness(m).passed
    assert wr_quotient(m, 0, 1).is_zero()
    assert hn_mod_pr(m, 0, 1).is_zero()
    assert w1_vanishing_propagation_check(m, 0, 2).passed


# -- the affine-line model -------------------------------------------------------


@pytest.mark.parametrize("p,wmax", [(2, 4), (2, 6), (3, 6)])
def test_a1_model_axioms(p, wmax):
    m = a1_model(p, wmax, 4)
    report = check_axioms(m)
    assert report.passed, report.violations


def test_a1_model_basis_examples():
    m = a1_model(2, 4, 3)
    # d(V^j [T^m]) is the degree-1 generator of the same weight, d of that is 0
    assert m.apply("d", {"V^1[T^1]": 1}) == {"dV^1[T^1]": 1}
    assert m.apply("d", {"dV^1[T^1]": 1}) == {}
    # F(dV[T^m]) = d[T^m] = m * ([T^(m-1)]dT)
    assert m.apply("F", {"dV^1[T^3]": 1}) == {"[T^2]dT": 3 % 8}
    # F on the integral degree-1 generators: e_m -> e_{pm}
    assert m.apply("F", {"dT": 1}) == {"[T^1]dT": 1}
    # weight-1 degree-0 piece is spanned by [T] alone
    assert m.block(0, Fraction(1)) == ("[T^1]",)
    assert m.block(0, Fraction(1, 2)) == ("V^1[T^1]",)
    # F([T]) = [T^2]
    assert m.apply("F", {"[T^1]": 1}) == {"[T^2]": 1}
    # V([T^2]) = 2 [T] since 2 divides the exponent
    assert m.apply("V", {"[T^2]": 1}) == {"[T^1]": 2}


def test_a1_level_one_quotient_ranks():
    m = a1_model(2, 4, 3)
    w1 = wr_quotient(m, 0, 1)
    for k in (0, 1, 2):
        assert w1.factors_at(Fraction(k)) == (1,)  # F_p[T] in each integral weight
        assert w1.blocks[Fraction(k)].complete
    for frac in (Fraction(1, 2), Fraction(3, 2), Fraction(1, 4)):
        assert w1.factors_at(frac) == ()
    # the quotient's zero test: V-images die, generators do not
    assert quotient_is_zero(w1, m, {"V^1[T^1]": 1})
    assert not quotient_is_zero(w1, m, {"[T^1]": 1})
    assert quotient_is_zero(w1, m, {"[T^1]": 2})  # p * x = V(F(x))


def test_a1_degree_one_quotient_matches_kaehler_forms():
    m = a1_model(3, 6, 4)
    w1 = wr_quotient(m, 1, 1)
    for k in (1, 2):
        assert w1.factors_at(Fraction(k)) == (1,)
    assert w1.factors_at(Fraction(1, 3)) == ()


@pytest.mark.parametrize("p,wmax,exponent", [(2, 6, 4), (3, 6, 4)])
def test_a1_wr_is_h_of_mod_pr(p, wmax, exponent):
    m = a1_model(p, wmax, exponent)
    for degree in (0, 1, 2):
        for r in range(1, exponent):
            report = compare_wr_with_cohomology(m, degree, r)
            assert report.passed, report.violations
            if degree <= 1:
                assert report.checked > 0


@pytest.mark.parametrize("p", [2, 3])
def test_a1_f_cancellation_clean(p):
    m = a1_model(p, 6, 4)
    for r in (1, 2, 3):
        report = f_cancellation_check(m, r)
        assert report.passed, report.violations
    assert f_cancellation_check(m, 1).checked > 0


@pytest.mark.parametrize("p", [2, 3])
def test_a1_saturation_and_injectivity(p):
    m = a1_model(p, 6, 4)
    sat = saturation_witness(m)
    assert sat.passed, sat.violations
    assert sat.checked > 0
    inj = frobenius_injectivity_degree0_check(m)
    assert inj.passed, inj.violations


@pytest.mark.parametrize("p", [2, 3])
def test_a1_vanishing_propagation(p):
    m = a1_model(p, 5, 4)
    for degree in (0, 1, 2):
        report = w1_vanishing_propagation_check(m, degree, 3)
        assert report.passed, report.violations
    # degree 2 of a one-variable model is empty: everything vanishes
    assert hn_mod_pr(m, 2, 1).is_zero()


def test_propagation_needs_enough_precision():
    m = a1_model(2, 4, 3)
    with pytest.raises(ValueError):
        w1_vanishing_propagation_check(m, 0, 3)  # needs N >= 4


# -- the adversarial model ---------------------------------------------------------


def test_nonsaturated_model_axioms_pass():
    m = nonsaturated_model()
    report = check_axioms(m)
    assert report.passed, report.violations


def test_nonsaturated_model_fails_saturation_with_witness():
    m = nonsaturated_model()
    report = saturation_witness(m)
    assert not report.passed
    witnesses = [v["witness"] for v in report.violations]
    assert {"a": 1} in witnesses
    # the failure is interior: the F-source block exists and F is defined there
    assert all("depth" not in v.get("reason", "") for v in report.violations)


def test_nonsaturated_model_fv_still_p():
    m = nonsaturated_model()
    assert m.apply_chain(["V", "F"], {"a": 1}) == {"a": 2}
    assert m.apply_chain(["V", "F"], {"b": 1}) == {"b": 2}


# -- serialization ------------------------------------------------------------------


def test_model_json_round_trip():
    m = a1_model(2, 3, 3)
    doc = m.to_json()
    again = DieudonneModel.from_json(doc)
    assert again.to_json() == doc
    assert check_axioms(again).passed


def test_report_json_shape():
    m = nonsaturated_model()
    doc = saturation_witness(m).to_json()
    assert doc["check"] == "saturation"
    assert doc["passed"] is False
    assert all("witness" in v for v in doc["violations"])
    assert json.loads(json.dumps(doc)) == doc
