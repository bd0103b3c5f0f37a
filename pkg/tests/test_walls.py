from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kmoduli import walls
from kmoduli.walls import (
    BLOWDOWN_HU,
    GIT,
    HAT_F,
    H_H,
    H_U,
    K_MODULI,
    K_MODULI_BLOWN_UP,
    KIRWAN_GIT,
    LAMBDA,
    WALL,
    ChamberDescriptor,
    DivisorClass,
    LocusMismatch,
    Relation,
    a_of_c,
    a_to_c_bridge,
    a_walls,
    ample_certificate,
    c_of_a,
    c_walls,
    chamber,
    cm_class,
    cm_pullback,
    delta_K,
    flip_centres_a,
    flip_loci_c,
    kst_from_slope,
    restrict,
    restriction_relations,
    solve_boundary_coeffs,
)

pos = st.fractions(min_value=0, max_value=50, max_denominator=40).filter(lambda a: a > 0)
unit = st.fractions(min_value=0, max_value=1, max_denominator=40).filter(lambda c: 0 < c < 1)


# --- parameters ---------------------------------------------------------------


def test_c_of_a_examples():
    assert c_of_a(F(1, 9)) == F(9, 11)
    assert c_of_a(1) == F(1, 3)


@given(pos)
def test_c_of_a_is_invertible(a):
    assert a_of_c(c_of_a(a)) == a
    assert 0 < c_of_a(a) < 1


@given(pos, pos)
def test_c_of_a_is_decreasing(a, b):
    if a < b:
        assert c_of_a(a) > c_of_a(b)


def test_a_of_c_range():
    with pytest.raises(ValueError):
        a_of_c(0)


def test_wall_lists():
    cw, aw = c_walls(), a_walls()
    assert list(cw) == sorted(cw) and len(cw) == 9 and 0 < cw[0] and cw[-1] < 1
    assert list(aw) == sorted(aw) and len(aw) == 8


def test_bridge_matches_all_a_walls():
    rows, unmatched = a_to_c_bridge()
    assert len(rows) == 8 and all(r.matched for r in rows)
    assert [r.c for r in rows] == [c for c in c_walls() if c != F(9, 13)]
    assert unmatched == [F(9, 13)] == [walls.unigonal_wall()]


def test_kst_from_slope():
    assert kst_from_slope(F(2, 5)) == F(9, 11)
    assert kst_from_slope(F(1, 6)) == F(1, 2)
    assert kst_from_slope(0) == F(1, 3)
    with pytest.raises(ValueError):
        kst_from_slope(F(3, 2))


def test_slopes_reproduce_table1():
    from kmoduli.git_hm import table1

    kst = {r.i: r.kst for r in table1()}
    for row in walls.ledger()["table2"]:
        assert kst_from_slope(F(row["t"])) == kst[row["i"]]
    assert kst_from_slope(0) == kst[0]


# --- divisor classes ------------------------------------------------------------


def test_boundary_coefficients():
    assert solve_boundary_coeffs() == (F(1, 4), F(9, 8))
    assert delta_K() == DivisorClass(0, F(1, 4), F(9, 8))


def test_boundary_coefficients_symbolic():
    s = sympy.Symbol("s")
    b_h, b_u = solve_boundary_coeffs(s)
    assert sympy.simplify(b_h - s / 2) == 0
    assert sympy.simplify(b_u - 9 * s / 4) == 0


def test_cm_class_examples():
    assert cm_class(F(1, 3)) == DivisorClass(F(1, 3), F(1, 6), F(3, 4))
    b_h, b_u = solve_boundary_coeffs()
    dk = delta_K()
    for c in (F(1, 5), F(1, 2), F(9, 10)):
        assert cm_class(c, b_h, b_u) == LAMBDA.scale(c) + dk.scale(1 - c)


@given(pos)
def test_cm_class_after_dividing_by_c(a):
    c = c_of_a(a)
    assert cm_class(c).scale(1 / c) == DivisorClass(1, a / 2, 9 * a / 4)


@given(unit)
def test_cm_class_positive_and_limits(c):
    cls = cm_class(c)
    assert cls.ell > 0 and cls.h > 0 and cls.u > 0
    assert cm_class(1) == LAMBDA
    assert cm_class(0) == delta_K()


@given(unit)
def test_cm_pullback_is_scaled_cm_class(c):
    assert cm_pullback(c) == cm_class(c).scale(256 * (1 - c) ** 3)


def test_restrictions_respect_loci():
    rels = restriction_relations()
    assert restrict(LAMBDA + H_U.scale(F(1, 2)), "H_u", rels) == 0
    assert restrict(LAMBDA + H_H.scale(F(1, 2)), "H_h°", rels) == 0
    with pytest.raises(LocusMismatch):
        restrict(LAMBDA, "H_h", rels)
    bad = {"H_h": Relation("H_h°", "H_h", F(1, 2))}
    with pytest.raises(LocusMismatch):
        restrict(LAMBDA, "H_h", bad)


def test_cm_class_contracts_boundary_at_its_walls():
    rels = restriction_relations()
    assert restrict(cm_class(F(9, 13)), "H_u", rels) == 0
    assert restrict(cm_class(F(1, 3)), "H_h°", rels) == 0


# --- flips ------------------------------------------------------------------------


def test_flip_rule_a():
    assert flip_centres_a(1) == ("Z9", "W8")
    assert flip_centres_a(3) == ("Z7", "W6")
    assert flip_centres_a(4) == ("Z5", "W4")
    assert flip_centres_a(7) == ("Z2", "W1")
    with pytest.raises(ValueError):
        flip_centres_a(8)


def test_flip_rules_agree_across_parameters():
    # the i-th a-wall and the matching c-wall must flip the same strata
    cw = list(c_walls())
    for i in range(1, 8):
        c = c_of_a(a_walls()[i - 1])
        j = cw.index(c) + 1
        e_minus, e_plus = flip_loci_c(j)
        z, w = flip_centres_a(i)
        assert {e_minus, e_plus} == {z, w}


def test_flip_loci_c_exception_and_gaps():
    assert flip_loci_c(6) == ("W4", "Z5")
    assert flip_loci_c(2) == ("W1", "Z2")
    with pytest.raises(ValueError):
        flip_loci_c(5)


def test_strata_chains():
    chains = walls.ledger()["strata_chains"]
    assert chains["W"] == ["W8", "W7", "W6", "W4", "W3", "W2", "W1", "W0"]
    assert chains["Z"] == ["Z9", "Z8", "Z7", "Z5", "Z4", "Z3", "Z2", "Z1"]


# --- chambers ---------------------------------------------------------------------


def test_chamber_examples():
    assert chamber(F(1, 20), F(1, 2)).model == HAT_F
    assert chamber(2, 3).model == GIT
    d = chamber(F(1, 5), F(1, 2))
    assert d.model == WALL and d.flip_centres == ("Z5", "W4")
    d = chamber(F(1, 9), F(1, 2))
    assert d.flip_centres == ("Z9", "W8")
    assert "divisorial contraction of H_u" in chamber(F(1, 2) + F(1, 100), 1).crossing
    assert "divisorial contraction of H_h" in chamber(1, F(1, 2)).crossing


def test_chamber_models_by_region():
    assert chamber(F(1, 3) + F(1, 10), F(1, 2)).model == K_MODULI_BLOWN_UP
    assert chamber(F(3, 20), F(1, 2)).model == K_MODULI
    assert chamber(2, F(1, 2)).model == KIRWAN_GIT
    assert chamber(F(3, 20), 2).model == BLOWDOWN_HU
    assert chamber(F(1, 2) + F(1, 10), 2).model == K_MODULI


def _interior_points(lo, hi):
    if hi is None:
        return lo + 1, lo + 3
    if lo is None:
        return hi / 3, hi / 2
    return lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3


@pytest.mark.parametrize("b", [F(1, 2), F(3, 2)])
def test_chamber_is_locally_constant(b):
    aw = [None] + list(a_walls()) + [None]
    for lo, hi in zip(aw, aw[1:]):
        p1, p2 = _interior_points(lo, hi)
        assert chamber(p1, b) == chamber(p2, b)


def test_chamber_round_trip():
    d = chamber(F(1, 5), F(1, 2))
    assert ChamberDescriptor.from_json(d.to_json()) == d


def test_chamber_rejects_nonpositive():
    with pytest.raises(ValueError):
        chamber(0, 1)


# --- ampleness certificates -------------------------------------------------------


def test_certificate_examples():
    c1 = ample_certificate(F(1, 10), F(1, 10))
    assert (c1.case, c1.coefficients) == (1, (F(2, 9), F(7, 9)))
    c2 = ample_certificate(F(1, 10), F(4, 5))
    assert (c2.case, c2.coefficients) == (2, (F(9, 16), F(7, 16)))
    edge = ample_certificate(F(1, 10), F(9, 20))
    assert edge.coefficients == (1, 0)


def test_boundary_case_agrees_from_both_sides():
    # at b = 9a/2 both decompositions collapse onto lambda + 2a Delta^K
    a = F(1, 10)
    dk = delta_K()
    target = LAMBDA + DivisorClass(0, a / 2, F(9, 40))
    assert LAMBDA + dk.scale(2 * a) == target == LAMBDA + dk.scale(4 * F(9, 20) / 9)


@given(unit, unit)
def test_certificates_are_convex_identities(a, b):
    cert = ample_certificate(a, b)
    p, q = cert.coefficients
    assert 0 <= p <= 1 and 0 <= q <= 1 and p + q == 1
    assert cert.components[0].scale(p) + cert.components[1].scale(q) == cert.target
    assert cert.target == LAMBDA + DivisorClass(0, a / 2, b / 2)


def test_certificate_range():
    with pytest.raises(ValueError):
        ample_certificate(1, F(1, 2))
