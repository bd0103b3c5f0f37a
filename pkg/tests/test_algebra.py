from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kmoduli.algebra import (
    BinaryForm,
    MultiPoly,
    PiecewisePoly,
    Q,
    UPoly,
    binary_gcd,
    divides_linear,
    integrate,
    normalize_point,
    ord_at_point,
    poly_ring,
    upoly_gcd,
    weighted_degree,
)

VARS, (x0, x1, x2, x3, z) = poly_ring("x0 x1 x2 x3 z", (1, 1, 1, 1, 2))

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
nonzero = rationals.filter(lambda x: x != 0)


def test_Q_refuses_floats():
    assert Q("3/6") == F(1, 2)
    assert Q(4) == F(4)
    with pytest.raises(TypeError):
        Q(0.5)


@given(nonzero, nonzero)
def test_rationals_form_a_field(a, b):
    assert (a / b) * b == a


# --- weighted degree -------------------------------------------------------


def test_weighted_degree_examples():
    q = x0 * x2 + x1**2 + x3**2 * 3
    assert weighted_degree(z - q) == (2, True)
    g = x0**4 - x1 * x3**3
    assert weighted_degree(z**2 + g) == (4, True)
    assert weighted_degree(x0 + z) == (2, False)


def test_weighted_degree_of_zero_fails():
    with pytest.raises(ValueError, match="zero polynomial has no degree"):
        weighted_degree(x0.zero())


def _homogeneous(draw, d):
    from kmoduli.git_hm import monomials_of_degree

    mons = monomials_of_degree(d)
    picks = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=4, unique=True))
    coeffs = draw(st.lists(nonzero, min_size=len(picks), max_size=len(picks)))
    return MultiPoly(VARS, dict(zip(picks, coeffs)))


@st.composite
def homogeneous_polys(draw):
    return _homogeneous(draw, draw(st.integers(1, 4)))


@given(homogeneous_polys(), homogeneous_polys())
def test_degree_is_additive(f, g):
    (df, _), (dg, _) = weighted_degree(f), weighted_degree(g)
    assert weighted_degree(f * g) == (df + dg, True)


def test_multipoly_json_round_trip_and_serialization_shape():
    f = x0**2 * z * F(3, 2) - x3
    obj = f.to_json()
    assert obj["vars"][4] == {"name": "z", "weight": 2}
    assert {"exp": [2, 0, 0, 0, 1], "coeff": "3/2"} in obj["terms"]
    assert MultiPoly.from_json(obj) == f


def test_no_zero_coefficients_are_stored():
    f = (x0 + x1) - x1
    assert f.terms == {(1, 0, 0, 0, 0): F(1)}


def test_subs_agrees_with_sympy():
    f = x0**2 * x1 - z * x3 + 5
    g = f.subs({"x0": x1 + x2, "z": x3**2})
    s0, s1, s2, s3, sz = sympy.symbols("x0 x1 x2 x3 z")
    expected = sympy.expand((s0**2 * s1 - sz * s3 + 5).subs({s0: s1 + s2, sz: s3**2}))
    got = sum(
        (sympy.Rational(c.numerator, c.denominator) * s0**e[0] * s1**e[1] * s2**e[2] * s3**e[3] * sz**e[4])
        for e, c in g.terms.items()
    )
    assert sympy.expand(got - expected) == 0


# --- binary forms -----------------------------------------------------------


def test_divides_linear_examples():
    x1_, x2_ = BinaryForm.linear(1, 0), BinaryForm.linear(0, 1)
    assert divides_linear(x2_, x2_ * (x1_ + x2_))
    assert not divides_linear(x2_, x1_ * x1_)
    assert divides_linear(x2_, BinaryForm.zero(3))
    with pytest.raises(ValueError):
        divides_linear(BinaryForm.zero(1), x1_)


def test_ord_at_point_examples():
    u3v5 = BinaryForm.monomial(3, 5)
    assert ord_at_point(u3v5, (0, 1)) == 3
    assert ord_at_point(u3v5, (1, 0)) == 5
    u_minus_v = BinaryForm.linear(1, -1)
    assert ord_at_point(u_minus_v**2, (1, 1)) == 2
    with pytest.raises(ValueError, match="order undefined for zero form"):
        ord_at_point(BinaryForm.zero(4), (1, 0))


def _ord_oracle(f, p):
    """Repeated exact division by the linear form until a remainder appears."""
    ell = BinaryForm.vanishing_at(p)
    k = 0
    while True:
        quo, rem = f.divmod_linear(ell)
        if rem != 0:
            return k
        f, k = quo, k + 1


@st.composite
def split_forms(draw, degree=8):
    roots = draw(
        st.lists(
            st.tuples(st.integers(-4, 4), st.integers(1, 3)).map(lambda t: (F(t[0], t[1]), F(1))),
            min_size=0,
            max_size=degree,
        )
    )
    n_inf = degree - len(roots)
    f = BinaryForm([draw(nonzero)])
    for p in roots:
        f = f * BinaryForm.vanishing_at(p)
    for _ in range(n_inf):
        f = f * BinaryForm.vanishing_at((1, 0))
    return f


@given(split_forms())
def test_ord_matches_oracle_and_sums_to_degree_for_split_forms(f):
    pts = {(F(1), F(0))} | {(p, F(1)) for p in range(-4, 5)}
    pts |= {(F(a, b), F(1)) for a in range(-4, 5) for b in (1, 2, 3)}
    total = 0
    for p in pts:
        k = ord_at_point(f, p)
        assert k == _ord_oracle(f, p)
        total += k
    assert total == f.degree


def test_ord_at_distinct_roots_is_one():
    f = BinaryForm([1])
    for r in range(1, 9):
        f = f * BinaryForm.linear(1, -r)
    for r in range(1, 9):
        assert ord_at_point(f, (r, 1)) == 1 == _ord_oracle(f, (r, 1))


def test_linear_factors_and_gcd():
    f = BinaryForm.linear(1, -2) ** 2 * BinaryForm.linear(0, 1) * BinaryForm([1, 0, 1])
    factors = dict(f.linear_factors())
    assert factors == {normalize_point((2, 1)): 2, normalize_point((1, 0)): 1}
    g = BinaryForm.linear(1, -2) * BinaryForm.linear(1, 5)
    h = binary_gcd(f, g)
    assert h.degree == 1 and ord_at_point(h, (2, 1)) == 1


def test_upoly_gcd_and_roots():
    a = UPoly([-1, 0, 1]) * UPoly([3, 1])
    b = UPoly([1, 1]) * UPoly([F(-1, 2), 1])
    assert upoly_gcd(a, b) == UPoly([1, 1])
    assert sorted(a.rational_roots()) == [-3, -1, 1]
    assert UPoly([-2, 0, 1]).rational_roots() == []
    assert UPoly([-2, 0, 1]).sturm_count(F(1), F(2)) == 1


# --- integration ------------------------------------------------------------


def _vol_E0():
    return PiecewisePoly(
        [0, 1, F(3, 2)],
        [[1, 0, F(-3, 2), F(2, 3)], UPoly([3, -2]) ** 3 * F(1, 6)],
    )


def test_integrate_examples():
    assert integrate(_vol_E0()) == F(11, 16)
    assert integrate(PiecewisePoly([0, F(1, 2)], [UPoly([1, -2]) ** 3])) == F(1, 8)
    assert integrate(PiecewisePoly([0, 1], [[0]])) == 0


def test_integrate_agrees_with_sympy():
    t = sympy.symbols("t")
    expected = sympy.integrate(1 - sympy.Rational(3, 2) * t**2 + sympy.Rational(2, 3) * t**3, (t, 0, 1))
    expected += sympy.integrate((3 - 2 * t) ** 3 / 6, (t, 1, sympy.Rational(3, 2)))
    assert expected == sympy.Rational(11, 16)


def test_piecewise_rejects_discontinuity():
    with pytest.raises(ValueError):
        PiecewisePoly([0, 1, 2], [[1], [2]])


@given(st.fractions(min_value=0, max_value=F(3, 2), max_denominator=50).filter(lambda s: 0 < s < F(3, 2) and s != 1))
def test_integral_is_additive_under_refinement(s):
    P = _vol_E0()
    bps = sorted(set(P.breakpoints) | {s})
    refined = PiecewisePoly(bps, [P.piece_at((a + b) / 2) for a, b in zip(bps, bps[1:])])
    assert integrate(refined) == integrate(P)


def test_piecewise_json_round_trip():
    P = _vol_E0()
    assert PiecewisePoly.from_json(P.to_json()) == P
