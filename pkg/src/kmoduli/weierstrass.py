"""Weierstrass pairs (A, B) of binary forms of degrees 8 and 12.

The pair describes the elliptic surface z^2 = y^3 + A(u,v) x^4 y + B(u,v) x^6
in the projectivised bundle over P^1.  This module computes discriminants,
checks the slc condition pointwise, converts anticanonical sections of the
weighted bundle into Weierstrass form, and evaluates Hilbert-Mumford weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .algebra import (
    BinaryForm,
    MultiPoly,
    Point,
    Q,
    UPoly,
    binary_gcd,
    fmt,
    normalize_point,
    ord_at_point,
    poly_ring,
    upoly_gcd,
)

DEG_A, DEG_B = 8, 12


@dataclass(frozen=True)
class WeierstrassPair:
    A: BinaryForm
    B: BinaryForm

    def __post_init__(self) -> None:
        if self.A.degree != DEG_A or self.B.degree != DEG_B:
            raise ValueError(f"A must have degree {DEG_A} and B degree {DEG_B}")

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "B": self.B.to_json()}

    @classmethod
    def from_json(cls, obj: Mapping) -> "WeierstrassPair":
        try:
            return cls(BinaryForm.from_json(obj["A"]), BinaryForm.from_json(obj["B"]))
        except KeyError as exc:
            raise ValueError(f"missing field {exc}") from exc


def discriminant(p: WeierstrassPair) -> BinaryForm:
    """4 A^3 + 27 B^2, a form of degree 24."""
    return p.A**3 * 4 + p.B**2 * 27


# ---------------------------------------------------------------------------
# slc


@dataclass(frozen=True)
class SlcVerdict:
    """``witness`` is a form whose zeros are exactly the bad points.

    When one of the bad points is rational, ``point`` holds it and
    ``witness`` is the linear form vanishing there.
    """

    passed: bool
    witness: BinaryForm | None = None
    point: Point | None = None
    ord_A: int | None = None  # None also stands for +infinity when A = 0
    ord_B: int | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"slc": self.passed}
        if not self.passed:
            out["witness"] = self.witness.to_json()
            out["witness_point"] = None if self.point is None else [fmt(x) for x in self.point]
            if self.point is not None:
                out["ord_A"] = "inf" if self.ord_A is None else self.ord_A
                out["ord_B"] = "inf" if self.ord_B is None else self.ord_B
        return out


def high_multiplicity_locus(f: BinaryForm, k: int) -> BinaryForm | None:
    """A form vanishing exactly where f vanishes to order >= k.

    Returns None for the zero form, which vanishes to infinite order everywhere.
    """
    if f.is_zero():
        return None
    F = f.to_upoly()
    G, D = F, F
    for _ in range(k - 1):
        D = D.derivative()
        G = upoly_gcd(G, D)
    finite = G.degree if F.degree >= k else 0
    if F.degree < k:
        G = UPoly([1])
    at_inf = 1 if f.order_at_infinity() >= k else 0
    return BinaryForm(list(G.coeffs) + [0] * at_inf, finite + at_inf)


def slc_check(p: WeierstrassPair) -> SlcVerdict:
    """slc iff at every point ord_p(A) <= 3 or ord_p(B) <= 5."""
    if p.A.is_zero() and p.B.is_zero():
        raise ValueError("the pair (0, 0) does not define a surface")
    bad_A = high_multiplicity_locus(p.A, 4)
    bad_B = high_multiplicity_locus(p.B, 6)
    if bad_A is None:
        bad = bad_B
    elif bad_B is None:
        bad = bad_A
    else:
        bad = binary_gcd(bad_A, bad_B)
    if bad.degree == 0:
        return SlcVerdict(True)
    rational = [pt for pt, _ in bad.linear_factors()] if not bad.is_zero() else []
    if rational:
        pt = rational[0]
        return SlcVerdict(
            False,
            BinaryForm.vanishing_at(pt),
            pt,
            None if p.A.is_zero() else ord_at_point(p.A, pt),
            None if p.B.is_zero() else ord_at_point(p.B, pt),
        )
    return SlcVerdict(False, bad)


# ---------------------------------------------------------------------------
# anticanonical sections


@dataclass(frozen=True)
class AntiCanSection:
    """a z^2 + f2 xyz + f6 x^3 z + b y^3 + f4 x^2 y^2 + f8 x^4 y + f12 x^6."""

    a: Fraction
    b: Fraction
    f2: BinaryForm
    f4: BinaryForm
    f6: BinaryForm
    f8: BinaryForm
    f12: BinaryForm

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Q(self.a))
        object.__setattr__(self, "b", Q(self.b))
        for k in (2, 4, 6, 8, 12):
            if getattr(self, f"f{k}").degree != k:
                raise ValueError(f"f{k} must be a form of degree {k}")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"a": fmt(self.a), "b": fmt(self.b)}
        for k in (2, 4, 6, 8, 12):
            out[f"f{k}"] = getattr(self, f"f{k}").to_json()
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "AntiCanSection":
        kw: dict[str, Any] = {"a": Q(obj["a"]), "b": Q(obj["b"])}
        for k in (2, 4, 6, 8, 12):
            kw[f"f{k}"] = BinaryForm.from_json(obj[f"f{k}"]) if f"f{k}" in obj else BinaryForm.zero(k)
        return cls(**kw)

    def polynomial(self) -> MultiPoly:
        x, y, z = _X, _Y, _Z
        return (
            z**2 * self.a
            + form_to_poly(self.f2) * x * y * z
            + form_to_poly(self.f6) * x**3 * z
            + y**3 * self.b
            + form_to_poly(self.f4) * x**2 * y**2
            + form_to_poly(self.f8) * x**4 * y
            + form_to_poly(self.f12) * x**6
        )


SECTION_RING, (_U, _V, _X, _Y, _Z) = poly_ring("u v x y z")


def form_to_poly(f: BinaryForm) -> MultiPoly:
    d = f.degree
    return MultiPoly(SECTION_RING, {(d - i, i, 0, 0, 0): c for i, c in enumerate(f.coeffs) if c})


def poly_to_form(p: MultiPoly, degree: int) -> BinaryForm:
    coeffs = [Fraction(0)] * (degree + 1)
    for e, c in p.terms.items():
        if e[2:] != (0, 0, 0) or e[0] + e[1] != degree:
            raise ValueError("coefficient is not a binary form of the expected degree")
        coeffs[e[1]] += c
    return BinaryForm(coeffs)


def canonical_section(p: WeierstrassPair) -> AntiCanSection:
    """The section z^2 - y^3 - A x^4 y - B x^6 cutting out the Weierstrass surface."""
    return AntiCanSection(1, -1, BinaryForm.zero(2), BinaryForm.zero(4), BinaryForm.zero(6), -p.A, -p.B)


def to_weierstrass(s: AntiCanSection) -> WeierstrassPair:
    """Bring a section to the form z^2 = y^3 + A x^4 y + B x^6.

    Completes the square in z, completes the cube in y, then rescales y and z
    so that the z^2 and y^3 coefficients become 1 and -1.  The expansion is
    exact and every mixed term is checked to vanish.
    """
    if s.a == 0:
        raise ValueError("section passes through the vertex o in X_u (a = 0)")
    if s.b == 0:
        raise ValueError("y^3 term absent (b = 0): not a Weierstrass section")
    P = s.polynomial() * (1 / s.a)
    b = s.b / s.a
    # z -> z - (f2 x y + f6 x^3)/2 kills the z-linear terms
    lin_z = (form_to_poly(s.f2) * _X * _Y + form_to_poly(s.f6) * _X**3) * (1 / s.a)
    P = P.subs({"z": _Z - lin_z * Fraction(1, 2)})
    # y -> y - c2 x^2 / (3b) kills the y^2 term
    c2 = _coefficient(P, (2, 2, 0))
    P = P.subs({"y": _Y - c2 * _X**2 * (1 / (3 * b))})
    # y -> -b y, z -> b^2 z turns z^2 + b y^3 into b^4 (z^2 - y^3)
    P = P.subs({"y": _Y * (-b), "z": _Z * b**2}) * (1 / b**4)
    groups = P.collect(("x", "y", "z"))
    allowed = {(0, 0, 2), (0, 3, 0), (4, 1, 0), (6, 0, 0)}
    stray = {k for k, v in groups.items() if k not in allowed and not v.is_zero()}
    if stray:
        raise ArithmeticError(f"normalisation left mixed terms {sorted(stray)}")
    if groups.get((0, 0, 2)) != P.const(1) or groups.get((0, 3, 0)) != P.const(-1):
        raise ArithmeticError("normalisation failed to fix the z^2 and y^3 coefficients")
    A = -_coefficient(P, (4, 1, 0))
    B = -_coefficient(P, (6, 0, 0))
    return WeierstrassPair(poly_to_form(A, DEG_A), poly_to_form(B, DEG_B))


def _coefficient(P: MultiPoly, xyz: tuple[int, int, int]) -> MultiPoly:
    return P.collect(("x", "y", "z")).get(xyz, P.zero())


# ---------------------------------------------------------------------------
# Hilbert-Mumford


def move_to_origin(p: Sequence[Any]) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """An SL2 matrix m with f(m.(u,v)) vanishing at [0:1] to the order f has at p."""
    a, b = normalize_point(p)
    if b != 0:
        c, d = 1 / b, Fraction(0)
    else:
        c, d = Fraction(0), -1 / a
    return ((c, a), (d, b))


def hm_weight_ws(p: WeierstrassPair, r: Any, shift: Sequence[Any]) -> Fraction:
    """Hilbert-Mumford value of (A, B) for diag(t^r, t^-r) centred at ``shift``.

    After moving ``shift`` to [0:1] the coefficient of u^(d-i) v^i has weight
    r (d - 2i); dividing by the grading weight (2 for A, 3 for B) of
    P(2^9, 3^13) gives comparable weights.  The value is the minimum over
    non-zero coefficients; a positive value means the subgroup destabilises.
    """
    r = Q(r)
    if p.A.is_zero() and p.B.is_zero():
        raise ValueError("the pair (0, 0) does not define a surface")
    m = move_to_origin(shift)
    vals = []
    for form, q in ((p.A.transform(m), 2), (p.B.transform(m), 3)):
        d = form.degree
        vals += [r * (d - 2 * i) / q for i, c in enumerate(form.coeffs) if c]
    return min(vals)
