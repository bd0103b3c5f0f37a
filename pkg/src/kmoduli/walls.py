"""Wall ledger and divisor-class bookkeeping on the two-parameter family F(a, b).

Classes are written in the basis (lambda, H_h, H_u).  The K-moduli
parameter c and the Hodge-side parameter a are related by c = 1/(1 + 2a);
the CM class at c is c*lambda + (1 - c)*Delta, Delta = b_h H_h + b_u H_u.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .algebra import Q, fmt
from .data import load_json

LEDGER_FILE = "ledger.json"


def ledger() -> dict:
    return load_json(LEDGER_FILE)


def c_walls() -> tuple[Fraction, ...]:
    return tuple(Q(x) for x in ledger()["c_walls"])


def a_walls() -> tuple[Fraction, ...]:
    return tuple(Q(x) for x in ledger()["a_walls"])


def unigonal_wall() -> Fraction:
    return Q(ledger()["unigonal_wall"])


def c_of_a(a: Any) -> Fraction:
    a = Q(a)
    if a < 0:
        raise ValueError("a must be non-negative")
    return 1 / (1 + 2 * a)


def a_of_c(c: Any) -> Fraction:
    c = Q(c)
    if not 0 < c <= 1:
        raise ValueError("c must lie in (0, 1]")
    return (1 - c) / (2 * c)


def kst_from_slope(t: Any) -> Fraction:
    """K-stability wall (1 + 2t)/(3 - 2t) attached to a slope t."""
    t = Q(t)
    if t == Fraction(3, 2):
        raise ValueError("slope 3/2 has no wall (denominator vanishes)")
    return (1 + 2 * t) / (3 - 2 * t)


@dataclass(frozen=True)
class BridgeRow:
    a: Fraction
    c: Fraction
    matched: bool


def a_to_c_bridge() -> tuple[list[BridgeRow], list[Fraction]]:
    """Map every a-wall to c and match it against the c-walls.

    Returns the rows and the c-walls left unmatched (expected: the unigonal wall).
    """
    cw = set(c_walls())
    rows = [BridgeRow(a, c_of_a(a), c_of_a(a) in cw) for a in reversed(a_walls())]
    hit = {r.c for r in rows}
    return rows, sorted(cw - hit)


# ---------------------------------------------------------------------------
# divisor classes


@dataclass(frozen=True)
class DivisorClass:
    """ell * lambda + h * H_h + u * H_u.

    Coefficients are normally Fractions, but any field-like values (for
    example sympy symbols) pass through the arithmetic unchanged.
    """

    ell: Any
    h: Any
    u: Any

    def __add__(self, o: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.ell + o.ell, self.h + o.h, self.u + o.u)

    def __sub__(self, o: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.ell - o.ell, self.h - o.h, self.u - o.u)

    def scale(self, k: Any) -> "DivisorClass":
        return DivisorClass(k * self.ell, k * self.h, k * self.u)

    def to_json(self) -> dict:
        return {"lambda": fmt(self.ell), "H_h": fmt(self.h), "H_u": fmt(self.u)}


LAMBDA = DivisorClass(Fraction(1), Fraction(0), Fraction(0))
H_H = DivisorClass(Fraction(0), Fraction(1), Fraction(0))
H_U = DivisorClass(Fraction(0), Fraction(0), Fraction(1))


def git_lambda() -> DivisorClass:
    g = ledger()["git_lambda"]
    return DivisorClass(Q(g["lambda"]), Q(g["H_h"]), Q(g["H_u"]))


@dataclass(frozen=True)
class Relation:
    """On ``locus``, (lambda + s * D)|_locus = 0, so lambda restricts to -s D."""

    locus: str
    divisor: str  # "H_h" or "H_u"
    s: Any


class LocusMismatch(ValueError):
    pass


def restriction_relations(s: Any = None) -> dict[str, Relation]:
    """Relations on H_u and on the open part H_h° coming from the GIT class.

    The GIT polarisation contracts H_u to a point and H_h° to a curve, so its
    restriction to each vanishes; the coefficient can be overridden by ``s``.
    """
    g = git_lambda()
    su = g.u / g.ell if s is None else s
    sh = g.h / g.ell if s is None else s
    return {"H_u": Relation("H_u", "H_u", su), "H_h°": Relation("H_h°", "H_h", sh)}


def restrict(cls: DivisorClass, locus: str, relations: Mapping[str, Relation]) -> Any:
    """Coefficient of D|_locus in cls|_locus, D the divisor carried by the locus.

    H_h and H_u are disjoint, so the other boundary divisor restricts to zero.
    Only the relation tagged with this very locus may be used.
    """
    if locus not in relations:
        raise LocusMismatch(f"no restriction relation recorded on {locus!r}")
    rel = relations[locus]
    if rel.locus != locus:
        raise LocusMismatch(f"relation tagged {rel.locus!r} cannot be used on {locus!r}")
    own = cls.u if rel.divisor == "H_u" else cls.h
    return -cls.ell * rel.s + own


def cm_class(c: Any, b_h: Any = None, b_u: Any = None) -> DivisorClass:
    """c lambda + (1 - c)(b_h H_h + b_u H_u), boundary coefficients solved if omitted."""
    c = Q(c)
    if b_h is None or b_u is None:
        b_h, b_u = solve_boundary_coeffs()
    return DivisorClass(c, (1 - c) * b_h, (1 - c) * b_u)


def delta_K() -> DivisorClass:
    b_h, b_u = solve_boundary_coeffs()
    return DivisorClass(Fraction(0), b_h, b_u)


def solve_boundary_coeffs(s: Any = None) -> tuple[Any, Any]:
    """(b_h, b_u) from the vanishing of the CM class on the contracted loci.

    At c = 9/13 the CM class contracts H_u, at c = 1/3 it contracts H_h°; in
    both cases the restriction is linear in the unknown coefficient.
    """
    rels = restriction_relations(s)
    walls = ledger()["hodge_walls"]
    c_h, c_u = Q(walls["H_h"]), Q(walls["H_u"])
    # c lambda + (1 - c) b H restricts to (-c s + (1 - c) b) H|_H = 0
    b_u = c_u * rels["H_u"].s / (1 - c_u)
    b_h = c_h * rels["H_h°"].s / (1 - c_h)
    # re-check through the generic restriction routine
    if restrict(cm_class_raw(c_u, b_h, b_u), "H_u", rels) != 0 or \
            restrict(cm_class_raw(c_h, b_h, b_u), "H_h°", rels) != 0:
        raise ArithmeticError("boundary coefficients fail the restriction check")
    return b_h, b_u


def cm_class_raw(c: Any, b_h: Any, b_u: Any) -> DivisorClass:
    return DivisorClass(c, (1 - c) * b_h, (1 - c) * b_u)


def cm_pullback(c: Any) -> DivisorClass:
    """Pullback of the CM line bundle via the Hodge relation.

    (1-c)^(-3) Lambda_c = (1-c) Lambda_0 + 4^4 c Lambda_Hodge, with
    Lambda_Hodge -> lambda and 4^(-4) Lambda_0 -> b_h H_h + b_u H_u.
    """
    c = Q(c)
    k = Q(ledger()["cm_hodge_relation"]["hodge_factor"])
    lam0 = delta_K().scale(k)
    return (lam0.scale(1 - c) + LAMBDA.scale(k * c)).scale((1 - c) ** 3)


# ---------------------------------------------------------------------------
# chambers


def flip_centres_a(i: int) -> tuple[str, str]:
    """(flipping, flipped) loci at the i-th a-wall, 1 <= i <= 7."""
    rule = ledger()["flip_rule_a"]
    if not 1 <= i <= 7:
        raise ValueError("flips occur at a_1, ..., a_7 only")
    j = (rule["small_j_offset"] - i) if i >= rule["switch_at"] else (rule["large_j_offset"] - i)
    return f"Z{j}", f"W{j - 1}"


def flip_loci_c(i: int) -> tuple[str, str]:
    """(E_minus, E_plus) at the i-th c-wall for i in {2, 3, 4, 6, 7, 8, 9}."""
    rule = ledger()["flip_rule_c"]
    if str(i) in rule["exceptions"]:
        em, ep = rule["exceptions"][str(i)]
        return em, ep
    if str(i) not in rule["generic"]:
        raise ValueError(f"no flip at c-wall {i}")
    return f"W{i - 1}", f"Z{i}"


@dataclass(frozen=True)
class ChamberDescriptor:
    """Where (a, b) sits in the wall-and-chamber decomposition.

    ``model`` names the space F(a, b) is isomorphic to; on walls it is
    ``"wall"`` and ``crossing`` describes what happens there.
    """

    model: str
    a_interval: tuple[Fraction | None, Fraction | None]
    b_side: str
    crossing: tuple[str, ...] = ()
    flip_centres: tuple[str, str] | None = None
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        lo, hi = self.a_interval
        return {
            "model": self.model,
            "a_interval": [None if lo is None else fmt(lo), None if hi is None else fmt(hi)],
            "b_side": self.b_side,
            "crossing": list(self.crossing),
            "flip_centres": None if self.flip_centres is None else list(self.flip_centres),
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ChamberDescriptor":
        lo, hi = obj["a_interval"]
        return cls(
            obj["model"],
            (None if lo is None else Q(lo), None if hi is None else Q(hi)),
            obj["b_side"],
            tuple(obj["crossing"]),
            None if obj["flip_centres"] is None else tuple(obj["flip_centres"]),
            tuple(obj["notes"]),
        )


HAT_F = "hat-F"
GIT = "GIT"
K_MODULI = "K-moduli at c"
K_MODULI_BLOWN_UP = "Kirwan blow-up of K-moduli at c at [T]"
KIRWAN_GIT = "Kirwan blow-up of GIT at [T]"
BLOWDOWN_HU = "blow-down of H_u"
WALL = "wall"


def chamber(a: Any, b: Any) -> ChamberDescriptor:
    a, b = Q(a), Q(b)
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    aw = a_walls()
    b_side = "b<1" if b < 1 else "b=1" if b == 1 else "b>1"
    below = max((w for w in aw if w < a), default=None)
    above = min((w for w in aw if w > a), default=None)
    crossing: list[str] = []
    centres = None
    if a in aw:
        i = aw.index(a) + 1
        if i <= 7:
            centres = flip_centres_a(i)
            crossing.append(f"flip at a_{i}")
        else:
            crossing.append("divisorial contraction of H_h")
        below, above = a, a
    if b == 1:
        crossing.append("divisorial contraction of H_u")
    if crossing:
        return ChamberDescriptor(WALL, (below, above), b_side, tuple(crossing), centres)

    # a = 2/9 (c = 9/13) is not a wall of F(a, b): the chamber around it
    # carries one label, with the alternative description noted
    two_ninths = Fraction(2, 9)
    straddles = below is not None and above is not None and below < two_ninths < above
    notes: list[str] = []
    if below is not None and above is not None:
        notes.append(f"c(a) lies in ({fmt(c_of_a(above))}, {fmt(c_of_a(below))})")
    if b < 1:
        if below is None:
            model = HAT_F
        elif above is None:
            model = KIRWAN_GIT
        elif below < two_ninths:
            model = K_MODULI
            if straddles:
                notes.append(f"for a >= 2/9 this is the {K_MODULI_BLOWN_UP}")
        else:
            model = K_MODULI_BLOWN_UP
    else:
        if above is None:
            model = GIT
        elif below is None:
            model = f"{BLOWDOWN_HU} from {HAT_F}"
        elif below < two_ninths:
            model = BLOWDOWN_HU
            if straddles:
                notes.append(f"for a >= 2/9 this is the {K_MODULI}")
        else:
            model = K_MODULI
    return ChamberDescriptor(model, (below, above), b_side, (), None, tuple(notes))


# ---------------------------------------------------------------------------
# ampleness


@dataclass(frozen=True)
class AmpleCertificate:
    """target = p * first + (1 - p) * second, with both components nef."""

    case: int
    coefficients: tuple[Fraction, Fraction]
    components: tuple[DivisorClass, DivisorClass]
    target: DivisorClass
    in_proved_range: bool

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "coefficients": [fmt(x) for x in self.coefficients],
            "components": [c.to_json() for c in self.components],
            "target": self.target.to_json(),
            "in_proved_range": self.in_proved_range,
        }


def ample_certificate(a: Any, b: Any) -> AmpleCertificate:
    """Write lambda + (a H_h + b H_u)/2 as a convex combination of two nef classes."""
    a, b = Q(a), Q(b)
    if not (0 < a < 1 and 0 < b < 1):
        raise ValueError("a and b must lie in (0, 1)")
    dk = delta_K()
    target = LAMBDA + DivisorClass(0, a / 2, b / 2)
    if b <= Fraction(9, 2) * a:
        p = 2 * b / (9 * a)
        comps = (LAMBDA + dk.scale(2 * a), LAMBDA + H_H.scale(a / 2))
        case = 1
    else:
        p = 9 * a / (2 * b)
        comps = (LAMBDA + dk.scale(4 * b / 9), LAMBDA + H_U.scale(b / 2))
        case = 2
    combo = comps[0].scale(p) + comps[1].scale(1 - p)
    if combo != target:
        raise ArithmeticError("convex combination does not reproduce the target class")
    return AmpleCertificate(case, (p, 1 - p), comps, target, a < Fraction(1, 9) and b < Fraction(1, 2))
