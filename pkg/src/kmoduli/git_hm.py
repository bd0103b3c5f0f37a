"""Hilbert-Mumford limits for pairs (q, g) on P(1,1,1,1,2).

A quartic with a double-quadric tangent cone, written q^2 + g = 0, is studied
through the complete intersection V(z - q, z^2 + g) in P(1^4, 2).  A
one-parameter subgroup acts diagonally on (x0, x1, x2, x3, z); the limit
keeps the terms of maximal weight.

The module also carries the Shah normal forms of the non-slc GIT strata and
classifies an input into W0, ..., W8.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .algebra import BinaryForm, MultiPoly, Q, divides_linear, fmt, poly_ring
from .data import load_json

LEDGER_FILE = "ledger.json"
VAR_NAMES = ("x0", "x1", "x2", "x3", "z")
AMBIENT, (X0, X1, X2, X3, Z) = poly_ring(VAR_NAMES, (1, 1, 1, 1, 2))

DEFAULT_ALPHA = Fraction(1, 100)
CHECK_ALPHA = Fraction(1, 1000)


@dataclass(frozen=True)
class OneParamSubgroup:
    """Diagonal weights on (x0, x1, x2, x3, z)."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        w = tuple(Q(x) for x in self.weights)
        if len(w) != len(VAR_NAMES):
            raise ValueError(f"need {len(VAR_NAMES)} weights on (x0, x1, x2, x3, z), got {len(w)}")
        object.__setattr__(self, "weights", w)

    def weight(self, exp: Sequence[int]) -> Fraction:
        return sum((w * k for w, k in zip(self.weights, exp)), Fraction(0))

    def to_json(self) -> list[str]:
        return [fmt(w) for w in self.weights]


@dataclass(frozen=True)
class SymbolicWeights:
    """Weights affine in a small parameter alpha: const + alpha * coeff."""

    const: tuple[Fraction, ...]
    alpha: tuple[Fraction, ...]

    def at(self, alpha: Any = DEFAULT_ALPHA) -> OneParamSubgroup:
        a = Q(alpha)
        return OneParamSubgroup(tuple(c + a * k for c, k in zip(self.const, self.alpha)))

    def labels(self) -> list[str]:
        out = []
        for c, k in zip(self.const, self.alpha):
            if k == 0:
                out.append(fmt(c))
                continue
            coef = "" if k == 1 else "-" if k == -1 else f"{fmt(k)}*"
            s = f"{coef}alpha"
            if c:
                s += f" + {fmt(c)}" if c > 0 else f" - {fmt(-c)}"
            out.append(s)
        return out

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[Any]]) -> "SymbolicWeights":
        return cls(tuple(Q(r[0]) for r in rows), tuple(Q(r[1]) for r in rows))


def _ambient(f: MultiPoly) -> None:
    if f.vars != AMBIENT:
        raise ValueError("polynomial must live in the ring of x0, x1, x2, x3, z with weights (1,1,1,1,2)")


def initial_part(f: MultiPoly, lam: OneParamSubgroup) -> tuple[MultiPoly, Fraction]:
    """Terms of f of maximal lambda-weight, together with that weight."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no initial part")
    if len(f.vars) != len(lam.weights):
        raise ValueError("weight vector length does not match the number of variables")
    weights = {e: lam.weight(e) for e in f.terms}
    top = max(weights.values())
    return MultiPoly(f.vars, {e: c for e, c in f.terms.items() if weights[e] == top}), top


class DegenerateLimit(ValueError):
    """Raised when a limit pair is requested for a degenerate input."""


@dataclass(frozen=True)
class LimitPair:
    """Limit of V(z - q, z^2 + g) under a one-parameter subgroup.

    ``q_inf`` is -in(z - q), so it equals in(q) whenever z has lower weight.
    ``z2_matched`` is None when g = 0 (nothing to match).
    """

    q_inf: MultiPoly
    g_inf: MultiPoly
    weight_q: Fraction
    weight_g: Fraction | None
    z_free: bool
    z2_matched: bool | None

    def to_json(self) -> dict:
        return {
            "q_inf": self.q_inf.to_json(),
            "g_inf": self.g_inf.to_json(),
            "weight_q": fmt(self.weight_q),
            "weight_g": None if self.weight_g is None else fmt(self.weight_g),
            "z_free": self.z_free,
            "z2_matched": self.z2_matched,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LimitPair":
        return cls(
            q_inf=MultiPoly.from_json(obj["q_inf"]),
            g_inf=MultiPoly.from_json(obj["g_inf"]),
            weight_q=Q(obj["weight_q"]),
            weight_g=None if obj["weight_g"] is None else Q(obj["weight_g"]),
            z_free=bool(obj["z_free"]),
            z2_matched=obj["z2_matched"],
        )


def limit_pair(q: MultiPoly, g: MultiPoly, lam: OneParamSubgroup) -> LimitPair:
    _ambient(q)
    _ambient(g)
    if q.is_zero():
        raise DegenerateLimit("q = 0: the quadric part is missing, the pair degenerates")
    zi = q.index("z")
    if any(e[zi] for e in q.terms) or any(e[zi] for e in g.terms):
        raise ValueError("q and g must not involve z")
    in_zq, w = initial_part(Z - q, lam)
    q_inf = -in_zq
    z_free = all(e[zi] == 0 for e in q_inf.terms)
    if g.is_zero():
        return LimitPair(q_inf, g, w, None, z_free, None)
    g_inf, wg = initial_part(g, lam)
    return LimitPair(q_inf, g_inf, w, wg, z_free, 2 * lam.weights[zi] == wg)


# ---------------------------------------------------------------------------
# Shah strata


@dataclass(frozen=True)
class ShahInput:
    """Coefficients of the Shah normal form q^2 + g.

    High branch: ``beta1`` on (x1, x2, x3) and ``f1``, ``g1``, ``h1`` on (x1, x2).
    Low branch: ``l1`` on (x1, x3).
    """

    a: Fraction
    branch: str
    beta1: tuple[Fraction, Fraction, Fraction] = (Fraction(0),) * 3
    f1: tuple[Fraction, Fraction] = (Fraction(0),) * 2
    g1: tuple[Fraction, Fraction] = (Fraction(0),) * 2
    h1: tuple[Fraction, Fraction] = (Fraction(0),) * 2
    l1: tuple[Fraction, Fraction] = (Fraction(0),) * 2

    def __post_init__(self) -> None:
        if self.branch not in ("high", "low"):
            raise ValueError("branch must be 'high' or 'low'")
        object.__setattr__(self, "a", Q(self.a))
        for name, n in (("beta1", 3), ("f1", 2), ("g1", 2), ("h1", 2), ("l1", 2)):
            vals = tuple(Q(x) for x in getattr(self, name))
            if len(vals) != n:
                raise ValueError(f"{name} needs {n} coefficients")
            object.__setattr__(self, name, vals)
        if self.branch == "low" and any(any(getattr(self, n)) for n in ("beta1", "f1", "g1", "h1")):
            raise ValueError("low branch only carries l1")
        if self.branch == "high" and any(self.l1):
            raise ValueError("high branch does not carry l1")

    @classmethod
    def from_json(cls, obj: Mapping) -> "ShahInput":
        try:
            kw: dict[str, Any] = {"a": Q(obj["a"]), "branch": obj["branch"]}
        except KeyError as exc:
            raise ValueError(f"missing field {exc}") from exc
        for name in ("beta1", "f1", "g1", "h1", "l1"):
            if name in obj:
                kw[name] = tuple(Q(x) for x in obj[name])
        return cls(**kw)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"a": fmt(self.a), "branch": self.branch}
        names = ("beta1", "f1", "g1", "h1") if self.branch == "high" else ("l1",)
        for n in names:
            out[n] = [fmt(x) for x in getattr(self, n)]
        return out


def shah_polys(inp: ShahInput) -> tuple[MultiPoly, MultiPoly]:
    """The pair (q, g) with q^2 + g the Shah normal form."""
    q = X0 * X2 + X1**2 + X3**2 * inp.a
    if inp.branch == "low":
        l1 = X1 * inp.l1[0] + X3 * inp.l1[1]
        return q, X3**3 * l1
    b = X1 * inp.beta1[0] + X2 * inp.beta1[1] + X3 * inp.beta1[2]
    f1 = X1 * inp.f1[0] + X2 * inp.f1[1]
    g1 = X1 * inp.g1[0] + X2 * inp.g1[1]
    h1 = X1 * inp.h1[0] + X2 * inp.h1[1]
    g = X3**3 * (X0 + b) + X2 * (X3**2 * f1 + X2 * X3 * g1 + X2**2 * h1)
    return q, g


@dataclass(frozen=True)
class StratumRow:
    i: int
    kst: Fraction
    weights: SymbolicWeights
    singularity: str

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "kst": fmt(self.kst),
            "weights": self.weights.labels(),
            "singularity": self.singularity,
        }


def table1() -> list[StratumRow]:
    rows = load_json(LEDGER_FILE)["table1"]
    return [
        StratumRow(int(r["i"]), Q(r["kst"]), SymbolicWeights.from_json(r["weights"]), r["singularity"])
        for r in rows
    ]


@dataclass(frozen=True)
class StratumLabel:
    """Result of :func:`shah_stratify`; ``i`` is None outside the strata."""

    i: int | None
    kst: Fraction | None
    ps_weights: OneParamSubgroup | None
    weights_symbolic: tuple[str, ...] | None
    singularity_label: str | None

    @property
    def outside(self) -> bool:
        return self.i is None

    def to_json(self) -> dict:
        if self.i is None:
            return {"stratum": None, "verdict": "outside classified strata"}
        return {
            "stratum": f"W{self.i}",
            "i": self.i,
            "kst": fmt(self.kst),
            "ps_weights": self.ps_weights.to_json(),
            "weights_symbolic": list(self.weights_symbolic),
            "singularity_label": self.singularity_label,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "StratumLabel":
        if obj.get("stratum") is None:
            return OUTSIDE
        return cls(
            int(obj["i"]),
            Q(obj["kst"]),
            OneParamSubgroup(tuple(Q(w) for w in obj["ps_weights"])),
            tuple(obj["weights_symbolic"]),
            obj["singularity_label"],
        )


OUTSIDE = StratumLabel(None, None, None, None, None)

_X2 = BinaryForm.linear(0, 1)  # x2 in the (x1, x2) plane
_X3 = BinaryForm.linear(0, 1)  # x3 in the (x1, x3) plane


def shah_conditions(inp: ShahInput) -> list[tuple[int, bool]]:
    """Truth value of each stratum condition, in the order they are applied."""
    if inp.branch == "high":
        f1, g1, h1 = (BinaryForm.linear(*c) for c in (inp.f1, inp.g1, inp.h1))
        x2_h, x2_g, x2_f = (divides_linear(_X2, h) for h in (h1, g1, f1))
        return [
            (8, not x2_h),
            (7, x2_h and not x2_g),
            (6, x2_h and not h1.is_zero() and x2_g),
            (4, h1.is_zero() and ((x2_g and not g1.is_zero()) or not x2_f)),
            (3, h1.is_zero() and g1.is_zero() and x2_f and not f1.is_zero()),
        ]
    l1 = BinaryForm.linear(*inp.l1)
    x3_l = divides_linear(_X3, l1)
    return [
        (2, not x3_l),
        (1, x3_l and not l1.is_zero()),
        (0, l1.is_zero() and inp.a != 0),
    ]


def shah_stratify(inp: ShahInput, alpha: Any = DEFAULT_ALPHA) -> StratumLabel:
    """Classify a Shah normal form into the first stratum whose condition holds."""
    rows = {r.i: r for r in table1()}
    for i, holds in shah_conditions(inp):
        if holds:
            r = rows[i]
            return StratumLabel(i, r.kst, r.weights.at(alpha), tuple(r.weights.labels()), r.singularity)
    return OUTSIDE


def monomials_of_degree(d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of weighted degree d on P(1,1,1,1,2)."""
    out = []

    def rec(i: int, left: int, acc: list[int]) -> None:
        if i == len(AMBIENT):
            if left == 0:
                out.append(tuple(acc))
            return
        w = AMBIENT[i].weight
        for k in range(left // w + 1):
            rec(i + 1, left - k * w, acc + [k])

    rec(0, d, [])
    return out


def weight_order_signature(lam: OneParamSubgroup, degrees: Sequence[int] = (2, 4)) -> tuple:
    """Sign pattern of pairwise weight differences among monomials of given degrees."""
    monos = [e for d in degrees for e in monomials_of_degree(d)]
    ws = [lam.weight(e) for e in monos]
    return tuple((a > b) - (a < b) for i, a in enumerate(ws) for b in ws[i + 1:])


def stratification_stable(row: StratumRow, alphas: Sequence[Any] = (DEFAULT_ALPHA, CHECK_ALPHA)) -> bool:
    """Whether the ordering of monomial weights is the same for every alpha given."""
    sigs = {weight_order_signature(row.weights.at(a)) for a in alphas}
    return len(sigs) == 1
