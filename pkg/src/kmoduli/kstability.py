"""Valuative K-stability bookkeeping for log Fano pairs.

A divisorial valuation over a pair (X, cD) is summarised by a
:class:`ValuationProfile`: its log discrepancy, affine in c; the volume
function t -> vol(L - tE) for the reference polarisation L; and the affine
factor by which the polarisation -K_X - cD rescales L.  From that data

    S(c)    = scale(c) * integral(vol) / vol(0)
    beta(c) = A(c) - S(c)

and the K-semistability threshold of the valuation is the smallest root of
beta in (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .algebra import PiecewisePoly, Q, UPoly, fmt, upoly_gcd
from .data import load_json

PROFILES_FILE = "profiles.json"

ALPHA_NOTE = (
    "alpha is the quotient (1 - max c_i) / (2 - sum c_i); the same expression "
    "typeset as a product does not reproduce the quoted value 24/11"
)


# ---------------------------------------------------------------------------
# intersection numbers


@dataclass(frozen=True)
class IntersectionRing3:
    """Symmetric triple intersection numbers on a threefold."""

    basis: tuple[str, ...]
    products: Mapping[tuple[str, str, str], Fraction]

    def __post_init__(self) -> None:
        norm: dict[tuple[str, str, str], Fraction] = {}
        for key, val in self.products.items():
            k = tuple(sorted(key, key=self.basis.index))
            if len(k) != 3 or any(n not in self.basis for n in k):
                raise ValueError(f"bad intersection key {key!r}")
            v = Q(val)
            if k in norm and norm[k] != v:
                raise ValueError(f"conflicting values for {k}")
            norm[k] = v
        missing = [
            (a, b, c)
            for i, a in enumerate(self.basis)
            for j, b in enumerate(self.basis[i:], i)
            for c in self.basis[j:]
            if (a, b, c) not in norm
        ]
        if missing:
            raise ValueError(f"missing intersection numbers: {missing}")
        object.__setattr__(self, "products", norm)

    def triple(self, a: str, b: str, c: str) -> Fraction:
        return self.products[tuple(sorted((a, b, c), key=self.basis.index))]

    @classmethod
    def from_json(cls, obj: Mapping) -> "IntersectionRing3":
        basis = tuple(obj["basis"])
        prods = {tuple(k.split(",")): Q(v) for k, v in obj["products"].items()}
        return cls(basis, prods)


def expand_cube(ring: IntersectionRing3, cls: Mapping[str, Any]) -> UPoly:
    """Self-intersection (sum_i a_i D_i)^3 where each a_i may be a UPoly in t."""
    coeffs = {k: (v if isinstance(v, UPoly) else UPoly.const(v)) for k, v in cls.items()}
    for k in coeffs:
        if k not in ring.basis:
            raise ValueError(f"{k!r} is not a basis divisor")
    total = UPoly()
    names = list(coeffs)
    for a in names:
        for b in names:
            for c in names:
                total = total + coeffs[a] * coeffs[b] * coeffs[c] * ring.triple(a, b, c)
    return total


# ---------------------------------------------------------------------------
# valuation profiles


def _affine(pair: Sequence[Any]) -> tuple[Fraction, Fraction]:
    a, b = pair
    return Q(a), Q(b)


@dataclass(frozen=True)
class ValuationProfile:
    """Data of one divisorial valuation; see the module docstring.

    ``A_affine = (A0, A1)`` means A(c) = A0 + A1*c, likewise ``scale_affine``.
    ``c_range = (lo, hi)`` is the half-open range [lo, hi) on which the
    valuation is declared to make sense (A > 0 there).
    """

    name: str
    A_affine: tuple[Fraction, Fraction]
    vol: PiecewisePoly
    scale_affine: tuple[Fraction, Fraction]
    T_end: Fraction
    c_range: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    nef_check: Mapping[str, Any] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "A_affine", _affine(self.A_affine))
        object.__setattr__(self, "scale_affine", _affine(self.scale_affine))
        object.__setattr__(self, "c_range", _affine(self.c_range))
        object.__setattr__(self, "T_end", Q(self.T_end))
        vol = self.vol
        if vol.start != 0:
            raise ValueError(f"{self.name}: volume must start at t = 0")
        if vol.end != self.T_end:
            raise ValueError(f"{self.name}: volume domain ends at {fmt(vol.end)}, T_end is {fmt(self.T_end)}")
        if vol(0) <= 0:
            raise ValueError(f"{self.name}: vol(0) must be positive")
        if vol(self.T_end) != 0:
            raise ValueError(f"{self.name}: vol(T_end) = {fmt(vol(self.T_end))}, expected 0")
        for p, a, b in zip(vol.pieces, vol.breakpoints, vol.breakpoints[1:]):
            if not nonnegative_on(-p.derivative(), a, b):
                raise ValueError(f"{self.name}: volume increases somewhere on [{fmt(a)}, {fmt(b)}]")
        lo, hi = self.c_range
        if not lo < hi:
            raise ValueError(f"{self.name}: empty c-range")
        if self.A(lo) <= 0 or self.A(hi) < 0:
            raise ValueError(f"{self.name}: log discrepancy must be positive on [{fmt(lo)}, {fmt(hi)})")

    def A(self, c: Any) -> Fraction:
        a0, a1 = self.A_affine
        return a0 + a1 * Q(c)

    def scale(self, c: Any) -> Fraction:
        s0, s1 = self.scale_affine
        return s0 + s1 * Q(c)

    def A_poly(self) -> UPoly:
        return UPoly(self.A_affine)

    def S_poly(self) -> UPoly:
        """S as a polynomial in c."""
        return UPoly(self.scale_affine) * (self.vol.integrate() / self.vol(0))

    @classmethod
    def from_json(cls, name: str, obj: Mapping) -> "ValuationProfile":
        vol = PiecewisePoly.from_json(obj["vol"])
        return cls(
            name=name,
            A_affine=_affine(obj["A"]),
            vol=vol,
            scale_affine=_affine(obj["scale"]),
            T_end=Q(obj.get("T_end", fmt(vol.end))),
            c_range=_affine(obj.get("c_range", ("0", "1"))),
            nef_check=obj.get("nef_check"),
        )

    def to_json(self) -> dict:
        out = {
            "A": [fmt(x) for x in self.A_affine],
            "scale": [fmt(x) for x in self.scale_affine],
            "vol": self.vol.to_json(),
            "T_end": fmt(self.T_end),
            "c_range": [fmt(x) for x in self.c_range],
        }
        if self.nef_check is not None:
            out["nef_check"] = self.nef_check
        return out


def nef_segment_agrees(p: ValuationProfile) -> bool:
    """Compare the first volume piece with the cube of the recorded nef class.

    Profiles without a ``nef_check`` block trivially agree.
    """
    if p.nef_check is None:
        return True
    ring = IntersectionRing3.from_json(p.nef_check["ring"])
    cls = {k: UPoly(v) for k, v in p.nef_check["class"].items()}
    hi = Q(p.nef_check["until"])
    cube = expand_cube(ring, cls)
    k = p.vol.breakpoints.index(hi)
    return all(piece == cube for piece in p.vol.pieces[:k])


def s_invariant(p: ValuationProfile, c: Any) -> Fraction:
    c = Q(c)
    return p.scale(c) * p.vol.integrate() / p.vol(0)


def beta(p: ValuationProfile, c: Any) -> Fraction:
    return p.A(c) - s_invariant(p, c)


@dataclass(frozen=True)
class Threshold:
    """Outcome of the threshold search.

    ``status`` is one of ``"wall"`` (exact rational root), ``"irrational"``
    (an isolating interval is given instead), ``"no_wall"`` or
    ``"degenerate"`` (beta vanishes identically).
    """

    status: str
    value: Fraction | None
    beta: UPoly
    interval: tuple[Fraction, Fraction] | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "status": self.status,
            "value": None if self.value is None else fmt(self.value),
            "beta": [fmt(x) for x in self.beta.coeffs],
        }
        if self.interval is not None:
            out["interval"] = [fmt(x) for x in self.interval]
        return out


def smallest_root_in(poly: UPoly, lo: Fraction, hi: Fraction) -> Threshold:
    """Smallest root of ``poly`` in the open interval (lo, hi)."""
    if poly.is_zero():
        return Threshold("degenerate", Fraction(lo), poly)
    rats = [r for r in poly.rational_roots() if lo < r < hi]
    sq = poly.divmod(upoly_gcd(poly, poly.derivative()))[0]
    a, b = lo, hi
    if rats:
        b = rats[0]

    def count(x: Fraction, y: Fraction) -> int:
        # roots in the open interval (x, y)
        return sq.sturm_count(x, y) - (1 if sq(y) == 0 else 0)

    if count(a, b) == 0:
        if rats:
            return Threshold("wall", rats[0], poly)
        return Threshold("no_wall", None, poly)
    # an irrational root lies left of every rational one: bisect it down
    while b - a > Fraction(1, 2**40):
        m = (a + b) / 2
        if sq(m) == 0:
            return Threshold("wall", m, poly)
        if count(a, m) > 0:
            b = m
        else:
            a = m
    return Threshold("irrational", None, poly, (a, b))


def kst_threshold(p: ValuationProfile) -> Threshold:
    """Smallest c in (0, 1) where the valuation's beta changes sign."""
    return smallest_root_in(p.A_poly() - p.S_poly(), Fraction(0), Fraction(1))


def almost_cy_S(n: int, N: int) -> Fraction:
    """S-invariant of D for the pair (X, N/(N+1) D) with D ~ -K_X, dim X = n.

    Computed through the general profile machinery with vol(D - tD) = (1-t)^n.
    """
    if n < 1 or N < 1:
        raise ValueError("need n >= 1 and N >= 1")
    prof = ValuationProfile(
        name=f"almost_cy_{n}_{N}",
        A_affine=(Fraction(1), Fraction(-1)),
        vol=PiecewisePoly([0, 1], [UPoly([1, -1]) ** n]),
        scale_affine=(Fraction(1), Fraction(-1)),
        T_end=Fraction(1),
    )
    return s_invariant(prof, Fraction(N, N + 1))


# ---------------------------------------------------------------------------
# cone construction, local volumes, alpha


def cone_beta(beta_V: Any, m: Any, c: Any, t: Any) -> Fraction:
    """beta of the valuation t*ord_V + ord_0 on the cone over a quadric.

    Valid for c in [0, 1/2); m = ord_E(C) >= 0.  At t = 1/m the value is
    beta_V / m, and for m = 0 it is t beta_V + (c+1)/3.
    """
    beta_V, m, c, t = Q(beta_V), Q(m), Q(c), Q(t)
    if not 0 <= c < Fraction(1, 2):
        raise ValueError("c must lie in [0, 1/2)")
    if m < 0:
        raise ValueError("ord_E(C) must be non-negative")
    if t < 0:
        raise ValueError("t must be non-negative")
    return t * beta_V + c * t * m + (c + 1) / 3 - (4 * c + 1) / 3 * min(Fraction(1), t * m)


@dataclass(frozen=True)
class NormalizedVolCert:
    """Inputs to the local-volume instability test at a singular point.

    ``pair_vol`` is (-K_X - cS)^3 as a polynomial in c; ``ord_E_S`` is a lower
    bound for the vanishing order of the boundary along E.
    """

    name: str
    A_E: Fraction
    ord_E_S: Fraction
    local_vol: Fraction
    pair_vol: UPoly

    def __post_init__(self) -> None:
        for attr in ("A_E", "ord_E_S", "local_vol"):
            val = Q(getattr(self, attr))
            if val <= 0:
                raise ValueError(f"{self.name}: {attr} must be positive")
            object.__setattr__(self, attr, val)

    @classmethod
    def from_json(cls, name: str, obj: Mapping) -> "NormalizedVolCert":
        in_1mc = UPoly(obj["pair_vol_in_one_minus_c"])
        return cls(
            name=name,
            A_E=Q(obj["A_E"]),
            ord_E_S=Q(obj["ord_E_S"]),
            local_vol=Q(obj["local_vol"]),
            pair_vol=in_1mc.compose(UPoly([1, -1])),
        )


@dataclass(frozen=True)
class VolVerdict:
    verdict: str  # "unstable" or "inconclusive"
    lhs: Fraction
    rhs: Fraction
    c: Fraction

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "lhs": fmt(self.lhs), "rhs": fmt(self.rhs), "c": fmt(self.c)}


def normalized_vol_unstable(cert: NormalizedVolCert, c: Any) -> VolVerdict:
    """Compare (27/64) vol(-K - cS) with an upper bound for the local volume.

    The bound (A_E - c*ord_E S)^3 * vol(E) dominates the normalised volume of
    the pair at the point, so ``lhs > rhs`` certifies K-instability.
    """
    c = Q(c)
    if not 0 <= c < 1:
        raise ValueError("c must lie in [0, 1)")
    lhs = Fraction(27, 64) * cert.pair_vol(c)
    log_disc = cert.A_E - c * cert.ord_E_S
    rhs = log_disc**3 * cert.local_vol
    if log_disc <= 0:
        return VolVerdict("inconclusive", lhs, rhs, c)
    return VolVerdict("unstable" if lhs > rhs else "inconclusive", lhs, rhs, c)


def alpha_p1(coeffs: Sequence[Any]) -> Fraction:
    """alpha-invariant of (P^1, sum c_i p_i) at distinct points p_i."""
    cs = [Q(c) for c in coeffs]
    if any(not 0 <= c < 1 for c in cs):
        raise ValueError("boundary coefficients must lie in [0, 1)")
    total = sum(cs, Fraction(0))
    if total >= 2:
        raise ValueError("not log Fano: sum of coefficients is at least 2")
    return (1 - max(cs, default=Fraction(0))) / (2 - total)


def alpha_p1_report(coeffs: Sequence[Any]) -> dict:
    return {
        "coeffs": [fmt(Q(c)) for c in coeffs],
        "alpha": fmt(alpha_p1(coeffs)),
        "convention": ALPHA_NOTE,
    }


# ---------------------------------------------------------------------------
# helpers


def nonnegative_on(p: UPoly, a: Fraction, b: Fraction) -> bool:
    """Exact test that p >= 0 on the closed interval [a, b]."""
    if p.is_zero():
        return True
    if p(a) < 0 or p(b) < 0:
        return False
    odd = _odd_part(p)
    inside = odd.sturm_count(a, b) - (1 if odd(b) == 0 else 0) if odd.degree > 0 else 0
    if inside:
        return False
    # sign is constant on (a, b); probe points until p is nonzero
    k = 2
    while True:
        for j in range(1, k):
            s = p(a + (b - a) * j / k)
            if s != 0:
                return s > 0
        k += 1


def _odd_part(p: UPoly) -> UPoly:
    """Product of the square-free factors of odd multiplicity (Yun)."""
    a0 = upoly_gcd(p, p.derivative())
    b = p.divmod(a0)[0]
    c = p.derivative().divmod(a0)[0]
    d = c - b.derivative()
    out, i = UPoly([1]), 1
    while b.degree > 0:
        a = upoly_gcd(b, d)
        if i % 2:
            out = out * a
        b = b.divmod(a)[0]
        c = d.divmod(a)[0]
        d = c - b.derivative()
        i += 1
    return out


def load_profiles() -> dict[str, ValuationProfile | NormalizedVolCert]:
    raw = load_json(PROFILES_FILE)
    out: dict[str, ValuationProfile | NormalizedVolCert] = {}
    for name, obj in raw["valuations"].items():
        out[name] = ValuationProfile.from_json(name, obj)
    for name, obj in raw["certificates"].items():
        out[name] = NormalizedVolCert.from_json(name, obj)
    return out
