"""Exact polynomial algebra over the rationals.

Everything here works over :class:`fractions.Fraction`; no floating point
value is ever produced.  The module provides

* :class:`UPoly` -- dense univariate polynomials (used for volumes in t,
  invariants in c, dehomogenised binary forms),
* :class:`MultiPoly` -- sparse polynomials in named, weighted variables,
* :class:`BinaryForm` -- homogeneous forms in (u, v) of a fixed degree,
* :class:`PiecewisePoly` -- continuous piecewise polynomials on an interval,

plus the small functional API ``weighted_degree``, ``divides_linear``,
``ord_at_point`` and ``integrate``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import zip_longest
from math import gcd, isqrt
from typing import Any, Iterable, Mapping, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]


def Q(x: Any) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {x!r}") from exc
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def fmt(x: Scalar) -> str:
    """Serialise a rational as ``"p/q"`` (or ``"p"`` when q = 1)."""
    return str(Q(x))


# ---------------------------------------------------------------------------
# univariate


class UPoly:
    """Dense univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "UPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Any) -> "UPoly":
        return cls((c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def _coerce(self, other: Any) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly((other,))

    def __add__(self, other: Any) -> "UPoly":
        o = self._coerce(other)
        return UPoly(a + b for a, b in zip_longest(self.coeffs, o.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other: Any) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "UPoly":
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UPoly":
        if n < 0:
            raise ValueError("negative power")
        result, base = UPoly((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, t: Any) -> Any:
        acc: Any = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def compose(self, inner: "UPoly") -> "UPoly":
        acc = UPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> "UPoly":
        return UPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def antiderivative(self) -> "UPoly":
        return UPoly([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def definite_integral(self, lo: Any, hi: Any) -> Fraction:
        F = self.antiderivative()
        return Q(F(Q(hi))) - Q(F(Q(lo)))

    def divmod(self, d: "UPoly") -> tuple["UPoly", "UPoly"]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(d.coeffs) + 1, 0)
        lc = d.lead()
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + d.degree] / lc
            q[k] = c
            if c:
                for j, b in enumerate(d.coeffs):
                    rem[k + j] -= c * b
        return UPoly(q), UPoly(rem[: d.degree] if d.degree > 0 else [])

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        return UPoly(c / self.lead() for c in self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({[fmt(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return _format_terms(
            ((i,), c) for i, c in reversed(list(enumerate(self.coeffs))) if c
        ) if self.coeffs else "0"

    def rational_roots(self) -> list[Fraction]:
        """All rational roots, without multiplicity, in increasing order."""
        if self.is_zero():
            raise ValueError("the zero polynomial has every root")
        cs = list(self.coeffs)
        roots: set[Fraction] = set()
        while cs and cs[0] == 0:
            roots.add(Fraction(0))
            cs.pop(0)
        if len(cs) <= 1:
            return sorted(roots)
        den = 1
        for c in cs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in cs]
        p = UPoly(cs)
        for num in _divisors(abs(ints[0])):
            for dd in _divisors(abs(ints[-1])):
                for cand in (Fraction(num, dd), Fraction(-num, dd)):
                    if cand not in roots and p(cand) == 0:
                        roots.add(cand)
        return sorted(roots)

    def sturm_count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct real roots in the half-open interval (lo, hi]."""
        seq = [self, self.derivative()]
        while not seq[-1].is_zero():
            _, r = seq[-2].divmod(seq[-1])
            seq.append(-r)
        seq.pop()

        def changes(t: Fraction) -> int:
            signs = [s for s in (p(t) for p in seq) if s != 0]
            return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

        return changes(lo) - changes(hi)


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd (zero only if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [1]
    small, large = [], []
    for k in range(1, isqrt(n) + 1):
        if n % k == 0:
            small.append(k)
            if k != n // k:
                large.append(n // k)
    return small + large[::-1]


# ---------------------------------------------------------------------------
# multivariate


@dataclass(frozen=True)
class Var:
    name: str
    weight: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.weight, int) or self.weight <= 0:
            raise ValueError(f"variable weight must be a positive integer, got {self.weight!r}")


Exp = tuple[int, ...]


class MultiPoly:
    """Sparse polynomial with rational coefficients in weighted variables.

    Two polynomials can only be combined when their variable tuples agree.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[Var], terms: Mapping[Exp, Any] | None = None):
        self.vars: tuple[Var, ...] = tuple(vars)
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        clean: dict[Exp, Fraction] = {}
        n = len(self.vars)
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n or any(k < 0 for k in e):
                raise ValueError(f"bad exponent vector {e} for {n} variables")
            c = Q(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms: dict[Exp, Fraction] = {e: c for e, c in clean.items() if c}

    # construction -----------------------------------------------------
    @classmethod
    def gens(cls, vars: Sequence[Var]) -> list["MultiPoly"]:
        n = len(vars)
        return [cls(vars, {tuple(int(i == j) for j in range(n)): 1}) for i in range(n)]

    def const(self, c: Any) -> "MultiPoly":
        return MultiPoly(self.vars, {(0,) * len(self.vars): c})

    def zero(self) -> "MultiPoly":
        return MultiPoly(self.vars)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other: Any) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError("polynomials live in different rings")
            return other
        return self.const(other)

    def __add__(self, other: Any) -> "MultiPoly":
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "MultiPoly":
        o = self._coerce(other)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result, base = self.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # inspection -------------------------------------------------------
    def index(self, name: str) -> int:
        for i, v in enumerate(self.vars):
            if v.name == name:
                return i
        raise KeyError(f"no variable named {name!r}")

    def monomial_weight(self, e: Exp) -> int:
        return sum(k * v.weight for k, v in zip(e, self.vars))

    def weighted_degree(self) -> tuple[int, bool]:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        degs = {self.monomial_weight(e) for e in self.terms}
        return max(degs), len(degs) == 1

    def coeff(self, e: Exp) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exp, Fraction]]:
        """Terms in graded lex order (highest total degree first)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def collect(self, names: Sequence[str]) -> dict[Exp, "MultiPoly"]:
        """Group terms by the exponents of ``names``; coefficients keep all vars."""
        idx = [self.index(n) for n in names]
        out: dict[Exp, dict[Exp, Fraction]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            rest = tuple(0 if i in idx else k for i, k in enumerate(e))
            out.setdefault(key, {})[rest] = c
        return {k: MultiPoly(self.vars, t) for k, t in out.items()}

    def subs(self, mapping: Mapping[str, Any]) -> "MultiPoly":
        """Substitute polynomials (or scalars) for named variables."""
        images: list[MultiPoly | None] = [None] * len(self.vars)
        for name, img in mapping.items():
            images[self.index(name)] = self._coerce(img)
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k  # type: ignore[operator]
            return powers[(i, k)]

        out = self.zero()
        for e, c in self.terms.items():
            kept = tuple(0 if images[i] is not None else k for i, k in enumerate(e))
            term = MultiPoly(self.vars, {kept: c})
            for i, k in enumerate(e):
                if k and images[i] is not None:
                    term = term * power(i, k)
            out = out + term
        return out

    # serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": [{"name": v.name, "weight": v.weight} for v in self.vars],
            "terms": [{"exp": list(e), "coeff": fmt(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultiPoly":
        try:
            vars = [Var(str(v["name"]), int(v.get("weight", 1))) for v in obj["vars"]]
            terms: dict[Exp, Fraction] = {}
            for t in obj["terms"]:
                e = tuple(int(k) for k in t["exp"])
                terms[e] = terms.get(e, Fraction(0)) + Q(t["coeff"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        return cls(vars, terms)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = [v.name for v in self.vars]
        return _format_terms(self.sorted_terms(), names)


def poly_ring(names: str | Sequence[str], weights: Sequence[int] | None = None):
    """Return ``(vars, gens)`` for a weighted polynomial ring.

    >>> V, (x, y) = poly_ring("x y", (1, 2))
    >>> str(x**2 + y)
    'x^2 + y'
    """
    if isinstance(names, str):
        names = names.split()
    weights = list(weights) if weights is not None else [1] * len(names)
    vars = tuple(Var(n, w) for n, w in zip(names, weights, strict=True))
    return vars, MultiPoly.gens(vars)


def _format_terms(terms: Iterable[tuple[Exp, Fraction]], names: Sequence[str] = ("t",)) -> str:
    parts: list[str] = []
    for e, c in terms:
        mono = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
        )
        mag = abs(c)
        if not mono:
            body = fmt(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{fmt(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# binary forms


Point = tuple[Fraction, Fraction]


def normalize_point(p: Sequence[Any]) -> Point:
    """Scale a projective point [a:b] to a canonical representative."""
    if len(p) != 2:
        raise ValueError("a point of P^1 has two coordinates")
    a, b = Q(p[0]), Q(p[1])
    if a == 0 and b == 0:
        raise ValueError("[0:0] is not a point of P^1")
    return (Fraction(1), b / a) if a else (Fraction(0), Fraction(1))


class BinaryForm:
    """Homogeneous form in (u, v).

    ``coeffs[i]`` is the coefficient of ``u^(d-i) v^i``.  The zero form is
    allowed (degree is kept) and reported by :meth:`is_zero`.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, coeffs: Sequence[Any], degree: int | None = None):
        cs = tuple(Q(c) for c in coeffs)
        if degree is None:
            degree = len(cs) - 1
        if degree < 0 or len(cs) != degree + 1:
            raise ValueError(f"a degree {degree} form needs {degree + 1} coefficients, got {len(cs)}")
        self.degree = degree
        self.coeffs = cs

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls([0] * (degree + 1))

    @classmethod
    def monomial(cls, i: int, j: int, c: Any = 1) -> "BinaryForm":
        """``c * u^i v^j``."""
        cs = [0] * (i + j + 1)
        cs[j] = c
        return cls(cs)

    @classmethod
    def linear(cls, alpha: Any, beta: Any) -> "BinaryForm":
        """The linear form ``alpha*u + beta*v``."""
        return cls([alpha, beta])

    @classmethod
    def vanishing_at(cls, p: Sequence[Any]) -> "BinaryForm":
        """Linear form vanishing at [a:b], namely b*u - a*v."""
        a, b = normalize_point(p)
        return cls([b, -a])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "BinaryForm") -> None:
        if not isinstance(other, BinaryForm) or other.degree != self.degree:
            raise ValueError("forms of different degrees cannot be added")

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        return BinaryForm([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        return BinaryForm([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "BinaryForm":
        return BinaryForm([-c for c in self.coeffs])

    def __mul__(self, other: Any) -> "BinaryForm":
        if isinstance(other, BinaryForm):
            out = [Fraction(0)] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return BinaryForm(out)
        c = Q(other)
        return BinaryForm([c * a for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BinaryForm":
        if n < 0:
            raise ValueError("negative power")
        result = BinaryForm([1])
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, u: Any, v: Any) -> Any:
        d = self.degree
        return sum(c * u ** (d - i) * v ** i for i, c in enumerate(self.coeffs) if c)

    def __repr__(self) -> str:
        return f"BinaryForm({[fmt(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        d = self.degree
        return _format_terms((((d - i, i), c) for i, c in enumerate(self.coeffs) if c), ("u", "v"))

    def to_json(self) -> list[str]:
        return [fmt(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj: Sequence[Any], degree: int | None = None) -> "BinaryForm":
        if not isinstance(obj, (list, tuple)):
            raise ValueError("a binary form is a list of coefficients")
        return cls(obj, degree)

    # operations -------------------------------------------------------
    def swap(self) -> "BinaryForm":
        """f(v, u)."""
        return BinaryForm(self.coeffs[::-1])

    def transform(self, m: Sequence[Sequence[Any]]) -> "BinaryForm":
        """f(m00*u + m01*v, m10*u + m11*v)."""
        (a, b), (c, d) = m
        U, V = BinaryForm.linear(a, b), BinaryForm.linear(c, d)
        out = BinaryForm.zero(self.degree)
        n = self.degree
        for i, coef in enumerate(self.coeffs):
            if coef:
                out = out + (U ** (n - i)) * (V ** i) * coef
        return out

    def divmod_linear(self, ell: "BinaryForm") -> tuple["BinaryForm", Fraction]:
        """Divide by a linear form; return (quotient, remainder scalar)."""
        if ell.degree != 1:
            raise ValueError("divisor must be a linear form")
        if ell.is_zero():
            raise ZeroDivisionError("division by the zero linear form")
        if self.degree == 0:
            return BinaryForm([0]), self.coeffs[0]
        al, be = ell.coeffs
        f, d = self.coeffs, self.degree
        q = [Fraction(0)] * d
        if al != 0:
            q[0] = f[0] / al
            for i in range(1, d):
                q[i] = (f[i] - be * q[i - 1]) / al
            rem = f[d] - be * q[d - 1]
        else:
            # ell = be*v: divisible iff the u^d coefficient vanishes
            for i in range(d):
                q[i] = f[i + 1] / be
            rem = f[0]
        return BinaryForm(q), rem

    def to_upoly(self) -> UPoly:
        """Dehomogenise at u = 1: f(1, x)."""
        return UPoly(self.coeffs)

    @classmethod
    def from_upoly(cls, p: UPoly, degree: int) -> "BinaryForm":
        if p.degree > degree:
            raise ValueError("polynomial degree exceeds form degree")
        return cls(list(p.coeffs) + [0] * (degree - len(p.coeffs) + 1))

    def order_at_infinity(self) -> int:
        """Order of vanishing at [0:1], i.e. the power of u dividing f."""
        if self.is_zero():
            raise ValueError("order undefined for zero form")
        last = max(i for i, c in enumerate(self.coeffs) if c)
        return self.degree - last

    def linear_factors(self) -> list[tuple[Point, int]]:
        """Rational points where f vanishes, with multiplicities."""
        if self.is_zero():
            raise ValueError("the zero form vanishes everywhere")
        out: list[tuple[Point, int]] = []
        k = self.order_at_infinity()
        if k:
            out.append(((Fraction(0), Fraction(1)), k))
        p = self.to_upoly()
        if p.degree > 0:
            for r in p.rational_roots():
                out.append(((Fraction(1), r), ord_at_point(self, (1, r))))
        return out


def binary_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Greatest common divisor of two forms, normalised to be monic.

    gcd(0, g) = g up to scaling; gcd(0, 0) is refused.
    """
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero forms is undefined")
    if f.is_zero():
        f, g = g, f
    if g.is_zero():
        return _monic_form(f)
    k = min(f.order_at_infinity(), g.order_at_infinity())
    h = upoly_gcd(f.to_upoly(), g.to_upoly())
    deg = h.degree + k
    return BinaryForm(list(h.coeffs) + [0] * k, deg) if deg >= 0 else BinaryForm([1])


def _monic_form(f: BinaryForm) -> BinaryForm:
    lead = next(c for c in reversed(f.coeffs) if c)
    return f * (1 / lead)


def divides_linear(ell: BinaryForm, f: BinaryForm) -> bool:
    """Whether the linear form ``ell`` divides ``f`` (the zero form counts)."""
    if ell.degree != 1:
        raise ValueError("first argument must be a linear form")
    if ell.is_zero():
        raise ValueError("the zero linear form divides nothing")
    if f.is_zero():
        return True
    if f.degree == 0:
        return False
    return f.divmod_linear(ell)[1] == 0


def ord_at_point(f: BinaryForm, p: Sequence[Any]) -> int:
    """Order of vanishing of ``f`` at the point ``p = [a:b]`` of P^1."""
    if f.is_zero():
        raise ValueError("order undefined for zero form")
    ell = BinaryForm.vanishing_at(p)
    k = 0
    while f.degree > 0:
        q, r = f.divmod_linear(ell)
        if r != 0:
            break
        f, k = q, k + 1
    return k


def weighted_degree(f: MultiPoly) -> tuple[int, bool]:
    """(maximal weighted degree, whether f is weighted homogeneous)."""
    return f.weighted_degree()


# ---------------------------------------------------------------------------
# piecewise polynomials


class PiecewisePoly:
    """Continuous piecewise polynomial on [t_0, t_n].

    ``pieces[i]`` is valid on ``[breakpoints[i], breakpoints[i+1]]``.
    Continuity at interior breakpoints is checked on construction.
    """

    __slots__ = ("breakpoints", "pieces")

    def __init__(self, breakpoints: Sequence[Any], pieces: Sequence[UPoly | Sequence[Any]]):
        bps = tuple(Q(b) for b in breakpoints)
        ps = tuple(p if isinstance(p, UPoly) else UPoly(p) for p in pieces)
        if len(bps) < 2:
            raise ValueError("need at least two breakpoints")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(ps) != len(bps) - 1:
            raise ValueError("need exactly one piece per interval")
        for i in range(1, len(ps)):
            left, right = ps[i - 1](bps[i]), ps[i](bps[i])
            if left != right:
                raise ValueError(
                    f"discontinuous at t = {fmt(bps[i])}: {fmt(left)} != {fmt(right)}"
                )
        self.breakpoints = bps
        self.pieces = ps

    @property
    def start(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def end(self) -> Fraction:
        return self.breakpoints[-1]

    def piece_at(self, t: Any) -> UPoly:
        t = Q(t)
        if not self.start <= t <= self.end:
            raise ValueError(f"t = {fmt(t)} outside [{fmt(self.start)}, {fmt(self.end)}]")
        for i, p in enumerate(self.pieces):
            if t <= self.breakpoints[i + 1]:
                return p
        return self.pieces[-1]

    def __call__(self, t: Any) -> Fraction:
        return Q(self.piece_at(t)(Q(t)))

    def integrate(self) -> Fraction:
        return sum(
            (p.definite_integral(a, b) for p, a, b in zip(self.pieces, self.breakpoints, self.breakpoints[1:])),
            Fraction(0),
        )

    def to_json(self) -> dict:
        return {
            "breakpoints": [fmt(b) for b in self.breakpoints],
            "pieces": [[fmt(c) for c in p.coeffs] for p in self.pieces],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PiecewisePoly":
        try:
            return cls(obj["breakpoints"], [list(p) for p in obj["pieces"]])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed piecewise polynomial JSON: {exc}") from exc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.pieces == other.pieces

    def __repr__(self) -> str:
        segs = ", ".join(
            f"[{fmt(a)},{fmt(b)}]: {p}" for p, a, b in zip(self.pieces, self.breakpoints, self.breakpoints[1:])
        )
        return f"PiecewisePoly({segs})"


def integrate(P: PiecewisePoly) -> Fraction:
    """Exact integral of a piecewise polynomial over its whole domain."""
    return P.integrate()
