"""Toric bookkeeping for deformations of a 3-dimensional toric singularity.

Cones live in Z^3 (or Z^2) and are given by integer ray generators.  The
deformation side follows the lattice-basis route: slice the cone at height
one to get a lattice polygon Q, read its edge vectors d^1..d^N
counterclockwise, and describe the versal base through the equations
g_k(t) = sum_i t_i^k d^i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Mapping, Sequence

from .algebra import MultiPoly, Q, fmt, poly_ring

IntVec = tuple[int, ...]
QVec = tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# small exact linear algebra


def rref(rows: Sequence[Sequence[Any]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    M = [[Q(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        lead = M[r][c]
        M[r] = [x / lead for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(rows: Sequence[Sequence[Any]]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence[Any]], ncols: int) -> list[list[Fraction]]:
    R, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def det3(a: Sequence[Any], b: Sequence[Any], c: Sequence[Any]) -> Fraction:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix (zero rows dropped).

    Pivots are positive and entries above a pivot are reduced into [0, pivot).
    """
    M = [list(map(int, r)) for r in rows]
    out_r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        # Euclid on column c among rows out_r..end
        while True:
            nz = [i for i in range(out_r, len(M)) if M[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(M[i][c]))
            M[out_r], M[i0] = M[i0], M[out_r]
            done = True
            for i in range(out_r + 1, len(M)):
                if M[i][c]:
                    f = M[i][c] // M[out_r][c]
                    M[i] = [a - f * b for a, b in zip(M[i], M[out_r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if out_r < len(M) and M[out_r][c] != 0:
            if M[out_r][c] < 0:
                M[out_r] = [-a for a in M[out_r]]
            p = M[out_r][c]
            for i in range(out_r):
                f = M[i][c] // p
                M[i] = [a - f * b for a, b in zip(M[i], M[out_r])]
            out_r += 1
    return [r for r in M[:out_r]]


def _primitive(v: Sequence[Any]) -> IntVec:
    fr = [Q(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class Cone:
    """Full-dimensional strongly convex rational cone in Q^r, r in {2, 3}."""

    generators: tuple[IntVec, ...]

    def __post_init__(self) -> None:
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        if not gens:
            raise ValueError("a cone needs at least one generator")
        r = len(gens[0])
        if r not in (2, 3) or any(len(g) != r for g in gens):
            raise ValueError("generators must all lie in Z^2 or all in Z^3")
        if any(all(x == 0 for x in g) for g in gens):
            raise ValueError("zero generator")
        if rank(gens) != r:
            raise ValueError("cone is not full-dimensional")
        object.__setattr__(self, "generators", gens)
        normals = _facet_normals(gens)
        total = [sum(n[i] for n in normals) for i in range(r)]
        if not normals or any(_dot(total, g) <= 0 for g in gens):
            raise ValueError("cone is not strongly convex")

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def facet_normals(self) -> list[IntVec]:
        """Primitive inward normals of the facets, i.e. rays of the dual cone."""
        return _facet_normals(self.generators)

    def rays(self) -> list[IntVec]:
        """Extremal primitive generators (redundant generators dropped)."""
        return sorted({_primitive(v) for v in _facet_normals(self.facet_normals())})

    def contains(self, v: Sequence[Any]) -> bool:
        return all(_dot(n, v) >= 0 for n in self.facet_normals())

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in sorted(self.generators)]


def _dot(a: Sequence[Any], b: Sequence[Any]) -> Any:
    return sum(x * y for x, y in zip(a, b))


def _facet_normals(gens: Sequence[Sequence[int]]) -> list[IntVec]:
    r = len(gens[0])
    cands: list[Sequence[Any]] = []
    if r == 2:
        for g in gens:
            cands += [(-g[1], g[0]), (g[1], -g[0])]
    else:
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                n = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
                if any(n):
                    cands += [n, tuple(-x for x in n)]
    out = set()
    for n in cands:
        dots = [_dot(n, g) for g in gens]
        if all(d >= 0 for d in dots):
            on_facet = [g for g, d in zip(gens, dots) if d == 0]
            if rank(on_facet) == r - 1:
                out.add(_primitive(n))
    return sorted(out)


def dual_cone(c: Cone) -> Cone:
    return Cone(tuple(c.facet_normals()))


# ---------------------------------------------------------------------------
# sublattices


def character_on_lattice(points: Sequence[Sequence[int]], weights: Sequence[int], n: int) -> IntVec:
    """The weight vector w mod n on Z^r with w . p = weight(p) for the given points.

    Used to transport a diagonal mu_n action on monomial coordinates to a
    character of the ambient character lattice.
    """
    if n < 1:
        raise ValueError("n must be positive")
    r = len(points[0])
    for w in _all_vectors(r, n):
        if all(_dot(w, p) % n == wt % n for p, wt in zip(points, weights)):
            return w
    raise ValueError("no character of Z^r reproduces those weights")


def _all_vectors(r: int, n: int):
    if r == 0:
        yield ()
        return
    for head in range(n):
        for tail in _all_vectors(r - 1, n):
            yield (head,) + tail


def invariant_sublattice(weights: Sequence[int], n: int) -> list[IntVec]:
    """Hermite basis of {m in Z^r : weights . m = 0 mod n}."""
    if n < 1:
        raise ValueError("n must be positive")
    r = len(weights)
    w = [int(x) % n for x in weights]
    # rows (w.m + n k, m) span a lattice whose first-coordinate-zero part is L
    aug = [[w[i]] + [int(i == j) for j in range(r)] for i in range(r)] + [[n] + [0] * r]
    gens = [row[1:] for row in hnf(aug) if row[0] == 0]
    basis = hnf(gens)
    _check_invariant_basis(basis, w, n)
    return [tuple(b) for b in basis]


def _check_invariant_basis(basis: Sequence[Sequence[int]], w: Sequence[int], n: int) -> None:
    # every basis vector is invariant, and the index equals n / gcd(w, n)
    if any(_dot(b, w) % n for b in basis):
        raise ArithmeticError("non-invariant vector in lattice basis")
    g = n
    for x in w:
        g = gcd(g, x)
    index = 1
    for i, b in enumerate(basis):
        index *= b[i]
    if index != n // g:
        raise ArithmeticError(f"lattice index {index} but expected {n // g}")


def dual_basis(basis: Sequence[Sequence[int]]) -> list[QVec]:
    """Rows v_j with <basis_i, v_j> = delta_ij."""
    r = len(basis)
    inv = []
    for j in range(r):
        rhs = [Fraction(int(i == j)) for i in range(r)]
        R, piv = rref([list(map(Fraction, basis[i])) + [rhs[i]] for i in range(r)])
        if len(piv) != r or piv[-1] == r:
            raise ValueError("basis is singular")
        inv.append(tuple(row[-1] for row in R))
    return inv


# ---------------------------------------------------------------------------
# polygons


class UnboundedSlice(ValueError):
    def __init__(self, ray: tuple[Fraction, Fraction]):
        super().__init__(f"slice is unbounded along the ray ({fmt(ray[0])}, {fmt(ray[1])})")
        self.ray = ray


@dataclass(frozen=True)
class Polytope2D:
    """Convex lattice polygon, vertices listed counterclockwise."""

    vertices: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        vs = tuple((Q(a), Q(b)) for a, b in self.vertices)
        if len(vs) < 3:
            raise ValueError("a polygon needs at least three vertices")
        n = len(vs)
        for i in range(n):
            a, b, c = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
            if _cross(_sub(b, a), _sub(c, b)) <= 0:
                raise ValueError("vertices must be in strictly convex counterclockwise position")
        object.__setattr__(self, "vertices", vs)

    @classmethod
    def from_points(cls, pts: Sequence[Sequence[Any]]) -> "Polytope2D":
        return cls(tuple(convex_hull([(Q(a), Q(b)) for a, b in pts])))

    def to_json(self) -> list[list[str]]:
        return [[fmt(a), fmt(b)] for a, b in self.vertices]

    @classmethod
    def from_json(cls, obj: Any) -> "Polytope2D":
        if isinstance(obj, Mapping):
            obj = obj["vertices"]
        return cls.from_points(obj)


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def convex_hull(pts: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Monotone chain; returns strict-corner vertices counterclockwise."""
    P = sorted(set(pts))
    if len(P) < 3:
        return P
    lower: list = []
    for p in P:
        while len(lower) >= 2 and _cross(_sub(lower[-1], lower[-2]), _sub(p, lower[-1])) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(P):
        while len(upper) >= 2 and _cross(_sub(upper[-1], upper[-2]), _sub(p, upper[-1])) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polytope_slice(sigma: Cone, v1: Sequence[Any], v2: Sequence[Any], v3: Sequence[Any]) -> Polytope2D:
    """Q = {(a, b) : a v1 + b v2 + v3 in sigma}."""
    if sigma.dim != 3:
        raise ValueError("slicing needs a cone in rank 3")
    v1, v2, v3 = (tuple(Q(x) for x in v) for v in (v1, v2, v3))
    if det3(v1, v2, v3) == 0:
        raise ValueError("v1, v2, v3 are not a basis")
    # half-planes  p a + q b + r >= 0
    halfplanes = [(_dot(n, v1), _dot(n, v2), _dot(n, v3)) for n in sigma.facet_normals()]
    # recession cone {(a, b) : p a + q b >= 0}: bounded iff it is {0}
    for cand in _recession_candidates(halfplanes):
        if all(p * cand[0] + q * cand[1] >= 0 for p, q, _ in halfplanes):
            raise UnboundedSlice(cand)
    pts = []
    for i, (p1, q1, r1) in enumerate(halfplanes):
        for p2, q2, r2 in halfplanes[i + 1:]:
            d = p1 * q2 - p2 * q1
            if d == 0:
                continue
            a = (-r1 * q2 + r2 * q1) / d
            b = (-p1 * r2 + p2 * r1) / d
            if all(p * a + q * b + r >= 0 for p, q, r in halfplanes):
                pts.append((a, b))
    hull = convex_hull(pts)
    if len(hull) < 3:
        raise ValueError("slice is degenerate (empty or lower-dimensional)")
    return Polytope2D(tuple(hull))


def _recession_candidates(halfplanes):
    # extreme rays of {p a + q b >= 0} lie on the boundary lines
    out = []
    for p, q, _ in halfplanes:
        if p or q:
            out += [(-q, p), (q, -p)]
    return out


# ---------------------------------------------------------------------------
# versal base


class HigherDegreeObstruction(ArithmeticError):
    def __init__(self, degree: int, residue: MultiPoly):
        super().__init__(f"higher-degree obstruction at degree {degree}: residue {residue}")
        self.degree = degree
        self.residue = residue


@dataclass(frozen=True)
class VersalReport:
    """Edges d^i, the linear relations among the t_i, and the base dimension."""

    edges: tuple[tuple[Fraction, Fraction], ...]
    relations: tuple[tuple[Fraction, ...], ...]
    base_dimension: int
    verified_up_to: int

    def relation_strings(self) -> list[str]:
        out = []
        for rel in self.relations:
            terms = [(c, f"t{i + 1}") for i, c in enumerate(rel) if c]
            s = ""
            for c, name in terms:
                sign = "-" if c < 0 else "+"
                mag = "" if abs(c) == 1 else f"{fmt(abs(c))}*"
                s += f" {sign} {mag}{name}" if s else f"{'-' if c < 0 else ''}{mag}{name}"
            out.append(s)
        return out

    def to_json(self) -> dict:
        return {
            "edges": [[fmt(a), fmt(b)] for a, b in self.edges],
            "relations": [[fmt(c) for c in r] for r in self.relations],
            "relations_text": self.relation_strings(),
            "base_dimension": self.base_dimension,
            "verified_up_to": self.verified_up_to,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "VersalReport":
        return cls(
            tuple((Q(a), Q(b)) for a, b in obj["edges"]),
            tuple(tuple(Q(c) for c in r) for r in obj["relations"]),
            int(obj["base_dimension"]),
            int(obj["verified_up_to"]),
        )


def edge_vectors(Q_: Polytope2D) -> list[tuple[Fraction, Fraction]]:
    """Edges counterclockwise, starting at the origin vertex if present,
    otherwise at the lexicographically smallest vertex."""
    vs = list(Q_.vertices)
    origin = (Fraction(0), Fraction(0))
    start = vs.index(origin) if origin in vs else vs.index(min(vs))
    vs = vs[start:] + vs[:start]
    return [_sub(vs[(i + 1) % len(vs)], vs[i]) for i in range(len(vs))]


def versal_base(Q_: Polytope2D, K: int = 12) -> VersalReport:
    """Linear relations of g_1 and a check that g_2..g_K vanish on them."""
    d = edge_vectors(Q_)
    N = len(d)
    D = [[e[0] for e in d], [e[1] for e in d]]
    R, _ = rref(D)
    relations = tuple(tuple(r) for r in R)
    base_dim = N - len(relations) - 1
    # parametrise the solution space and substitute into g_k
    kernel = nullspace(D, N)
    if not kernel:
        return VersalReport(tuple(d), relations, base_dim, K)
    _, s = poly_ring([f"s{j}" for j in range(len(kernel))])
    t = [sum((s[j] * kernel[j][i] for j in range(len(kernel))), s[0].zero()) for i in range(N)]
    for k in range(1, K + 1):
        powers = [ti**k for ti in t]
        for coord in (0, 1):
            g = sum((powers[i] * d[i][coord] for i in range(N)), s[0].zero())
            if not g.is_zero():
                raise HigherDegreeObstruction(k, g)
    return VersalReport(tuple(d), relations, base_dim, K)
