"""Projective primitives: points, lines in P^3, the pencil of planes through a
line, restriction of forms to planes, and tangent planes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from .exactalg import MPoly, RatFunc, det

__all__ = [
    "GeometryError",
    "NotOnSurfaceError",
    "SingularPointError",
    "INF",
    "Infinity",
    "parse_param",
    "param_str",
    "normalize_coords",
    "ProjPoint",
    "LineInP3",
    "PlaneParam",
    "nullspace",
    "rank",
    "pencil_plane",
    "pencil_parameter_of",
    "restrict_form",
    "tangent_plane",
    "gradient_at",
    "cross",
    "dot",
    "P3_VARS",
    "PLANE_VARS",
]

P3_VARS = ("X", "Y", "Z", "W")
PLANE_VARS = ("U", "V", "T")


class GeometryError(ValueError):
    pass


class NotOnSurfaceError(GeometryError):
    pass


class SingularPointError(GeometryError):
    pass


class Infinity:
    """The point at infinity of the pencil parameter line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()


def parse_param(value):
    if value is INF or (isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo")):
        return INF
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise GeometryError(f"not a pencil parameter: {value!r}")


def param_str(t):
    return "inf" if t is INF else str(t)


# ---------------------------------------------------------------------------


def _is_rational(c):
    return isinstance(c, (int, Fraction))


def normalize_coords(coords):
    """Canonical representative of a projective point.

    Rational coordinates become a primitive integer vector whose first nonzero
    entry is positive.  Coordinates in an extension ring are scaled so the first
    nonzero entry is 1.
    """
    coords = list(coords)
    if all(c == 0 for c in coords):
        raise GeometryError("the zero vector is not a projective point")
    if all(_is_rational(c) for c in coords):
        fr = [Fraction(c) for c in coords]
        den = reduce(lcm, (c.denominator for c in fr))
        ints = [int(c * den) for c in fr]
        g = reduce(gcd, (abs(c) for c in ints if c))
        lead = next(c for c in ints if c)
        if lead < 0:
            g = -g
        return tuple(Fraction(c // g) for c in ints)
    lead = next(c for c in coords if c != 0)
    inv = 1 / lead
    out = []
    for c in coords:
        v = c * inv
        while hasattr(v, "is_scalar") and v.is_scalar():
            v = v.coords[0]
        if isinstance(v, RatFunc) and v.den.degree == 0 and v.num.degree <= 0:
            v = v.num.coeffs[0] if v.num else Fraction(0)
        out.append(v)
    if all(_is_rational(c) for c in out):
        return normalize_coords(out)
    return tuple(out)


class ProjPoint:
    """Point of P^n with canonically normalized coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = normalize_coords(coords)

    @property
    def dim(self):
        return len(self.coords) - 1

    def is_rational(self):
        return all(_is_rational(c) for c in self.coords)

    def int_coords(self):
        if not self.is_rational():
            raise GeometryError("point is not rational")
        return [int(c) for c in self.coords]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if isinstance(other, ProjPoint):
            return self.coords == other.coords
        if isinstance(other, (list, tuple)):
            return self == ProjPoint(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"ProjPoint([{', '.join(str(c) for c in self.coords)}])"

    def to_json(self):
        return [str(c) for c in self.coords]


# ---------------------------------------------------------------------------
# rational linear algebra


def _rref(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    if not rows:
        return 0
    return len(_rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of the right nullspace, each vector primitive with positive lead."""
    if not rows:
        n = ncols
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    ncols = len(rows[0])
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(normalize_coords(v))
    return basis


def dot(a, b):
    acc = 0
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


# ---------------------------------------------------------------------------


class LineInP3:
    """A line in P^3 given by two rational span points.

    The dual forms are the canonical nullspace basis of the span matrix; each
    is a primitive integer linear form with positive leading coefficient.
    """

    def __init__(self, p0, p1, vars=P3_VARS):
        self.vars = tuple(vars)
        p0, p1 = ProjPoint(p0), ProjPoint(p1)
        if not (p0.is_rational() and p1.is_rational()):
            raise GeometryError("span points of a line must be rational")
        if rank([p0.coords, p1.coords]) != 2:
            raise GeometryError("span points of a line must be distinct")
        self.span_points = (p0, p1)
        null = nullspace([p0.coords, p1.coords])
        if len(null) != len(self.vars) - 2:
            raise GeometryError("line must be a line")
        self.dual_vectors = tuple(null)
        self.dual_forms = tuple(MPoly.linear(self.vars, v) for v in null)

    @property
    def ambient_dim(self):
        return len(self.vars) - 1

    def contains(self, point):
        return all(dot(v, point) == 0 for v in self.dual_vectors)

    def point_at(self, u, v):
        p0, p1 = self.span_points
        return tuple(u * a + v * b for a, b in zip(p0.coords, p1.coords))

    def line_coords(self, point):
        """(u, v) with point proportional to u*P0 + v*P1; error if not on the line."""
        if not self.contains(point):
            raise GeometryError(f"{point} is not on the line")
        p0, p1 = self.span_points
        for i in range(len(p0.coords)):
            for j in range(i + 1, len(p0.coords)):
                d = p0[i] * p1[j] - p0[j] * p1[i]
                if d != 0:
                    u = (point[i] * p1[j] - point[j] * p1[i]) / d
                    v = (p0[i] * point[j] - p0[j] * point[i]) / d
                    return u, v
        raise GeometryError("degenerate line")

    def parametrization(self, names=("U", "V")):
        """Linear forms in two variables giving the map P^1 -> line."""
        pv = tuple(names)
        u, v = MPoly.gens(pv)
        p0, p1 = self.span_points
        return [u * a + v * b for a, b in zip(p0.coords, p1.coords)]

    def moving_point(self, t):
        """Third point of the pencil plane at parameter t.

        With A, B the coefficient vectors of the two dual forms this is
        t*A + B, and A at t = infinity.  A symbolic MPoly t is allowed.
        """
        a, b = self.dual_vectors[0], self.dual_vectors[1]
        if t is INF:
            return tuple(a)
        return tuple(t * x + y for x, y in zip(a, b))

    def meets(self, other):
        return rank([list(p.coords) for p in (*self.span_points, *other.span_points)]) < 4

    def __eq__(self, other):
        return isinstance(other, LineInP3) and rank(
            [list(p.coords) for p in (*self.span_points, *other.span_points)]
        ) == 2

    def __hash__(self):
        return hash(self.dual_vectors)

    def __repr__(self):
        return f"LineInP3({self.span_points[0]!r}, {self.span_points[1]!r})"


@dataclass(frozen=True)
class PlaneParam:
    """A plane in P^3 given by (U, V, T) |-> sum of forms.

    ``forms`` are four linear MPolys over ``PLANE_VARS`` (possibly extended by
    a parameter variable).  When ``line`` is set, the line is the image of
    {T = 0}.  ``dual`` is the plane equation as a coefficient vector.
    """

    forms: tuple
    dual: tuple
    line: LineInP3 | None = None
    parameter: object = None

    def image(self, u, v, t):
        return tuple(f.evaluate([u, v, t]) for f in self.forms)

    def plane_coords(self, point):
        """(u, v, t) with image(u, v, t) proportional to ``point``."""
        rows = [[f.terms.get(e, Fraction(0)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] for f in self.forms]
        if dot(self.dual, point) != 0:
            raise GeometryError(f"{point} is not on the plane")
        # Cramer on the first nonsingular 3x3 minor
        for idx in itertools.combinations(range(4), 3):
            sub = [rows[i] for i in idx]
            d = det(sub)
            if d != 0:
                sol = []
                for k in range(3):
                    mk = [list(r) for r in sub]
                    for r, i in zip(mk, idx):
                        r[k] = point[i]
                    sol.append(det(mk) / d)
                return tuple(sol)
        raise GeometryError("degenerate plane parametrization")


def pencil_plane(L: LineInP3, t):
    """The plane spanned by L and the moving point at parameter t.

    ``t`` is a Fraction, ``INF`` or an MPoly (symbolic parameter); in the
    symbolic case forms live over ``PLANE_VARS + t.vars``-style variables
    given by ``t``'s own variable list.
    """
    if len(L.vars) != 4:
        raise GeometryError("pencil planes need a line in P^3")
    symbolic = isinstance(t, MPoly)
    if symbolic:
        vars = t.vars
    else:
        vars = PLANE_VARS
        if t is not INF:
            t = Fraction(t)
    U, V, T = (MPoly.var(vars, n) for n in PLANE_VARS)
    p0, p1 = L.span_points
    m = L.moving_point(t)
    forms = tuple(U * a + V * b + T * c for a, b, c in zip(p0.coords, p1.coords, m))
    l1, l2 = L.dual_vectors
    a1, a2 = dot(l1, m), dot(l2, m)
    dual = tuple(a1 * y - a2 * x for x, y in zip(l1, l2))
    if not symbolic:
        dual = normalize_coords(dual)
    return PlaneParam(forms=forms, dual=dual, line=L, parameter=t)


def pencil_parameter_of(L: LineInP3, dual):
    """Inverse of pencil_plane: the parameter whose plane has equation ``dual``."""
    l1, l2 = L.dual_vectors
    # dual = alpha*l1 + beta*l2
    sol = None
    for i in range(4):
        for j in range(i + 1, 4):
            d = l1[i] * l2[j] - l1[j] * l2[i]
            if d != 0:
                alpha = (dual[i] * l2[j] - dual[j] * l2[i]) / d
                beta = (l1[i] * dual[j] - l1[j] * dual[i]) / d
                sol = (alpha, beta)
                break
        if sol:
            break
    alpha, beta = sol
    if any(alpha * x + beta * y != c for x, y, c in zip(l1, l2, dual)):
        raise GeometryError("plane does not contain the line")
    a_a, a_b, b_b = dot(l1, l1), dot(l1, l2), dot(l2, l2)
    # plane at t is proportional to (-(t*a_b + b_b), t*a_a + a_b)
    lin = alpha * a_a + beta * a_b
    const = alpha * a_b + beta * b_b
    if lin == 0:
        return INF
    return Fraction(-const) / lin


def restrict_form(F: MPoly, H: PlaneParam):
    """Pull F back along the plane parametrization."""
    if F and not F.is_homogeneous():
        raise GeometryError("restriction needs a homogeneous form")
    target = H.forms[0].vars
    if not F:
        return MPoly(target, {})
    return F.subs(dict(zip(F.vars, H.forms)), vars=target)


def gradient_at(F: MPoly, point):
    return tuple(F.diff(v).evaluate(point) for v in F.vars)


def tangent_plane(S: MPoly, p):
    """Gradient of S at p as a normalized dual vector."""
    coords = p.coords if isinstance(p, ProjPoint) else tuple(p)
    if S.evaluate(coords) != 0:
        raise NotOnSurfaceError(f"{list(map(str, coords))} is not on the surface")
    g = gradient_at(S, coords)
    if all(x == 0 for x in g):
        raise SingularPointError(f"{list(map(str, coords))} is a singular point")
    return normalize_coords(g)
