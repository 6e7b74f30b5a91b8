"""Plane cubics: invariants, the chord-tangent group law with an arbitrary
origin, divisor-class reduction, torsion and flex tests, and singular-fiber
classification.

Coefficients and coordinates may live in any exact ring from
:mod:`quarticfib.exactalg` (Fractions, UPolys in a parameter, RatFuncs,
ExtElements).  No Weierstrass model is ever used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from .exactalg import (
    AlgebraError,
    DeskLimitError,
    ExtElement,
    MPoly,
    UPoly,
    det,
    factor_desk,
    groebner,
    quotient_dimension,
    radical_zero_dim,
)
from .projgeom import PLANE_VARS, GeometryError, ProjPoint, cross, dot, normalize_coords

__all__ = [
    "CubicError",
    "MONOMIALS",
    "EULER",
    "TernaryCubic",
    "DivisorClass",
    "aronhold_invariants",
    "invariant_polys",
    "classify_by_orders",
    "third_intersection",
    "group_add",
    "group_neg",
    "group_smul",
    "hyperplane_point",
    "reduce_class",
    "torsion_order",
    "is_flex",
    "two_torsion_tangent",
    "tangent_line",
    "classify_kodaira",
    "singular_profile",
    "SingularOrbit",
    "EXCEEDS",
]

EXCEEDS = "exceeds bound"

MONOMIALS = tuple((i, j, 3 - i - j) for i in range(3, -1, -1) for j in range(3 - i, -1, -1))

EULER = {"smooth": 0, "I1": 1, "I2": 2, "I3": 3, "II": 2, "III": 3, "IV": 4}


class CubicError(GeometryError):
    pass


def _zero_like(c):
    return c - c


class TernaryCubic:
    """Cubic form in (U, V, T) with coefficients in an exact ring.

    ``coeffs`` maps exponent triples to coefficients; absent monomials are 0.
    """

    __slots__ = ("coeffs", "_disc")

    def __init__(self, coeffs):
        clean = {}
        for m, c in dict(coeffs).items():
            m = tuple(m)
            if sum(m) != 3 or len(m) != 3:
                raise CubicError(f"{m} is not a cubic monomial")
            if isinstance(c, int):
                c = Fraction(c)
            if c != 0:
                clean[m] = c
        if not clean:
            raise CubicError("the zero form is not a cubic")
        self.coeffs = clean
        self._disc = None

    @classmethod
    def from_mpoly(cls, f: MPoly, names=PLANE_VARS):
        """From a form in ``names``; other variables become UPoly coefficients."""
        names = tuple(names)
        rest = tuple(v for v in f.vars if v not in names)
        if len(rest) > 1:
            raise CubicError("at most one parameter variable is supported")
        coll = f.coefficients_in(names)
        coeffs = {}
        for m, c in coll.items():
            if rest:
                coeffs[m] = c.to_upoly(rest[0])
            else:
                coeffs[m] = c.constant_value()
        return cls(coeffs)

    @classmethod
    def parse(cls, text):
        expr = sympy.sympify(text, locals={n: sympy.Symbol(n) for n in PLANE_VARS})
        return cls.from_mpoly(MPoly.from_sympy(sympy.expand(expr), PLANE_VARS))

    def coeff(self, m):
        c = self.coeffs.get(tuple(m))
        if c is None:
            some = next(iter(self.coeffs.values()))
            return _zero_like(some)
        return c

    def coeff_vector(self):
        return [self.coeff(m) for m in MONOMIALS]

    def map_coeffs(self, fn):
        return TernaryCubic({m: fn(c) for m, c in self.coeffs.items()})

    def specialize(self, value):
        """Evaluate parameter-polynomial coefficients at ``value``."""
        return self.map_coeffs(lambda c: c(value) if isinstance(c, UPoly) else c)

    def is_rational(self):
        return all(isinstance(c, Fraction) for c in self.coeffs.values())

    def to_mpoly(self, vars=PLANE_VARS):
        if self.is_rational():
            return MPoly(vars, dict(self.coeffs))
        if all(isinstance(c, (UPoly, Fraction)) for c in self.coeffs.values()):
            var = next(c.var for c in self.coeffs.values() if isinstance(c, UPoly))
            allv = tuple(vars) + (var,)
            out = MPoly(allv, {})
            for m, c in self.coeffs.items():
                cp = c.to_mpoly((var,)).with_vars(allv) if isinstance(c, UPoly) else MPoly.const(allv, c)
                out = out + cp * MPoly(allv, {m + (0,): 1})
            return out
        raise CubicError("only rational or parameter-polynomial cubics convert to MPoly")

    # evaluation ------------------------------------------------------------
    def __call__(self, p):
        acc = 0
        for (i, j, k), c in self.coeffs.items():
            acc = acc + c * (p[0] ** i) * (p[1] ** j) * (p[2] ** k)
        return acc

    def gradient(self, p):
        g = [0, 0, 0]
        for m, c in self.coeffs.items():
            for a in range(3):
                if m[a]:
                    e = list(m)
                    e[a] -= 1
                    g[a] = g[a] + c * m[a] * (p[0] ** e[0]) * (p[1] ** e[1]) * (p[2] ** e[2])
        return tuple(g)

    def hessian(self, p):
        h = [[0] * 3 for _ in range(3)]
        for m, c in self.coeffs.items():
            for a in range(3):
                for b in range(3):
                    e = list(m)
                    f = e[a]
                    e[a] -= 1
                    if f < 1:
                        continue
                    f2 = e[b]
                    e[b] -= 1
                    if f2 < 1:
                        continue
                    h[a][b] = h[a][b] + c * f * f2 * (p[0] ** e[0]) * (p[1] ** e[1]) * (p[2] ** e[2])
        return h

    def hessian_det(self, p):
        return det(self.hessian(p))

    def contains(self, p):
        return self(tuple(p)) == 0

    # invariants ---------------------------------------------------------------
    def invariants(self):
        return aronhold_invariants(self)

    def discriminant(self):
        if self._disc is None:
            self._disc = aronhold_invariants(self)[2]
        return self._disc

    def is_smooth(self):
        return self.discriminant() != 0

    def __eq__(self, other):
        return isinstance(other, TernaryCubic) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset((m, str(c)) for m, c in self.coeffs.items()))

    def __str__(self):
        parts = []
        for m in MONOMIALS:
            c = self.coeffs.get(m)
            if c is None:
                continue
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(PLANE_VARS, m) if k)
            cs = str(c)
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif isinstance(c, Fraction):
                parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"TernaryCubic({self})"

    def to_json(self):
        return {
            "".join(map(str, m)): str(self.coeffs[m]) for m in MONOMIALS if m in self.coeffs
        }


# ---------------------------------------------------------------------------
# Aronhold invariants, derived as the sl3-annihilated polynomials of degree d


def _coeff_vars():
    return tuple("c" + "".join(map(str, m)) for m in MONOMIALS)


@lru_cache(maxsize=None)
def _derive_invariant(d):
    """Basis of degree-d SL3 invariants of ternary cubics (as coefficient lists)."""
    index = {m: k for k, m in enumerate(MONOMIALS)}
    basis = []
    for combo in itertools.combinations_with_replacement(range(10), d):
        w = [0, 0, 0]
        for k in combo:
            for a in range(3):
                w[a] += MONOMIALS[k][a]
        if w == [d, d, d]:
            basis.append(combo)
    rows = {}
    # x_i -> x_i + eps*x_j moves a_m into a_{m - e_i + e_j} with weight m_i
    for col, combo in enumerate(basis):
        for i, j in itertools.permutations(range(3), 2):
            for pos, k in enumerate(combo):
                target = MONOMIALS[k]
                if target[j] < 1:
                    continue
                src = list(target)
                src[i] += 1
                src[j] -= 1
                rest = combo[:pos] + combo[pos + 1 :]
                key = (i, j, tuple(sorted(rest + (index[tuple(src)],))))
                row = rows.setdefault(key, {})
                row[col] = row.get(col, 0) + src[i]
    mat = sympy.SparseMatrix(
        len(rows), len(basis), {(r, c): v for r, row in enumerate(rows.values()) for c, v in row.items()}
    )
    ns = []
    for vec in mat.nullspace():
        vals = [Fraction(int(x.p), int(x.q)) for x in vec]
        ns.append(normalize_coords(vals))
    vars = _coeff_vars()
    out = []
    for vec in ns:
        terms = {}
        for combo, c in zip(basis, vec):
            if c:
                e = [0] * 10
                for k in combo:
                    e[k] += 1
                terms[tuple(e)] = c
        out.append(MPoly(vars, terms))
    return tuple(out)


def _hesse(m):
    """x^3 + y^3 + z^3 + 6 m xyz as a coefficient vector (m may be a UPoly)."""
    vec = [0] * 10
    vec[MONOMIALS.index((3, 0, 0))] = 1
    vec[MONOMIALS.index((0, 3, 0))] = 1
    vec[MONOMIALS.index((0, 0, 3))] = 1
    vec[MONOMIALS.index((1, 1, 1))] = 6 * m
    return vec


@lru_cache(maxsize=None)
def invariant_polys():
    """(S, T) as polynomials in the ten coefficients c_ijk.

    Normalization: on the Hesse form x^3 + y^3 + z^3 + 6m xyz,
    S = m - m^4 and T = 1 - 20 m^3 - 8 m^6, so that the discriminant
    T^2 + 64 S^3 equals (1 + 8 m^3)^3.
    """
    (s_raw,) = _derive_invariant(4)
    (t_raw,) = _derive_invariant(6)
    m = UPoly.x("m")
    hesse = _hesse(m)
    s_target = m - m ** 4
    t_target = 1 - 20 * m ** 3 - 8 * m ** 6
    out = []
    for raw, target in ((s_raw, s_target), (t_raw, t_target)):
        val = raw.evaluate(hesse)
        scale = target.lead / val.lead
        if val * scale != target:
            raise AlgebraError("invariant basis does not restrict to the Hesse normal form")
        out.append(raw * scale)
    return tuple(out)


def aronhold_invariants(C: TernaryCubic):
    """(S, T, Delta, j) with Delta = T^2 + 64 S^3 and j = 1728 * 64 S^3 / Delta.

    j is ``None`` when Delta = 0.  The coefficients may be in any ring; j is
    only formed when division is possible.
    """
    S_poly, T_poly = invariant_polys()
    vec = C.coeff_vector()
    S = S_poly.evaluate(vec)
    T = T_poly.evaluate(vec)
    D = T * T + 64 * S * S * S
    j = None
    if D != 0:
        try:
            j = 1728 * 64 * S * S * S / D
        except (TypeError, ZeroDivisionError):
            j = None
    return S, T, D, j


def classify_by_orders(ord_S, ord_T, ord_D):
    """Kodaira type of a reduced plane-cubic fiber from vanishing orders.

    Orders may be ``None`` for an identically vanishing invariant.
    """
    big = 10 ** 9
    ord_S = big if ord_S is None else ord_S
    ord_T = big if ord_T is None else ord_T
    if ord_D == 0:
        return "smooth"
    if ord_S == 0:
        if ord_D <= 3:
            return f"I{ord_D}"
        raise CubicError(f"I{ord_D} cannot occur for a reduced plane cubic")
    if ord_D == 2 and ord_T == 1:
        return "II"
    if ord_D == 3 and ord_S == 1:
        return "III"
    if ord_D == 4 and ord_T == 2:
        return "IV"
    raise CubicError(
        f"vanishing orders (S, T, Delta) = ({ord_S}, {ord_T}, {ord_D}) match no reduced plane cubic"
    )


# ---------------------------------------------------------------------------
# group law


def _pt(p):
    return tuple(p.coords) if isinstance(p, ProjPoint) else tuple(p)


def _check_on(C, p):
    if C(p) != 0:
        raise CubicError(f"point {[str(x) for x in p]} is not on the cubic")


def tangent_line(C, p):
    p = _pt(p)
    g = C.gradient(p)
    if all(x == 0 for x in g):
        raise CubicError(f"point {[str(x) for x in p]} is singular on the cubic")
    return g


def _proportional(a, b):
    return all(x == 0 for x in cross(a, b))


def third_intersection(C, p, q, check=True):
    """Third point of C on the line through p and q (the tangent if p = q)."""
    p, q = _pt(p), _pt(q)
    if check:
        _check_on(C, p)
        _check_on(C, q)
    if not _proportional(p, q):
        gp, gq = C.gradient(p), C.gradient(q)
        a = dot(gq, p)
        b = dot(gp, q)
        if a == 0 and b == 0:
            raise CubicError("the line through the two points lies on the cubic")
        r = tuple(a * x - b * y for x, y in zip(p, q))
        return ProjPoint(r)
    g = tangent_line(C, p)
    p = ProjPoint(p).coords
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        w = cross(g, e)
        if any(x != 0 for x in w) and not _proportional(w, p):
            break
    else:
        raise CubicError("could not choose a direction on the tangent line")
    cw = C(w)
    pw = dot(C.gradient(w), p)
    if cw == 0 and pw == 0:
        raise CubicError("the tangent line lies on the cubic")
    r = tuple(cw * x - pw * y for x, y in zip(p, w))
    return ProjPoint(r)


def group_add(C, origin, p, q):
    return third_intersection(C, origin, third_intersection(C, p, q), check=False)


def group_neg(C, origin, p):
    return third_intersection(C, p, third_intersection(C, origin, origin), check=False)


def group_smul(C, origin, n, p):
    origin = ProjPoint(_pt(origin))
    p = ProjPoint(_pt(p))
    if n < 0:
        return group_smul(C, origin, -n, group_neg(C, origin, p))
    result = origin
    base = p
    while n:
        if n & 1:
            result = group_add(C, origin, result, base)
        n >>= 1
        if n:
            base = group_add(C, origin, base, base)
    return result


def hyperplane_point(C, origin, line_point=None):
    """Point s with s - origin ~ (line section) - 3 origin.

    The line section is taken as the tangent line at ``line_point`` (default:
    the origin itself); the answer is independent of that choice.
    """
    if line_point is None:
        return third_intersection(C, origin, origin)
    lp = line_point
    t = third_intersection(C, lp, lp)
    return group_add(C, origin, group_add(C, origin, lp, lp), t)


@dataclass
class DivisorClass:
    """Class of sum(m_i p_i) - h * (line section) on a plane cubic."""

    curve: TernaryCubic
    terms: list = field(default_factory=list)
    h: int = 0

    @property
    def degree(self):
        return sum(m for _, m in self.terms) - 3 * self.h

    def __add__(self, other):
        if other.curve is not self.curve and other.curve != self.curve:
            raise CubicError("classes on different curves")
        return DivisorClass(self.curve, list(self.terms) + list(other.terms), self.h + other.h)


def reduce_class(D: DivisorClass, origin, line_point=None):
    """The point s with D ~ s - origin (D must have degree 0)."""
    if D.degree != 0:
        raise CubicError(f"class has degree {D.degree}, expected 0")
    C = D.curve
    origin = ProjPoint(_pt(origin))
    acc = origin
    for p, m in D.terms:
        acc = group_add(C, origin, acc, group_smul(C, origin, m, p))
    if D.h:
        hp = hyperplane_point(C, origin, line_point)
        acc = group_add(C, origin, acc, group_smul(C, origin, -D.h, hp))
    return acc


def torsion_order(C, origin, s, bound=12):
    """Smallest n <= bound with n*s = origin, else EXCEEDS."""
    if bound < 1:
        raise CubicError("torsion bound must be at least 1")
    origin = ProjPoint(_pt(origin))
    s = ProjPoint(_pt(s))
    acc = s
    for n in range(1, bound + 1):
        if acc == origin:
            return n
        acc = group_add(C, origin, acc, s)
    return EXCEEDS


def is_flex(C, p):
    p = _pt(p)
    tangent_line(C, p)
    return C.hessian_det(p) == 0


def two_torsion_tangent(C, p, q):
    """Tangent-line test for p - q being 2-torsion.

    Returns (verdict, meeting_point).  Distinct tangent lines at two distinct
    smooth points meet in one point of P^2.  If the tangents coincide the line
    would meet C in 2p + 2q, impossible on a smooth cubic, so that case raises.
    """
    p, q = _pt(p), _pt(q)
    _check_on(C, p)
    _check_on(C, q)
    if _proportional(p, q):
        raise CubicError("the two points must be distinct")
    gp, gq = tangent_line(C, p), tangent_line(C, q)
    x = cross(gp, gq)
    if all(c == 0 for c in x):
        raise CubicError("common tangent line through two points: the cubic is not smooth")
    x = ProjPoint(x)
    return C(x.coords) == 0, x


# ---------------------------------------------------------------------------
# geometric classification via the singular locus


@dataclass
class SingularOrbit:
    """A Galois orbit of singular points.

    ``modulus`` is a monic irreducible UPoly in ``z``; ``point`` holds plane
    coordinates in Q[z]/(modulus) and ``parameter`` the pencil parameter in
    the same ring (``None`` for a cubic with rational coefficients).
    """

    modulus: UPoly
    point: tuple
    parameter: object = None

    @property
    def size(self):
        return self.modulus.degree

    def to_json(self):
        def s(c):
            return str(c)

        out = {"modulus": str(self.modulus), "point": [s(c) for c in self.point]}
        if self.parameter is not None:
            out["parameter"] = s(self.parameter)
        return out


_CHARTS = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (-1, 1), (1, -1), (2, 3), (3, 2))

TYPE_BY_PROFILE = {(1, 1): "I1", (2, 2): "I2", (3, 3): "I3", (1, 2): "II", (1, 3): "III", (1, 4): "IV"}


def _chart_form(f: MPoly, c1, c2):
    """f(U, V, T - c1 U - c2 V): the line T' = 0 of new coordinates."""
    U, V, T = (MPoly.var(f.vars, n) for n in PLANE_VARS)
    return f.subs({"T": T - c1 * U - c2 * V})


def singular_profile(f: MPoly, g: UPoly | None = None, param="t", want_points=True):
    """Count singular points and total Tjurina number of a plane cubic fiber.

    ``f`` is a cubic form over ``PLANE_VARS`` (plus ``param`` when ``g`` is
    given); ``g`` is an irreducible polynomial whose roots are the fiber
    parameters.  Returns (points_per_fiber, tau_per_fiber, orbits, chart).
    """
    vars = tuple(f.vars)
    has_param = g is not None
    if has_param and param not in vars:
        vars = vars + (param,)
        f = f.with_vars(vars)
    gpoly = g.to_mpoly((param,)).with_vars(vars) if has_param else None
    deg_g = g.degree if has_param else 1
    extra = [gpoly] if has_param else []
    for c1, c2 in _CHARTS:
        fc = _chart_form(f, c1, c2)
        partials = [fc.diff(n) for n in PLANE_VARS]
        # no singular point may lie on T' = 0
        on_line = [p.subs({"U": 1, "T": 0}) for p in partials]
        gb = groebner(extra + on_line, vars)
        if not (len(gb) == 1 and gb[0].is_constant()):
            continue
        at_corner = [p.subs({"U": 0, "V": 1, "T": 0}) for p in partials]
        gb = groebner(extra + at_corner, vars)
        if not (len(gb) == 1 and gb[0].is_constant()):
            continue
        affine_vars = tuple(v for v in vars if v != "T")
        ideal = [p.subs({"T": 1}).with_vars(affine_vars) for p in partials] + [
            e.with_vars(affine_vars) for e in extra
        ]
        try:
            total = quotient_dimension(ideal, affine_vars)
        except AlgebraError as exc:
            raise CubicError("cubic is not reduced (singular along a curve)") from exc
        if total == 0:
            return 0, 0, [], (c1, c2)
        rad = radical_zero_dim(ideal, affine_vars)
        npts = quotient_dimension(rad, affine_vars)
        if total % deg_g or npts % deg_g:
            raise CubicError("singular locus is not equidistributed over the parameter orbit")
        orbits = []
        if want_points:
            orbits = _explicit_points(rad, affine_vars, npts, f, (c1, c2), param if has_param else None)
        return npts // deg_g, total // deg_g, orbits, (c1, c2)
    raise CubicError("no admissible affine chart among the fixed candidates")


def _explicit_points(rad, affine_vars, npts, f, chart, param):
    """Shape-position lex basis in a separating variable z, split by factors."""
    if npts > 12:
        return []
    c1, c2 = chart
    zvars = affine_vars + ("z",)
    U, V = MPoly.var(zvars, "U"), MPoly.var(zvars, "V")
    Pz = MPoly.var(zvars, param) if param else None
    Z = MPoly.var(zvars, "z")
    lifted = [p.with_vars(zvars) for p in rad]
    for lam, mu in ((1, 0), (1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 3), (3, 5)):
        sep = V + lam * U + (mu * Pz if Pz is not None else 0)
        gb = groebner(lifted + [Z - sep], zvars, order="lex")
        zonly = [p for p in gb if set(p.variables_used()) <= {"z"} and p.variables_used()]
        if len(gb) != len(zvars) or len(zonly) != 1 or zonly[0].degree_in("z") != npts:
            continue
        sols = {}
        for p in gb:
            if p is zonly[0]:
                continue
            used = [v for v in p.variables_used() if v != "z"]
            if len(used) != 1:
                break
            v = used[0]
            coll = p.coefficients_in((v,))
            if (1,) not in coll or not set(coll) <= {(1,), (0,)} or not coll[(1,)].is_constant():
                break
            lead = coll[(1,)].constant_value()
            rest = coll.get((0,))
            sols[v] = (-rest / lead).to_upoly("z") if rest else UPoly([], "z")
        else:
            h = zonly[0].to_upoly("z")
            try:
                _, parts = factor_desk(h)
            except DeskLimitError:
                return []
            orbits = []
            for fac, _mult in parts:
                z = ExtElement.generator(list(fac.monic().coeffs), "z", check=False)
                u = sols["U"](z)
                v = sols["V"](z)
                tt = 1 - c1 * u - c2 * v
                pval = sols[param](z) if param else None
                pt = tuple(Fraction(c) if isinstance(c, int) else c for c in (u, v, tt))
                _verify_singular(f, pt, param, pval)
                orbits.append(SingularOrbit(fac.monic(), pt, pval))
            return orbits
    return []


def _verify_singular(f, pt, param, pval):
    for n in PLANE_VARS:
        d = f.diff(n)
        vals = []
        for v in d.vars:
            if v in PLANE_VARS:
                vals.append(pt[PLANE_VARS.index(v)])
            else:
                vals.append(pval)
        if d.evaluate(vals) != 0:
            raise CubicError("explicit singular point fails the gradient check")


def classify_kodaira(C, with_points=False):
    """Kodaira tag of a singular reduced rational cubic, by its singular locus."""
    f = C.to_mpoly() if isinstance(C, TernaryCubic) else C
    npts, tau, orbits, _ = singular_profile(f, want_points=with_points)
    if npts == 0:
        raise CubicError("cubic is smooth")
    kind = TYPE_BY_PROFILE.get((npts, tau))
    if kind is None:
        raise CubicError(f"singular profile ({npts} points, tau {tau}) is not a reduced cubic type")
    if with_points:
        return kind, orbits
    return kind
