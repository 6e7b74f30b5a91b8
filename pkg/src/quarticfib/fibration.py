"""The elliptic fibration of a quartic surface by the planes through a line.

The residual cubics of the pencil are computed symbolically in two charts of
the parameter line: ``t`` (moving point t*A + B) and ``s`` (moving point
A + s*B, with s = 0 the plane at infinity).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .cubiclaw import (
    EULER,
    MONOMIALS,
    TYPE_BY_PROFILE,
    TernaryCubic,
    aronhold_invariants,
    classify_by_orders,
    singular_profile,
)
from .exactalg import (
    DeskLimitError,
    ExtElement,
    MPoly,
    RatFunc,
    UPoly,
    factor_desk,
    squarefree_decomposition,
)
from .projgeom import (
    INF,
    PLANE_VARS,
    GeometryError,
    LineInP3,
    PlaneParam,
    ProjPoint,
    param_str,
    pencil_parameter_of,
    pencil_plane,
    tangent_plane,
)

__all__ = [
    "FibrationError",
    "LineNotOnSurfaceError",
    "SingularSurfaceError",
    "ScanAuditError",
    "QuarticSurfaceWithLine",
    "FiberReport",
    "ScanResult",
    "BranchPoint",
    "BranchReport",
    "smoothness_certificate",
    "residual_cubic",
    "trisection_divisor",
    "binary_cubic_disc",
    "binary_cubic_hessian",
    "trisection_two_torsion",
    "branch_analysis",
    "fiber_at_line_point",
    "classify_fiber",
    "singular_fiber_scan",
]

PARAM = "t"
SPARAM = "s"


class FibrationError(GeometryError):
    pass


class LineNotOnSurfaceError(FibrationError):
    pass


class SingularSurfaceError(FibrationError):
    pass


class ScanAuditError(FibrationError):
    pass


# ---------------------------------------------------------------------------
# smoothness


def _gb_is_unit(polys, syms, modulus=None):
    exprs = [p for p in polys if p != 0]
    if not exprs:
        return False
    kw = {"modulus": modulus} if modulus else {"domain": "QQ"}
    gb = sympy.groebner(exprs, *syms, order="grevlex", **kw)
    return len(gb.exprs) == 1 and gb.exprs[0].is_number and gb.exprs[0] != 0


def smoothness_certificate(F: MPoly, primes=(101, 103, 107, 109, 113)):
    """Certify that the hypersurface F = 0 is smooth.

    The partials have no common zero over the algebraic closure of F_p for
    some listed prime p (each affine chart gives the unit ideal); a singular
    point over Q-bar would reduce to one mod p, so this implies smoothness
    over Q.  Falls back to the same computation over Q.  Returns the prime
    used (0 for the rational check) or raises SingularSurfaceError.
    """
    syms = sympy.symbols(F.vars)
    partials = [F.diff(v).to_sympy(syms) for v in F.vars]
    n = len(syms)

    def charts_ok(modulus):
        for i in range(n):
            sub = {syms[i]: 1}
            # points with x_j = 0 for j < i are covered by earlier charts
            for j in range(i):
                sub[syms[j]] = 0
            polys = [sympy.expand(p.subs(sub)) for p in partials]
            rest = [s for k, s in enumerate(syms) if k > i]
            if not rest:
                if any(p != 0 and (p % modulus if modulus else p) != 0 for p in polys):
                    continue
                return False
            if not _gb_is_unit(polys, rest, modulus):
                return False
        return True

    for p in primes:
        if charts_ok(p):
            return p
    if charts_ok(None):
        return 0
    raise SingularSurfaceError("the surface is singular")


# ---------------------------------------------------------------------------


class QuarticSurfaceWithLine:
    """A homogeneous quartic in four variables together with a line on it."""

    def __init__(self, quartic: MPoly, line: LineInP3, certify=True):
        if len(quartic.vars) != 4:
            raise FibrationError("the quartic must be a form in four variables")
        if not quartic or not quartic.is_homogeneous() or quartic.total_degree() != 4:
            raise FibrationError("the surface must be a homogeneous quartic")
        if tuple(line.vars) != tuple(quartic.vars):
            line = LineInP3(line.span_points[0], line.span_points[1], vars=quartic.vars)
        self.quartic = quartic
        self.line = line
        on_line = quartic.subs(dict(zip(quartic.vars, line.parametrization())), vars=("U", "V"))
        if on_line:
            raise LineNotOnSurfaceError("the line is not contained in the surface")
        self.certificate = smoothness_certificate(quartic) if certify else None
        self._sym = {}

    @property
    def vars(self):
        return self.quartic.vars

    # symbolic pencil --------------------------------------------------------
    def symbolic_cubic(self, chart=PARAM):
        """Residual cubic with UPoly coefficients in the chart parameter."""
        if chart not in self._sym:
            vars = PLANE_VARS + (chart,)
            par = MPoly.var(vars, chart)
            L = self.line
            U, V, T = (MPoly.var(vars, n) for n in PLANE_VARS)
            a, b = L.dual_vectors
            if chart == PARAM:
                m = [par * x + y for x, y in zip(a, b)]
            else:
                m = [x + par * y for x, y in zip(a, b)]
            p0, p1 = L.span_points
            forms = [U * x + V * y + T * z for x, y, z in zip(p0.coords, p1.coords, m)]
            G = self.quartic.subs(dict(zip(self.quartic.vars, forms)), vars=vars)
            try:
                cubic = G.exact_div(T)
            except Exception as exc:
                raise LineNotOnSurfaceError("restriction is not divisible by the line form") from exc
            self._sym[chart] = TernaryCubic.from_mpoly(cubic.primitive())
        return self._sym[chart]

    def plane(self, t):
        return pencil_plane(self.line, t)

    def __getstate__(self):
        return {"quartic": self.quartic, "line": self.line, "certificate": self.certificate, "_sym": self._sym}

    def __setstate__(self, state):
        self.__dict__.update(state)


def _primitive_rational_cubic(C: TernaryCubic):
    return TernaryCubic.from_mpoly(C.to_mpoly().primitive())


def residual_cubic(SL: QuarticSurfaceWithLine, t="symbolic"):
    """Residual cubic of the plane at parameter t (Fraction, INF or 'symbolic')."""
    if isinstance(t, str) and t == "symbolic":
        return SL.symbolic_cubic(PARAM)
    if t is INF:
        return _primitive_rational_cubic(SL.symbolic_cubic(SPARAM).specialize(Fraction(0)))
    return _primitive_rational_cubic(SL.symbolic_cubic(PARAM).specialize(Fraction(t)))


def _binary(C: TernaryCubic):
    return [C.coeff((3 - k, k, 0)) for k in range(4)]


def trisection_divisor(SL, t="symbolic"):
    """Coefficients (a, b, c, d) of a U^3 + b U^2 V + c U V^2 + d V^3 on L."""
    C = residual_cubic(SL, t)
    coeffs = _binary(C)
    if all(c == 0 for c in coeffs):
        raise FibrationError("the line is a component of the residual cubic")
    return coeffs


def binary_cubic_disc(a, b, c, d):
    return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d


def binary_cubic_hessian(a, b, c, d):
    """Coefficients of the Hessian covariant; all vanish iff a triple root."""
    return (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)


def trisection_two_torsion(SL, t="symbolic"):
    """Tangent-line 2-torsion test on two of the three points of C_H . L.

    The first point uses a root b of the trisection form over K = Q(t) (or Q
    at a rational t), the second a root y of the deflated quadratic over K(b).
    Returns (verdict, meeting_point, (p, q)); the tangents at p and q meet on
    the cubic exactly when p - q is 2-torsion.
    """
    from .cubiclaw import two_torsion_tangent

    C = residual_cubic(SL, t)
    if isinstance(t, str):
        C = C.map_coeffs(lambda c: RatFunc(c))
    a0, a1, a2, a3 = _binary(C)
    if a3 == 0:
        raise FibrationError("the trisection has a root at U = 0; use another chart")
    # V = x U with a0 + a1 x + a2 x^2 + a3 x^3 = 0
    f = [a0 / a3, a1 / a3, a2 / a3, a3 / a3]
    b = ExtElement.generator(f, "b")
    # f(x) = (x - b)(x^2 + (b + f2) x + (b^2 + f2 b + f1))
    g = [b * b + f[2] * b + f[1], b + f[2], 1]
    y = ExtElement.generator(g, "y")
    one = y - y + 1
    p = (one, b * one, one - one)
    q = (one, y, one - one)
    verdict, x = two_torsion_tangent(C, p, q)
    return verdict, x, (ProjPoint(p), ProjPoint(q))


# ---------------------------------------------------------------------------
# branch locus of L -> M


@dataclass
class BranchPoint:
    parameter: object  # Fraction, INF, or an irreducible UPoly
    count: int  # number of parameter values (degree of the factor)
    weight: int  # vanishing order of the discriminant there
    profile: str  # "double" or "triple"

    def to_json(self):
        return {
            "parameter": _param_json(self.parameter),
            "count": self.count,
            "weight": self.weight,
            "profile": self.profile,
        }


@dataclass
class BranchReport:
    discriminant: UPoly
    points: list
    total: int

    def to_json(self):
        return {
            "discriminant": str(self.discriminant),
            "points": [p.to_json() for p in self.points],
            "total": self.total,
        }


def _param_json(p):
    if p is INF:
        return "inf"
    if isinstance(p, Fraction):
        return str(p)
    return {"root_of": str(p)}


def _order_at(f: UPoly, g: UPoly):
    """Multiplicity of the irreducible g in f (None if f = 0)."""
    if not f:
        return None
    k = 0
    while True:
        q, r = divmod(f, g)
        if r:
            return k
        f = q
        k += 1


def _divides_all(g, polys):
    return all(not (p % g) for p in polys)


def _param_of_factor(g: UPoly):
    if g.degree == 1:
        return -g.coeffs[0] / g.coeffs[1]
    return g


def branch_analysis(SL):
    """Branch points of the degree-3 map L -> M with ramification profiles."""
    tri = _binary(SL.symbolic_cubic(PARAM))
    disc = binary_cubic_disc(*tri)
    if not disc:
        raise FibrationError("trisection discriminant vanishes identically")
    hess = binary_cubic_hessian(*tri)
    points = []
    _, factors = factor_desk(disc)
    for g, mult in factors:
        triple = _divides_all(g, hess)
        points.append(BranchPoint(_param_of_factor(g), g.degree, mult, "triple" if triple else "double"))
    # the plane at infinity, from the s-chart
    tri_s = _binary(SL.symbolic_cubic(SPARAM))
    disc_s = binary_cubic_disc(*tri_s)
    s = UPoly.x(SPARAM)
    w_inf = _order_at(disc_s, s)
    if w_inf != 4 - disc.degree:
        raise FibrationError("branch order at infinity disagrees with the degree count")
    if w_inf:
        triple = _divides_all(s, binary_cubic_hessian(*tri_s))
        points.append(BranchPoint(INF, 1, w_inf, "triple" if triple else "double"))
    total = sum(p.count * p.weight for p in points)
    return BranchReport(disc.primitive(), points, total)


# ---------------------------------------------------------------------------
# fiber classification


@dataclass
class FiberReport:
    parameter: object
    count: int
    kodaira: str
    euler: int
    cubic: str
    singular_points: list = field(default_factory=list)
    points_per_fiber: int = 0
    tjurina: int = 0
    transverse_to_L: bool = True
    intersection_with_L: dict = field(default_factory=dict)
    valuation: dict = field(default_factory=dict)
    geometric: str | None = None
    unresolved: bool = False

    @property
    def total_euler(self):
        return self.count * self.euler

    def to_json(self):
        return {
            "parameter": _param_json(self.parameter),
            "count": self.count,
            "kodaira": self.kodaira,
            "euler": self.euler,
            "cubic": self.cubic,
            "singular_points_per_fiber": self.points_per_fiber,
            "tjurina_per_fiber": self.tjurina,
            "singular_points": [o.to_json() for o in self.singular_points],
            "transverse_to_L": self.transverse_to_L,
            "intersection_with_L": self.intersection_with_L,
            "valuation": self.valuation,
            "geometric": self.geometric,
            "unresolved": self.unresolved,
        }


@dataclass
class ScanResult:
    fibers: list
    euler_total: int
    singular_fiber_count: int
    nontransverse: list
    discriminant: UPoly
    unresolved_factors: list

    def to_json(self):
        return {
            "fibers": [f.to_json() for f in self.fibers],
            "euler_total": self.euler_total,
            "singular_fiber_count": self.singular_fiber_count,
            "nontransverse_parameters": [_param_json(p) for p in self.nontransverse],
            "discriminant": str(self.discriminant),
            "unresolved_factors": [str(g) for g in self.unresolved_factors],
        }


def _residue_str(c, g):
    if isinstance(c, UPoly):
        if g.degree == 1:
            return str(c(-g.coeffs[0] / g.coeffs[1]))
        return str(c % g)
    return str(c)


def _mono_str(m):
    return "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(PLANE_VARS, m) if k)


def _fiber_cubic_str(C: TernaryCubic, g):
    parts = []
    for m in MONOMIALS:
        if m not in C.coeffs:
            continue
        v = _residue_str(C.coeffs[m], g)
        if v != "0":
            parts.append(f"({v})*{_mono_str(m)}")
    return " + ".join(parts)


def _intersection_profile(tri, g):
    disc = binary_cubic_disc(*tri)
    hess = binary_cubic_hessian(*tri)
    form = " + ".join(
        f"({_residue_str(c, g)})*{mono}" for c, mono in zip(tri, ("U^3", "U^2*V", "U*V^2", "V^3"))
    )
    if disc % g:
        mult = [1, 1, 1]
    elif _divides_all(g, hess):
        mult = [3]
    else:
        mult = [2, 1]
    return {"form": form, "multiplicities": mult}


def _orders(S, T, D, g):
    return _order_at(S, g), _order_at(T, g), _order_at(D, g)


def _classify_factor(task):
    """Worker: classify the fibers over the roots of one irreducible g."""
    SL, chart, g, resolved = task
    C = SL.symbolic_cubic(chart)
    S, T, D, _ = aronhold_invariants(C)
    oS, oT, oD = _orders(S, T, D, g)
    kind_v = classify_by_orders(oS, oT, oD)
    report = FiberReport(
        parameter=INF if chart == SPARAM else _param_of_factor(g),
        count=g.degree,
        kodaira=kind_v,
        euler=EULER[kind_v],
        cubic=_fiber_cubic_str(C, g),
        valuation={"S": oS, "T": oT, "Delta": oD, "type": kind_v},
        unresolved=not resolved,
    )
    report.intersection_with_L = _intersection_profile(_binary(C), g)
    report.transverse_to_L = report.intersection_with_L["multiplicities"] == [1, 1, 1]
    if resolved:
        npts, tau, orbits, _ = singular_profile(C.to_mpoly(), g, param=chart)
        kind_g = TYPE_BY_PROFILE.get((npts, tau), f"unknown({npts},{tau})")
        report.geometric = kind_g
        report.points_per_fiber = npts
        report.tjurina = tau
        report.singular_points = orbits
        if kind_g != kind_v:
            raise ScanAuditError(
                f"classification mismatch at {param_str(report.parameter)}: "
                f"valuation {kind_v}, geometric {kind_g}"
            )
        for o in orbits:
            if o.point[2] == 0 and report.transverse_to_L:
                raise ScanAuditError("fiber singular at a point of L reported transverse")
    return report


def _split_by_orders(p: UPoly, polys):
    """Split a squarefree p into coprime pieces on which each poly has constant order."""
    pieces = [p.monic()]
    for f in polys:
        new = []
        for piece in pieces:
            rest, d = piece, f
            while rest.degree > 0:
                if not d:
                    new.append(rest)
                    break
                # roots of rest where the order of f is at least one more
                h = rest.gcd(d)
                exact = rest // h
                if exact.degree > 0:
                    new.append(exact)
                rest, d = h, d.deriv()
        pieces = new
    return pieces


def singular_fiber_scan(SL, jobs=1):
    """All singular fibers with types, Euler audit and transversality flags."""
    C = SL.symbolic_cubic(PARAM)
    S, T, D, _ = aronhold_invariants(C)
    if not D:
        raise FibrationError("every fiber is singular: discriminant vanishes identically")
    tasks = []
    unresolved = []
    for part, _mult in squarefree_decomposition(D):
        try:
            _, facs = factor_desk(part)
            for g, _k in facs:
                tasks.append((SL, PARAM, g, True))
        except DeskLimitError:
            for piece in _split_by_orders(part, [S, T]):
                unresolved.append(piece.primitive())
                tasks.append((SL, PARAM, piece.primitive(), False))
    Cs = SL.symbolic_cubic(SPARAM)
    Ss, Ts, Ds, _ = aronhold_invariants(Cs)
    s = UPoly.x(SPARAM)
    ord_inf = _order_at(Ds, s)
    if ord_inf != 24 - D.degree:
        raise ScanAuditError("discriminant order at infinity disagrees with the degree count")
    if ord_inf:
        tasks.append((SL, SPARAM, s, True))
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            fibers = list(ex.map(_classify_factor, tasks))
    else:
        fibers = [_classify_factor(t) for t in tasks]
    fibers.sort(key=_fiber_key)
    total = sum(f.total_euler for f in fibers)
    count = sum(f.count for f in fibers)
    if total != 24:
        raise ScanAuditError(
            f"Euler audit failed: total {total}; parameters "
            + ", ".join(str(_param_json(f.parameter)) for f in fibers)
        )
    if count < 6:
        raise ScanAuditError(f"only {count} singular fibers, at least 6 are forced")
    nontransverse = [f.parameter for f in fibers if not f.transverse_to_L]
    return ScanResult(fibers, total, count, nontransverse, D.primitive(), unresolved)


def _fiber_key(f):
    p = f.parameter
    if p is INF:
        return (2, 0, ())
    if isinstance(p, Fraction):
        return (0, 1, (p,))
    return (1, p.degree, p.coeffs)


def classify_fiber(SL, t):
    """FiberReport for a single rational (or infinite) parameter."""
    if t is INF:
        g, chart = UPoly.x(SPARAM), SPARAM
    else:
        t = Fraction(t)
        g, chart = UPoly([-t, 1], PARAM), PARAM
    C = SL.symbolic_cubic(chart)
    D = aronhold_invariants(C)[2]
    if D % g:
        cubic = residual_cubic(SL, t)
        tri = _binary(C)
        rep = FiberReport(t, 1, "smooth", 0, str(cubic))
        rep.intersection_with_L = _intersection_profile(tri, g)
        rep.transverse_to_L = rep.intersection_with_L["multiplicities"] == [1, 1, 1]
        rep.valuation = {"S": None, "T": None, "Delta": 0, "type": "smooth"}
        rep.geometric = "smooth"
        return rep
    rep = _classify_factor((SL, chart, g, True))
    rep.cubic = str(residual_cubic(SL, t))
    return rep


@dataclass
class FiberAtPoint:
    parameter: object
    cubic: TernaryCubic
    plane: PlaneParam
    point: tuple  # plane coordinates of the base point p
    report: FiberReport


def fiber_at_line_point(SL, p):
    """The fiber C_p in the tangent plane at a point p of L."""
    coords = tuple(Fraction(c) for c in (p.coords if isinstance(p, ProjPoint) else p))
    if not SL.line.contains(coords):
        raise FibrationError("point is not on the line")
    dual = tangent_plane(SL.quartic, coords)
    t = pencil_parameter_of(SL.line, dual)
    H = SL.plane(t)
    u, v = SL.line.line_coords(coords)
    C = residual_cubic(SL, t)
    pt = ProjPoint((u, v, Fraction(0))).coords
    if C(pt) != 0:
        raise FibrationError("base point is not on its fiber")
    return FiberAtPoint(t, C, H, pt, classify_fiber(SL, t))
