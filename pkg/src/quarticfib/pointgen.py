"""Rational point generators on a quartic surface with a line, and the
threefold reductions (hyperplane slices and the cone test)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cubiclaw import (
    EXCEEDS,
    CubicError,
    DivisorClass,
    group_add,
    group_neg,
    group_smul,
    reduce_class,
    third_intersection,
    torsion_order,
)
from .exactalg import MPoly
from .fibration import (
    FibrationError,
    LineNotOnSurfaceError,
    QuarticSurfaceWithLine,
    SingularSurfaceError,
    fiber_at_line_point,
    residual_cubic,
    smoothness_certificate,
)
from .projgeom import (
    INF,
    GeometryError,
    LineInP3,
    ProjPoint,
    dot,
    nullspace,
    param_str,
    rank,
    tangent_plane,
)

__all__ = [
    "PointGenError",
    "TorsionDetected",
    "GeneratedPoint",
    "PrecheckResult",
    "ThreeLineConfig",
    "torsion_precheck",
    "qr_sequence",
    "verify_qr",
    "three_lines_sequence",
    "naive_height",
    "height_ratio_experiment",
    "slice_threefold",
    "cone_test",
    "ConeResult",
]


class PointGenError(GeometryError):
    pass


class TorsionDetected(PointGenError):
    pass


def naive_height(p):
    """log of the largest absolute coordinate of the primitive integer vector."""
    coords = ProjPoint(p.coords if isinstance(p, ProjPoint) else p).int_coords()
    return math.log(max(abs(c) for c in coords))


def _height_str(h):
    return f"{h:.12f}"


@dataclass
class GeneratedPoint:
    point: ProjPoint
    fiber_parameter: object
    index: int
    kind: str
    height: float
    plane_point: ProjPoint | None = None

    def to_json(self):
        return {
            "kind": self.kind,
            "index": self.index,
            "fiber_parameter": param_str(self.fiber_parameter),
            "point": self.point.to_json(),
            "height": _height_str(self.height),
        }


@dataclass
class PrecheckResult:
    parameter: object
    base_point: tuple
    cubic: object
    delta: ProjPoint
    order: object
    plane: object = field(repr=False, default=None)

    @property
    def free(self):
        return self.order == EXCEEDS

    @property
    def verdict(self):
        return "free-at-bound" if self.free else "torsion"

    def to_json(self):
        return {
            "fiber_parameter": param_str(self.parameter),
            "cubic": str(self.cubic),
            "delta": self.delta.to_json(),
            "order": self.order if not self.free else None,
            "verdict": self.verdict,
        }


def _line_point(SL, p):
    coords = p.coords if isinstance(p, ProjPoint) else tuple(p)
    coords = tuple(Fraction(c) for c in coords)
    if not SL.line.contains(coords):
        raise PointGenError("base point is not on the line")
    return coords


def torsion_precheck(SL: QuarticSurfaceWithLine, p, bound=12):
    """Order of the class 3p - H on the fiber C_p (or EXCEEDS past ``bound``)."""
    coords = _line_point(SL, p)
    fa = fiber_at_line_point(SL, coords)
    C, base = fa.cubic, fa.point
    if all(c == 0 for c in C.gradient(base)):
        raise PointGenError("fiber singular at base point")
    try:
        delta = reduce_class(DivisorClass(C, [(base, 3)], 1), base)
        order = torsion_order(C, base, delta, bound)
    except CubicError as exc:
        # e.g. the tangent line at p is a component of a reducible fiber
        raise PointGenError(f"group law undefined at base point: {exc}") from exc
    return PrecheckResult(fa.parameter, base, C, delta, order, fa.plane)


def _to_surface(pre, plane_pt, SL):
    P = ProjPoint(pre.plane.image(*plane_pt.coords))
    if SL.quartic.evaluate(P.coords) != 0:
        raise PointGenError("generated point is not on the surface")
    return P


def qr_sequence(SL, p, N, bound=12):
    """q_1, r_1, ..., q_N, r_N on the fiber through p (origin p).

    q_n is the point with q_n + (3n-1) p ~ n H, and r_n the point with
    (3n+1) p - r_n ~ n H, so q_n = n * q_1 and r_n = -q_n.
    """
    pre = torsion_precheck(SL, p, bound)
    if not pre.free:
        raise TorsionDetected(f"3p - H is torsion of order {pre.order}; the sequence would repeat")
    C, base = pre.cubic, pre.base_point
    q1 = third_intersection(C, base, base)
    out = []
    q = ProjPoint(base)
    seen = set()
    for n in range(1, N + 1):
        q = group_add(C, base, q, q1)
        r = group_neg(C, base, q)
        for kind, pt in (("q", q), ("r", r)):
            if pt in seen or pt == ProjPoint(base):
                raise TorsionDetected(f"point repeated at n = {n}; the class is torsion")
            seen.add(pt)
            P = _to_surface(pre, pt, SL)
            out.append(GeneratedPoint(P, pre.parameter, n, kind, naive_height(P), pt))
    return out


def verify_qr(SL, p, points):
    """Re-check each defining relation with a different origin and reference line."""
    coords = _line_point(SL, p)
    fa = fiber_at_line_point(SL, coords)
    C, base = fa.cubic, fa.point
    q1 = third_intersection(C, base, base)
    alt_origin = q1
    for g in points:
        n = g.index
        if g.kind == "q":
            D = DivisorClass(C, [(g.plane_point, 1), (base, 3 * n - 1)], n)
        else:
            D = DivisorClass(C, [(g.plane_point, -1), (base, 3 * n + 1)], n)
        s = reduce_class(D, alt_origin, line_point=base)
        if s != ProjPoint(alt_origin):
            return False
    return True


# ---------------------------------------------------------------------------
# three lines


class ThreeLineConfig:
    """Lines L, L1, L2 on S with L skew to both and L1 meeting L2."""

    def __init__(self, quartic: MPoly, L: LineInP3, L1: LineInP3, L2: LineInP3, certify=True):
        for name, line in (("L", L), ("L'", L1), ("L''", L2)):
            on = quartic.subs(dict(zip(quartic.vars, line.parametrization())), vars=("U", "V"))
            if on:
                raise LineNotOnSurfaceError(f"{name} is not on the surface")
        if L.meets(L1) or L.meets(L2):
            raise PointGenError("L must be skew to both other lines")
        if L1 == L2 or not L1.meets(L2):
            raise PointGenError("the two other lines must be distinct and meet")
        self.SL = QuarticSurfaceWithLine(quartic, L, certify=certify)
        self.L, self.L1, self.L2 = self.SL.line, L1, L2

    def section_points(self, t):
        """(q_H, r_H): where the plane at t meets L1 and L2, in plane coordinates."""
        H = self.SL.plane(t)
        out = []
        for line in (self.L1, self.L2):
            P, Q = line.span_points
            u, v = dot(H.dual, Q.coords), -dot(H.dual, P.coords)
            pt = line.point_at(u, v)
            out.append(ProjPoint(H.plane_coords(pt)))
        return H, out[0], out[1]


def three_lines_sequence(cfg: ThreeLineConfig, t, N, bound=12):
    """x_1..x_N with x_n + n q_H ~ (n + 1) r_H (origin r_H).

    Returns (points, verdict) where verdict is 'ok' or 'skip' (torsion).
    """
    t = INF if t is INF else Fraction(t)
    C = residual_cubic(cfg.SL, t)
    if not C.is_smooth():
        raise PointGenError("fiber is singular")
    H, qh, rh = cfg.section_points(t)
    for pt in (qh, rh):
        if C(pt.coords) != 0:
            raise PointGenError("section point is not on the fiber")
        if all(c == 0 for c in C.gradient(pt.coords)):
            raise PointGenError("section point is singular on the fiber")
    order = torsion_order(C, rh, qh, bound)
    if order != EXCEEDS:
        return [], "skip", order
    out = []
    acc = rh
    seen = {rh}
    for n in range(1, N + 1):
        acc = group_add(C, rh, acc, qh)
        x = group_neg(C, rh, acc)
        if x in seen:
            raise TorsionDetected("repeat in the three-lines sequence")
        seen.add(x)
        D = DivisorClass(C, [(x, 1), (qh, n), (rh, -(n + 1))], 0)
        if reduce_class(D, qh) != qh:
            raise PointGenError("defining relation failed to verify")
        P = ProjPoint(H.image(*x.coords))
        if cfg.SL.quartic.evaluate(P.coords) != 0:
            raise PointGenError("generated point is not on the surface")
        out.append(GeneratedPoint(P, t, n, "x", naive_height(P), x))
    return out, "ok", order


# ---------------------------------------------------------------------------
# height experiment


def height_ratio_experiment(SL, params, k=3):
    """Rows (u, h_B, proxy, ratio) for the section q_1 over p = P0 + u*P1.

    The canonical-height proxy is (h(2^k q_1) - h(p)) / 4^k with naive
    heights of the image points in P^3, clipped at 0; it is exactly 0 when
    q_1 is 2^k-torsion.
    """
    rows = []
    notes = []
    for u in params:
        u = Fraction(u)
        base = ProjPoint(SL.line.point_at(1, u))
        hb = naive_height(ProjPoint((u.denominator, u.numerator)))
        if hb == 0:
            notes.append(f"u = {u}: base height 0, skipped")
            continue
        try:
            fa = fiber_at_line_point(SL, base)
        except GeometryError as exc:
            notes.append(f"u = {u}: {exc}")
            continue
        if fa.report.kodaira != "smooth":
            notes.append(f"u = {u}: singular fiber ({fa.report.kodaira}), skipped")
            continue
        C, b = fa.cubic, fa.point
        q1 = third_intersection(C, b, b)
        pt = group_smul(C, b, 2 ** k, q1)
        P = ProjPoint(fa.plane.image(*pt.coords))
        B = ProjPoint(fa.plane.image(*b))
        proxy = max(0.0, naive_height(P) - naive_height(B)) / 4 ** k
        rows.append({"u": str(u), "h_B": hb, "proxy": proxy, "ratio": proxy / hb})
    return rows, notes


# ---------------------------------------------------------------------------
# threefolds


def slice_threefold(X: MPoly, L: LineInP3, H3, certify=True, vars=("X", "Y", "Z", "W")):
    """Restrict a quartic threefold to the 3-plane spanned by ``H3`` (4 points)."""
    basis = [ProjPoint(p).coords for p in H3]
    if len(basis) != 4 or rank([list(b) for b in basis]) != 4:
        raise PointGenError("the 3-plane needs four independent spanning points")
    n = len(X.vars)
    if len(L.vars) != n:
        L = LineInP3(L.span_points[0], L.span_points[1], vars=X.vars)
    on = X.subs(dict(zip(X.vars, L.parametrization())), vars=("U", "V"))
    if on:
        raise LineNotOnSurfaceError("the line is not on the threefold")
    span_rank = rank([list(b) for b in basis] + [list(p.coords) for p in L.span_points])
    if span_rank != 4:
        raise PointGenError("the 3-plane does not contain the line")
    ys = MPoly.gens(vars)
    forms = [sum((ys[j] * basis[j][i] for j in range(4)), MPoly(vars, {})) for i in range(n)]
    S = X.subs(dict(zip(X.vars, forms)), vars=vars)
    induced = [_coords_in_basis(basis, p.coords) for p in L.span_points]
    line = LineInP3(induced[0], induced[1], vars=vars)
    try:
        return QuarticSurfaceWithLine(S, line, certify=certify)
    except SingularSurfaceError as exc:
        raise SingularSurfaceError("the slice is singular; choose a different 3-plane") from exc


def _coords_in_basis(basis, point):
    # solve sum_j y_j basis_j = point over Q
    rows = [[basis[j][i] for j in range(len(basis))] + [point[i]] for i in range(len(point))]
    null = nullspace(rows)
    for v in null:
        if v[-1] != 0:
            return tuple(-x / v[-1] for x in v[:-1])
    raise PointGenError("point is not in the span")


@dataclass
class ConeResult:
    is_cone: bool
    restricted: MPoly
    base_quartic: MPoly | None = None
    base_smooth: bool | None = None

    def to_json(self):
        return {
            "is_cone": self.is_cone,
            "restricted": str(self.restricted),
            "base_quartic": str(self.base_quartic) if self.base_quartic is not None else None,
            "base_smooth": self.base_smooth,
        }


def cone_test(X: MPoly, p, completion=None):
    """Is the tangent hyperplane section at p a cone with vertex p?

    ``completion`` optionally gives the other basis vectors of the tangent
    hyperplane; by default they come from the canonical nullspace basis.
    """
    coords = tuple(Fraction(c) for c in (p.coords if isinstance(p, ProjPoint) else p))
    g = tangent_plane(X, coords)
    n = len(X.vars)
    if completion is None:
        hyper = [list(v) for v in nullspace([list(g)])]
        # swap p in for the first basis vector it genuinely involves
        for j in range(len(hyper)):
            trial = [list(coords)] + [hyper[i] for i in range(len(hyper)) if i != j]
            if rank(trial) == n - 1:
                completion = trial[1:]
                break
    basis = [list(coords)] + [list(v) for v in completion]
    if rank(basis) != n - 1 or any(dot(g, v) != 0 for v in basis):
        raise PointGenError("completion does not span the tangent hyperplane with p")
    names = tuple(f"y{i}" for i in range(n - 1))
    ys = MPoly.gens(names)
    forms = [sum((ys[j] * basis[j][i] for j in range(n - 1)), MPoly(names, {})) for i in range(n)]
    R = X.subs(dict(zip(X.vars, forms)), vars=names)
    if R.degree_in("y0") > 0:
        return ConeResult(False, R)
    base = R.with_vars(names[1:])
    try:
        smoothness_certificate(base)
        smooth = True
    except FibrationError:
        smooth = False
    return ConeResult(True, R, base, smooth)
