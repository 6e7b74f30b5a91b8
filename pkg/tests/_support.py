"""Shared builders for the test suite."""

import random
from fractions import Fraction

from quarticfib.cubiclaw import MONOMIALS, TernaryCubic
from quarticfib.exactalg import MPoly
from quarticfib.fibration import QuarticSurfaceWithLine
from quarticfib.projgeom import LineInP3, ProjPoint, nullspace

P3 = ("X", "Y", "Z", "W")
X, Y, Z, W = MPoly.gens(P3)

FERMAT = X**4 - Y**4 + Z**4 - W**4
FERMAT_LINE = ((1, 1, 0, 0), (0, 0, 1, 1))

SYNTHETIC = (
    -2 * X**3 * W + X**2 * Y * Z + X**2 * Y * W + X**2 * Z**2 + 2 * X**2 * W**2
    + 3 * X * Y**2 * Z + X * Y**2 * W - X * Y * Z**2 + 4 * X * Y * Z * W - 2 * X * Z**3
    - X * Z**2 * W - X * Z * W**2 + Y**3 * Z + 2 * Y**2 * Z**2 - Y**2 * W**2
    + Y * Z**2 * W - Y * W**3
)
SYNTHETIC_LINE = ((0, 0, 1, 0), (0, 0, 0, 1))
SYNTHETIC_EXTRA = (((1, 0, 0, 0), (0, 1, 0, 0)), ((1, 0, 0, 1), (0, 1, 0, 0)))
SYNTHETIC_POINT = (0, 0, 1, 1)


def fermat_sl():
    return QuarticSurfaceWithLine(FERMAT, LineInP3(*FERMAT_LINE))


def synthetic_sl():
    return QuarticSurfaceWithLine(SYNTHETIC, LineInP3(*SYNTHETIC_LINE))


def _mono(p, m):
    return p[0] ** m[0] * p[1] ** m[1] * p[2] ** m[2]


def cubic_through(points):
    """The cubic through the given points, or None if not unique."""
    rows = [[Fraction(_mono(p, m)) for m in MONOMIALS] for p in points]
    null = nullspace(rows, 10)
    if len(null) != 1:
        return None
    return TernaryCubic(dict(zip(MONOMIALS, null[0])))


def random_smooth_cubic(rng: random.Random, npoints=9, box=4):
    """A smooth cubic through npoints distinct random integer points (returned too)."""
    while True:
        pts = set()
        while len(pts) < npoints:
            p = tuple(rng.randint(-box, box) for _ in range(3))
            if any(p):
                pts.add(ProjPoint(p))
        pts = sorted(pts, key=lambda q: q.coords)
        C = cubic_through([q.coords for q in pts])
        if C is not None and C.is_smooth():
            return C, pts


def weierstrass(a, b):
    """y^2 z = x^3 + a x z^2 + b z^3 with (U, V, T) = (x, y, z); [0,1,0] is a flex."""
    return TernaryCubic({(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): -Fraction(a), (0, 0, 3): -Fraction(b)})
