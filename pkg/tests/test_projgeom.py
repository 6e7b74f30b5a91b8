import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quarticfib.exactalg import MPoly
from quarticfib.projgeom import (
    INF,
    GeometryError,
    LineInP3,
    NotOnSurfaceError,
    ProjPoint,
    SingularPointError,
    gradient_at,
    pencil_parameter_of,
    pencil_plane,
    rank,
    restrict_form,
    tangent_plane,
)

from _support import FERMAT, FERMAT_LINE, P3

params = st.fractions(min_value=-30, max_value=30, max_denominator=7)
L = LineInP3(*FERMAT_LINE)


def test_projpoint_normalization():
    assert ProjPoint((-2, 4, 0, 6)).coords == (1, -2, 0, -3)
    assert ProjPoint((Fraction(1, 2), Fraction(1, 3))) == ProjPoint((3, 2))
    with pytest.raises(GeometryError):
        ProjPoint((0, 0, 0))


def test_fermat_pencil_plane_matches_hand_choice():
    a = Fraction(5, 3)
    H = pencil_plane(L, a)
    U, V, T = MPoly.gens(("U", "V", "T"))
    assert list(H.forms) == [U + a * T, U - a * T, V + T, V - T]


def test_fermat_plane_at_infinity():
    H = pencil_plane(L, INF)
    assert ProjPoint(H.dual) == ProjPoint((0, 0, 1, -1))  # Z = W


def test_restrict_fermat():
    a = Fraction(2)
    U, V, T = MPoly.gens(("U", "V", "T"))
    R = restrict_form(FERMAT, pencil_plane(L, a))
    assert R == 8 * a * U**3 * T + 8 * a**3 * U * T**3 + 8 * V**3 * T + 8 * V * T**3


def test_restrict_zero_and_vanishing_form():
    H = pencil_plane(L, 3)
    assert not restrict_form(MPoly(P3, {}), H)
    lin = MPoly.linear(P3, H.dual)
    assert not restrict_form(lin, H)


def test_tangent_plane_examples():
    assert ProjPoint(tangent_plane(FERMAT, (1, 1, 1, 1))) == ProjPoint((1, -1, 1, -1))
    with pytest.raises(NotOnSurfaceError):
        tangent_plane(FERMAT, (1, 0, 0, 0))
    X, Y, Z, W = MPoly.gens(P3)
    cone = X**2 * Y**2 - Z**4  # singular at [0, 0, 0, 1]
    with pytest.raises(SingularPointError):
        tangent_plane(cone, (0, 0, 0, 1))


@settings(max_examples=40, deadline=None)
@given(params, params)
def test_distinct_planes_meet_in_the_line(t1, t2):
    if t1 == t2:
        return
    d1, d2 = pencil_plane(L, t1).dual, pencil_plane(L, t2).dual
    assert rank([list(d1), list(d2)]) == 2
    for p in L.span_points:
        assert sum(a * b for a, b in zip(d1, p.coords)) == 0


@settings(max_examples=40, deadline=None)
@given(params)
def test_pencil_contains_line_and_inverts(t):
    H = pencil_plane(L, t)
    for p in L.span_points:
        assert H.plane_coords(p.coords)[2] == 0
    assert pencil_parameter_of(L, H.dual) == t


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), params)
def test_restrict_is_ring_homomorphism(c, t):
    X, Y, Z, W = MPoly.gens(P3)
    F = c[0] * X * Y + c[1] * Z**2 + W * X
    G = X + c[2] * Y + c[3] * W
    H = pencil_plane(L, t)
    assert restrict_form(F * G, H) == restrict_form(F, H) * restrict_form(G, H)


def test_tangent_plane_contact_order_two():
    rng = random.Random(7)
    p = (1, 1, 1, 1)
    g = tangent_plane(FERMAT, p)
    names = ("s", "u")
    s, u = MPoly.gens(names)
    for _ in range(10):
        # a random direction inside the tangent plane
        while True:
            d = [rng.randint(-5, 5) for _ in range(3)]
            last = g[3]
            w = -sum(gi * di for gi, di in zip(g[:3], d)) / last
            d = d + [w]
            if rank([list(p), d]) == 2:
                break
        line = [s * a + u * b for a, b in zip(p, d)]
        f = FERMAT.subs(dict(zip(P3, line)), vars=names)
        # restriction to the line vanishes to order >= 2 at u = 0
        assert all(e[1] >= 2 for e in f.terms)


def test_gradient_at_fermat():
    assert gradient_at(FERMAT, (1, 1, 1, 1)) == (4, -4, 4, -4)
