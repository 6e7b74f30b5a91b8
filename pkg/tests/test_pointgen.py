import math
import random

import pytest

from quarticfib.cubiclaw import DivisorClass, reduce_class, third_intersection
from quarticfib.exactalg import MPoly
from quarticfib.fibration import LineNotOnSurfaceError, SingularSurfaceError, fiber_at_line_point
from quarticfib.pointgen import (
    PointGenError,
    ThreeLineConfig,
    TorsionDetected,
    cone_test,
    height_ratio_experiment,
    naive_height,
    qr_sequence,
    slice_threefold,
    three_lines_sequence,
    torsion_precheck,
    verify_qr,
)
from quarticfib.projgeom import LineInP3, ProjPoint, nullspace, rank

from _support import (
    FERMAT,
    SYNTHETIC,
    SYNTHETIC_EXTRA,
    SYNTHETIC_LINE,
    SYNTHETIC_POINT,
    fermat_sl,
    synthetic_sl,
)

V5 = ("X", "Y", "Z", "W", "V")
G5 = MPoly.gens(V5)
FERMAT3 = G5[0] ** 4 - G5[1] ** 4 + G5[2] ** 4 - G5[3] ** 4 + G5[4] ** 4
LINE5 = LineInP3((1, 1, 0, 0, 0), (0, 0, 1, 1, 0), vars=V5)
COORD_H3 = [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0)]


@pytest.fixture(scope="module")
def fermat():
    return fermat_sl()


@pytest.fixture(scope="module")
def synthetic():
    return synthetic_sl()


@pytest.fixture(scope="module")
def qr_points(synthetic):
    return qr_sequence(synthetic, SYNTHETIC_POINT, 10)


def test_naive_height():
    assert naive_height(ProjPoint((1, 0, 0, 0))) == 0
    assert naive_height(ProjPoint((3, -5, 2, 1))) == pytest.approx(math.log(5))


@pytest.mark.parametrize("p", [(1, 1, 2, 2), (1, 1, 3, 3), (2, 2, 3, 3), (1, 1, -5, -5), (3, 3, 7, 7)])
def test_fermat_precheck_order_two(fermat, p):
    assert torsion_precheck(fermat, p).order == 2


def test_fermat_qr_refuses(fermat):
    with pytest.raises(TorsionDetected):
        qr_sequence(fermat, (1, 1, 2, 2), 3)


def test_precheck_flex_reports_order_one():
    # a flex base point gives delta = origin
    from quarticfib.cubiclaw import TernaryCubic

    C = TernaryCubic.parse("U^3 + V^3 + T^3")
    p = (1, -1, 0)
    assert reduce_class(DivisorClass(C, [(p, 3)], 1), p) == ProjPoint(p)


def test_synthetic_precheck_free(synthetic):
    assert torsion_precheck(synthetic, SYNTHETIC_POINT).free


def test_qr_points(synthetic, qr_points):
    assert len(qr_points) == 20
    assert len({g.point for g in qr_points}) == 20
    for g in qr_points:
        assert synthetic.quartic.evaluate(g.point.coords) == 0
        assert g.height >= 0
    assert verify_qr(synthetic, SYNTHETIC_POINT, qr_points)


def test_q1_is_tangent_third_point(synthetic, qr_points):
    fa = fiber_at_line_point(synthetic, SYNTHETIC_POINT)
    q1 = third_intersection(fa.cubic, fa.point, fa.point)
    assert qr_points[0].kind == "q" and qr_points[0].plane_point == q1


def test_qr_relation_with_line_origin(synthetic, qr_points):
    # q_n + (3n - 1) p - n H reduces to the origin p
    fa = fiber_at_line_point(synthetic, SYNTHETIC_POINT)
    for g in qr_points:
        if g.kind != "q":
            continue
        n = g.index
        D = DivisorClass(fa.cubic, [(g.plane_point, 1), (fa.point, 3 * n - 1)], n)
        assert reduce_class(D, fa.point) == ProjPoint(fa.point)


def test_heights_increase_on_tail(qr_points):
    hs = [g.height for g in qr_points]
    tail = hs[len(hs) // 2:]
    assert all(a < b for a, b in zip(tail, tail[1:]))


def _config():
    return ThreeLineConfig(
        SYNTHETIC, LineInP3(*SYNTHETIC_LINE), LineInP3(*SYNTHETIC_EXTRA[0]), LineInP3(*SYNTHETIC_EXTRA[1])
    )


def test_three_line_incidences_checked():
    L, L1 = LineInP3(*SYNTHETIC_LINE), LineInP3(*SYNTHETIC_EXTRA[0])
    with pytest.raises(PointGenError):
        ThreeLineConfig(SYNTHETIC, L, L1, L1)
    with pytest.raises(PointGenError):
        ThreeLineConfig(SYNTHETIC, L1, L, LineInP3(*SYNTHETIC_EXTRA[1]))
    with pytest.raises(LineNotOnSurfaceError):
        ThreeLineConfig(SYNTHETIC, L, L1, LineInP3((0, 0, 1, 0), (1, 0, 0, 0)))


@pytest.mark.parametrize("t", [1, 2, -1, 3])
def test_three_lines_sequence(t):
    cfg = _config()
    pts, verdict, _ = three_lines_sequence(cfg, t, 6)
    assert verdict == "ok"
    assert len({g.point for g in pts}) == 6
    _, qh, rh = cfg.section_points(t)
    from quarticfib.fibration import residual_cubic

    C = residual_cubic(cfg.SL, t)
    for g in pts:
        assert SYNTHETIC.evaluate(g.point.coords) == 0
        D = DivisorClass(C, [(g.plane_point, 1), (qh, g.index), (rh, -(g.index + 1))])
        assert reduce_class(D, rh) == rh


def test_three_lines_skip_on_torsion():
    pts, verdict, order = three_lines_sequence(_config(), 0, 4)
    assert verdict == "skip" and pts == [] and order == 1


def test_height_ratio_fermat_vanishes(fermat):
    rows, _ = height_ratio_experiment(fermat, [2, 3, 5, 11, 101])
    assert rows and all(r["ratio"] == 0 for r in rows)


def test_height_ratio_free_section_stays_positive(synthetic):
    rows, notes = height_ratio_experiment(synthetic, [2, 3, 5, 7, 11, 13])
    ratios = [r["ratio"] for r in rows]
    assert len(ratios) >= 4
    assert all(r > 0 for r in ratios)
    # bounded oscillation over the tail
    assert max(ratios) / min(ratios) < 3


def test_slice_fermat_threefold():
    SL = slice_threefold(FERMAT3, LINE5, COORD_H3)
    assert SL.quartic == FERMAT.with_vars(SL.quartic.vars)
    assert SL.line == LineInP3((1, 1, 0, 0), (0, 0, 1, 1))


def test_slice_rejects_plane_missing_line():
    with pytest.raises(PointGenError):
        slice_threefold(FERMAT3, LINE5, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 0, 1)])


def test_slice_singular_is_reported():
    p = (1, 1, 0, 0, 0)
    # V = 0 in another basis gives a smooth slice
    H3 = [(1, 1, 0, 0, 0), (0, 0, 1, 1, 0), (1, -1, 0, 0, 0), (0, 0, 1, -1, 0)]
    assert slice_threefold(FERMAT3, LINE5, H3).certificate is not None
    G = G5[0] ** 4 - G5[1] ** 4 + G5[2] ** 4 - G5[3] ** 4
    with pytest.raises(SingularSurfaceError):
        slice_threefold(G + G5[4] ** 2 * (G5[0] - G5[1]) ** 2, LINE5, [p, (0, 0, 1, 1, 0), (0, 0, 0, 0, 1), (1, -1, 0, 0, 0)])


def test_cone_on_fermat_threefold():
    res = cone_test(FERMAT3, (1, 1, 0, 0, 0))
    assert res.is_cone and res.base_smooth


def test_cone_generic_point_false():
    X = FERMAT3 + G5[0] * G5[1] * G5[2] * G5[4]
    assert not cone_test(X, (1, 1, 0, 0, 0)).is_cone


def test_cone_by_construction_and_basis_invariance():
    x = G5
    base = x[1] ** 4 + x[2] ** 4 + x[3] ** 4  # smooth plane quartic
    X = x[4] * (x[0] ** 3 + x[1] ** 3 + x[2] ** 3 + x[3] ** 3 + x[4] ** 3) + base
    p = (1, 0, 0, 0, 0)
    a = cone_test(X, p)
    assert a.is_cone and a.base_smooth
    rng = random.Random(1)
    g = (0, 0, 0, 0, 1)
    hyper = nullspace([list(g)])
    for _ in range(3):
        while True:
            comp = [[sum(rng.randint(-2, 2) * v[i] for v in hyper) for i in range(5)] for _ in range(3)]
            if rank([list(p)] + comp) == 4:
                break
        assert cone_test(X, p, completion=comp).is_cone
    # and the non-cone verdict is stable too
    Y = X + x[0] ** 2 * x[1] * x[2]
    for comp in (None, [(0, 1, 1, 0, 0), (0, 0, 1, 1, 0), (0, 1, 0, 1, 0)]):
        assert not cone_test(Y, p, completion=comp).is_cone
