import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quarticfib.cubiclaw import (
    EXCEEDS,
    CubicError,
    DivisorClass,
    TernaryCubic,
    aronhold_invariants,
    classify_by_orders,
    classify_kodaira,
    group_add,
    group_neg,
    group_smul,
    hyperplane_point,
    is_flex,
    reduce_class,
    third_intersection,
    torsion_order,
    two_torsion_tangent,
)
from quarticfib.projgeom import ProjPoint

from _support import random_smooth_cubic, weierstrass

FERMAT_CUBIC = TernaryCubic.parse("U^3 + V^3 + T^3")


def hesse(m):
    return TernaryCubic.parse(f"U^3 + V^3 + T^3 + 6*({m})*U*V*T")


# --- invariants -------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=5))
def test_hesse_normalization(m):
    S, T, D, _ = aronhold_invariants(hesse(m))
    assert S == m - m**4
    assert T == 1 - 20 * m**3 - 8 * m**6
    assert D == T * T + 64 * S**3


@settings(max_examples=30, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6))
def test_j_matches_weierstrass_oracle(a, b):
    # independent closed form for the short Weierstrass model
    dw = -16 * (4 * a**3 + 27 * b**2)
    C = weierstrass(a, b)
    S, T, D, j = aronhold_invariants(C)
    if dw == 0:
        assert D == 0
        return
    assert j == Fraction(1728 * 4 * a**3, 4 * a**3 + 27 * b**2)
    assert D == Fraction(-1, 3**9) * dw


def test_invariant_examples():
    assert aronhold_invariants(FERMAT_CUBIC)[0] == 0
    assert aronhold_invariants(FERMAT_CUBIC)[3] == 0
    assert aronhold_invariants(TernaryCubic.parse("V^2*T - U^3"))[2] == 0
    # j = 1728 curve y^2 = x^3 - x
    assert aronhold_invariants(weierstrass(-1, 0))[3] == 1728


def test_classify_by_orders_table():
    assert classify_by_orders(None, None, 0) == "smooth"
    assert classify_by_orders(0, 0, 1) == "I1"
    assert classify_by_orders(0, 0, 3) == "I3"
    assert classify_by_orders(1, 1, 2) == "II"
    assert classify_by_orders(1, 2, 3) == "III"
    assert classify_by_orders(2, 2, 4) == "IV"


# --- third intersection and group law --------------------------------------------


def test_third_intersection_examples():
    r = third_intersection(FERMAT_CUBIC, (1, -1, 0), (1, 0, -1))
    assert r == ProjPoint((0, 1, -1))
    # a flex is its own tangent third point
    assert third_intersection(FERMAT_CUBIC, (1, -1, 0), (1, -1, 0)) == ProjPoint((1, -1, 0))


def test_tangent_third_point_on_nonflex():
    C = weierstrass(-2, 0)
    p = (2, 2, 1)
    r = third_intersection(C, p, p)
    assert r != ProjPoint(p)
    assert C(r.coords) == 0


def test_group_axioms_random_cubics():
    rng = random.Random(2024)
    for _ in range(5):
        C, pts = random_smooth_cubic(rng, box=3)
        O = pts[0]
        for _ in range(50):
            p, q, r = (rng.choice(pts) for _ in range(3))
            assert group_add(C, O, p, O) == p
            assert group_add(C, O, p, group_neg(C, O, p)) == O
            assert group_add(C, O, p, q) == group_add(C, O, q, p)
            lhs = group_add(C, O, group_add(C, O, p, q), r)
            rhs = group_add(C, O, p, group_add(C, O, q, r))
            assert lhs == rhs


def test_smul_matches_repeated_addition():
    C = weierstrass(-2, 0)
    O, P = (0, 1, 0), (2, 2, 1)
    acc = ProjPoint(O)
    for n in range(6):
        assert group_smul(C, O, n, P) == acc
        acc = group_add(C, O, acc, P)
    assert group_smul(C, O, -3, P) == group_neg(C, O, group_smul(C, O, 3, P))


def test_reduce_class_examples():
    rng = random.Random(5)
    C, pts = random_smooth_cubic(rng, box=3)
    O, p, q = pts[0], pts[1], pts[2]
    assert reduce_class(DivisorClass(C, [(p, 1), (O, -1)]), O) == p
    D1 = DivisorClass(C, [(p, 2), (q, -1), (O, -1)])
    D2 = DivisorClass(C, [(O, -1), (q, -1), (p, 2)])
    assert reduce_class(D1, O) == reduce_class(D2, O)
    with pytest.raises(CubicError):
        reduce_class(DivisorClass(C, [(p, 1)]), O)


def test_flex_class_is_trivial():
    f1, f2 = (1, -1, 0), (0, 1, -1)
    D = DivisorClass(FERMAT_CUBIC, [(f1, 3)], 1)
    assert reduce_class(D, f2) == ProjPoint(f2)


def test_reference_line_independence():
    rng = random.Random(11)
    for _ in range(3):
        C, pts = random_smooth_cubic(rng, box=3)
        O = pts[0]
        D = DivisorClass(C, [(pts[1], 2), (pts[2], 2), (pts[3], -1)], 1)
        a = reduce_class(D, O)
        b = reduce_class(D, O, line_point=pts[4])
        c = reduce_class(D, O, line_point=pts[5])
        assert a == b == c
        assert hyperplane_point(C, O) == hyperplane_point(C, O, line_point=pts[6])


def test_torsion_order_examples():
    C = weierstrass(-2, 0)
    O = (0, 1, 0)
    assert torsion_order(C, O, O) == 1
    assert torsion_order(C, O, (0, 0, 1)) == 2
    assert torsion_order(C, O, (2, 2, 1)) == EXCEEDS


# --- dual-method oracles -----------------------------------------------------------


def _flex_samples():
    rng = random.Random(3)
    samples = []
    for _ in range(3):
        C, pts = random_smooth_cubic(rng, box=3)
        samples += [(C, pts[0], p) for p in pts[1:]]
    samples += [(FERMAT_CUBIC, (0, 1, -1), p) for p in ((1, -1, 0), (1, 0, -1), (0, 1, -1))]
    E = weierstrass(-2, 0)
    samples += [(E, (0, 0, 1), (0, 1, 0)), (E, (0, 1, 0), (2, 2, 1)), (E, (0, 1, 0), (0, 0, 1))]
    return samples


def test_flex_dual_method_agreement():
    samples = _flex_samples()
    assert len(samples) >= 30
    flexes = 0
    for C, O, p in samples:
        via_class = reduce_class(DivisorClass(C, [(p, 3)], 1), O) == ProjPoint(O)
        assert is_flex(C, p) == via_class
        flexes += via_class
    assert 0 < flexes < len(samples)


def _torsion_pairs():
    E = weierstrass(-2, 0)  # y^2 = x^3 - 2x, 2-torsion (0, 0), P = (2, 2)
    O, Tt, P = (0, 1, 0), (0, 0, 1), (2, 2, 1)
    multiples = [group_smul(E, O, n, P) for n in range(1, 8)]
    shifted = [group_add(E, O, m, Tt) for m in multiples]
    pairs = [(E, O, m, s) for m, s in zip(multiples, shifted)]
    pairs += [(E, O, multiples[i], multiples[i + 1]) for i in range(6)]
    pairs += [(E, O, multiples[i], shifted[i + 2]) for i in range(5)]
    rng = random.Random(9)
    for _ in range(3):
        C, pts = random_smooth_cubic(rng, box=3)
        pairs += [(C, pts[0], pts[i], pts[i + 1]) for i in range(1, 5)]
    return pairs


def test_two_torsion_dual_method_agreement():
    pairs = _torsion_pairs()
    assert len(pairs) >= 30
    hits = 0
    for C, O, p, q in pairs:
        verdict, meet = two_torsion_tangent(C, p, q)
        s = reduce_class(DivisorClass(C, [(p, 1), (q, -1)]), O)
        assert verdict == (torsion_order(C, O, s, 2) == 2)
        hits += verdict
    assert 0 < hits < len(pairs)


# --- singular cubics -------------------------------------------------------------


@pytest.mark.parametrize(
    "text,kind",
    [
        ("V^2*T - U^3 - U^2*T", "I1"),
        ("V^2*T - U^3", "II"),
        ("(U^2 + V^2 - T^2)*U", "I2"),
        ("(U^2 + V^2 - T^2)*(U - T)", "III"),
        ("U*V*T", "I3"),
        ("U*V*(U + V)", "IV"),
        ("V*(V^2 + T^2)", "IV"),
    ],
)
def test_classify_kodaira(text, kind):
    assert classify_kodaira(TernaryCubic.parse(text)) == kind


def test_classify_rejects_smooth():
    with pytest.raises(CubicError):
        classify_kodaira(FERMAT_CUBIC)


def test_concurrency_point_of_fermat_iv_fiber():
    kind, orbits = classify_kodaira(TernaryCubic.parse("V*(V^2 + T^2)"), with_points=True)
    assert kind == "IV"
    assert [o.point for o in orbits] == [(1, 0, 0)]
