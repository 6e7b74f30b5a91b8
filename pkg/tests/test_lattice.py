import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quarticfib.lattice import (
    LatticeError,
    SchubertClass,
    cone_census_identity,
    fano_curve_degree,
    general_gram,
    general_gram_formula,
    line_count_class,
    line_self_intersection,
    pushpull_check,
    quartic_gram,
    schubert_mul,
    symbolic_general_det,
    symbolic_quartic_det,
)


def test_quartic_det_symbolic():
    d, s = symbolic_quartic_det()
    assert sympy.expand(d - (-6 - 9 * s)) == 0


def test_quartic_examples():
    g = quartic_gram(-6)
    assert g.determinant == 48 and g.verdict == "independent"
    bad = quartic_gram(-2)
    assert bad.determinant == 12
    assert "violation" in bad.constraints


@pytest.mark.parametrize("m", range(2, 11))
def test_general_det_matches_expansion(m):
    d, (b, c) = symbolic_general_det(m)
    assert sympy.expand(d - general_gram_formula(m, b, c)) == 0


def test_general_examples():
    assert general_gram(3, 2, 4).determinant == 48
    assert general_gram(2, 2, 4).determinant == 20
    assert general_gram(2, 0, 1).determinant == 4
    with pytest.raises(LatticeError):
        general_gram(1, 0, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(0, 20), st.integers(1, 20))
def test_general_det_positive(m, b, c):
    assert general_gram(m, b, c).determinant > 0


def test_adjunction_and_pushpull():
    assert line_self_intersection() == -2
    assert pushpull_check(1, -2) == -2


def test_line_count_examples():
    assert line_count_class(4, 4).coeffs == {(3, 2): 320}
    assert line_count_class(3, 3).coeffs == {(2, 2): 27}
    assert line_count_class(4, 5).coeffs == {(3, 3): 2875}
    with pytest.raises(LatticeError):
        line_count_class(7, 3)


@pytest.mark.parametrize("n", range(3, 7))
@pytest.mark.parametrize("d", range(1, 8))
def test_line_count_positive(n, d):
    cls = line_count_class(n, d)
    assert all(isinstance(v, int) and v > 0 for v in cls.coeffs.values())


def test_pieri_self_test():
    s1 = SchubertClass(3, {(1, 0): 1})
    s11 = SchubertClass(3, {(1, 1): 1})
    assert (s1 * s1).coeffs == {(2, 0): 1, (1, 1): 1}
    assert schubert_mul(s11, s11).coeffs == {(2, 2): 1}


def test_fano_degree_needs_curve_dimension():
    with pytest.raises(LatticeError):
        fano_curve_degree(3, 3)


def test_fano_degree_and_cone_identity():
    assert fano_curve_degree(4, 4) == 320
    assert cone_census_identity() == 320 == fano_curve_degree(4, 4)
