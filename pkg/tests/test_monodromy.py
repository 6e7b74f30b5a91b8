import itertools

import pytest
from hypothesis import given, strategies as st

from quarticfib.monodromy import (
    MonodromyError,
    MonodromyMatrix,
    case_analysis,
    char_poly,
    euler_budget_solver,
    fixed_torsion,
    kodaira_matrix,
    min_singular_fibers,
)

TYPES = ("I1", "I2", "I3", "II", "III", "IV")


def test_table_matrices():
    assert kodaira_matrix("II") == ((1, 1), (-1, 0))
    assert kodaira_matrix("III") == ((0, 1), (-1, 0))
    assert kodaira_matrix("IV") == ((0, 1), (-1, -1))
    assert kodaira_matrix("I3") == ((1, 3), (0, 1))
    with pytest.raises(MonodromyError):
        kodaira_matrix("I0*")


def test_finite_orders():
    assert (kodaira_matrix("II") ** 3).is_minus_identity()
    assert (kodaira_matrix("II") ** 6).is_identity()
    assert (kodaira_matrix("III") ** 4).is_identity()
    assert (kodaira_matrix("IV") ** 3).is_identity()


@given(st.integers(1, 12), st.integers(1, 40))
def test_ib_infinite_order(b, n):
    assert not (kodaira_matrix(f"I{b}") ** n).is_identity()


def test_char_polys():
    # coefficients of lambda^2 + c1 lambda + c0
    assert char_poly(kodaira_matrix("II")) == (1, -1, 1)
    assert char_poly(kodaira_matrix("III")) == (1, 0, 1)
    assert char_poly(kodaira_matrix("IV")) == (1, 1, 1)


def test_det_one():
    for k in TYPES:
        assert kodaira_matrix(k).det == 1
    with pytest.raises(MonodromyError):
        MonodromyMatrix(((2, 0), (0, 1)))


def test_fixed_examples():
    fx = fixed_torsion(kodaira_matrix("I1"), 5)
    assert sorted(fx.elements) == [(x, 0) for x in range(5)]
    assert len(fx.primitive) == 4
    assert fixed_torsion(kodaira_matrix("II"), 5).primitive == []
    assert sorted(fixed_torsion(kodaira_matrix("III"), 2).elements) == [(0, 0), (1, 1)]


@pytest.mark.parametrize("m", range(2, 31))
def test_fixed_sets_are_subgroups(m):
    for k in TYPES:
        fx = fixed_torsion(kodaira_matrix(k), m)
        elems = set(fx.elements)
        for u, v in itertools.product(elems, repeat=2):
            assert ((u[0] + v[0]) % m, (u[1] + v[1]) % m) in elems


@pytest.mark.parametrize("m", range(4, 31))
def test_fixed_torsion_statements_large_m(m):
    # I_b fixes a cyclic group; II, III, IV fix no primitive point when m > 3
    for b in (1, 2, 3):
        fx = fixed_torsion(kodaira_matrix(f"I{b}"), m)
        assert fx.primitive and len(fx.generators) <= 2
    for k in ("II", "III", "IV"):
        assert fixed_torsion(kodaira_matrix(k), m).primitive == []


def test_fixed_torsion_m3():
    assert fixed_torsion(kodaira_matrix("IV"), 3).primitive
    assert fixed_torsion(kodaira_matrix("II"), 3).primitive == []
    assert fixed_torsion(kodaira_matrix("III"), 3).primitive == []


def test_budget_examples():
    assert euler_budget_solver({"IV": 2}, ("I3",)) == []
    assert euler_budget_solver({"IV": 2}, ("I2",)) == [{"IV": 2, "I2": 8}]
    assert min_singular_fibers() == 6


@pytest.mark.parametrize("m", range(4, 31))
def test_case_large_m(m):
    v = case_analysis(m)
    assert v.allowed_transverse_types == {"I1", "I2", "I3"}
    assert v.required_nontransverse_types == {"IV"}
    assert v.min_lines_meeting_L == 6
    assert v.euler_equation_solvable


def test_case_m3():
    v = case_analysis(3)
    assert not v.euler_equation_solvable
    assert v.min_lines_meeting_L == 6
    assert v.required_nontransverse_types == {"IV"}


def test_case_m2_derived_counts():
    v = case_analysis(2)
    assert v.allowed_transverse_types == {"I2"}
    # four type-III fibers at the simple branch points leave 12 for I2
    assert v.min_I2_count == 6
    assert v.min_lines_meeting_L == 10
    best = min(v.branch_profiles, key=lambda p: p["I2"])
    assert best["double"] == ["III"] * 4


def test_case_rejects_small_m():
    with pytest.raises(MonodromyError):
        case_analysis(1)
