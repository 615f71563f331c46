from fractions import Fraction

import pytest

from yso5.algebra_core import Matrix, Scalar, kron
from yso5.rmatrix import (GridError, build_blocks, build_rcheck, build_rcheck_general,
                          default_grid, drop_a_term, scale_a_term, unitarity_check, ybe_check)


def test_blocks_definitions():
    b = build_blocks(5)
    assert b.P @ b.P == b.I
    # A^2 = N A
    assert b.A @ b.A == b.A * 5
    assert b.P @ b.A == b.A == b.A @ b.P
    assert b.A[b.index(2, -2), b.index(1, -1)] == Scalar(1)
    assert b.P[b.index(2, 1), b.index(1, 2)] == Scalar(1)


@pytest.mark.parametrize("x", ["1", "2", "1/3"])
def test_ybe_n5(x):
    assert ybe_check(build_rcheck(5, Scalar(x))).ok


@pytest.mark.parametrize("N", [3, 7])
def test_ybe_general_family(N):
    assert ybe_check(build_rcheck(N, 1)).ok


def test_closed_form_matches_family():
    a, b = build_rcheck(5, 2), build_rcheck_general(5, 2)
    assert a.coefficients() == b.coefficients()


def test_rcheck_entry_values():
    r = build_rcheck(5, 1)
    b = build_blocks(5)
    # diagonal entry (2,2;2,2): u^2 + u (-1 - 3/2) + 3/2 at u = 1 -> 0
    assert r(1)[b.index(2, 2), b.index(2, 2)] == Scalar(0)
    # entry (0,0;0,0) picks up A as well: u^2 + u (1 - 1 - 3/2) + 3/2 at u = 2
    assert r(2)[b.index(0, 0), b.index(0, 0)] == Scalar(Fraction(5, 2))


def test_unitarity_coefficients():
    u = unitarity_check(build_rcheck(5, 1))
    assert u.ok
    assert [str(c) for c in u.coefficients] == ["9/4", "0/1", "-13/4", "0/1", "1/1"]


def test_zero_x_is_trivial():
    r = build_rcheck(5, 0)
    assert r.coeff1.is_zero() and r.coeff0.is_zero()
    assert ybe_check(r).ok


def test_scaled_a_breaks_ybe_with_witness():
    rep = ybe_check(scale_a_term(build_rcheck(5, 1), 2))
    assert not rep.ok
    assert set(rep.witness) == {"u", "v", "row", "col", "lhs", "rhs"}
    assert rep.witness["lhs"] != rep.witness["rhs"]


def test_dropped_a_still_solves_ybe():
    # without A the matrix factors as (u + q1)(u P + q2 I), a multiple of the
    # braid form of Yang's R-matrix; this documents why that mutation is not
    # a sensitivity control
    assert ybe_check(drop_a_term(build_rcheck(5, 1))).ok


def test_grid_validation():
    grid = default_grid()
    assert len(grid) == 49
    with pytest.raises(GridError, match="distinct"):
        ybe_check(build_rcheck(5, 1), grid[:7])
    with pytest.raises(GridError, match="full product"):
        ybe_check(build_rcheck(5, 1), grid[:-1])


def test_bad_n_rejected():
    with pytest.raises(ValueError):
        build_blocks(4)
