import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yso5.algebra_core import (I_UNIT, ONE, ZERO, DimensionError, Matrix, Scalar, SparseOp,
                               Sqrt2Scaled, anticommutator, commutator, kron, mat_mul)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=12)
scalars = st.builds(Scalar, fracs, fracs)


def matrices(n=3):
    return st.lists(st.lists(scalars, min_size=n, max_size=n), min_size=n, max_size=n).map(
        Matrix.from_rows)


# scalars ------------------------------------------------------------------

@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a - a == ZERO


@given(scalars)
def test_inverse_and_conjugate(a):
    if a:
        assert a * a.inverse() == ONE
    assert (a * a.conjugate()).im == 0
    assert (a * a.conjugate()).re == a.norm2()


@given(scalars)
def test_str_parse_roundtrip(a):
    assert Scalar.parse(str(a)) == a


def test_canonical_strings():
    assert str(Scalar(1)) == "1/1"
    assert str(Scalar(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4 i"
    assert Scalar.parse("i") == I_UNIT
    assert Scalar.parse("-1/2 i") == Scalar(0, Fraction(-1, 2))
    assert I_UNIT * I_UNIT == Scalar(-1)


def test_floats_rejected():
    with pytest.raises(TypeError):
        Scalar(0.5)


def test_scalar_immutable():
    s = Scalar(1)
    with pytest.raises(AttributeError):
        s._re = Fraction(2)


# matrices -----------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(matrices(), matrices(), matrices())
def test_ring_laws(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ (b + c) == a @ b + a @ c
    assert commutator(a, b) == -commutator(b, a)


@settings(max_examples=30, deadline=None)
@given(matrices(), matrices(), matrices())
def test_jacobi_identity(a, b, c):
    total = (commutator(a, commutator(b, c)) + commutator(b, commutator(c, a))
             + commutator(c, commutator(a, b)))
    assert total.is_zero()


@settings(max_examples=25, deadline=None)
@given(matrices(2), matrices(2), matrices(2), matrices(2))
def test_kron_mixed_product(a, b, c, d):
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


@settings(max_examples=30, deadline=None)
@given(matrices())
def test_json_roundtrip(a):
    assert Matrix.loads(a.dumps()) == a
    assert Matrix.from_json_grid(json.loads(json.dumps(a.to_json_grid()))) == a


@settings(max_examples=30, deadline=None)
@given(matrices())
def test_complex_view_matches(a):
    ref = np.array([[complex(a[i, j]) for j in range(3)] for i in range(3)])
    assert np.array_equal(a.to_complex(), ref)


def test_dimension_error_names_shapes():
    a = Matrix.zeros(2, 3)
    b = Matrix.zeros(4, 5)
    with pytest.raises(DimensionError, match="2x3 by 4x5"):
        mat_mul(a, b)


def test_identity_and_anticommutator():
    e = Matrix.identity(3)
    assert anticommutator(e, e) == e * 2
    assert e.scalar_multiple_of_identity() == ONE
    assert e.trace() == Scalar(3)


def test_large_kron_is_sparse():
    big = kron(Matrix.identity(32), Matrix.identity(64))
    assert isinstance(big, SparseOp)
    assert big.nnz == 2048


def test_overflow_falls_back_exactly():
    # entries near 2**40 squared overflow int64; the result must stay exact
    n = 2 ** 40 + 1
    m = Matrix.from_rows([[Scalar(n), Scalar(0)], [Scalar(0), Scalar(Fraction(1, n))]])
    sq = m @ m
    assert sq[0, 0] == Scalar(n * n)
    assert sq[1, 1] == Scalar(Fraction(1, n * n))


def test_sqrt2_scaled_arithmetic():
    a = Sqrt2Scaled(Matrix.identity(2), -1)   # I / sqrt 2
    assert (a @ a).equals(Matrix.identity(2) * Scalar(Fraction(1, 2)))
    b = Sqrt2Scaled(Matrix.identity(2), 1)    # sqrt 2 I
    assert (a + b).equals(Sqrt2Scaled(Matrix.identity(2) * 3, -1))
    with pytest.raises(ValueError):
        a + Sqrt2Scaled(Matrix.identity(2), 0)
    assert not Sqrt2Scaled(Matrix.identity(2), 1).equals(Matrix.identity(2))
