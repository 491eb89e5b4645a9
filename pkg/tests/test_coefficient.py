from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fastmm.coefficient import Coefficient, CoeffMatrix, inverse, rank, solve_left

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
q3 = st.builds(lambda a, b: Coefficient(a, b, 3), fracs, fracs)
nonzero = q3.filter(lambda c: not c.is_zero())


@given(q3, q3, q3)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == Coefficient(0)


@given(nonzero)
def test_inverse(x):
    assert x * x.inverse() == Coefficient(1)
    assert x / x == Coefficient(1)


@given(q3)
def test_float_agrees(x):
    assert float(x) == pytest.approx(float(x.a) + float(x.b) * 3**0.5, abs=1e-12)


@given(q3)
def test_parse_str_roundtrip(x):
    assert Coefficient.parse(str(x)) == x


@given(q3, q3)
def test_sign_order_consistent(x, y):
    assert (x < y) == (float(x) < float(y)) or abs(float(x) - float(y)) < 1e-12


def test_canonical_forms():
    assert Coefficient(2, 0, 3) == Coefficient(2)
    assert Coefficient(1, 1, 1) == Coefficient(2)
    assert Coefficient.sqrt(4) == 2
    assert Coefficient.sqrt(3) * Coefficient.sqrt(3) == 3
    assert Coefficient.parse("sqrt3*1/2") == Coefficient(0, Fraction(1, 2), 3)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        Coefficient.sqrt(2) + Coefficient.sqrt(3)


def test_unit():
    assert Coefficient(-1).is_unit()
    assert not Coefficient(Fraction(1, 2)).is_unit()


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_matrix_inverse(rows):
    M = CoeffMatrix(rows)
    if rank(M) < 3:
        with pytest.raises(ZeroDivisionError):
            inverse(M)
        return
    assert M @ inverse(M) == CoeffMatrix.identity(3)


def test_solve_left():
    X = CoeffMatrix([[1, 2], [0, 1], [3, 4]])
    K = CoeffMatrix([[1, Coefficient.sqrt(3)]])
    M = K @ X.submatrix([0, 1])
    assert solve_left(M, X.submatrix([0, 1])) == K
