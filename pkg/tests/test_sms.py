import pytest
from hypothesis import given, strategies as st

from fastmm.coefficient import Coefficient, CoeffMatrix
from fastmm.sms import (
    DuplicateEntry, IndexOutOfRange, MalformedEntry, MalformedHeader, MissingTerminator,
    SurdEntryError, parse_sms, write_sms,
)

entries = st.fractions(min_value=-9, max_value=9, max_denominator=8)


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_roundtrip(r, c, data):
    rows = [[data.draw(entries) for _ in range(c)] for _ in range(r)]
    M = CoeffMatrix(rows, c)
    assert parse_sms(write_sms(M)) == M


def test_parse_basic():
    M = parse_sms("2 3 M\n1 1 1\n2 3 -1/2\n0 0 0\n")
    assert M.shape == (2, 3)
    assert M.entries[1][2] == Coefficient(-1) / 2
    assert M.nnz() == 2


@pytest.mark.parametrize("text, exc", [
    ("2 2\n0 0 0\n", MalformedHeader),
    ("", MalformedHeader),
    ("2 2 M\n3 1 1\n0 0 0\n", IndexOutOfRange),
    ("2 2 M\n1 1 1\n1 1 2\n0 0 0\n", DuplicateEntry),
    ("2 2 M\n1 1 1\n", MissingTerminator),
    ("2 2 M\n1 1 x\n0 0 0\n", MalformedEntry),
])
def test_errors(text, exc):
    with pytest.raises(exc):
        parse_sms(text)


def test_surd_needs_decimal():
    M = CoeffMatrix([[Coefficient.sqrt(3)]])
    with pytest.raises(SurdEntryError):
        write_sms(M)
    assert "1.7320508075688772" in write_sms(M, decimal=True)
