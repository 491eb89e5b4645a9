import pytest
from hypothesis import given, strategies as st

from fastmm.coefficient import Coefficient, CoeffMatrix
from fastmm.schemes import load_scheme
from fastmm.slp import SLP, Instr, Op, SLPError, eval_slp, from_text, naive_slp, to_text, transpose_slp
from fastmm.slpopt import best_of, cancellation_free, independent_rows, kernel_decompose, optimize

small = st.sampled_from([0, 0, 0, 1, -1, 2, Coefficient(1) / 2, -Coefficient(1) / 2])


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return CoeffMatrix([[draw(small) for _ in range(c)] for _ in range(r)], c)


def _no_dead(M):
    return all(any(x for x in row) for row in M.entries) and all(any(M.col(j)) for j in range(M.cols))


@given(matrices(), st.sampled_from(["naive", "direct", "kernel", "transpose", "best"]))
def test_optimize_realizes_matrix(M, mode):
    s = optimize(M, mode)
    assert s.matrix() == M
    assert s.counts().key() <= naive_slp(M).counts().key() or mode != "best"


@given(matrices())
def test_text_roundtrip(M):
    s = best_of(M)
    t = from_text(to_text(s))
    assert t.matrix() == M
    assert t.counts() == s.counts()


@given(matrices())
def test_tellegen(M):
    s = best_of(M)
    t = transpose_slp(s)
    assert t.matrix() == M.T
    if _no_dead(M):
        assert t.counts().adds - s.counts().adds == s.n_out - s.n_in
        tt = transpose_slp(t)
        assert tt.counts() == s.counts()
        assert tt.matrix() == M


def test_eval_float_and_exact():
    M = CoeffMatrix([[1, 1, 0], [0, Coefficient.sqrt(3), -1]])
    s = best_of(M)
    assert eval_slp(s, [1, 2, 3]) == M.apply([1, 2, 3])
    out = eval_slp(s, [1.0, 2.0, 3.0])
    assert out[0] == 3.0 and out[1] == pytest.approx(2 * 3**0.5 - 3)


def test_validation():
    with pytest.raises(SLPError):
        SLP(1, 1, (Instr(Op.LOAD, index=0), Instr(Op.ADD, 0, 2), Instr(Op.STORE, 1, index=0)))
    with pytest.raises(SLPError):
        SLP(1, 2, (Instr(Op.LOAD, index=0), Instr(Op.STORE, 0, index=0)))


def test_common_subexpression():
    # rows share x0 + x1
    M = CoeffMatrix([[1, 1, 1], [1, 1, -1], [1, 1, 0]])
    assert naive_slp(M).counts().adds == 5
    assert cancellation_free(M).counts().adds == 3


def test_kernel_uses_dependent_rows():
    M = CoeffMatrix([[1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 1, 1]])
    assert independent_rows(M) == [0, 1]
    assert kernel_decompose(M).counts().adds == 3
    assert kernel_decompose(M).matrix() == M


@pytest.mark.parametrize("name, adds", [("strassen", 18), ("winograd", 15), ("altbasis-core", 12)])
def test_scheme_counts(name, adds):
    H = load_scheme(name)
    tot = sum(best_of(M).counts().adds for M in (H.L, H.R, H.P))
    assert tot <= adds
