import numpy as np
import pytest

from fastmm.coefficient import CoeffMatrix
from fastmm.hm import HMRep, apply_bilinear, cyclic, transposed, validate_matmul
from fastmm.schemes import SchemeId, bundled_matmul_schemes, conventional, hm_from_matrices, load_scheme


@pytest.mark.parametrize("H", bundled_matmul_schemes(), ids=lambda H: H.name)
def test_bundled_valid(H):
    rep = validate_matmul(H)
    assert rep.valid and rep.exact and rep.max_residual == 0


@pytest.mark.parametrize("H", bundled_matmul_schemes(), ids=lambda H: H.name)
def test_apply_matches_product(H, rng):
    A = rng.standard_normal((H.m, H.k))
    B = rng.standard_normal((H.k, H.n))
    np.testing.assert_allclose(apply_bilinear(H, A, B), A @ B, atol=1e-12)


def test_core_is_not_matmul():
    assert not validate_matmul(load_scheme(SchemeId.ALTBASIS_CORE)).valid


def test_corrupted_scheme_fails():
    H = load_scheme("strassen")
    rows = [list(r) for r in H.P.entries]
    rows[0][0] = -rows[0][0]
    bad = HMRep(2, 2, 2, H.L, H.R, CoeffMatrix(rows, H.r))
    rep = validate_matmul(bad)
    assert not rep.valid and rep.failures


def test_shape_check():
    H = load_scheme("strassen")
    with pytest.raises(ValueError):
        HMRep(2, 2, 3, H.L, H.R, H.P)


def test_conventional_dims():
    H = conventional(2, 3, 4)
    assert H.r == 24 and validate_matmul(H).valid


def test_infer_dims():
    H = load_scheme("336acc")
    G = hm_from_matrices(H.L, H.R, H.P)
    assert G.dims == (3, 3, 6)


@pytest.mark.parametrize("f", [cyclic, transposed])
def test_symmetries(f):
    H = load_scheme("336acc")
    G = f(H)
    assert validate_matmul(G).valid
    assert G.r == H.r
    assert sorted(G.dims) == sorted(H.dims)
    assert cyclic(cyclic(cyclic(load_scheme("strassen")))).dims == (2, 2, 2)
