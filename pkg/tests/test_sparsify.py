import math

import pytest

from fastmm.schemes import SchemeId, altbasis_cob, load_scheme
from fastmm.sparsify import (
    CoBTriple, core_adds, core_gamma2, cob_quality, sparse_columns, sparsify, verify_factorization,
)
from fastmm.slpopt import best_of


@pytest.fixture(scope="module")
def eq50():
    H = load_scheme("accurate-sqrt3")
    return H, sparsify(H)


def test_eq50_core(eq50):
    H, c = eq50
    assert c.sparse
    assert verify_factorization(H, c)
    assert core_adds(c) == 12
    assert core_gamma2(c) == pytest.approx(7 + 3 * math.sqrt(2), abs=1e-6)


@pytest.mark.parametrize("name", ["winograd", "strassen", "powers"])
def test_sparse_cores(name):
    H = load_scheme(name)
    c = sparsify(H)
    assert verify_factorization(H, c)
    assert c.sparse and core_adds(c) == 12
    assert sum(best_of(M).counts().adds for M in (c.Ls, c.Rs, c.Ps)) == 12


def test_conventional_keeps_identity():
    H = load_scheme("conventional")
    c = sparsify(H)
    assert c.phi == c.phi.identity(4) and core_adds(c) == 4


def test_bundled_triple_composes():
    phi, psi, nu = altbasis_cob()
    core = load_scheme(SchemeId.ALTBASIS_CORE)
    c = CoBTriple(phi, psi, nu, core.L, core.R, core.P)
    assert verify_factorization(load_scheme("accurate-sqrt3"), c)


def test_bad_factorization_detected(eq50):
    H, c = eq50
    bad = CoBTriple(c.phi.scale(2), c.psi, c.nu, c.Ls, c.Rs, c.Ps)
    assert not verify_factorization(H, bad)


def test_sparse_columns_are_in_column_space():
    H = load_scheme("strassen")
    for u, v in sparse_columns(H.L):
        assert list(u) == H.L.apply(v)
        assert all(not x or x.is_unit() for x in u)


def test_quality_identity():
    H = load_scheme("strassen")
    q = cob_quality(CoBTriple.identity(H), "inf", "inf")
    assert q.cob_factor == pytest.approx(1.0)
    assert q.gamma_mmab == pytest.approx(12.0)


def test_inexact_rejected():
    from fastmm.hm import HMRep

    H = load_scheme("strassen")
    with pytest.raises(ValueError):
        sparsify(HMRep(2, 2, 2, *H.floats))
