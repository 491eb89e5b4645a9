import math

import numpy as np
import pytest

from fastmm.norms import (
    GAMMA2_LOWER_BOUND, BoundError, Norm, altbasis_bound, base_error, error_bound, gamma2,
    growth_factor, norm_table, op_norm, plan_error_factor, q0,
)
from fastmm.schemes import conventional, load_scheme
from fastmm.sparsify import CoBTriple

S2, S3 = math.sqrt(2), math.sqrt(3)


@pytest.mark.parametrize("name, g2, l23, fro", [
    ("winograd", 7 + 8 / S2 + 9 / S3, 11 + 8 / S2 + 9 / S3, 14**1.5),
    ("strassen", 12 + 4 / S2, 2 + 20 / S2, 12**1.5),
    ("powers", 75 / 8 + 4 / S2, 125 / 32 + 4 / S2 + 25 / (2 * math.sqrt(5)), (162 / 16) ** 1.5),
    ("accurate-sqrt3", 16 / S3 + 4 / S2, 16 / S3 + 4 / S2, 10**1.5),
    ("conventional", 8.0, 8.0, 8**1.5),
])
def test_norm_table(name, g2, l23, fro):
    t = norm_table(load_scheme(name))
    assert t.gamma2 == pytest.approx(g2, abs=1e-9)
    assert t.l23_product == pytest.approx(l23, abs=1e-9)
    assert t.frobenius_product == pytest.approx(fro, abs=1e-9)
    assert t.gamma2 <= t.l23_product + 1e-9 <= t.frobenius_product + 2e-9


def test_q0():
    assert q0(load_scheme("strassen")) == 8
    assert q0(load_scheme("winograd")) == 10


def test_growth_strassen():
    H = load_scheme("strassen")
    assert growth_factor(H, "inf", "inf") == pytest.approx(12)
    assert growth_factor(H, "inf", "2") == pytest.approx(4 + 2 * S2)


def test_bound_closed_form():
    H = load_scheme("strassen")
    b = error_bound(H, "inf", "inf", 3, 1)
    # gamma^l (E0 + Q0 A0 sum (A/gamma)^i) with gamma 12, A 2, Q0 8
    assert b.e_ell == pytest.approx(12**3 * (1 + 8 * (1 + 2 / 12 + 4 / 144)))
    assert b.leading_coeff == pytest.approx(1 + 8 * 12 / 10)
    assert b.exponent == pytest.approx(math.log2(12))


@pytest.mark.parametrize("name", ["strassen", "winograd", "accurate-sqrt3"])
@pytest.mark.parametrize("ell, k0", [(1, 1), (3, 1), (2, 8)])
def test_plan_factor_matches_uniform(name, ell, k0):
    H = load_scheme(name)
    e = error_bound(H, "inf", "inf", ell, k0).e_ell
    assert plan_error_factor([H] * ell, "inf", "inf", k0) == pytest.approx(e, rel=1e-12)


def test_classical_base():
    assert base_error("inf", "inf", 16) == 256
    assert base_error("2", "2", 16) == 16


def test_conventional_bound_is_finite():
    b = error_bound(conventional(), "2", "2", 2, 1)
    assert math.isfinite(b.e_ell)


def test_low_growth_rejected():
    from fastmm.hm import HMRep

    L, R, P = load_scheme("strassen").floats
    shrunk = HMRep(2, 2, 2, L / 10, R, P, "shrunk")
    with pytest.raises(BoundError):
        error_bound(shrunk, "inf", "inf", 1, 1, is_mm=True)


def test_altbasis_bound_identity_cob():
    H = load_scheme("strassen")
    c = CoBTriple.identity(H)
    b = altbasis_bound(H, c, "inf", "inf", 2, 1)
    assert b.gamma == pytest.approx(12)


def test_op_norm_identity():
    assert op_norm(np.eye(4), Norm.TWO) == pytest.approx(2.0)
    assert op_norm(np.eye(4), Norm.MAX) == pytest.approx(1.0)


def test_gamma2_lower_bound_constant():
    assert gamma2(load_scheme("accurate-sqrt3")) > GAMMA2_LOWER_BOUND
