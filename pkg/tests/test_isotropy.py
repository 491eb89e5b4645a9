import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fastmm.hm import validate_matmul
from fastmm.isotropy import (
    DescentOptions, Isotropy, IwasawaPoint, act, compose, iwasawa, iwasawa_factor, minimize_gamma2,
    restricted_uuu_scan, snap_value, uuu,
)
from fastmm.norms import GAMMA2_LOWER_BOUND, gamma2
from fastmm.schemes import load_scheme

vals = st.floats(-1.5, 1.5, allow_nan=False)
pos = st.floats(0.3, 3.0, allow_nan=False)


def _mat(draw_vals, s):
    M = np.array(draw_vals, dtype=float).reshape(s, s) + 3 * np.eye(s)
    return M


@given(st.lists(vals, min_size=12, max_size=12))
def test_action_preserves_validity(xs):
    U, V, W = (_mat(xs[4 * i:4 * i + 4], 2) for i in range(3))
    H = load_scheme("strassen")
    G = act(Isotropy(U, V, W), H)
    assert validate_matmul(G, rtol=1e-7).valid
    assert G.r == 7


@given(pos, vals)
def test_uuu_is_iwasawa(rho, xi):
    U = iwasawa_factor((rho,), (xi,))
    assert np.linalg.det(U) == pytest.approx(1.0)
    np.testing.assert_allclose(uuu(rho, xi).U, U, atol=1e-12)


def test_inverse_and_compose(rng):
    H = load_scheme("winograd")
    g = Isotropy(*(rng.standard_normal((2, 2)) + 2 * np.eye(2) for _ in range(3)))
    back = act(g.inverse(), act(g, H))
    for X, Y in zip(back.floats, H.floats):
        np.testing.assert_allclose(X, Y, atol=1e-10)
    h = Isotropy(*(rng.standard_normal((2, 2)) + 2 * np.eye(2) for _ in range(3)))
    a = act(compose(g, h), H)
    b = act(g, act(h, H))
    for X, Y in zip(a.floats, b.floats):
        np.testing.assert_allclose(X, Y, atol=1e-9)


def test_identity_point():
    pt = IwasawaPoint.identity((2, 2, 2))
    assert pt.n_params() == 6
    assert IwasawaPoint.from_vector(pt.to_vector(), (2, 2, 2)) == pt
    np.testing.assert_allclose(iwasawa(pt).U, np.eye(2))


def test_singular_rejected():
    with pytest.raises(ValueError):
        Isotropy(np.zeros((2, 2)), np.eye(2), np.eye(2))


def test_descent_small_budget():
    H = load_scheme("strassen")
    res = minimize_gamma2(H, DescentOptions(restarts=4, seed=1))
    assert GAMMA2_LOWER_BOUND < res.gamma2 <= gamma2(H)
    assert res.gamma2 < 12.2
    assert validate_matmul(res.rep, rtol=1e-7).valid


def test_descent_never_worse_at_optimum():
    H = load_scheme("accurate-sqrt3")
    res = minimize_gamma2(H, DescentOptions(restarts=2, seed=0))
    assert res.gamma2 <= gamma2(H) + 1e-9


def test_restricted_scan():
    rho, xi, g = restricted_uuu_scan(load_scheme("strassen"))
    assert rho == pytest.approx((4 / 3) ** 0.25, abs=1e-3)
    assert xi == pytest.approx(-0.5, abs=1e-3)
    assert g == pytest.approx(16 / math.sqrt(3) + 2 * math.sqrt(2), abs=1e-6)


def test_snap():
    assert snap_value(1.0745699)[1] == "(4/3)^(1/4)"
    assert snap_value(-0.50000001)[1] == "-1/2"
    assert snap_value(0.123456789)[1] == repr(0.123456789)


@pytest.mark.parametrize("name, value", [("conventional", 8.0), ("accurate-sqrt3", 16 / math.sqrt(3) + 2 * math.sqrt(2))])
def test_scan_stationary_at_identity(name, value):
    rho, xi, g = restricted_uuu_scan(load_scheme(name))
    assert (rho, xi) == (1.0, 0.0)
    assert g == pytest.approx(value, abs=1e-9)
