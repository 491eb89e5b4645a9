import numpy as np
import pytest

from fastmm.executor import (
    AltPlan, DimensionError, RecursionPlan, altbasis_mm, classical_mm, cobp, lcob, max_levels,
    mixed_336_plan, rcob, recursive_mm,
)
from fastmm.bench import bundled_triple
from fastmm.schemes import MATMUL_2X2, load_scheme

DYADIC = ["strassen", "winograd", "powers"]


def _rel(X, Y):
    return np.abs(X - Y).max() / np.abs(Y).max()


@pytest.mark.parametrize("sid", MATMUL_2X2, ids=lambda s: s.value)
@pytest.mark.parametrize("ell", [1, 2, 3])
def test_matches_classical(sid, ell, rng):
    n = 2**ell * 3
    A, B = rng.uniform(-1, 1, (n, n)), rng.uniform(-1, 1, (n, n))
    C = recursive_mm(RecursionPlan.uniform(sid, ell), A, B)
    assert _rel(C, A @ B) < 1e-11


@pytest.mark.parametrize("name", DYADIC)
def test_exact_on_signs(name, rng):
    A = rng.choice([-1.0, 1.0], (64, 64))
    B = rng.choice([-1.0, 1.0], (64, 64))
    C = recursive_mm(RecursionPlan.uniform(name, 6), A, B)
    assert np.array_equal(C, A @ B)


def test_rectangular_336(rng):
    H = load_scheme("336acc")
    A, B = rng.standard_normal((9, 9)), rng.standard_normal((9, 36))
    C = recursive_mm(RecursionPlan.uniform(H, 2), A, B)
    assert _rel(C, A @ B) < 1e-11


def test_mixed_plan(rng):
    plan = mixed_336_plan()
    assert plan.factor == (54, 54, 54)
    A, B = rng.standard_normal((54, 54)), rng.standard_normal((54, 54))
    assert _rel(recursive_mm(plan, A, B), A @ B) < 1e-11


def test_nested_base_identical(rng):
    A, B = rng.standard_normal((16, 16)), rng.standard_normal((16, 16))
    flat = RecursionPlan.uniform("strassen", 3)
    nested = RecursionPlan((load_scheme("strassen"),), base=RecursionPlan.uniform("strassen", 2))
    assert np.array_equal(recursive_mm(flat, A, B), recursive_mm(nested, A, B))


def test_dimension_errors(rng):
    A = rng.standard_normal((6, 6))
    with pytest.raises(DimensionError):
        recursive_mm(RecursionPlan.uniform("strassen", 2), A, A)
    with pytest.raises(DimensionError):
        classical_mm(A, rng.standard_normal((5, 6)))


def test_altbasis_matches_plain(rng):
    A, B = rng.uniform(-1, 1, (64, 64)), rng.uniform(-1, 1, (64, 64))
    plan = AltPlan(bundled_triple(), 4)
    C = altbasis_mm(plan, A, B)
    P = recursive_mm(RecursionPlan.uniform("accurate-sqrt3", 4), A, B)
    assert _rel(C, P) < 1e-11


def test_cob_inverse_roundtrip(rng):
    plan = AltPlan(bundled_triple(), 2)
    X = rng.standard_normal((8, 8))
    Y = lcob(plan, X)
    assert not np.allclose(X, Y)
    assert rcob(plan, X).shape == cobp(plan, X).shape == (8, 8)


def test_zero_levels_is_classical(rng):
    A, B = rng.standard_normal((5, 3)), rng.standard_normal((3, 4))
    assert np.array_equal(altbasis_mm(AltPlan(bundled_triple(), 0), A, B), classical_mm(A, B))


def test_max_levels():
    assert max_levels(load_scheme("strassen"), 48, 48, 48) == 4
    assert max_levels(load_scheme("336acc"), 27, 27, 216) == 3
