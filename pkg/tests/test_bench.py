from fractions import Fraction

import numpy as np
import pytest

from fastmm.bench import (
    CSV_HEADER, BenchCase, BenchConfig, Dist, PlanKind, default_levels, gen_matrix, reference_mm, run_bench,
)
from fastmm.executor import classical_mm
from fastmm.schemes import load_scheme


def test_gen_deterministic():
    for d in Dist:
        assert np.array_equal(gen_matrix(d, 7, 5, 3), gen_matrix(d, 7, 5, 3))
    U = gen_matrix("uniform", 50, 50, 1)
    assert U.min() >= -1 and U.max() <= 1
    assert not np.array_equal(U, gen_matrix("uniform", 50, 50, 2))


def _power_cond(M, iters=300):
    # sigma_max by power iteration on M^T M, sigma_min by inverse iteration
    rng = np.random.default_rng(0)
    G = M.T @ M
    x = rng.standard_normal(M.shape[1])
    for _ in range(iters):
        x = G @ x
        x /= np.linalg.norm(x)
    smax = np.sqrt(x @ G @ x)
    y = rng.standard_normal(M.shape[1])
    for _ in range(iters):
        y = np.linalg.solve(M, np.linalg.solve(M.T, y))
        y /= np.linalg.norm(y)
    smin = np.linalg.norm(M @ y)
    return smax / smin


def test_randsvd_condition():
    M = gen_matrix("randsvd", 40, 40, 5, cond=1e12)
    assert 1e11 <= _power_cond(M) <= 1e13


def test_reference_exact_on_signs(rng):
    A = rng.choice([-1.0, 1.0], (20, 30))
    B = rng.choice([-1.0, 1.0], (30, 10))
    ref = reference_mm(A, B)
    assert np.array_equal(ref.to_float(), A @ B) and not ref.lo.any()


def test_reference_vs_rationals(rng):
    A, B = rng.standard_normal((6, 9)), rng.standard_normal((9, 5))
    ref = reference_mm(A, B)
    for i in range(6):
        for j in range(5):
            exact = sum(Fraction(A[i, k]) * Fraction(B[k, j]) for k in range(9))
            got = Fraction(ref.hi[i, j]) + Fraction(ref.lo[i, j])
            mag = float(sum(abs(Fraction(A[i, k]) * Fraction(B[k, j])) for k in range(9)))
            assert abs(float(got - exact)) <= 9 * 2.0**-100 * mag
    assert ref.error_max(classical_mm(A, B)) <= 9 * 2.0**-53 * (np.abs(A) @ np.abs(B)).max()


def test_case_parse():
    assert BenchCase.parse("strassen") == BenchCase("strassen", PlanKind.PLAIN)
    assert BenchCase.parse("conventional").plan is PlanKind.CLASSICAL
    assert BenchCase.parse("accurate-sqrt3:altbasis").plan is PlanKind.ALTBASIS


def test_default_levels():
    H = load_scheme("strassen")
    assert default_levels(H, 256, 256, 256) == 4
    assert default_levels(H, 32, 32, 32) == 1
    assert default_levels(H, 16, 16, 16) == 0


def _cfg(**kw):
    cases = [BenchCase("strassen"), BenchCase("accurate-sqrt3", PlanKind.ALTBASIS), BenchCase("conventional")]
    return BenchConfig(cases, [32, (48, 48, 48)], "normal", 3, 7, **kw)


def test_run_bench_csv():
    res = run_bench(_cfg())
    lines = res.csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 3 * 2 * 3
    assert all(r.ratio <= 1 for r in res.records)
    assert "median_err_max" in res.summary()


def test_parallel_identical():
    assert run_bench(_cfg()).csv() == run_bench(_cfg(workers=3)).csv()


def test_divisibility_reported():
    res = run_bench(BenchConfig([BenchCase("strassen"), BenchCase("conventional")], [(6, 6, 6)], trials=1, levels=2))
    assert res.errors and all(r.scheme == "conventional" for r in res.records)


def test_bad_trials():
    with pytest.raises(ValueError):
        BenchConfig([BenchCase("strassen")], [32], trials=0)
