"""Recursive bilinear matrix multiplication in double precision.

Linear phases run through compiled straight-line programs, so the executed
operation order is exactly that of the optimized programs.  The recursion
is evaluated level by level on batches of blocks; every operation is
elementwise, so results are bit-identical to a depth-first evaluation that
visits products in index order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hm import HMRep, validate_matmul
from .schemes import SchemeId, load_scheme
from .slp import SLP, eval_slp
from .slpopt import CFOptions, optimize
from .sparsify import CoBTriple


class DimensionError(ValueError):
    pass


def classical_mm(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Conventional product; each entry accumulates a_ik * b_kj for k = 0, 1, ... in order."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return _classical_batched(A[None], B[None])[0]


def _classical_batched(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # A: (N, m, k), B: (N, k, n); i-k-j loop order, no fused multiply-add
    C = A[:, :, 0, None] * B[:, None, 0, :]
    for k in range(1, A.shape[2]):
        C = C + A[:, :, k, None] * B[:, None, k, :]
    return C


# -- compiled schemes -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Linear:
    """A linear map on lists of equally shaped blocks."""

    slp: SLP | None = None
    matrix: np.ndarray | None = None  # float fallback, applied row by row

    def __call__(self, blocks: Sequence[np.ndarray]) -> list[np.ndarray]:
        if self.slp is not None:
            return eval_slp(self.slp, list(blocks))
        out = []
        for row in self.matrix:
            acc = None
            for c, x in zip(row, blocks):
                if c == 0:
                    continue
                t = x if c == 1 else (-x if c == -1 else c * x)
                acc = t if acc is None else acc + t
            out.append(np.zeros_like(blocks[0]) if acc is None else acc)
        return out


def _linear(M, exact: bool, mode: str, opts: CFOptions | None) -> Linear:
    if exact:
        return Linear(slp=optimize(M, mode, opts))
    return Linear(matrix=np.asarray(M, dtype=float))


@dataclass(frozen=True, eq=False)
class CompiledScheme:
    H: HMRep
    L: Linear
    R: Linear
    P: Linear


_COMPILED: dict = {}


def compile_scheme(H: HMRep, mode: str = "best", check: bool = True, opts: CFOptions | None = None) -> CompiledScheme:
    """SLPs for L, R, P (cached per coefficient content)."""
    key = (H.dims, mode, H.exact) + ((H.L, H.R, H.P) if H.exact else (id(H),))
    hit = _COMPILED.get(key)
    if hit is not None:
        return hit
    if check and not validate_matmul(H).valid:
        raise ValueError(f"scheme {H.name!r} is not a valid <{H.m},{H.k},{H.n}> multiplication")
    cs = CompiledScheme(H, *(_linear(M, H.exact, mode, opts) for M in (H.L, H.R, H.P)))
    _COMPILED[key] = cs
    return cs


# -- plans ------------------------------------------------------------------------------


def _resolve(s) -> HMRep:
    if isinstance(s, HMRep):
        return s
    return load_scheme(s)


@dataclass(frozen=True, eq=False)
class RecursionPlan:
    """Schemes applied from the outermost level inwards, then ``base`` on the leaves.

    ``base`` is the classical algorithm (None) or another plan, which is then
    run block by block.
    """

    levels: tuple[HMRep, ...]
    base: "RecursionPlan | None" = None
    mode: str = "best"

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(_resolve(s) for s in self.levels))

    @classmethod
    def uniform(cls, scheme: "HMRep | SchemeId | str", levels: int, mode: str = "best") -> "RecursionPlan":
        H = _resolve(scheme)
        return cls((H,) * levels, mode=mode)

    @property
    def factor(self) -> tuple[int, int, int]:
        fm = fk = fn = 1
        for H in self.levels:
            fm, fk, fn = fm * H.m, fk * H.k, fn * H.n
        if self.base is not None:
            bm, bk, bn = self.base.factor
            fm, fk, fn = fm * bm, fk * bk, fn * bn
        return fm, fk, fn

    def check_dims(self, m: int, k: int, n: int):
        fm, fk, fn = self.factor
        if m % fm or k % fk or n % fn:
            raise DimensionError(f"dimensions {(m, k, n)} not divisible by the plan's {(fm, fk, fn)}")


def _split(X: np.ndarray, p: int, q: int) -> list[np.ndarray]:
    # (N, P, Q) -> row-major list of p*q blocks (N, P/p, Q/q)
    N, P, Q = X.shape
    Y = X.reshape(N, p, P // p, q, Q // q)
    return [Y[:, i, :, j, :] for i in range(p) for j in range(q)]


def _join(blocks: Sequence[np.ndarray], p: int, q: int) -> np.ndarray:
    N, bp, bq = blocks[0].shape
    out = np.empty((N, p, bp, q, bq))
    for idx, b in enumerate(blocks):
        i, j = divmod(idx, q)
        out[:, i, :, j, :] = b
    return out.reshape(N, p * bp, q * bq)


def _run(levels: Sequence[CompiledScheme], base: RecursionPlan | None, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if not levels:
        if base is None:
            return _classical_batched(A, B)
        return np.stack([_run_plan(base, a, b) for a, b in zip(A, B)])
    cs, rest = levels[0], levels[1:]
    H = cs.H
    N = A.shape[0]
    ua = cs.L(_split(A, H.m, H.k))
    vb = cs.R(_split(B, H.k, H.n))
    # products in index order i = 0..r-1, batched as (r, N) -> r*N
    prod = _run(rest, base, np.concatenate(ua), np.concatenate(vb))
    w = [prod[i * N:(i + 1) * N] for i in range(H.r)]
    return _join(cs.P(w), H.m, H.n)


def _run_plan(plan: RecursionPlan, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    comp = [compile_scheme(H, plan.mode) for H in plan.levels]
    return _run(comp, plan.base, A[None], B[None])[0]


def recursive_mm(plan: RecursionPlan, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    plan.check_dims(A.shape[0], A.shape[1], B.shape[1])
    return _run_plan(plan, A, B)


def max_levels(H: HMRep, m: int, k: int, n: int) -> int:
    """Deepest uniform recursion of H that divides (m, k, n) exactly."""
    ell = 0
    while m % H.m == 0 and k % H.k == 0 and n % H.n == 0 and min(m, k, n) > 1:
        m, k, n = m // H.m, k // H.k, n // H.n
        ell += 1
    return ell


# -- alternative basis ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AltPlan:
    """Sparse core recursion wrapped in recursive changes of basis."""

    cob: CoBTriple
    levels: int
    dims: tuple[int, int, int] = (2, 2, 2)
    mode: str = "best"
    _lin: dict = field(default_factory=dict, repr=False)

    def linear(self, name: str) -> Linear:
        if name not in self._lin:
            M = {"phi": self.cob.phi, "psi": self.cob.psi, "nuT": self.cob.nu.T}[name]
            self._lin[name] = Linear(slp=optimize(M, self.mode))
        return self._lin[name]

    def core(self) -> CompiledScheme:
        m, k, n = self.dims
        core = HMRep(m, k, n, self.cob.Ls, self.cob.Rs, self.cob.Ps, "core")
        return compile_scheme(core, self.mode, check=False)


def _cob(X: np.ndarray, ell: int, p: int, q: int, lin: Linear) -> np.ndarray:
    """Blocks of X recursively transformed first, then combined by ``lin``.

    X is a batch (N, P, Q); the p*q sub-blocks of every level are processed
    together, which gives the same floating-point result as recursing block
    by block.
    """
    if ell <= 0:
        return X
    N = X.shape[0]
    inner = _cob(np.concatenate(_split(X, p, q)), ell - 1, p, q, lin)
    blocks = [inner[i * N:(i + 1) * N] for i in range(p * q)]
    return _join(lin(blocks), p, q)


def lcob(plan: AltPlan, A: np.ndarray, ell: int | None = None) -> np.ndarray:
    m, k, _ = plan.dims
    return _cob(np.asarray(A, float)[None], plan.levels if ell is None else ell, m, k, plan.linear("phi"))[0]


def rcob(plan: AltPlan, B: np.ndarray, ell: int | None = None) -> np.ndarray:
    _, k, n = plan.dims
    return _cob(np.asarray(B, float)[None], plan.levels if ell is None else ell, k, n, plan.linear("psi"))[0]


def cobp(plan: AltPlan, C: np.ndarray, ell: int | None = None) -> np.ndarray:
    m, _, n = plan.dims
    return _cob(np.asarray(C, float)[None], plan.levels if ell is None else ell, m, n, plan.linear("nuT"))[0]


def altbasis_mm(plan: AltPlan, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    m, k, n = plan.dims
    f = (m**plan.levels, k**plan.levels, n**plan.levels)
    if A.shape[0] % f[0] or A.shape[1] % f[1] or B.shape[1] % f[2]:
        raise DimensionError(f"dimensions {A.shape[0], A.shape[1], B.shape[1]} not divisible by {f}")
    if plan.levels <= 0:
        return classical_mm(A, B)
    Ab, Bb = lcob(plan, A), rcob(plan, B)
    core = plan.core()
    Cb = _run([core] * plan.levels, None, Ab[None], Bb[None])[0]
    return cobp(plan, Cb)


# -- mixed rectangular schedules ----------------------------------------------------------------


def mixed_336_plan(H336: HMRep | None = None, mode: str = "best") -> RecursionPlan:
    """<6,3,3> then <3,3,6> then <3,6,3>: one level of each, 54 x 54 x 54 overall."""
    from .hm import cyclic

    H = H336 if H336 is not None else load_scheme(SchemeId.SMIRNOV336_ACCURATE)
    if H.dims != (3, 3, 6):
        raise ValueError("need a <3,3,6> scheme")
    H363 = cyclic(H)
    H633 = cyclic(H363)
    return RecursionPlan((H633, H, H363), mode=mode)
