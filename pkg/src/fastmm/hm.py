"""HM representations of bilinear matrix-multiplication algorithms.

A scheme for ``<m,k,n>`` with ``r`` products is a triple ``(L, R, P)`` with
``L: r x mk``, ``R: r x kn`` and ``P: mn x r``, and computes

    vec(C) = P @ ((L @ vec(A)) * (R @ vec(B)))

with row-major vectorization ``vec(A)[i*k + j] = A[i, j]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .coefficient import Coefficient, CoeffMatrix


@dataclass(frozen=True, eq=False)
class HMRep:
    m: int
    k: int
    n: int
    L: CoeffMatrix | np.ndarray
    R: CoeffMatrix | np.ndarray
    P: CoeffMatrix | np.ndarray
    name: str = ""
    provenance: str = ""

    def __post_init__(self):
        r = self.L.shape[0]
        if self.L.shape != (r, self.m * self.k):
            raise ValueError(f"L has shape {self.L.shape}, expected ({r}, {self.m * self.k})")
        if self.R.shape != (r, self.k * self.n):
            raise ValueError(f"R has shape {self.R.shape}, expected ({r}, {self.k * self.n})")
        if self.P.shape != (self.m * self.n, r):
            raise ValueError(f"P has shape {self.P.shape}, expected ({self.m * self.n}, {r})")
        if self.exact:
            ds = {M.d for M in (self.L, self.R, self.P) if M.d}
            if len(ds) > 1:
                raise ValueError("L, R, P live in different quadratic fields")

    @property
    def r(self) -> int:
        return self.L.shape[0]

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.m, self.k, self.n)

    @property
    def exact(self) -> bool:
        return isinstance(self.L, CoeffMatrix)

    @property
    def d(self) -> int:
        if not self.exact:
            return 0
        return self.L.d or self.R.d or self.P.d

    @cached_property
    def floats(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if self.exact:
            return self.L.to_float(), self.R.to_float(), self.P.to_float()
        return (np.asarray(self.L, float), np.asarray(self.R, float), np.asarray(self.P, float))

    def renamed(self, name: str, provenance: str | None = None) -> "HMRep":
        return HMRep(self.m, self.k, self.n, self.L, self.R, self.P, name,
                     self.provenance if provenance is None else provenance)

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"HMRep({self.name or '?'}: <{self.m},{self.k},{self.n}> r={self.r}, {kind})"


def _seq_matvec(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    # left-to-right accumulation over columns, independent of BLAS ordering
    acc = M[:, 0] * x[0]
    for j in range(1, M.shape[1]):
        acc = acc + M[:, j] * x[j]
    return acc


def apply_bilinear(H: HMRep, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """One level of the bilinear algorithm on scalar matrices, in double precision."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != (H.m, H.k) or B.shape != (H.k, H.n):
        raise ValueError(f"expected {H.m}x{H.k} and {H.k}x{H.n} inputs, got {A.shape} and {B.shape}")
    L, R, P = H.floats
    u = _seq_matvec(L, A.reshape(-1))
    v = _seq_matvec(R, B.reshape(-1))
    return _seq_matvec(P, u * v).reshape(H.m, H.n)


@dataclass
class ValidationReport:
    valid: bool
    failures: list[tuple[tuple[int, int, int, int], list[list]]] = field(default_factory=list)
    max_residual: float = 0.0
    exact: bool = True

    def __bool__(self):
        return self.valid


def matmul_tensor(m: int, k: int, n: int) -> np.ndarray:
    """Target tensor T[ab, cd, ef] = [b == c][a == e][d == f] (row-major indices)."""
    T = np.zeros((m * k, k * n, m * n), dtype=np.int64)
    for a, b, d in itertools.product(range(m), range(k), range(n)):
        T[a * k + b, b * n + d, a * n + d] = 1
    return T


def _quadruple(H: HMRep, ab: int, cd: int) -> tuple[int, int, int, int]:
    return (ab // H.k, ab % H.k, cd // H.n, cd % H.n)


def validate_matmul(H: HMRep, rtol: float = 1e-9) -> ValidationReport:
    """Check P((L e_ab) * (R e_cd)) == e_ab e_cd for every canonical input pair.

    Exact representations are checked with exact integer arithmetic (zero
    tolerance); float-backed ones with a relative tolerance.
    """
    target = matmul_tensor(H.m, H.k, H.n)
    if not H.exact:
        L, R, P = H.floats
        T = np.einsum("ia,ib,ci->abc", L, R, P)
        scale = max(1.0, float(np.abs(L).max() * np.abs(R).max() * np.abs(P).max()))
        res = T - target
        bad = np.argwhere(np.abs(res).max(axis=2) > rtol * scale)
        failures = [
            (_quadruple(H, ab, cd), res[ab, cd].reshape(H.m, H.n).tolist()) for ab, cd in bad
        ]
        return ValidationReport(not failures, failures, float(np.abs(res).max()), exact=False)

    d = H.d
    LA, LB, ld = H.L._split
    RA, RB, rd = H.R._split
    PA, PB, pd = H.P._split
    r = H.r
    # products of L and R columns, for all canonical pairs: (r, mk*kn)
    XA = (LA[:, :, None] * RA[:, None, :] + d * LB[:, :, None] * RB[:, None, :]).reshape(r, -1)
    XB = (LA[:, :, None] * RB[:, None, :] + LB[:, :, None] * RA[:, None, :]).reshape(r, -1)
    TA = PA.dot(XA) + d * PB.dot(XB)  # (mn, mk*kn)
    TB = PA.dot(XB) + PB.dot(XA)
    den = ld * rd * pd
    want = target.reshape(-1, H.m * H.n).T.astype(object) * den
    RA_ = TA - want
    failures = []
    maxres = 0.0
    for col in range(RA_.shape[1]):
        if any(RA_[:, col]) or any(TB[:, col]):
            ab, cd = divmod(col, H.k * H.n)
            resid = [
                [Coefficient(RA_[e * H.n + f, col], 0) / den + Coefficient(0, TB[e * H.n + f, col], d) / den
                 if d else Coefficient(RA_[e * H.n + f, col]) / den
                 for f in range(H.n)]
                for e in range(H.m)
            ]
            maxres = max(maxres, max(abs(float(x)) for row in resid for x in row))
            failures.append((_quadruple(H, ab, cd), resid))
    return ValidationReport(not failures, failures, maxres, exact=True)


def tensor_float(H: HMRep) -> np.ndarray:
    L, R, P = H.floats
    return np.einsum("ia,ib,ci->abc", L, R, P)


def _transpose_perm(rows: int, cols: int) -> list[int]:
    # position in vec(X^T) -> position in vec(X), X being rows x cols
    return [i * cols + j for j in range(cols) for i in range(rows)]


def _take_cols(M, idx):
    if isinstance(M, CoeffMatrix):
        return M.submatrix(range(M.rows), idx)
    return np.asarray(M)[:, idx]


def _take_rows(M, idx):
    if isinstance(M, CoeffMatrix):
        return M.submatrix(idx)
    return np.asarray(M)[idx, :]


def _T(M):
    return M.T if isinstance(M, CoeffMatrix) else np.asarray(M).T


def cyclic(H: HMRep) -> HMRep:
    """<m,k,n> scheme -> <k,n,m> scheme computing the same trilinear form."""
    m, k, n = H.dims
    L2 = H.R
    R2 = _T(_take_rows(H.P, _transpose_perm(m, n)))  # B' = (m x n index of P)^T
    P2 = _T(_take_cols(H.L, _transpose_perm(m, k)))  # C' = (m x k index of L)^T
    return HMRep(k, n, m, L2, R2, P2, f"{H.name}-cyc", f"cyclic rotation of {H.name}")


def transposed(H: HMRep) -> HMRep:
    """<m,k,n> scheme -> <n,k,m> scheme via C^T = B^T A^T."""
    m, k, n = H.dims
    L2 = _take_cols(H.R, _transpose_perm(k, n))
    R2 = _take_cols(H.L, _transpose_perm(m, k))
    P2 = _take_rows(H.P, _transpose_perm(m, n))
    return HMRep(n, k, m, L2, R2, P2, f"{H.name}-T", f"transposition of {H.name}")
