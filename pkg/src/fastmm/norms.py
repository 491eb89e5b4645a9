"""Norms, growth factors and forward-error bounds of recursive bilinear algorithms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .coefficient import CoeffMatrix
from .hm import HMRep, validate_matmul


class Norm(enum.Enum):
    ONE = "1"
    TWO = "2"
    MAX = "inf"

    @property
    def dual(self) -> "Norm":
        return {Norm.ONE: Norm.MAX, Norm.MAX: Norm.ONE, Norm.TWO: Norm.TWO}[self]

    @classmethod
    def parse(cls, s: "str | Norm") -> "Norm":
        if isinstance(s, Norm):
            return s
        key = str(s).strip().lower()
        for n in cls:
            if key in (n.value, n.name.lower()) or (n is Norm.MAX and key in ("infinity", "max", "∞")):
                return n
        raise ValueError(f"unknown norm {s!r}")


MATMUL_NORMS = [(Norm.MAX, Norm.MAX), (Norm.TWO, Norm.TWO), (Norm.MAX, Norm.TWO), (Norm.TWO, Norm.MAX)]


def vector_norm(v, p: Norm) -> float:
    v = np.abs(np.asarray(v, dtype=float))
    if p is Norm.ONE:
        return float(v.sum())
    if p is Norm.TWO:
        return float(np.sqrt((v * v).sum()))
    return float(v.max()) if v.size else 0.0


def row_norms(M: np.ndarray, p: Norm) -> np.ndarray:
    M = np.abs(np.asarray(M, dtype=float))
    if p is Norm.ONE:
        return M.sum(axis=1)
    if p is Norm.TWO:
        return np.sqrt((M * M).sum(axis=1))
    return M.max(axis=1)


def hamming_weight(row) -> int:
    """Number of exactly nonzero entries (use on exact coefficients)."""
    return sum(1 for x in row if x)


def _row_weights(M) -> list[int]:
    if isinstance(M, CoeffMatrix):
        return M.row_weights()
    return [int(np.count_nonzero(r)) for r in np.asarray(M)]


def growth_factor(H: HMRep, p: Norm | str, q: Norm | str) -> float:
    """gamma_{p,q} = || ( sum_i ||L_i||_{q*} ||R_i||_{q*} |p_{j,i}| )_j ||_p."""
    p, q = Norm.parse(p), Norm.parse(q)
    L, R, P = H.floats
    w = row_norms(L, q.dual) * row_norms(R, q.dual)
    return vector_norm(np.abs(P) @ w, p)


def gamma2(H: HMRep) -> float:
    """Relaxed growth factor sum_i ||L_i||_2 ||R_i||_2 ||P_{:,i}||_2."""
    L, R, P = H.floats
    return float(np.sum(row_norms(L, Norm.TWO) * row_norms(R, Norm.TWO) * row_norms(P.T, Norm.TWO)))


def gamma2_arrays(L: np.ndarray, R: np.ndarray, P: np.ndarray) -> float:
    return float(np.sum(np.sqrt((L * L).sum(1)) * np.sqrt((R * R).sum(1)) * np.sqrt((P * P).sum(0))))


def q0(H: HMRep) -> int:
    """max_j ( |P_j|_0 + max_{i : p_ji != 0} (|L_i|_0 + |R_i|_0) )."""
    lw, rw, pw = _row_weights(H.L), _row_weights(H.R), _row_weights(H.P)
    P = H.P
    best = 0
    for j in range(H.P.shape[0]):
        nz = [i for i in range(H.r) if (P[j, i] if isinstance(P, CoeffMatrix) else P[j, i] != 0)]
        inner = max((lw[i] + rw[i] for i in nz), default=0)
        best = max(best, pw[j] + inner)
    return best


def amplification(p: Norm | str, q: Norm | str, k: int, is_mm: bool = True, gamma: float | None = None) -> float:
    """Growth of the exact product: k, 1, 1, k^{3/2} for (inf,inf), (2,2), (inf,2), (2,inf)."""
    p, q = Norm.parse(p), Norm.parse(q)
    if not is_mm:
        if gamma is None:
            raise ValueError("gamma required for a non-matmul tensor")
        return gamma
    return {
        (Norm.MAX, Norm.MAX): float(k),
        (Norm.TWO, Norm.TWO): 1.0,
        (Norm.MAX, Norm.TWO): 1.0,
        (Norm.TWO, Norm.MAX): float(k) ** 1.5,
    }[(p, q)]


def base_error(p: Norm | str, q: Norm | str, k0: int) -> float:
    """Error constant of the classical base case of inner dimension k0."""
    p, q = Norm.parse(p), Norm.parse(q)
    return {
        (Norm.MAX, Norm.MAX): float(k0) ** 2,
        (Norm.TWO, Norm.TWO): float(k0),
        (Norm.MAX, Norm.TWO): float(k0),
        (Norm.TWO, Norm.MAX): float(k0) ** 2.5,
    }[(p, q)]


def classical_growth(p: Norm | str, q: Norm | str, k: int = 2) -> float:
    """Per-level growth of the classical algorithm's error constant when the
    inner dimension is multiplied by k (the classical error is base_error(K))."""
    return base_error(p, q, k)


@dataclass(frozen=True)
class BoundReport:
    p: Norm
    q: Norm
    ell: int
    k0: int
    gamma: float
    amp: float
    amp0: float
    e0: float
    q0: int
    e_ell: float
    exponent: float
    leading_coeff: float
    is_mm: bool = True


class BoundError(ValueError):
    pass


def _geometric(x: float, ell: int) -> float:
    # sum_{i<ell} x^i, continuous at x = 1
    if abs(x - 1.0) < 1e-15:
        return float(ell)
    return (1.0 - x**ell) / (1.0 - x)


def error_bound(H: HMRep, p: Norm | str, q: Norm | str, ell: int, k0: int = 1,
                is_mm: bool | None = None) -> BoundReport:
    """Forward-error factor E^(l) of l recursive levels over a classical k0 base case.

    E^(l) = gamma^l (E0 + Q0 A0 sum_{i<l} (A/gamma)^i); for genuine matrix
    multiplications A is the exact-product amplification, otherwise the
    general-tensor form gamma^l (E0 + l Q0 A0) applies.
    """
    p, q = Norm.parse(p), Norm.parse(q)
    if is_mm is None:
        is_mm = validate_matmul(H).valid
    g = growth_factor(H, p, q)
    Q = q0(H)
    e0 = base_error(p, q, k0)
    a0 = amplification(p, q, k0, True)
    if is_mm:
        amp = amplification(p, q, H.k, True)
        if g < amp * (1 - 1e-12):
            raise BoundError(f"growth factor {g} below amplification {amp}: not a conforming scheme")
        e_ell = g**ell * (e0 + Q * a0 * _geometric(amp / g, ell))
        lead = e0 + Q * a0 * g / (g - amp) if g > amp else math.inf
    else:
        amp = g
        e_ell = g**ell * (e0 + ell * Q * a0)
        lead = e0
    return BoundReport(p, q, ell, k0, g, amp, a0, e0, Q, e_ell, math.log(g, H.k) if H.k > 1 else math.inf, lead, is_mm)


def op_norm(M, q: Norm | str) -> float:
    """Map norm ||(||M_i||_{q*})_i||_q of a change of basis."""
    q = Norm.parse(q)
    A = M.to_float() if isinstance(M, CoeffMatrix) else np.asarray(M, float)
    return vector_norm(row_norms(A, q.dual), q)


def max_row_weight(M) -> int:
    return max(_row_weights(M), default=0)


def altbasis_bound(core: HMRep, cob, p: Norm | str, q: Norm | str, ell: int, k0: int = 1) -> BoundReport:
    """Bound for core recursion wrapped in recursive changes of basis (phi, psi, nu).

    gamma(mmab) = gamma_{p,q}(core) ||phi||_q ||psi||_q ||nu^T||_p and
    E^(l) = gamma(mmab)^l (E0 + A0 l (Q0 + Q_phi + Q_psi + Q_{nu^T})).
    """
    p, q = Norm.parse(p), Norm.parse(q)
    phi, psi, nu = cob.phi, cob.psi, cob.nu
    for M in (phi, psi, nu):
        if M.shape[0] != M.shape[1] or abs(np.linalg.det(_f(M))) < 1e-12:
            raise BoundError("singular change of basis")
    nuT = nu.T if isinstance(nu, CoeffMatrix) else np.asarray(nu).T
    g_core = growth_factor(core, p, q)
    g = g_core * op_norm(phi, q) * op_norm(psi, q) * op_norm(nuT, p)
    Qs = q0(core) + max_row_weight(phi) + max_row_weight(psi) + max_row_weight(nuT)
    e0 = base_error(p, q, k0)
    a0 = amplification(p, q, k0, True)
    e_ell = g**ell * (e0 + a0 * ell * Qs)
    return BoundReport(p, q, ell, k0, g, g, a0, e0, Qs, e_ell, math.log(g, core.k), e0, False)


def _f(M) -> np.ndarray:
    return M.to_float() if isinstance(M, CoeffMatrix) else np.asarray(M, float)


def norm_2s(M, s: float) -> float:
    """||M||_{2,s} = (sum_i ||M_i||_2^s)^{1/s} over rows (s < 0: generalized mean form)."""
    if s == 0:
        raise ValueError("s must be nonzero")
    r = row_norms(_f(M), Norm.TWO)
    return float(np.sum(r**s) ** (1.0 / s))


@dataclass(frozen=True)
class NormTable:
    gamma2: float
    l23_product: float
    frobenius_product: float


def norm_table(H: HMRep) -> NormTable:
    L, R, P = H.floats
    Pt = P.T
    l23 = norm_2s(L, 3) * norm_2s(R, 3) * norm_2s(Pt, 3)
    fro = float(np.linalg.norm(L) * np.linalg.norm(R) * np.linalg.norm(Pt))
    return NormTable(gamma2(H), l23, fro)


# gamma2 can never go below this on the Strassen orbit
GAMMA2_LOWER_BOUND = 11.7554696


def plan_error_factor(schemes, p: Norm | str, q: Norm | str, k0: int = 1) -> float:
    """Error factor of a possibly mixed recursion, outermost scheme first.

    Unrolls E_i = gamma_i (E_inner + Q_i A_inner), A_inner being the
    amplification of the inner product; for a uniform plan this is the
    closed form of :func:`error_bound`.
    """
    p, q = Norm.parse(p), Norm.parse(q)
    e = base_error(p, q, k0)
    amp = amplification(p, q, k0, True)
    for H in reversed(list(schemes)):
        g = growth_factor(H, p, q)
        e = g * (e + q0(H) * amp)
        amp *= amplification(p, q, H.k, True)
    return e
