"""Alternative-basis sparsification: L = Ls phi, R = Rs psi, P = nu^T Ps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .coefficient import Coefficient, CoeffMatrix, ONE, ZERO, inverse, rank, row_echelon
from .hm import HMRep, validate_matmul
from .norms import Norm, gamma2_arrays, growth_factor, op_norm


@dataclass(frozen=True, eq=False)
class CoBTriple:
    phi: CoeffMatrix
    psi: CoeffMatrix
    nu: CoeffMatrix
    Ls: CoeffMatrix
    Rs: CoeffMatrix
    Ps: CoeffMatrix
    sparse: bool = True  # core entries all in {0, +-1}

    @classmethod
    def identity(cls, H: HMRep) -> "CoBTriple":
        e, f, g = H.L.cols, H.R.cols, H.P.rows
        return cls(CoeffMatrix.identity(e), CoeffMatrix.identity(f), CoeffMatrix.identity(g),
                   H.L, H.R, H.P, _is_sparse(H.L) and _is_sparse(H.R) and _is_sparse(H.P))

    def core(self, m: int, k: int, n: int, name: str = "core") -> HMRep:
        return HMRep(m, k, n, self.Ls, self.Rs, self.Ps, name, "sparse core of an alternative-basis factorization")

    def composed(self, m: int, k: int, n: int, name: str = "composed") -> HMRep:
        return HMRep(m, k, n, self.Ls @ self.phi, self.Rs @ self.psi, self.nu.T @ self.Ps, name)


def _is_sparse(M: CoeffMatrix) -> bool:
    return all(not x or x.is_unit() for r in M.entries for x in r)


def naive_adds(M: CoeffMatrix) -> int:
    return sum(max(w - 1, 0) for w in M.row_weights())


def core_adds(c: CoBTriple) -> int:
    return naive_adds(c.Ls) + naive_adds(c.Rs) + naive_adds(c.Ps)


# -- candidate sparse columns -------------------------------------------------------


def _null_vector(rows: list[tuple[Coefficient, ...]], n: int) -> list[Coefficient]:
    red, piv = row_echelon(CoeffMatrix(rows, n))
    free = next(j for j in range(n) if j not in piv)
    v = [ZERO] * n
    v[free] = ONE
    for r, p in zip(red, piv):
        v[p] = -r[free]
    return v


def _normalize(u: list[Coefficient], v: list[Coefficient]):
    """Scale so the first nonzero of u is +1; None unless u is then in {0, +-1}."""
    first = next(x for x in u if x)
    s = first.inverse()
    u = [x * s for x in u]
    if not all(not x or x.is_unit() for x in u):
        return None
    return tuple(u), tuple(x * s for x in v)


def sparse_columns(M: CoeffMatrix, limit: int = 20000):
    """{0,+-1} vectors u = M v of minimal support: v annihilates rank-1 rows of M.

    Returns a list of (u, v); None when the enumeration would exceed ``limit``.
    """
    e = M.cols
    if rank(M) != e:
        raise ValueError("matrix must have full column rank")
    if e == 1:
        return [_normalize(list(M.col(0)), [ONE])] if _normalize(list(M.col(0)), [ONE]) else []
    nz = [i for i in range(M.rows) if any(M.entries[i])]
    if _binom(len(nz), e - 1) > limit:
        return None
    seen = {}
    for S in itertools.combinations(nz, e - 1):
        rows = [M.entries[i] for i in S]
        if rank(CoeffMatrix(rows, e)) != e - 1:
            continue
        v = _null_vector(rows, e)
        u = M.apply(v)
        got = _normalize(u, v)
        if got is not None and got[0] not in seen:
            seen[got[0]] = got[1]
    return sorted(seen.items(), key=lambda uv: (sum(1 for x in uv[0] if x), uv[0]))


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0


def _min_bases(cands, e: int, max_keep: int = 64):
    """All independent e-subsets of candidates with minimal total support."""
    V = np.array([[float(x) for x in v] for _, v in cands])
    w = [sum(1 for x in u if x) for u, _ in cands]
    best, keep = None, []
    for S in itertools.combinations(range(len(cands)), e):
        tot = sum(w[i] for i in S)
        if best is not None and tot > best:
            continue
        if abs(np.linalg.det(V[list(S)])) < 1e-9:
            continue
        if best is None or tot < best:
            best, keep = tot, []
        if len(keep) < max_keep:
            keep.append(S)
    return keep


def _order_basis(cands, S):
    # place vectors so that the change of basis is as close to diagonal as possible
    vs = [cands[i] for i in S]
    e = len(vs)
    for perm in itertools.permutations(range(e)):
        if all(vs[perm[j]][1][j] for j in range(e)):
            return [vs[p] for p in perm]
    return sorted(vs, key=lambda uv: next(j for j, x in enumerate(uv[1]) if x))


def _factor(M: CoeffMatrix, basis) -> tuple[CoeffMatrix, CoeffMatrix]:
    """Ls with the given columns, and phi with M = Ls phi."""
    e = M.cols
    Ls = CoeffMatrix([[basis[j][0][i] for j in range(e)] for i in range(M.rows)], e)
    Vinv = CoeffMatrix([[basis[j][1][i] for j in range(e)] for i in range(e)], e)
    return Ls, inverse(Vinv)


# -- greedy fallback for large operators --------------------------------------------------


def _greedy(M: CoeffMatrix, max_rounds: int = 50) -> tuple[CoeffMatrix, CoeffMatrix]:
    """Column combinations (up to three columns) with coefficients in {+-1} and the
    matrix's own values, plus common-factor scaling, while the density drops."""
    X = [list(c) for c in M.T.entries]  # columns of Ls
    e = len(X)
    T = [[ONE if i == j else ZERO for j in range(e)] for i in range(e)]  # M = Ls T
    vals = {ONE, -ONE} | {x for c in X for y in c if y for x in (y, -y)}
    vals = sorted(vals, key=lambda c: (not c.is_unit(), float(abs(c)), float(c)))[:12]

    def nnz(c):
        return sum(1 for x in c if x)

    for _ in range(max_rounds):
        improved = False
        for j in range(e):
            mags = {abs(x) for x in X[j] if x}
            if len(mags) == 1:
                c = mags.pop()
                if not c.is_unit():
                    # Ls_j -> Ls_j / c, row j of T scaled by c
                    X[j] = [x / c for x in X[j]]
                    T[j] = [x * c for x in T[j]]
                    improved = True
            for k, l in itertools.chain(((k, None) for k in range(e)), itertools.combinations(range(e), 2)):
                if j in (k, l):
                    continue
                for a in vals:
                    for b in (vals if l is not None else [ZERO]):
                        new = [x + a * y + (b * z if l is not None else ZERO)
                               for x, y, z in zip(X[j], X[k], X[l] if l is not None else X[k])]
                        if nnz(new) < nnz(X[j]):
                            X[j] = new
                            # Ls' = Ls E with E adding a*col k (+ b*col l) to col j; T' = E^-1 T
                            T[k] = [x - a * y for x, y in zip(T[k], T[j])]
                            if l is not None:
                                T[l] = [x - b * y for x, y in zip(T[l], T[j])]
                            improved = True
        if not improved:
            break
    Ls = CoeffMatrix(X, M.rows).T
    return Ls, CoeffMatrix(T, e)


# -- driver -------------------------------------------------------------------------------


@dataclass(frozen=True)
class SparsifyOptions:
    enum_limit: int = 20000
    max_keep: int = 64


def _side(M: CoeffMatrix, opts: SparsifyOptions) -> list[tuple[CoeffMatrix, CoeffMatrix]]:
    """Candidate (core, cob) pairs with M = core @ cob, best first."""
    out = []
    cands = sparse_columns(M, opts.enum_limit)
    if cands:
        for S in _min_bases(cands, M.cols, opts.max_keep):
            out.append(_factor(M, _order_basis(cands, S)))
    if not out:
        out.append(_greedy(M))
    ident = (M, CoeffMatrix.identity(M.cols))
    if _is_sparse(M) and M.nnz() <= min(c.nnz() for c, _ in out):
        # never trade an already sparse operator for an equally sparse one
        out = [ident]
    return out


def sparsify(H: HMRep, opts: SparsifyOptions | None = None) -> CoBTriple:
    """Factor H through changes of basis into a sparse core.

    Each of L, R and P^T is written as (sparse core) x (invertible CoB), the
    core columns being minimal-support vectors of the operator's column space
    normalized to {0, +-1}.  Among equally sparse factorizations the one with
    the smallest core gamma2 wins.  Large operators use a greedy
    column-combination search instead.
    """
    if not H.exact:
        raise ValueError("sparsification needs exact coefficients")
    opts = opts or SparsifyOptions()
    Ls_opts = _side(H.L, opts)
    Rs_opts = _side(H.R, opts)
    Pt_opts = _side(H.P.T, opts)
    best = None
    for (Ls, phi), (Rs, psi), (Pst, nu) in itertools.product(Ls_opts, Rs_opts, Pt_opts):
        # P^T = Ps^T nu  <=>  P = nu^T Ps
        g = gamma2_arrays(Ls.to_float(), Rs.to_float(), Pst.T.to_float())
        key = (Ls.nnz() + Rs.nnz() + Pst.nnz(), round(g, 9))
        if best is None or key < best[0]:
            best = (key, CoBTriple(phi, psi, nu, Ls, Rs, Pst.T))
    c = best[1]
    return CoBTriple(c.phi, c.psi, c.nu, c.Ls, c.Rs, c.Ps, _is_sparse(c.Ls) and _is_sparse(c.Rs) and _is_sparse(c.Ps))


def verify_factorization(H: HMRep, c: CoBTriple) -> bool:
    """Exact products, then matmul validity of the composed scheme."""
    try:
        if c.Ls @ c.phi != H.L or c.Rs @ c.psi != H.R or c.nu.T @ c.Ps != H.P:
            return False
        return validate_matmul(c.composed(H.m, H.k, H.n)).valid
    except ValueError:
        return False


@dataclass(frozen=True)
class CoBQuality:
    cob_factor: float  # ||phi||_q ||psi||_q ||nu^T||_p
    gamma_core: float
    gamma_mmab: float


def cob_quality(c: CoBTriple, p: Norm | str, q: Norm | str, dims: tuple[int, int, int] = (2, 2, 2)) -> CoBQuality:
    p, q = Norm.parse(p), Norm.parse(q)
    f = op_norm(c.phi, q) * op_norm(c.psi, q) * op_norm(c.nu.T, p)
    g = growth_factor(c.core(*dims), p, q)
    return CoBQuality(f, g, f * g)


def core_gamma2(c: CoBTriple) -> float:
    return gamma2_arrays(c.Ls.to_float(), c.Rs.to_float(), c.Ps.to_float())
