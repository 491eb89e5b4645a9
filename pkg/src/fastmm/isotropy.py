"""Isotropy action on HM representations and gamma2 descent along orbits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from .hm import HMRep
from .norms import gamma2, gamma2_arrays


@dataclass(frozen=True, eq=False)
class Isotropy:
    """Triple (U, V, W) acting on <m,k,n> schemes.

    With row-major vectorization the action reads
    L (U^-1 (x) V^T), R (V^-1 (x) W^T), (U (x) W^-T) P, i.e. the scheme
    f(A, B) becomes U f(U^-1 A V, V^-1 B W) W^-1.
    """

    U: np.ndarray
    V: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        for name in ("U", "V", "W"):
            M = np.array(getattr(self, name), dtype=float)
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise ValueError(f"{name} must be square")
            if np.linalg.cond(M) > 1e14:
                raise ValueError(f"{name} is singular")
            # scalars act trivially: keep |det| = 1
            M = M / abs(np.linalg.det(M)) ** (1.0 / M.shape[0])
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @classmethod
    def identity(cls, m: int, k: int, n: int) -> "Isotropy":
        return cls(np.eye(m), np.eye(k), np.eye(n))

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.U.shape[0], self.V.shape[0], self.W.shape[0])

    def inverse(self) -> "Isotropy":
        return Isotropy(np.linalg.inv(self.U), np.linalg.inv(self.V), np.linalg.inv(self.W))


def compose(g1: Isotropy, g2: Isotropy) -> Isotropy:
    """act(compose(g1, g2), H) == act(g1, act(g2, H))."""
    if g1.dims != g2.dims:
        raise ValueError("dimension mismatch")
    return Isotropy(g1.U @ g2.U, g1.V @ g2.V, g1.W @ g2.W)


def _act_arrays(g: Isotropy, L, R, P):
    Ui, Vi, WiT = np.linalg.inv(g.U), np.linalg.inv(g.V), np.linalg.inv(g.W).T
    return L @ np.kron(Ui, g.V.T), R @ np.kron(Vi, g.W.T), np.kron(g.U, WiT) @ P


def act(g: Isotropy, H: HMRep) -> HMRep:
    if g.dims != H.dims:
        raise ValueError(f"isotropy dims {g.dims} do not match scheme {H.dims}")
    L, R, P = _act_arrays(g, *H.floats)
    return HMRep(H.m, H.k, H.n, L, R, P, f"{H.name}*g", f"isotropy image of {H.name}")


# -- Iwasawa parametrization --------------------------------------------------


def n_params(s: int) -> int:
    return (s + 2) * (s - 1) // 2


@dataclass(frozen=True)
class IwasawaPoint:
    """(rho, xi) per factor; rho > 0 has s-1 entries, xi has s(s-1)/2."""

    rho: tuple[tuple[float, ...], ...]
    xi: tuple[tuple[float, ...], ...]

    @classmethod
    def identity(cls, dims) -> "IwasawaPoint":
        return cls(tuple((1.0,) * (s - 1) for s in dims), tuple((0.0,) * (s * (s - 1) // 2) for s in dims))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(r) + 1 for r in self.rho)

    def n_params(self) -> int:
        return sum(n_params(s) for s in self.dims)

    def to_vector(self) -> np.ndarray:
        """log(rho) and xi, concatenated per factor."""
        parts = []
        for r, x in zip(self.rho, self.xi):
            parts.extend(math.log(v) for v in r)
            parts.extend(x)
        return np.array(parts, dtype=float)

    @classmethod
    def from_vector(cls, vec, dims) -> "IwasawaPoint":
        rho, xi, pos = [], [], 0
        for s in dims:
            rho.append(tuple(math.exp(v) for v in vec[pos:pos + s - 1]))
            pos += s - 1
            t = s * (s - 1) // 2
            xi.append(tuple(float(v) for v in vec[pos:pos + t]))
            pos += t
        return cls(tuple(rho), tuple(xi))


def iwasawa_factor(rho, xi) -> np.ndarray:
    """H(rho) P(xi): diag(rho_1..rho_{s-1}, 1/prod rho) times unit upper triangular."""
    s = len(rho) + 1
    if any(r <= 0 for r in rho):
        raise ValueError("rho entries must be positive")
    if len(xi) != s * (s - 1) // 2:
        raise ValueError("wrong number of xi parameters")
    Hd = np.diag(list(rho) + [1.0 / math.prod(rho)]) if s > 1 else np.eye(1)
    Pm = np.eye(s)
    Pm[np.triu_indices(s, 1)] = xi
    return Hd @ Pm


def iwasawa(pt: IwasawaPoint) -> Isotropy:
    return Isotropy(*(iwasawa_factor(r, x) for r, x in zip(pt.rho, pt.xi)))


# -- descent --------------------------------------------------------------------


@dataclass
class DescentOptions:
    restarts: int = 32
    sigma: float = 0.3
    max_evals: int = 20000
    tol: float = 1e-10
    seed: int = 0
    snap: bool = False


@dataclass
class DescentResult:
    point: IwasawaPoint
    rep: HMRep
    gamma2: float
    start_gamma2: float
    history: list[float] = field(default_factory=list)
    snapped: bool = False


def _objective(H: HMRep):
    L, R, P = H.floats
    dims = H.dims

    def f(vec):
        try:
            g = iwasawa(IwasawaPoint.from_vector(vec, dims))
        except (ValueError, OverflowError):
            return math.inf
        if not np.all(np.isfinite(g.U)) or not np.all(np.isfinite(g.W)) or not np.all(np.isfinite(g.V)):
            return math.inf
        try:
            return gamma2_arrays(*_act_arrays(g, L, R, P))
        except (np.linalg.LinAlgError, ValueError):
            return math.inf

    return f


def _nelder_mead(f, x0, opts: DescentOptions):
    res = minimize(
        f,
        x0,
        method="Nelder-Mead",
        options=dict(maxfev=opts.max_evals, xatol=opts.tol, fatol=opts.tol, adaptive=len(x0) > 8),
    )
    return res.x, float(res.fun)


def minimize_gamma2(H: HMRep, opts: DescentOptions | None = None) -> DescentResult:
    """Restarted Nelder-Mead over Iwasawa parameters; never worse than the identity."""
    opts = opts or DescentOptions()
    f = _objective(H)
    ident = IwasawaPoint.identity(H.dims)
    x_id = ident.to_vector()
    best_x, best_f = x_id, f(x_id)
    start = best_f
    rng = np.random.default_rng(opts.seed)
    history = []
    for i in range(opts.restarts):
        x0 = x_id if i == 0 else x_id + rng.normal(0.0, opts.sigma, size=x_id.shape)
        x, fx = _nelder_mead(f, x0, opts)
        history.append(fx)
        if fx < best_f:
            best_x, best_f = x, fx
    pt = IwasawaPoint.from_vector(best_x, H.dims)
    snapped = False
    if opts.snap:
        spt = snap_point(pt)
        sf = f(spt.to_vector())
        if sf <= best_f + 1e-9 and sf <= start + 1e-12:
            pt, best_f, snapped = spt, sf, True
    rep = act(iwasawa(pt), H)
    return DescentResult(pt, rep, gamma2(rep), start, history, snapped)


# -- snapping to recognizable constants --------------------------------------------

_SPECIAL = (
    ((4.0 / 3.0) ** 0.25, "(4/3)^(1/4)"),
    (0.5, "1/2"),
    (1.0 / math.sqrt(3.0), "1/sqrt3"),
)


def snap_value(x: float, tol: float = 1e-4, max_den: int = 64) -> tuple[float, str]:
    """Nearest value among +-p/q (q <= max_den) and a few special constants."""
    cands = []
    for v, name in _SPECIAL:
        for sgn in (1, -1):
            cands.append((abs(x - sgn * v), sgn * v, ("-" if sgn < 0 else "") + name))
    fr = Fraction(x).limit_denominator(max_den)
    cands.append((abs(x - float(fr)), float(fr), str(fr)))
    err, v, name = min(cands, key=lambda c: c[0])
    if err > tol:
        return x, repr(x)
    return v, name


def snap_point(pt: IwasawaPoint, tol: float = 1e-4) -> IwasawaPoint:
    def positive(v):
        s = snap_value(v, tol)[0]
        return s if s > 0 else v

    rho = tuple(tuple(positive(v) for v in r) for r in pt.rho)
    xi = tuple(tuple(snap_value(v, tol)[0] for v in x) for x in pt.xi)
    return IwasawaPoint(rho, xi)


# -- the restricted U x U x U family ------------------------------------------------


def uuu(rho: float, xi: float) -> Isotropy:
    U = iwasawa_factor((rho,), (xi,))
    return Isotropy(U, U, U)


def restricted_uuu_scan(H: HMRep, grid: int = 61, rho_range=(0.5, 2.0), xi_range=(-1.0, 1.0)):
    """Minimize gamma2 over isotropies (U, U, U) with U = [[rho, rho xi], [0, 1/rho]].

    A coarse grid seeds a Nelder-Mead refinement; the identity is always a
    candidate so ties are resolved in its favour.
    """
    if H.dims != (2, 2, 2):
        raise ValueError("restricted scan needs a <2,2,2> scheme")
    L, R, P = H.floats

    def f(x):
        rho, xi = x
        if rho <= 0:
            return math.inf
        return gamma2_arrays(*_act_arrays(uuu(rho, xi), L, R, P))

    rs = np.linspace(*rho_range, grid)
    xs = np.linspace(*xi_range, grid)
    vals = np.array([[f((r, x)) for x in xs] for r in rs])
    seeds = [(1.0, 0.0)]
    for idx in np.argsort(vals, axis=None)[:5]:
        i, j = np.unravel_index(idx, vals.shape)
        seeds.append((rs[i], xs[j]))
    best = (f((1.0, 0.0)), 1.0, 0.0)
    for s in seeds:
        res = minimize(f, np.array(s), method="Nelder-Mead", options=dict(xatol=1e-12, fatol=1e-14, maxfev=5000))
        if res.fun < best[0] - 1e-12:
            best = (float(res.fun), float(res.x[0]), float(res.x[1]))
    return best[1], best[2], best[0]
