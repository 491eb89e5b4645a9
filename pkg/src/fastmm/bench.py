"""Accuracy benchmark: random inputs, double-double reference, CSV records."""

from __future__ import annotations

import csv
import enum
import io
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .executor import AltPlan, RecursionPlan, altbasis_mm, classical_mm, mixed_336_plan, recursive_mm
from .hm import HMRep
from .norms import Norm, altbasis_bound, base_error, plan_error_factor
from .schemes import SchemeId, altbasis_cob, load_scheme
from .sparsify import CoBTriple, sparsify

UNIT_ROUNDOFF = 2.0**-53


class Dist(enum.Enum):
    UNIFORM = "uniform"
    NORMAL = "normal"
    RANDSVD = "randsvd"

    @classmethod
    def parse(cls, s: "str | Dist") -> "Dist":
        if isinstance(s, Dist):
            return s
        key = s.strip().lower()
        aliases = {"uniform11": "uniform", "normal01": "normal", "gaussian": "normal"}
        return cls(aliases.get(key, key))


def gen_matrix(dist: Dist | str, m: int, n: int, seed: int, cond: float = 1e12) -> np.ndarray:
    """Deterministic per (dist, m, n, seed).

    uniform: U[-1, 1]; normal: N(0, 1); randsvd: U diag(s) V^T with s
    log-spaced from 1 down to 1/cond and U, V orthogonal factors of
    Gaussian matrices.
    """
    if m < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    dist = Dist.parse(dist)
    rng = np.random.default_rng(seed)
    if dist is Dist.UNIFORM:
        return rng.uniform(-1.0, 1.0, size=(m, n))
    if dist is Dist.NORMAL:
        return rng.standard_normal((m, n))
    U, _ = np.linalg.qr(rng.standard_normal((m, m)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    r = min(m, n)
    s = np.logspace(0.0, -np.log10(cond), r)
    return (U[:, :r] * s) @ V[:, :r].T


# -- double-double reference ---------------------------------------------------------

_SPLITTER = 134217729.0  # 2^27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@dataclass(frozen=True)
class DDMatrix:
    """Unevaluated sum hi + lo of two double matrices."""

    hi: np.ndarray
    lo: np.ndarray

    def error_max(self, C: np.ndarray) -> float:
        """max |C - (hi + lo)|, evaluated as (C - hi) - lo."""
        return float(np.abs((np.asarray(C) - self.hi) - self.lo).max())

    def to_float(self) -> np.ndarray:
        return self.hi + self.lo


def reference_mm(A: np.ndarray, B: np.ndarray) -> DDMatrix:
    """Compensated (double-double) product, accumulating over k in order."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    hi = np.zeros((A.shape[0], B.shape[1]))
    lo = np.zeros_like(hi)
    for k in range(A.shape[1]):
        p, e = _two_prod(A[:, k, None], B[None, k, :])
        s, t = _two_sum(hi, p)
        t = t + (lo + e)
        hi, lo = _two_sum(s, t)
    return DDMatrix(hi, lo)


# -- benchmark -------------------------------------------------------------------------


class PlanKind(enum.Enum):
    PLAIN = "plain"
    ALTBASIS = "altbasis"
    CLASSICAL = "classical"
    MIXED = "mixed"


@dataclass(frozen=True)
class BenchCase:
    scheme: str
    plan: PlanKind = PlanKind.PLAIN

    @classmethod
    def parse(cls, text: str) -> "BenchCase":
        """``scheme`` or ``scheme:plan``."""
        name, _, kind = text.partition(":")
        if name.strip().lower() in ("conventional", "classic", "classical") and not kind:
            kind = "classical"
        return cls(name.strip(), PlanKind(kind.strip().lower() or "plain"))


@dataclass
class BenchConfig:
    cases: list[BenchCase]
    sizes: list[tuple[int, int, int]]
    dist: Dist = Dist.UNIFORM
    trials: int = 10
    seed: int = 0
    levels: int | None = None  # None: recurse down to DEFAULT_BASE-sized blocks
    cond: float = 1e12
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        self.dist = Dist.parse(self.dist)
        self.sizes = [(s, s, s) if isinstance(s, int) else tuple(s) for s in self.sizes]


@dataclass
class BenchRecord:
    scheme: str
    plan: str
    m: int
    k: int
    n: int
    levels: int
    dist: str
    trial: int
    err_max: float
    rel_err: float
    bound: float
    ratio: float
    seed: int


CSV_HEADER = ["scheme", "plan", "m", "k", "n", "levels", "dist", "trial", "err_max", "rel_err", "bound", "ratio", "seed"]


def _fmt(v) -> str:
    return f"{v:.17g}" if isinstance(v, float) else str(v)


def records_to_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_HEADER])
    return buf.getvalue()


@dataclass
class _Runner:
    """Multiplier plus its error factor E (bound = E ||A|| ||B|| u)."""

    levels: int
    factor: float
    mult: object


def trial_seeds(seed: int, trial: int) -> tuple[int, int]:
    """Seeds of A and B for one trial, derived from seed XOR trial."""
    a, b = np.random.SeedSequence(seed ^ trial).generate_state(2, dtype=np.uint64)
    return int(a), int(b)


_ALT_CACHE: dict = {}


def bundled_triple() -> CoBTriple:
    """The shipped change of basis and sparse core of the accurate <2,2,2> scheme."""
    phi, psi, nu = altbasis_cob()
    core = load_scheme(SchemeId.ALTBASIS_CORE)
    return CoBTriple(phi, psi, nu, core.L, core.R, core.P)


def _alt_triple(H: HMRep) -> CoBTriple:
    """The bundled triple for the accurate scheme, a computed one otherwise."""
    key = (H.L, H.R, H.P)
    if key not in _ALT_CACHE:
        if H.name == SchemeId.ACCURATE_SQRT3.value:
            _ALT_CACHE[key] = bundled_triple()
        else:
            _ALT_CACHE[key] = sparsify(H)
    return _ALT_CACHE[key]


DEFAULT_BASE = 16


def default_levels(H: HMRep, m: int, k: int, n: int, base: int = DEFAULT_BASE) -> int:
    """Recursion depth that stops once a block dimension would drop below ``base``."""
    ell = 0
    while (m % H.m == 0 and k % H.k == 0 and n % H.n == 0
           and min(m // H.m, k // H.k, n // H.n) >= base):
        m, k, n = m // H.m, k // H.k, n // H.n
        ell += 1
    return ell


def make_runner(case: BenchCase, dims: tuple[int, int, int], levels: int | None) -> _Runner:
    m, k, n = dims
    inf = Norm.MAX
    if case.plan is PlanKind.CLASSICAL:
        return _Runner(0, base_error(inf, inf, k), classical_mm)
    if case.plan is PlanKind.MIXED:
        plan = mixed_336_plan(load_scheme(case.scheme))
        plan.check_dims(m, k, n)
        k0 = k // plan.factor[1]
        return _Runner(len(plan.levels), plan_error_factor(plan.levels, inf, inf, k0),
                       lambda A, B: recursive_mm(plan, A, B))
    H = load_scheme(case.scheme)
    ell = default_levels(H, m, k, n) if levels is None else levels
    k0 = k // H.k**ell
    if case.plan is PlanKind.ALTBASIS:
        cob = _alt_triple(H)
        plan = AltPlan(cob, ell, H.dims)
        e = altbasis_bound(cob.core(*H.dims), cob, inf, inf, ell, k0).e_ell
        return _Runner(ell, e, lambda A, B: altbasis_mm(plan, A, B))
    plan = RecursionPlan.uniform(H, ell)
    plan.check_dims(m, k, n)
    return _Runner(ell, plan_error_factor(plan.levels, inf, inf, k0), lambda A, B: recursive_mm(plan, A, B))


@dataclass
class BenchResult:
    records: list[BenchRecord] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)  # cases skipped (e.g. divisibility)

    def csv(self) -> str:
        return records_to_csv(self.records)

    def medians(self) -> dict[tuple[str, str, tuple[int, int, int]], float]:
        groups: dict = {}
        for r in self.records:
            groups.setdefault((r.scheme, r.plan, (r.m, r.k, r.n)), []).append(r.err_max)
        return {key: statistics.median(v) for key, v in groups.items()}

    def summary(self) -> str:
        lines = ["scheme,plan,m,k,n,median_err_max"]
        for (s, p, (m, k, n)), med in sorted(self.medians().items()):
            lines.append(f"{s},{p},{m},{k},{n},{med:.6g}")
        lines.extend(f"# skipped: {e}" for e in self.errors)
        return "\n".join(lines) + "\n"


def run_bench(cfg: BenchConfig) -> BenchResult:
    res = BenchResult()
    for dims in cfg.sizes:
        m, k, n = dims
        runners = []
        for case in cfg.cases:
            try:
                runners.append((case, make_runner(case, dims, cfg.levels)))
            except ValueError as exc:
                res.errors.append(f"{case.scheme}:{case.plan.value} {dims}: {exc}")
        if not runners:
            continue
        def one_trial(trial: int) -> list[BenchRecord]:
            sa, sb = trial_seeds(cfg.seed, trial)
            A = gen_matrix(cfg.dist, m, k, sa, cfg.cond)
            B = gen_matrix(cfg.dist, k, n, sb, cfg.cond)
            ref = reference_mm(A, B)
            scale = float(np.abs(A).max() * np.abs(B).max())
            out = []
            for case, runner in runners:
                err = ref.error_max(runner.mult(A, B))
                bound = runner.factor * scale * UNIT_ROUNDOFF
                out.append(BenchRecord(
                    case.scheme, case.plan.value, m, k, n, runner.levels, cfg.dist.value, trial,
                    err, err / scale, bound, err / bound, cfg.seed,
                ))
            return out

        if cfg.workers > 1:
            with ThreadPoolExecutor(cfg.workers) as pool:
                chunks = list(pool.map(one_trial, range(cfg.trials)))
        else:
            chunks = [one_trial(t) for t in range(cfg.trials)]
        for c in chunks:
            res.records.extend(c)
    res.records.sort(key=lambda r: (r.scheme, r.plan, r.m, r.k, r.n, r.trial))
    return res


DEFAULT_CASES = [
    BenchCase("winograd"),
    BenchCase("strassen"),
    BenchCase("powers"),
    BenchCase("accurate-sqrt3"),
    BenchCase("accurate-sqrt3", PlanKind.ALTBASIS),
    BenchCase("conventional", PlanKind.CLASSICAL),
]
DEFAULT_SIZES = [32, 64, 128, 256]
