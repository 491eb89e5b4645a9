"""Optimization passes producing short straight-line programs.

``cancellation_free`` extracts shared work from a matrix in four phases
(colinear pairs, column multipliers, triangle relations, row multipliers);
``kernel_decompose`` computes independent rows first and the dependent ones
from them; ``best_of`` picks the cheapest among these and the transposed
kernel variant.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .coefficient import Coefficient, CoeffMatrix, ONE, solve_left
from .hm import HMRep
from .slp import SLP, Builder, OpCounts, Ref, as_matrix, naive_slp, transpose_slp


@dataclass(frozen=True)
class CFOptions:
    branch_budget: int = 64  # max number of phase-1 outcomes explored on ties


def _nonunit(c: Coefficient) -> int:
    return 0 if c.is_unit() else 1


def _sign(c: Coefficient) -> int:
    return c.sign()


class _Work:
    """Matrix being simplified: output rows over columns = inputs + temporaries.

    Temporary column ``n + t`` is defined by ``defs[t]``, a linear combination
    of other columns; definitions take part in phases 2-4 like output rows.
    """

    def __init__(self, n: int, rows: list[dict[int, Coefficient]]):
        self.n = n
        self.rows = rows
        self.defs: list[dict[int, Coefficient]] = []

    def copy(self) -> "_Work":
        w = _Work(self.n, [dict(r) for r in self.rows])
        w.defs = [dict(d) for d in self.defs]
        return w

    def all_rows(self):
        return self.rows + self.defs

    def new_col(self, d: dict[int, Coefficient]) -> int:
        for t, e in enumerate(self.defs):
            if e == d:
                return self.n + t
        self.defs.append(d)
        return self.n + len(self.defs) - 1


# -- phase 1: colinear pairs ------------------------------------------------------


_INTERN: dict[Coefficient, Coefficient] = {}


def _intern(c: Coefficient) -> Coefficient:
    # equal coefficients share one object, so dict lookups hit the identity fast path
    return _INTERN.setdefault(c, c)


@lru_cache(maxsize=65536)
def _ratio(a: Coefficient, b: Coefficient) -> Coefficient:
    return _intern(b / a)


def _pair_groups(rows) -> dict[tuple, list[int]]:
    groups: dict[tuple, list[int]] = defaultdict(list)
    for r, row in enumerate(rows):
        items = sorted(row.items())
        for (i, a), (j, b) in combinations(items, 2):
            groups[(i, j, _ratio(a, b))].append(r)
    return groups


def _apply_pair(w: _Work, key, rs: list[int]):
    i, j, ratio = key
    # w = a (x_i + ratio x_j); pick a minimizing the multiplications it causes
    cands = [ONE, abs(ratio).inverse()] + [abs(w.rows[s][i]) for s in rs]
    best = None
    for a in cands:
        cost = _nonunit(a) + _nonunit(a * ratio) + sum(_nonunit(w.rows[s][i] / a) for s in rs)
        if best is None or cost < best[0]:
            best = (cost, a)
    a = best[1]
    col = w.new_col({i: a, j: a * ratio})
    for s in rs:
        row = w.rows[s]
        lam = _intern(row[i] / a)
        del row[i], row[j]
        row[col] = lam


def _tie_order(item):
    (i, j, ratio), rs = item
    return (not ratio.is_unit(), i, j, float(ratio))


def _phase1_leaves(start: _Work, budget: int) -> list[_Work]:
    leaves: list[_Work] = []

    def search(w: _Work):
        groups = _pair_groups(w.rows)
        top = max((len(v) for v in groups.values()), default=0)
        if top < 2:
            leaves.append(w)
            return
        ties = sorted(((k, v) for k, v in groups.items() if len(v) == top), key=_tie_order)
        first_rows = set(ties[0][1])
        first_cols = {ties[0][0][0], ties[0][0][1]}
        # only conflicting choices lead to different outcomes
        branch = [ties[0]] + [
            t for t in ties[1:] if set(t[1]) & first_rows and {t[0][0], t[0][1]} & first_cols
        ]
        for n, (key, rs) in enumerate(branch):
            if n > 0 and len(leaves) >= budget:
                break
            nxt = w.copy() if n < len(branch) - 1 else w
            _apply_pair(nxt, key, rs)
            search(nxt)

    search(start.copy())
    return leaves


# -- phases 2-4: shared constant multipliers --------------------------------------


def _column_multipliers(w: _Work):
    col = 0
    while col < w.n + len(w.defs):
        groups: dict[Coefficient, list[dict]] = defaultdict(list)
        for row in w.all_rows():
            v = row.get(col)
            if v is not None and not v.is_unit():
                groups[abs(v)].append(row)
        for mag in sorted(groups, key=float):
            rows = groups[mag]
            if len(rows) < 2:
                continue
            t = w.new_col({col: mag})
            for row in rows:
                v = row.pop(col)
                row[t] = Coefficient(_sign(v))
        col += 1


def _find_scaled(w: _Work, col: int, mag: Coefficient, skip: dict) -> int | None:
    """A column equal to mag * x_col, creating it from another row that has it."""
    for t, d in enumerate(w.defs):
        if d == {col: mag}:
            return w.n + t
    for row in w.all_rows():
        if row is skip:
            continue
        v = row.get(col)
        if v is not None and abs(v) == mag:
            t = w.new_col({col: mag})
            row.pop(col)
            row[t] = Coefficient(_sign(v))
            return t
    return None


def _triangles(w: _Work):
    for row in w.all_rows():
        changed = True
        while changed:
            changed = False
            items = sorted((c, v) for c, v in row.items() if not v.is_unit())
            for (j, mj), (k, mk) in ((p, q) for p in items for q in items if p[0] != q[0]):
                a = mj / mk
                if a.is_unit() or abs(mk) == abs(mj):
                    continue
                t = _find_scaled(w, j, abs(a), row)
                if t is None or t == j:
                    continue
                # m_j x_j = (sign(a) m_k) (|a| x_j)
                del row[j]
                row[t] = row.get(t, Coefficient(0)) + Coefficient(_sign(a)) * mk
                if not row[t]:
                    del row[t]
                changed = True
                break


def _row_multipliers(w: _Work):
    for row in w.all_rows():
        groups: dict[Coefficient, list[int]] = defaultdict(list)
        for c, v in sorted(row.items()):
            if not v.is_unit():
                groups[abs(v)].append(c)
        for mag in sorted(groups, key=float):
            cols = groups[mag]
            if len(cols) < 2:
                continue
            s0 = _sign(row[cols[0]])
            t = w.new_col({c: Coefficient(_sign(row[c]) * s0) for c in cols})
            for c in cols:
                del row[c]
            row[t] = row.get(t, Coefficient(0)) + mag * s0


def _finish_phases(w: _Work) -> _Work:
    w = w.copy()
    _column_multipliers(w)
    _triangles(w)
    _row_multipliers(w)
    return w


def _emit(b: Builder, w: _Work, inputs: list[Ref]) -> list[Ref]:
    refs: list[Ref | None] = list(inputs) + [None] * len(w.defs)
    state = [0] * len(refs)  # 0 new, 1 in progress, 2 done

    def get(c: int) -> Ref:
        if state[c] == 2 or c < w.n:
            return refs[c]
        if state[c] == 1:
            raise RuntimeError("cyclic temporary definitions")
        state[c] = 1
        d = w.defs[c - w.n]
        refs[c] = b.lincomb([(v, get(k)) for k, v in sorted(d.items())])
        state[c] = 2
        return refs[c]

    return [b.lincomb([(v, get(k)) for k, v in sorted(row.items())]) for row in w.rows]


def _cost(w: _Work) -> OpCounts:
    b = Builder(w.n)
    outs = _emit(b, w, [b.load(j) for j in range(w.n)])
    return b.finish(outs).counts()


def _rows_of(M: CoeffMatrix) -> list[dict[int, Coefficient]]:
    return [{j: _intern(v) for j, v in enumerate(r) if v} for r in M.entries]


def _cf_plan(M: CoeffMatrix, opts: CFOptions) -> _Work:
    leaves = _phase1_leaves(_Work(M.cols, _rows_of(M)), opts.branch_budget)
    best = None
    for leaf in leaves:
        done = _finish_phases(leaf)
        c = _cost(done)
        if best is None or c.key() < best[0].key():
            best = (c, done)
    return best[1]


def cancellation_free(M, opts: CFOptions | None = None) -> SLP:
    """Four-phase common-subexpression elimination on ``x -> M x``."""
    M = as_matrix(M)
    opts = opts or CFOptions()
    w = _cf_plan(M, opts)
    b = Builder(M.cols)
    return b.finish(_emit(b, w, [b.load(j) for j in range(M.cols)]))


# -- kernel decomposition -----------------------------------------------------------


def independent_rows(M: CoeffMatrix) -> list[int]:
    """Greedy rank profile, visiting rows by ascending Hamming weight then index."""
    order = sorted(range(M.rows), key=lambda i: (sum(1 for x in M.entries[i] if x), i))
    chosen: list[int] = []
    basis: list[tuple[int, list[Coefficient]]] = []  # (pivot, row with unit pivot)
    for i in order:
        v = list(M.entries[i])
        for p, b in basis:
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, b)]
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = v[piv].inverse()
        basis.append((piv, [x * inv for x in v]))
        chosen.append(i)
    return sorted(chosen)


def kernel_decompose(M, opts: CFOptions | None = None) -> SLP:
    """Independent rows via cancellation_free, dependent rows as combinations of them."""
    M = as_matrix(M)
    opts = opts or CFOptions()
    I = independent_rows(M)
    if len(I) == M.rows:
        return cancellation_free(M, opts)
    D = [i for i in range(M.rows) if i not in I]
    b = Builder(M.cols)
    xs = [b.load(j) for j in range(M.cols)]
    out: list[Ref | None] = [None] * M.rows
    if I:
        MI = M.submatrix(I)
        K = solve_left(M.submatrix(D), MI)
        yI = _emit(b, _cf_plan(MI, opts), xs)
        yD = _emit(b, _cf_plan(K, opts), yI)
        for i, r in zip(I, yI):
            out[i] = r
        for i, r in zip(D, yD):
            out[i] = r
    else:
        out = [b.zero() for _ in range(M.rows)]
    return b.finish(out)


def _better(s: SLP, t: SLP) -> bool:
    return s.counts().key() < t.counts().key()


def best_of(M, opts: CFOptions | None = None) -> SLP:
    """Cheapest of direct, kernel and transposed-kernel programs (never worse than naive)."""
    M = as_matrix(M)
    cands = [
        cancellation_free(M, opts),
        kernel_decompose(M, opts),
        transpose_slp(kernel_decompose(M.T, opts)),
        naive_slp(M),
    ]
    best = cands[0]
    for s in cands[1:]:
        if _better(s, best):
            best = s
    return best


MODES = {
    "naive": naive_slp,
    "direct": cancellation_free,
    "kernel": kernel_decompose,
    "transpose": lambda M, opts=None: transpose_slp(kernel_decompose(as_matrix(M).T, opts)),
    "best": best_of,
}


def optimize(M, mode: str = "best", opts: CFOptions | None = None) -> SLP:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {sorted(MODES)}")
    if mode == "naive":
        return naive_slp(M)
    return MODES[mode](M, opts)


# -- whole-scheme reports -------------------------------------------------------------


@dataclass
class SchemeSLPs:
    L: SLP
    R: SLP
    P: SLP

    def total(self) -> OpCounts:
        return self.L.counts() + self.R.counts() + self.P.counts()


def compile_scheme(H: HMRep, mode: str = "best", opts: CFOptions | None = None) -> SchemeSLPs:
    if not H.exact:
        raise ValueError("SLP generation needs exact coefficients; snap the scheme first")
    return SchemeSLPs(optimize(H.L, mode, opts), optimize(H.R, mode, opts), optimize(H.P, mode, opts))


@dataclass
class OperationCountReport:
    scheme: str
    naive: dict[str, OpCounts] = field(default_factory=dict)
    best: dict[str, OpCounts] = field(default_factory=dict)

    def total(self, which: str) -> OpCounts:
        d = self.naive if which == "naive" else self.best
        return d["L"] + d["R"] + d["P"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["scheme", "matrix", "strategy", "adds", "mults", "divs2"])
        for which, d in (("naive", self.naive), ("best", self.best)):
            for name in ("L", "R", "P"):
                c = d[name]
                wr.writerow([self.scheme, name, which, c.adds, c.mults, c.divs2])
            t = self.total(which)
            wr.writerow([self.scheme, "total", which, t.adds, t.mults, t.divs2])
        return buf.getvalue()


def codegen_report(H: HMRep, opts: CFOptions | None = None) -> OperationCountReport:
    rep = OperationCountReport(H.name)
    best = compile_scheme(H, "best", opts)
    for name in ("L", "R", "P"):
        rep.naive[name] = naive_slp(getattr(H, name)).counts()
        rep.best[name] = getattr(best, name).counts()
    return rep
