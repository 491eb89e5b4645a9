"""Straight-line programs for linear operators.

An :class:`SLP` is a single-assignment list of instructions.  Every value
instruction (``LOAD``, ``ADD``, ``SUB``, ``MUL``, ``ZERO``) defines ``t<i>``
where ``i`` is its position; ``STORE`` instructions write ``o<j>`` and are
kept after all value instructions.

Multiplications by ``-1`` are free, so programs keep constants positive
where possible and carry signs through ``SUB``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .coefficient import Coefficient, CoeffMatrix, ONE, ZERO


class Op(enum.Enum):
    LOAD = "load"
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    STORE = "store"
    ZERO = "zero"


@dataclass(frozen=True)
class Instr:
    op: Op
    a: int = -1
    b: int = -1
    const: Coefficient | None = None
    index: int = -1  # input index for LOAD, output index for STORE


class SLPError(ValueError):
    pass


def _is_pow2_inverse(c: Coefficient) -> bool:
    # |c| = 1/2^t with t >= 1
    if not c.is_rational():
        return False
    x = abs(c.a)
    return x.numerator == 1 and x.denominator > 1 and x.denominator & (x.denominator - 1) == 0


@dataclass(frozen=True)
class OpCounts:
    adds: int
    mults: int  # every multiplication by a constant other than +-1
    divs2: int  # those among ``mults`` that are divisions by a power of two

    @property
    def other_mults(self) -> int:
        return self.mults - self.divs2

    def __add__(self, other: "OpCounts") -> "OpCounts":
        return OpCounts(self.adds + other.adds, self.mults + other.mults, self.divs2 + other.divs2)

    def key(self) -> tuple[int, int]:
        return (self.adds, self.mults)


@dataclass(frozen=True, eq=False)
class SLP:
    n_in: int
    n_out: int
    instrs: tuple[Instr, ...]

    def __post_init__(self):
        object.__setattr__(self, "instrs", tuple(self.instrs))
        stored = set()
        seen_store = False
        for pos, ins in enumerate(self.instrs):
            if ins.op is Op.STORE:
                seen_store = True
                if not 0 <= ins.index < self.n_out:
                    raise SLPError(f"instruction {pos}: output index {ins.index} out of range")
                if ins.index in stored:
                    raise SLPError(f"output {ins.index} stored twice")
                stored.add(ins.index)
                self._check_ref(pos, ins.a)
                continue
            if seen_store:
                raise SLPError(f"instruction {pos}: value instruction after a store")
            if ins.op is Op.LOAD:
                if not 0 <= ins.index < self.n_in:
                    raise SLPError(f"instruction {pos}: input index {ins.index} out of range")
            elif ins.op in (Op.ADD, Op.SUB):
                self._check_ref(pos, ins.a)
                self._check_ref(pos, ins.b)
            elif ins.op is Op.MUL:
                self._check_ref(pos, ins.a)
                if not isinstance(ins.const, Coefficient):
                    raise SLPError(f"instruction {pos}: MUL needs a Coefficient constant")
        if len(stored) != self.n_out:
            missing = sorted(set(range(self.n_out)) - stored)
            raise SLPError(f"outputs never stored: {missing}")

    def _check_ref(self, pos: int, ref: int):
        if not 0 <= ref < pos or self.instrs[ref].op is Op.STORE:
            raise SLPError(f"instruction {pos}: bad reference t{ref}")

    def counts(self) -> OpCounts:
        adds = mults = divs = 0
        for ins in self.instrs:
            if ins.op in (Op.ADD, Op.SUB):
                adds += 1
            elif ins.op is Op.MUL and not ins.const.is_unit():
                mults += 1
                divs += _is_pow2_inverse(ins.const)
        return OpCounts(adds, mults, divs)

    @property
    def n_values(self) -> int:
        return sum(1 for ins in self.instrs if ins.op is not Op.STORE)

    def matrix(self) -> CoeffMatrix:
        """The operator computed, recovered by exact evaluation on unit vectors."""
        cols = []
        for j in range(self.n_in):
            e = [ONE if i == j else ZERO for i in range(self.n_in)]
            cols.append(eval_slp(self, e))
        return CoeffMatrix([[cols[j][i] for j in range(self.n_in)] for i in range(self.n_out)], self.n_in)

    def __repr__(self):
        c = self.counts()
        return f"SLP({self.n_in} -> {self.n_out}, {c.adds} adds, {c.mults} mults)"


@dataclass(frozen=True)
class LinOp:
    """A linear operator to be compiled, tagged with the HM block it realizes."""

    M: CoeffMatrix
    tag: str = ""


def as_matrix(M) -> CoeffMatrix:
    if isinstance(M, LinOp):
        return M.M
    if isinstance(M, CoeffMatrix):
        return M
    return CoeffMatrix(M)


# -- evaluation -------------------------------------------------------------------


def _is_exact(x) -> bool:
    return isinstance(x, (Coefficient, Fraction, int, np.integer, str)) and not isinstance(x, bool)


def eval_slp(s: SLP, x: Sequence) -> list:
    """Evaluate in instruction order.

    Exact (Coefficient) arithmetic when every input is an exact scalar;
    otherwise float arithmetic, which also works elementwise on numpy blocks.
    """
    if len(x) != s.n_in:
        raise ValueError(f"expected {s.n_in} inputs, got {len(x)}")
    exact = all(_is_exact(v) for v in x)
    if exact:
        x = [Coefficient.coerce(v) for v in x]
    vals: list = [None] * len(s.instrs)
    out: list = [None] * s.n_out
    for pos, ins in enumerate(s.instrs):
        op = ins.op
        if op is Op.LOAD:
            vals[pos] = x[ins.index]
        elif op is Op.ADD:
            vals[pos] = vals[ins.a] + vals[ins.b]
        elif op is Op.SUB:
            vals[pos] = vals[ins.a] - vals[ins.b]
        elif op is Op.MUL:
            c = ins.const
            if c == -1:
                vals[pos] = -vals[ins.a]
            elif c == 1:
                vals[pos] = vals[ins.a]
            else:
                vals[pos] = c * vals[ins.a] if exact else float(c) * vals[ins.a]
        elif op is Op.ZERO:
            vals[pos] = ZERO if exact else 0.0 * x[0] if s.n_in else 0.0
        else:
            out[ins.index] = vals[ins.a]
    return out


# -- text format -------------------------------------------------------------------


def to_text(s: SLP) -> str:
    lines = [f"# inputs {s.n_in} outputs {s.n_out}"]
    for pos, ins in enumerate(s.instrs):
        op = ins.op
        if op is Op.LOAD:
            lines.append(f"t{pos} := x{ins.index}")
        elif op is Op.ADD:
            lines.append(f"t{pos} := t{ins.a} + t{ins.b}")
        elif op is Op.SUB:
            lines.append(f"t{pos} := t{ins.a} - t{ins.b}")
        elif op is Op.MUL:
            lines.append(f"t{pos} := {ins.const} * t{ins.a}")
        elif op is Op.ZERO:
            lines.append(f"t{pos} := 0")
        else:
            lines.append(f"o{ins.index} := t{ins.a}")
    return "\n".join(lines) + "\n"


_HEAD = re.compile(r"#\s*inputs\s+(\d+)\s+outputs\s+(\d+)")
_DEF = re.compile(r"t(\d+)\s*:=\s*(.+)")
_OUT = re.compile(r"o(\d+)\s*:=\s*t(\d+)")
_BIN = re.compile(r"t(\d+)\s*([+-])\s*t(\d+)")
_MUL = re.compile(r"(\S+)\s*\*\s*t(\d+)")


def from_text(text: str) -> SLP:
    n_in = n_out = None
    instrs: list[Instr] = []
    max_in, max_out = -1, -1
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEAD.match(line)
            if m:
                n_in, n_out = int(m.group(1)), int(m.group(2))
            continue
        m = _OUT.fullmatch(line)
        if m:
            j = int(m.group(1))
            max_out = max(max_out, j)
            instrs.append(Instr(Op.STORE, a=int(m.group(2)), index=j))
            continue
        m = _DEF.fullmatch(line)
        if not m:
            raise SLPError(f"cannot parse {line!r}")
        pos, expr = int(m.group(1)), m.group(2).strip()
        if pos != len(instrs):
            raise SLPError(f"t{pos} defined out of order")
        if re.fullmatch(r"x\d+", expr):
            i = int(expr[1:])
            max_in = max(max_in, i)
            instrs.append(Instr(Op.LOAD, index=i))
        elif expr == "0":
            instrs.append(Instr(Op.ZERO))
        elif (b := _BIN.fullmatch(expr)):
            op = Op.ADD if b.group(2) == "+" else Op.SUB
            instrs.append(Instr(op, a=int(b.group(1)), b=int(b.group(3))))
        elif (mm := _MUL.fullmatch(expr)):
            instrs.append(Instr(Op.MUL, a=int(mm.group(2)), const=Coefficient.parse(mm.group(1))))
        else:
            raise SLPError(f"cannot parse expression {expr!r}")
    if n_in is None:
        n_in, n_out = max_in + 1, max_out + 1
    return SLP(n_in, n_out, instrs)


# -- building programs ---------------------------------------------------------------

# a signed reference: (instruction index, +1 or -1)
Ref = tuple[int, int]


class Builder:
    """Emit instructions through signed references with lazy negation.

    With ``memo`` identical instructions are shared (commutative adds are
    normalized first).
    """

    def __init__(self, n_in: int, memo: bool = True):
        self.n_in = n_in
        self.memo = memo
        self.instrs: list[Instr] = []
        self._cache: dict = {}

    def _emit(self, ins: Instr, key=None) -> int:
        if key is not None and self.memo:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        self.instrs.append(ins)
        pos = len(self.instrs) - 1
        if key is not None:
            self._cache[key] = pos
        return pos

    def load(self, i: int) -> Ref:
        key = ("load", i)
        if key in self._cache:
            return (self._cache[key], 1)
        return (self._emit(Instr(Op.LOAD, index=i), key), 1)

    def zero(self) -> Ref:
        return (self._emit(Instr(Op.ZERO), ("zero",)), 1)

    def add(self, x: Ref, y: Ref) -> Ref:
        (a, sa), (b, sb) = x, y
        if sa == sb:
            a, b = min(a, b), max(a, b)
            return (self._emit(Instr(Op.ADD, a, b), ("add", a, b)), sa)
        if sa < 0:
            a, b = b, a
        return (self._emit(Instr(Op.SUB, a, b), ("sub", a, b)), 1)

    def scale(self, c: Coefficient, x: Ref) -> Ref:
        a, s = x
        sg = c.sign()
        if sg == 0:
            raise ValueError("scaling by zero")
        if c.is_unit():
            return (a, s * sg)
        mag = abs(c)
        return (self._emit(Instr(Op.MUL, a, const=mag), ("mul", mag, a)), s * sg)

    def lincomb(self, terms: Sequence[tuple[Coefficient, Ref]]) -> Ref:
        """sum c_i x_i folded left to right; zero terms are skipped."""
        acc = None
        for c, r in terms:
            if not c:
                continue
            t = self.scale(c, r)
            acc = t if acc is None else self.add(acc, t)
        return self.zero() if acc is None else acc

    def finish(self, outputs: Sequence[Ref]) -> SLP:
        instrs = list(self.instrs)
        stores = []
        for j, (a, s) in enumerate(outputs):
            if s < 0:
                instrs.append(Instr(Op.MUL, a, const=Coefficient(-1)))
                a = len(instrs) - 1
            stores.append(Instr(Op.STORE, a=a, index=j))
        return prune(SLP(self.n_in, len(outputs), instrs + stores))


def prune(s: SLP) -> SLP:
    """Drop dead instructions and renumber."""
    live = [False] * len(s.instrs)
    for pos in range(len(s.instrs) - 1, -1, -1):
        ins = s.instrs[pos]
        if ins.op is Op.STORE:
            live[pos] = True
        if not live[pos]:
            continue
        if ins.op in (Op.ADD, Op.SUB, Op.MUL, Op.STORE):
            live[ins.a] = True
        if ins.op in (Op.ADD, Op.SUB):
            live[ins.b] = True
    remap, out = {}, []
    for pos, ins in enumerate(s.instrs):
        if not live[pos]:
            continue
        remap[pos] = len(out)
        out.append(Instr(ins.op, remap.get(ins.a, -1), remap.get(ins.b, -1), ins.const, ins.index))
    return SLP(s.n_in, s.n_out, out)


def emit_into(b: Builder, s: SLP, inputs: Sequence[Ref]) -> list[Ref]:
    """Replay ``s`` inside ``b`` on the given input references; returns its outputs."""
    refs: list[Ref | None] = [None] * len(s.instrs)
    outs: list[Ref | None] = [None] * s.n_out
    for pos, ins in enumerate(s.instrs):
        op = ins.op
        if op is Op.LOAD:
            refs[pos] = inputs[ins.index]
        elif op is Op.ADD:
            refs[pos] = b.add(refs[ins.a], refs[ins.b])
        elif op is Op.SUB:
            x, (y, sy) = refs[ins.a], refs[ins.b]
            refs[pos] = b.add(x, (y, -sy))
        elif op is Op.MUL:
            refs[pos] = b.scale(ins.const, refs[ins.a])
        elif op is Op.ZERO:
            refs[pos] = b.zero()
        else:
            outs[ins.index] = refs[ins.a]
    return outs


# -- simple programs -------------------------------------------------------------


def naive_slp(M) -> SLP:
    """Row-by-row evaluation: nnz - (#nonzero rows) adds, one mult per entry not in {0, +-1}."""
    M = as_matrix(M)
    b = Builder(M.cols, memo=False)
    xs = [None] * M.cols
    for j in range(M.cols):
        xs[j] = b.load(j)
    outs = [b.lincomb([(c, xs[j]) for j, c in enumerate(row)]) for row in M.entries]
    return b.finish(outs)


def transpose_slp(s: SLP) -> SLP:
    """Tellegen transposition: reverse the program, accumulating adjoints.

    If ``s`` computes ``M x``, the result computes ``M^T y``.  Fan-out in
    ``s`` becomes additions in the transpose, so for programs without dead
    inputs ``adds(s^T) = adds(s) + n_out(s) - n_in(s)``.
    """
    for ins in s.instrs:
        if not isinstance(ins.op, Op):
            raise SLPError(f"non-linear instruction {ins}")
    b = Builder(s.n_out, memo=False)
    adj: list[Ref | None] = [None] * len(s.instrs)

    def acc(pos: int, r: Ref):
        adj[pos] = r if adj[pos] is None else b.add(adj[pos], r)

    for pos in range(len(s.instrs) - 1, -1, -1):
        ins = s.instrs[pos]
        op = ins.op
        if op is Op.STORE:
            acc(ins.a, b.load(ins.index))
            continue
        t = adj[pos]
        if t is None or op in (Op.LOAD, Op.ZERO):
            continue
        if op is Op.ADD:
            acc(ins.a, t)
            acc(ins.b, t)
        elif op is Op.SUB:
            acc(ins.a, t)
            acc(ins.b, (t[0], -t[1]))
        elif op is Op.MUL:
            acc(ins.a, b.scale(ins.const, t))
    outs: list[Ref] = [None] * s.n_in
    for pos, ins in enumerate(s.instrs):
        if ins.op is Op.LOAD:
            r = adj[pos]
            outs[ins.index] = r if outs[ins.index] is None else (
                outs[ins.index] if r is None else b.add(outs[ins.index], r))
    outs = [b.zero() if r is None else r for r in outs]
    return b.finish(outs)
