"""Exact scalars in Q(sqrt d) and dense matrices over them."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

Number = Union[int, Fraction, "Coefficient", str]

_SQRT_BITS = 200


def _is_squarefree(d: int) -> bool:
    if d < 0:
        return False
    if d in (0, 1):
        return True
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


class Coefficient:
    """An element ``a + b*sqrt(d)`` with rational ``a``, ``b``.

    Values are immutable and kept canonical: whenever ``b == 0`` the
    stored ``d`` is 0, and ``d in {0, 1}`` folds the surd into ``a``.
    Two coefficients with nonzero surd parts must share the same ``d``.
    """

    __slots__ = ("a", "b", "d", "_float", "_hash")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        if not _is_squarefree(d):
            raise ValueError(f"d must be a non-negative square-free integer, got {d}")
        if d == 1:
            a, b = a + b, Fraction(0)
        if d == 0 or b == 0:
            b, d = Fraction(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_float", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Coefficient is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def coerce(cls, x: Number) -> "Coefficient":
        if isinstance(x, Coefficient):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, (np.integer,)):
            return cls(int(x))
        raise TypeError(f"cannot convert {type(x).__name__} to Coefficient")

    @classmethod
    def sqrt(cls, d: int) -> "Coefficient":
        r = math.isqrt(d)
        if r * r == d:
            return cls(r)
        return cls(0, 1, d)

    @classmethod
    def parse(cls, text: str) -> "Coefficient":
        """Parse ``p/q``, ``sqrtD``, ``sqrtD*p/q``, ``p/q*sqrtD`` or ``x+sqrtD*y``."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty coefficient literal")
        # split into signed terms
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"malformed coefficient literal {text!r}")
        total = cls(0)
        for term in terms:
            total = total + cls._parse_term(term, text)
        return total

    @classmethod
    def _parse_term(cls, term: str, text: str) -> "Coefficient":
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        factors = term.split("*")
        value = cls(sign)
        for f in factors:
            m = re.fullmatch(r"sqrt\(?(\d+)\)?(?:/(\d+))?", f)
            if m:
                v = cls.sqrt(int(m.group(1)))
                if m.group(2):
                    v = v / cls(int(m.group(2)))
                value = value * v
                continue
            m = re.fullmatch(r"(\d+)(?:/(\d+))?", f)
            if not m:
                raise ValueError(f"malformed coefficient literal {text!r}")
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ZeroDivisionError(f"zero denominator in {text!r}")
            value = value * cls(Fraction(int(m.group(1)), den))
        return value

    # -- arithmetic -------------------------------------------------------

    def _join(self, other: "Coefficient") -> int:
        if self.d and other.d and self.d != other.d:
            raise ValueError(f"mixed quadratic fields sqrt{self.d} and sqrt{other.d}")
        return self.d or other.d

    def __add__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return Coefficient(self.a + other.a, self.b + other.b, self._join(other))

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return Coefficient(self.a - other.a, self.b - other.b, self._join(other))

    def __rsub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        d = self._join(other)
        return Coefficient(
            self.a * other.a + d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "Coefficient":
        return Coefficient(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d b^2`` (nonzero for nonzero elements)."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "Coefficient":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero coefficient")
        return Coefficient(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sign(self) -> int:
        """Exact sign of ``a + b sqrt d``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else sb

    # -- comparisons / hashing -------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Coefficient):
            other = _maybe(other)
            if other is None:
                return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.a, self.b, self.d)))
        return self._hash

    def __lt__(self, other):
        return (self - _coerce(other)).sign() < 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_zero(self) -> bool:
        return not self

    def is_rational(self) -> bool:
        return self.b == 0

    def is_unit(self) -> bool:
        """True for +1 and -1 (multiplication by these is free)."""
        return self.b == 0 and abs(self.a) == 1

    # -- projections ------------------------------------------------------

    def __float__(self) -> float:
        if self._float is None:
            if self.b == 0:
                v = float(self.a)
            else:
                # sqrt(d) to _SQRT_BITS bits, then a single correctly rounded division
                scale = 1 << _SQRT_BITS
                root = Fraction(math.isqrt(self.d * scale * scale), scale)
                v = float(self.a + self.b * root)
            object.__setattr__(self, "_float", v)
        return self._float

    def __repr__(self):
        return f"Coefficient({self})"

    def __str__(self):
        if self.b == 0:
            return _frac_str(self.a)
        surd = f"sqrt{self.d}"
        if self.b == 1:
            bs = surd
        elif self.b == -1:
            bs = "-" + surd
        else:
            bs = f"{surd}*{_frac_str(abs(self.b))}"
            if self.b < 0:
                bs = "-" + bs
        if self.a == 0:
            return bs
        return f"{_frac_str(self.a)}{'' if bs.startswith('-') else '+'}{bs}"


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _maybe(x) -> Coefficient | None:
    try:
        return Coefficient.coerce(x)
    except TypeError:
        return None


def _coerce(x) -> Coefficient:
    return Coefficient.coerce(x)


ZERO = Coefficient(0)
ONE = Coefficient(1)


class CoeffMatrix:
    """Dense immutable matrix of :class:`Coefficient` sharing one field ``Q(sqrt d)``."""

    __slots__ = ("rows", "cols", "entries", "d", "__dict__")

    def __init__(self, entries: Sequence[Sequence[Number]], cols: int | None = None):
        rows = [tuple(_coerce(x) for x in row) for row in entries]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix rows")
        ds = {x.d for r in rows for x in r if x.d}
        if len(ds) > 1:
            raise ValueError(f"entries from several quadratic fields: {sorted(ds)}")
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)
        self.d = ds.pop() if ds else 0

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "CoeffMatrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "CoeffMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Coefficient, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Coefficient, ...]:
        return tuple(r[j] for r in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, CoeffMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"CoeffMatrix({self.rows}x{self.cols}: {body})"

    @property
    def T(self) -> "CoeffMatrix":
        return CoeffMatrix([self.col(j) for j in range(self.cols)], self.rows)

    def is_rational(self) -> bool:
        return self.d == 0

    def nnz(self) -> int:
        return sum(1 for r in self.entries for x in r if x)

    def row_weights(self) -> list[int]:
        return [sum(1 for x in r if x) for r in self.entries]

    def map(self, f) -> "CoeffMatrix":
        return CoeffMatrix([[f(x) for x in r] for r in self.entries], self.cols)

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c: Number) -> "CoeffMatrix":
        c = _coerce(c)
        return self.map(lambda x: x * c)

    def __add__(self, other: "CoeffMatrix") -> "CoeffMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return CoeffMatrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            self.cols,
        )

    def __sub__(self, other: "CoeffMatrix") -> "CoeffMatrix":
        return self + (-other)

    @cached_property
    def _split(self) -> tuple[np.ndarray, np.ndarray, int]:
        """Integer form ``(A + B sqrt d) / den`` with object arrays of Python ints."""
        den = 1
        for r in self.entries:
            for x in r:
                den = math.lcm(den, x.a.denominator, x.b.denominator)
        A = np.empty(self.shape, dtype=object)
        B = np.empty(self.shape, dtype=object)
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                A[i, j] = x.a.numerator * (den // x.a.denominator)
                B[i, j] = x.b.numerator * (den // x.b.denominator)
        return A, B, den

    @classmethod
    def _from_split(cls, A: np.ndarray, B: np.ndarray, den: int, d: int) -> "CoeffMatrix":
        rows, cols = A.shape
        return cls(
            [
                [Coefficient(Fraction(int(A[i, j]), den), Fraction(int(B[i, j]), den), d) for j in range(cols)]
                for i in range(rows)
            ],
            cols,
        )

    def __matmul__(self, other: "CoeffMatrix") -> "CoeffMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.d and other.d and self.d != other.d:
            raise ValueError("mixed quadratic fields")
        d = self.d or other.d
        A1, B1, d1 = self._split
        A2, B2, d2 = other._split
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return CoeffMatrix.zeros(self.rows, other.cols)
        A = A1.dot(A2) + d * B1.dot(B2)
        B = A1.dot(B2) + B1.dot(A2)
        return CoeffMatrix._from_split(A, B, d1 * d2, d)

    def kron(self, other: "CoeffMatrix") -> "CoeffMatrix":
        out = []
        for r in self.entries:
            for s in other.entries:
                out.append([x * y for x in r for y in s])
        return CoeffMatrix(out, self.cols * other.cols)

    def apply(self, x: Sequence[Number]) -> list[Coefficient]:
        """Exact matrix-vector product."""
        xs = [_coerce(v) for v in x]
        if len(xs) != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for r in self.entries:
            acc = ZERO
            for c, v in zip(r, xs):
                if c and v:
                    acc = acc + c * v
            out.append(acc)
        return out

    @cached_property
    def _float(self) -> np.ndarray:
        a = np.array([[float(x) for x in r] for r in self.entries], dtype=float).reshape(self.rows, self.cols)
        a.setflags(write=False)
        return a

    def to_float(self) -> np.ndarray:
        return self._float

    def submatrix(self, rows: Iterable[int], cols: Iterable[int] | None = None) -> "CoeffMatrix":
        rows = list(rows)
        cols = list(range(self.cols)) if cols is None else list(cols)
        return CoeffMatrix([[self.entries[i][j] for j in cols] for i in rows], len(cols))

    def stack(self, other: "CoeffMatrix") -> "CoeffMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return CoeffMatrix(list(self.entries) + list(other.entries), self.cols)


# -- exact linear algebra over Q(sqrt d) --------------------------------------


def row_echelon(M: CoeffMatrix) -> tuple[list[list[Coefficient]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in M.entries]
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        p = next((i for i in range(r, M.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(M.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.rows:
            break
    return a, pivots


def rank(M: CoeffMatrix) -> int:
    return len(row_echelon(M)[1])


def inverse(M: CoeffMatrix) -> CoeffMatrix:
    n = M.rows
    if M.cols != n:
        raise ValueError("inverse of non-square matrix")
    aug = CoeffMatrix([list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(M.entries)])
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return CoeffMatrix([r[n:] for r in red], n)


def solve_left(X: CoeffMatrix, M: CoeffMatrix) -> CoeffMatrix:
    """Return K with ``K @ M == X`` (rows of X in the row space of M, M full row rank)."""
    # K M = X  <=>  M^T K^T = X^T
    Mt = M.T
    n = Mt.cols
    aug = CoeffMatrix([list(r) + list(s) for r, s in zip(Mt.entries, X.T.entries)])
    red, piv = row_echelon(aug)
    if any(p >= n for p in piv) or len(piv) != n:
        raise ValueError("rows are not in the row space of a full-rank matrix")
    return CoeffMatrix([r[n:] for r in red[:n]]).T
