"""Reader/writer for the SMS sparse-matrix text format.

The dialect::

    <rows> <cols> M
    <i> <j> <v>        # 1-based indices, v an integer or reduced p/q
    ...
    0 0 0

Lines starting with ``#`` are comments; LF and CRLF line ends are accepted.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .coefficient import Coefficient, CoeffMatrix, ZERO


class SMSError(ValueError):
    """Base class for SMS parse errors."""


class MalformedHeader(SMSError):
    pass


class IndexOutOfRange(SMSError):
    pass


class DuplicateEntry(SMSError):
    pass


class MissingTerminator(SMSError):
    pass


class MalformedEntry(SMSError):
    pass


class SurdEntryError(ValueError):
    """Raised when writing an irrational entry without decimal export."""


_HEADER = re.compile(r"(\d+)\s+(\d+)\s+M")
_VALUE = re.compile(r"-?\d+(?:/\d+)?")


def _lines(text: str):
    for n, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield n, line


def parse_sms(text: str) -> CoeffMatrix:
    lines = _lines(text)
    try:
        n, header = next(lines)
    except StopIteration:
        raise MalformedHeader("empty input") from None
    m = _HEADER.fullmatch(header)
    if not m:
        raise MalformedHeader(f"line {n}: expected '<rows> <cols> M', got {header!r}")
    rows, cols = int(m.group(1)), int(m.group(2))
    entries: dict[tuple[int, int], Coefficient] = {}
    terminated = False
    for n, line in lines:
        parts = line.split()
        if len(parts) != 3 or not parts[0].lstrip("-").isdigit() or not parts[1].lstrip("-").isdigit():
            raise MalformedEntry(f"line {n}: expected '<i> <j> <v>', got {line!r}")
        i, j = int(parts[0]), int(parts[1])
        if i == 0 and j == 0 and parts[2] == "0":
            terminated = True
            break
        if not _VALUE.fullmatch(parts[2]):
            raise MalformedEntry(f"line {n}: bad value {parts[2]!r}")
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise IndexOutOfRange(f"line {n}: index ({i},{j}) outside {rows}x{cols}")
        if (i, j) in entries:
            raise DuplicateEntry(f"line {n}: duplicate entry ({i},{j})")
        entries[(i, j)] = Coefficient(Fraction(parts[2]))
    if not terminated:
        raise MissingTerminator("missing '0 0 0' terminator")
    return CoeffMatrix(
        [[entries.get((i + 1, j + 1), ZERO) for j in range(cols)] for i in range(rows)],
        cols,
    )


def write_sms(M: CoeffMatrix, decimal: bool = False) -> str:
    """Serialize ``M``; irrational entries need ``decimal=True`` (lossy, 17 digits)."""
    out = [f"{M.rows} {M.cols} M"]
    for i, row in enumerate(M.entries):
        for j, x in enumerate(row):
            if not x:
                continue
            if x.is_rational():
                v = str(x)
            elif decimal:
                v = f"{float(x):.17g}"
            else:
                raise SurdEntryError(f"entry ({i + 1},{j + 1}) = {x} is not rational")
            out.append(f"{i + 1} {j + 1} {v}")
    out.append("0 0 0")
    return "\n".join(out) + "\n"


def write_float_sms(M, digits: int = 17) -> str:
    """Serialize a float array in SMS layout with decimal values (not re-readable exactly)."""
    rows, cols = M.shape
    out = [f"{rows} {cols} M"]
    for i in range(rows):
        for j in range(cols):
            if M[i, j] != 0:
                out.append(f"{i + 1} {j + 1} {M[i, j]:.{digits}g}")
    out.append("0 0 0")
    return "\n".join(out) + "\n"


def read_sms(path: str | Path) -> CoeffMatrix:
    return parse_sms(Path(path).read_text(encoding="utf-8"))
