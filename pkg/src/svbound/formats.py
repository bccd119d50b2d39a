"""Reading and writing matrices as text.

Two formats are supported:

* ``matrix-market``: the NIST Matrix Market exchange format, both ``array``
  (dense, column-major body) and ``coordinate`` layouts, with ``real``,
  ``integer`` and ``complex`` fields and the four standard symmetries.
* ``csv-complex``: one matrix row per line, comma-separated complex tokens
  such as ``3``, ``-2.5e-1``, ``2i``, ``1+2i`` or ``0.5-1.5j``.

Writers emit every float through ``repr``, i.e. the shortest string that
round-trips, so parse(format(A)) reproduces A bit for bit.  Parse failures
always carry the offending 1-based line number.
"""

from __future__ import annotations

import math
import re
from typing import Union

import numpy as np

from .matrix import ComplexMatrix

__all__ = [
    "MatrixParseError",
    "FORMAT_MATRIX_MARKET",
    "FORMAT_CSV",
    "FORMATS",
    "parse_matrix",
    "format_matrix",
    "detect_format",
]

FORMAT_MATRIX_MARKET = "matrix-market"
FORMAT_CSV = "csv-complex"
FORMATS = (FORMAT_MATRIX_MARKET, FORMAT_CSV)


class MatrixParseError(ValueError):
    """Malformed matrix text.  ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: Union[int, None] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def parse_matrix(text: str, fmt: str) -> ComplexMatrix:
    """Parse ``text`` in the given format.

    Square-ness is deliberately not enforced here; consumers that need a
    square matrix check for themselves.
    """
    if hasattr(text, "read"):
        text = text.read()
    if fmt == FORMAT_MATRIX_MARKET:
        return _parse_matrix_market(text)
    if fmt == FORMAT_CSV:
        return _parse_csv(text)
    raise ValueError(f"unknown matrix format {fmt!r}; expected one of {FORMATS}")


def format_matrix(matrix: ComplexMatrix, fmt: str) -> str:
    if fmt == FORMAT_MATRIX_MARKET:
        return _format_matrix_market(matrix)
    if fmt == FORMAT_CSV:
        return _format_csv(matrix)
    raise ValueError(f"unknown matrix format {fmt!r}; expected one of {FORMATS}")


def detect_format(text: str) -> str:
    """Guess the format: a MatrixMarket banner wins, anything else is CSV."""
    return FORMAT_MATRIX_MARKET if text.lstrip().lower().startswith("%%matrixmarket") else FORMAT_CSV


# --- Matrix Market -----------------------------------------------------------

_MM_HEADER = re.compile(
    r"^%%MatrixMarket\s+matrix\s+(\S+)\s+(\S+)\s+(\S+)\s*$", re.IGNORECASE
)
_MM_LAYOUTS = ("array", "coordinate")
_MM_FIELDS = ("real", "integer", "complex")
_MM_SYMMETRIES = ("general", "symmetric", "hermitian", "skew-symmetric")


def _parse_matrix_market(text: str) -> ComplexMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise MatrixParseError("empty input, expected a MatrixMarket banner", line=1)
    header = _MM_HEADER.match(lines[0])
    if header is None:
        raise MatrixParseError(f"malformed MatrixMarket banner: {lines[0]!r}", line=1)
    layout, field, symmetry = (g.lower() for g in header.groups())
    if layout not in _MM_LAYOUTS:
        raise MatrixParseError(f"unsupported layout {layout!r}, expected one of {_MM_LAYOUTS}", line=1)
    if field not in _MM_FIELDS:
        raise MatrixParseError(f"unsupported field {field!r}, expected one of {_MM_FIELDS}", line=1)
    if symmetry not in _MM_SYMMETRIES:
        raise MatrixParseError(
            f"unsupported symmetry {symmetry!r}, expected one of {_MM_SYMMETRIES}", line=1
        )

    # Token stream with line numbers; comments and blank lines are skipped.
    tokens: list[tuple[str, int]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        tokens.extend((tok, lineno) for tok in stripped.split())
    last_line = tokens[-1][1] if tokens else 1

    pos = 0

    def next_int(what: str) -> int:
        nonlocal pos
        if pos >= len(tokens):
            raise MatrixParseError(f"unexpected end of input, expected {what}", line=last_line)
        tok, lineno = tokens[pos]
        pos += 1
        try:
            value = int(tok)
        except ValueError:
            raise MatrixParseError(f"non-integer token {tok!r}, expected {what}", line=lineno) from None
        if value < 0:
            raise MatrixParseError(f"{what} must be nonnegative, got {value}", line=lineno)
        return value

    def next_float(what: str) -> tuple[float, int]:
        nonlocal pos
        if pos >= len(tokens):
            raise MatrixParseError(f"unexpected end of input, expected {what}", line=last_line)
        tok, lineno = tokens[pos]
        pos += 1
        try:
            return float(tok), lineno
        except ValueError:
            raise MatrixParseError(f"non-numeric token {tok!r}, expected {what}", line=lineno) from None

    def next_value() -> tuple[complex, int]:
        if field == "complex":
            re_part, lineno = next_float("a real component")
            im_part, _ = next_float("an imaginary component")
            return complex(re_part, im_part), lineno
        value, lineno = next_float("a numeric value")
        return complex(value, 0.0), lineno

    rows = next_int("the row count")
    cols = next_int("the column count")

    if layout == "array":
        data = _parse_mm_array(rows, cols, symmetry, next_value, last_line)
    else:
        data = _parse_mm_coordinate(rows, cols, symmetry, next_int, next_value)

    if pos < len(tokens):
        tok, lineno = tokens[pos]
        raise MatrixParseError(
            f"trailing token {tok!r} after the declared {rows}x{cols} body", line=lineno
        )
    return ComplexMatrix(data)


def _parse_mm_array(rows, cols, symmetry, next_value, last_line) -> np.ndarray:
    data = np.zeros((rows, cols), dtype=np.complex128)
    if symmetry == "general":
        expected = rows * cols
        # Column-major: the body runs down each column in turn.
        slots = ((i, j) for j in range(cols) for i in range(rows))
    else:
        if rows != cols:
            raise MatrixParseError(
                f"symmetry {symmetry!r} requires a square matrix, header says {rows}x{cols}", line=1
            )
        if symmetry == "skew-symmetric":
            slots = ((i, j) for j in range(cols) for i in range(j + 1, rows))
        else:
            slots = ((i, j) for j in range(cols) for i in range(j, rows))
        slots = list(slots)
        expected = len(slots)

    filled = 0
    for i, j in slots:
        try:
            value, _ = next_value()
        except MatrixParseError as err:
            if err.line == last_line and "unexpected end of input" in str(err):
                raise MatrixParseError(
                    f"header declares {rows}x{cols} ({expected} entries) but the body ends after "
                    f"{filled} entries",
                    line=last_line,
                ) from None
            raise
        data[i, j] = value
        if symmetry == "symmetric" and i != j:
            data[j, i] = value
        elif symmetry == "hermitian" and i != j:
            data[j, i] = value.conjugate()
        elif symmetry == "skew-symmetric":
            data[j, i] = -value
        filled += 1
    return data


def _parse_mm_coordinate(rows, cols, symmetry, next_int, next_value) -> np.ndarray:
    nnz = next_int("the entry count")
    data = np.zeros((rows, cols), dtype=np.complex128)
    if symmetry != "general" and rows != cols:
        raise MatrixParseError(
            f"symmetry {symmetry!r} requires a square matrix, header says {rows}x{cols}", line=1
        )
    for _ in range(nnz):
        i = next_int("a row index")
        j = next_int("a column index")
        value, lineno = next_value()
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise MatrixParseError(
                f"entry ({i}, {j}) is outside the declared {rows}x{cols} shape", line=lineno
            )
        data[i - 1, j - 1] += value
        if i != j:
            if symmetry == "symmetric":
                data[j - 1, i - 1] += value
            elif symmetry == "hermitian":
                data[j - 1, i - 1] += value.conjugate()
            elif symmetry == "skew-symmetric":
                data[j - 1, i - 1] -= value
        elif symmetry == "skew-symmetric":
            raise MatrixParseError("skew-symmetric matrices cannot carry diagonal entries", line=lineno)
    return data


# --- complex-token CSV -------------------------------------------------------

_FLOAT = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_SIGNED = rf"[+-]?{_FLOAT}"
_TOKEN_PAIR = re.compile(rf"^({_SIGNED})([+-]{_FLOAT})[ij]$")
_TOKEN_IMAG = re.compile(rf"^({_SIGNED})[ij]$")
_TOKEN_REAL = re.compile(rf"^({_SIGNED})$")


def _parse_complex_token(token: str, lineno: int) -> complex:
    m = _TOKEN_PAIR.match(token)
    if m:
        return complex(float(m.group(1)), float(m.group(2)))
    m = _TOKEN_IMAG.match(token)
    if m:
        return complex(0.0, float(m.group(1)))
    m = _TOKEN_REAL.match(token)
    if m:
        return complex(float(m.group(1)), 0.0)
    raise MatrixParseError(f"malformed complex token {token!r}", line=lineno)


def _parse_csv(text: str) -> ComplexMatrix:
    rows: list[list[complex]] = []
    width = None
    first_lineno = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        cells = [cell.strip() for cell in raw.split(",")]
        row = []
        for cell in cells:
            if not cell:
                raise MatrixParseError("empty cell", line=lineno)
            row.append(_parse_complex_token(cell, lineno))
        if width is None:
            width = len(row)
            first_lineno = lineno
        elif len(row) != width:
            raise MatrixParseError(
                f"row has {len(row)} cells but the first row (line {first_lineno}) has {width}",
                line=lineno,
            )
        rows.append(row)
    if not rows:
        raise MatrixParseError("no matrix rows found", line=1)
    return ComplexMatrix.from_rows(rows)


# --- writers -----------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def _format_matrix_market(matrix: ComplexMatrix) -> str:
    arr = matrix.array
    out = [
        "%%MatrixMarket matrix array complex general",
        f"{matrix.rows} {matrix.cols}",
    ]
    for j in range(matrix.cols):
        for i in range(matrix.rows):
            z = arr[i, j]
            out.append(f"{_fmt(z.real)} {_fmt(z.imag)}")
    return "\n".join(out) + "\n"


def _format_csv(matrix: ComplexMatrix) -> str:
    lines = []
    for row in matrix.array:
        cells = []
        for z in row:
            im = float(z.imag)
            sign = "-" if math.copysign(1.0, im) < 0 else "+"
            cells.append(f"{_fmt(z.real)}{sign}{_fmt(abs(im))}i")
        lines.append(", ".join(cells))
    return "\n".join(lines) + "\n"
