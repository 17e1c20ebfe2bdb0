"""Matrix JSON files: ``{"level": 2, "rows": [["1", "1/2-3/4i"], ...]}``.

``level`` is optional. Every entry is an exact string (plain JSON integers
are tolerated); floats are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

from .matrix import ExactMatrix
from .scalar import GaussianRational, ScalarParseError

__all__ = ["MatrixFormatError", "dump_matrix", "dumps_matrix", "load_matrix", "loads_matrix"]


class MatrixFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


def _locate(text: str, row: int, col: int) -> tuple[int | None, int | None]:
    """Best-effort text position of entry (row, col) in the ``rows`` array."""
    decoder = json.JSONDecoder()
    start = text.find('"rows"')
    if start < 0:
        return None, None
    pos = text.find("[", start)
    depth = 0
    r = c = -1
    i = pos
    while i < len(text):
        ch = text[i]
        if ch == "[":
            depth += 1
            if depth == 2:
                r += 1
                c = -1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
        elif depth == 2 and ch not in " \t\r\n,":
            c += 1
            if r == row and c == col:
                line = text.count("\n", 0, i) + 1
                return line, i - (text.rfind("\n", 0, i) + 1) + 1
            _, i = decoder.raw_decode(text, i)
            continue
        i += 1
    return None, None


def loads_matrix(text: str) -> tuple[ExactMatrix, int | None]:
    """Parse matrix JSON text into ``(matrix, level)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "rows" not in doc:
        raise MatrixFormatError('expected an object with a "rows" array', 1, 1)
    level = doc.get("level")
    if level is not None and (not isinstance(level, int) or isinstance(level, bool) or level < 0):
        raise MatrixFormatError(f'"level" must be a nonnegative integer, got {level!r}')
    rows = doc["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise MatrixFormatError('"rows" must be a nonempty array of arrays')
    width = len(rows[0])
    parsed = []
    for i, row in enumerate(rows):
        if len(row) != width:
            line, col = _locate(text, i, 0)
            raise MatrixFormatError(f"row {i} has {len(row)} entries, expected {width}", line, col)
        out = []
        for j, value in enumerate(row):
            try:
                if isinstance(value, str):
                    out.append(GaussianRational.parse(value))
                elif isinstance(value, int) and not isinstance(value, bool):
                    out.append(GaussianRational(value))
                else:
                    raise ScalarParseError(f"entry must be an exact string, got {value!r}")
            except ScalarParseError as exc:
                line, col = _locate(text, i, j)
                raise MatrixFormatError(f"entry [{i}][{j}]: {exc}", line, col) from None
        parsed.append(out)
    matrix = ExactMatrix(parsed)
    if level is not None and (matrix.rows != 2**level or matrix.cols != 2**level):
        raise MatrixFormatError(
            f"level {level} requires shape {2**level}x{2**level}, got {matrix.rows}x{matrix.cols}"
        )
    return matrix, level


def load_matrix(path) -> tuple[ExactMatrix, int | None]:
    return loads_matrix(Path(path).read_text())


def dumps_matrix(matrix: ExactMatrix, level: int | None = None) -> str:
    doc = {}
    if level is not None:
        doc["level"] = level
    doc["rows"] = matrix.format_rows()
    return json.dumps(doc)


def dump_matrix(matrix: ExactMatrix, path, level: int | None = None) -> None:
    Path(path).write_text(dumps_matrix(matrix, level) + "\n")
