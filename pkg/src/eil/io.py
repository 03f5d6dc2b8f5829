"""Matrix text/JSON formats and the canonical JSON writer.

Text format: first line ``n``, then ``n`` lines of ``n`` whitespace-separated
entries (integer, decimal or ``p/q``).  Blank lines and ``#`` comments are
ignored.  JSON: ``{"n": int, "entries": [[str, ...], ...]}`` with canonical
rational strings.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from eil.errors import MatrixFormatError
from eil.linalg import RationalMatrix


def parse_matrix_text(text: str) -> RationalMatrix:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise MatrixFormatError("empty matrix text")
    try:
        n = int(lines[0])
    except ValueError:
        raise MatrixFormatError(f"first line must be the order n, got {lines[0]!r}") from None
    if n < 1:
        raise MatrixFormatError(f"order must be positive, got {n}")
    body = lines[1:]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} rows, got {len(body)}")
    rows = []
    for i, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixFormatError(f"row {i + 1}: expected {n} entries, got {len(tokens)}")
        try:
            rows.append([Fraction(t) for t in tokens])
        except (ValueError, ZeroDivisionError) as exc:
            raise MatrixFormatError(f"row {i + 1}: {exc}") from None
    return RationalMatrix(rows)


def format_matrix_text(a: RationalMatrix) -> str:
    out = [str(a.n)]
    out.extend(" ".join(str(x) for x in row) for row in a.rows)
    return "\n".join(out) + "\n"


def matrix_to_json_obj(a: RationalMatrix, **meta) -> dict:
    obj = {"n": a.n, "entries": [[str(x) for x in row] for row in a.rows]}
    obj.update(meta)
    return obj


def matrix_from_json_obj(obj: dict) -> RationalMatrix:
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"malformed matrix JSON: {exc}") from None
    try:
        a = RationalMatrix([[Fraction(str(x)) for x in row] for row in entries])
    except (ValueError, ZeroDivisionError) as exc:
        raise MatrixFormatError(f"malformed matrix JSON: {exc}") from None
    if a.n != n:
        raise MatrixFormatError(f"declared order {n} but entries have order {a.n}")
    return a


def read_matrix(path: str | Path) -> RationalMatrix:
    """Read a matrix file; JSON if its first non-blank character is ``{``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from None
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"{path}: invalid JSON: {exc}") from None
        return matrix_from_json_obj(obj)
    return parse_matrix_text(text)


def _float_literal(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _encode(obj, indent: int | None, level: int) -> str:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_literal(float(obj))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, RationalMatrix):
        obj = matrix_to_json_obj(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if hasattr(obj, "to_json"):
        obj = obj.to_json()
    if isinstance(obj, dict):
        items = [(json.dumps(str(k)), _encode(v, indent, level + 1)) for k, v in obj.items()]
        if not items:
            return "{}"
        if indent is None:
            return "{" + ", ".join(f"{k}: {v}" for k, v in items) + "}"
        pad = "\n" + " " * (indent * (level + 1))
        return "{" + ",".join(f"{pad}{k}: {v}" for k, v in items) + "\n" + " " * (indent * level) + "}"
    if isinstance(obj, (list, tuple)):
        parts = [_encode(v, indent, level + 1) for v in obj]
        if not parts:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj)
        if indent is None or flat:
            return "[" + ", ".join(parts) + "]"
        pad = "\n" + " " * (indent * (level + 1))
        return "[" + ",".join(pad + p for p in parts) + "\n" + " " * (indent * level) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    """Serialize to JSON with 17-significant-digit floats and ``"p/q"`` rationals.

    Objects exposing ``to_json()`` are serialized through it.  Output is a
    pure function of the input, so equal reports give identical bytes.
    """
    return _encode(obj, indent, 0)
