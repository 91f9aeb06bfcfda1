"""JSON encoding shared by every file format.

Complex numbers are ``[re, im]`` and matrices are nested row lists of them.
``dumps`` writes keys in insertion order and floats with 17 significant
digits so repeated runs produce byte-identical output.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import FormatError


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(obj) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    ):
        raise FormatError(f"complex number must be [re, im], got {obj!r}")
    z = complex(float(obj[0]), float(obj[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise FormatError("complex number must be finite")
    return z


def matrix_to_json(M) -> list:
    return [[complex_to_json(v) for v in row] for row in np.asarray(M)]


def matrix_from_json(obj, n: int = 2) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or len(obj) != n:
        raise FormatError(f"matrix must be a list of {n} rows")
    rows = []
    for row in obj:
        if not isinstance(row, (list, tuple)) or len(row) != n:
            raise FormatError(f"matrix rows must have {n} entries")
        rows.append([complex_from_json(v) for v in row])
    return np.array(rows, dtype=complex)


def to_plain(obj):
    """Recursively turn numpy scalars/arrays and complex numbers into JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    return obj


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return format(x, ".17g")


def _encode(obj, indent, level, out):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    sep = ", " if not indent else ","
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        # short numeric lists (complex numbers, rows) stay on one line
        if all(isinstance(v, (int, float)) for v in obj) or all(
            isinstance(v, list) and all(isinstance(w, (int, float)) for w in v) for v in obj
        ):
            out.append("[" + ", ".join(_inline(v) for v in obj) + "]")
            return
        out.append("[" + nl)
        for i, v in enumerate(obj):
            out.append(pad)
            _encode(v, indent, level + 1, out)
            if i < len(obj) - 1:
                out.append(sep)
            out.append(nl)
        out.append(end + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + json.dumps(k) + ": ")
            _encode(v, indent, level + 1, out)
            if i < len(items) - 1:
                out.append(sep)
            out.append(nl)
        out.append(end + "}")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(w) for w in v) + "]"
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _encode(to_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
