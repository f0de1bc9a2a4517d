"""Deterministic JSON emission for CLI reports.

Floats are printed with 17 significant digits (full round-trip precision);
non-finite values become the strings "-inf", "inf", "nan" since bare JSON
has no spelling for them.  Dict insertion order is preserved, so identical
report structures serialize to identical bytes.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["dumps", "format_float"]


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if x == math.inf:
        return '"inf"'
    if x == -math.inf:
        return '"-inf"'
    return format(x, ".17g")


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _key(k) -> str:
    if isinstance(k, str):
        return _escape(k)
    if isinstance(k, bool):
        return _escape("true" if k else "false")
    if isinstance(k, (int, np.integer)):
        return _escape(str(int(k)))
    if isinstance(k, (float, np.floating)):
        return _escape(repr(float(k)))
    raise TypeError(f"unsupported JSON key type {type(k)!r}")


def _emit(obj, indent: int, pieces: list):
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        pieces.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        pieces.append(format_float(float(obj)))
    elif isinstance(obj, str):
        pieces.append(_escape(obj))
    elif isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            pieces.append(inner)
            pieces.append(_key(k))
            pieces.append(": ")
            _emit(v, indent + 1, pieces)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, v in enumerate(seq):
            pieces.append(inner)
            _emit(v, indent + 1, pieces)
            pieces.append(",\n" if i < len(seq) - 1 else "\n")
        pieces.append(pad + "]")
    else:
        raise TypeError(f"unsupported JSON value type {type(obj)!r}")


def dumps(obj) -> str:
    pieces: list = []
    _emit(obj, 0, pieces)
    return "".join(pieces)
