"""Canonical JSON: sorted keys, no whitespace, floats at 17 significant digits,
``Fraction`` values as ``"p/q"`` strings.

``loads`` reverses the encoding, turning every ``"p/q"`` string back into a
``Fraction``, so ``loads(dumps(x)) == x`` for the structures used here.
"""
from __future__ import annotations

import enum
import json
import math
import re
from fractions import Fraction

import numpy as np

_RATIONAL = re.compile(r"^-?\d+/\d+$")


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} has no JSON form")
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _encode(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, enum.Enum):
        _encode(obj.value, out)
    elif isinstance(obj, Fraction):
        out.append(json.dumps(rational(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key), ensure_ascii=False))
            out.append(":")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__} as canonical JSON")


def dumps(obj) -> str:
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)


def decode_rationals(obj):
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return Fraction(obj)
    if isinstance(obj, dict):
        return {k: decode_rationals(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode_rationals(v) for v in obj]
    return obj


def loads(text: str):
    return decode_rationals(json.loads(text))
