"""File formats: curve CSV and deterministic JSON."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .curvejet import CurveSamples

CSV_HEADER = ["t", "x1", "x2", "x3"]
UNIFORM_RTOL = 1e-9


def read_curve_csv(path) -> CurveSamples:
    """Load a uniformly sampled curve; non-uniform spacing is an error."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != CSV_HEADER:
        raise ValueError(f"{path}: header must be {','.join(CSV_HEADER)}")
    try:
        data = np.array([[float(c) for c in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 4:
        raise ValueError(f"{path}: expected 4 columns per row")
    if len(data) < 2:
        raise ValueError(f"{path}: too few samples")
    t = data[:, 0]
    dt = (t[-1] - t[0]) / (len(t) - 1)
    if not dt > 0:
        raise ValueError(f"{path}: rows must be sorted by increasing t")
    spread = np.max(np.abs(np.diff(t) - dt)) / dt
    # rows store t to 17 digits, so rounding of t itself bounds the spread
    if spread > max(UNIFORM_RTOL, 8 * np.finfo(float).eps * np.max(np.abs(t)) / dt):
        raise ValueError(f"{path}: t is not uniformly spaced (relative spread {spread:.2e})")
    return CurveSamples(t[0], dt, data[:, 1:])


def write_curve_csv(path, samples: CurveSamples) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for t, x in zip(samples.ts, samples.xs):
            w.writerow([format_number(t), *(format_number(c) for c in x)])


def write_table_csv(path, header, columns) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([format_number(v) for v in row])


def format_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2) -> str:
    """Pretty JSON with sorted keys and 17-significant-digit floats.

    Output is byte-stable for equal inputs, which the golden tests rely on.
    """
    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{_string(str(k))}: {enc(o[k], level + 1)}" for k in sorted(o, key=str)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            if len(o) == 0:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if o is None:
            return "null"
        if isinstance(o, str):
            return _string(o)
        return format_number(o)

    return enc(obj, 0) + "\n"


def _string(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
