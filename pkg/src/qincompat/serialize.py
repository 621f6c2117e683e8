"""Deterministic JSON and CSV serialization.

Measurement files use the schema
``{"dim": d, "operators": [[[re, im], ...], ...]}`` with each operator a
row-major list of [re, im] pairs; channels use
``{"dim_out": d, "dim_in": d2, "kraus": [[[re, im], ...], ...]}``.
Floats are written with 17 significant digits and LF line endings so
identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .bounds import CurveTable
from .errors import DomainError
from .povm import KrausChannel, Povm


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def format_p(p: float) -> str:
    return "inf" if math.isinf(p) else format_float(p)


def parse_p(text) -> float:
    if isinstance(text, (int, float)):
        p = float(text)
    else:
        s = str(text).strip().lower()
        p = math.inf if s in ("inf", "infinity", "oo") else float(s)
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"Schatten exponent must be >= 1 or 'inf', got {text!r}")
    return p


def _matrix_entries(mat: np.ndarray) -> str:
    pairs = ",".join(
        f"[{format_float(z.real)},{format_float(z.imag)}]" for z in mat.ravel()
    )
    return f"[{pairs}]"


def povm_to_json(povm: Povm) -> str:
    ops = ",\n    ".join(_matrix_entries(op) for op in povm.operators)
    return '{\n  "dim": %d,\n  "operators": [\n    %s\n  ]\n}\n' % (povm.dim, ops)


def _parse_matrix(entries, d_rows: int, d_cols: int, what: str) -> np.ndarray:
    if not isinstance(entries, list) or len(entries) != d_rows * d_cols:
        raise DomainError(f"{what}: expected {d_rows * d_cols} [re, im] pairs")
    flat = np.empty(d_rows * d_cols, dtype=np.complex128)
    for k, pair in enumerate(entries):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DomainError(f"{what}: entry {k} is not an [re, im] pair")
        try:
            re, im = float(pair[0]), float(pair[1])
        except (TypeError, ValueError) as exc:
            raise DomainError(f"{what}: entry {k} is not numeric") from exc
        if not (math.isfinite(re) and math.isfinite(im)):
            raise DomainError(f"{what}: entry {k} is not finite")
        flat[k] = complex(re, im)
    return flat.reshape(d_rows, d_cols)


def povm_from_dict(data: dict) -> Povm:
    if not isinstance(data, dict):
        raise DomainError("measurement file must hold a JSON object")
    try:
        d = int(data["dim"])
        raw_ops = data["operators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"measurement file missing or malformed field: {exc}") from exc
    if d < 1:
        raise DomainError("dim must be a positive integer")
    if not isinstance(raw_ops, list) or not raw_ops:
        raise DomainError("operators must be a non-empty list")
    ops = [_parse_matrix(op, d, d, f"operator {i}") for i, op in enumerate(raw_ops)]
    return Povm.from_operators(ops)


def povm_from_json(text: str) -> Povm:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from exc
    return povm_from_dict(data)


def povm_to_dict(povm: Povm) -> dict:
    return {
        "dim": povm.dim,
        "operators": [
            [[float(z.real), float(z.imag)] for z in op.ravel()] for op in povm.operators
        ],
    }


def channel_to_json(channel: KrausChannel) -> str:
    ops = ",\n    ".join(_matrix_entries(k) for k in channel.kraus_ops)
    return '{\n  "dim_out": %d,\n  "dim_in": %d,\n  "kraus": [\n    %s\n  ]\n}\n' % (
        channel.dim_out,
        channel.dim_in,
        ops,
    )


def channel_to_dict(channel: KrausChannel) -> dict:
    return {
        "dim_out": channel.dim_out,
        "dim_in": channel.dim_in,
        "kraus": [
            [[float(z.real), float(z.imag)] for z in k.ravel()] for k in channel.kraus_ops
        ],
    }


def channel_from_dict(data: dict) -> KrausChannel:
    if not isinstance(data, dict):
        raise DomainError("channel file must hold a JSON object")
    try:
        d_out = int(data["dim_out"])
        d_in = int(data["dim_in"])
        raw = data["kraus"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"channel file missing or malformed field: {exc}") from exc
    if d_out < 1 or d_in < 1:
        raise DomainError("channel dimensions must be positive")
    if not isinstance(raw, list) or not raw:
        raise DomainError("kraus must be a non-empty list")
    ops = [_parse_matrix(k, d_out, d_in, f"kraus operator {j}") for j, k in enumerate(raw)]
    return KrausChannel.from_operators(ops)


def channel_from_json(text: str) -> KrausChannel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from exc
    return channel_from_dict(data)


def curve_table_to_csv(table: CurveTable) -> str:
    """Render a curve table with a parameter comment line and LF endings."""
    parts = [f"kind={table.kind}"]
    for key, value in table.params.items():
        if key == "p":
            parts.append(f"p={format_p(value)}")
        elif isinstance(value, float):
            parts.append(f"{key}={format_float(value)}")
        else:
            parts.append(f"{key}={value}")
    lines = ["# " + " ".join(parts), ",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"
