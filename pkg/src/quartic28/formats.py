"""JSON artifacts: quartics, line sets and reports.  Complex numbers are [re, im] pairs."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .numerics import HomPoly, normalize_array, pairwise_proj_distance

ORDER_TAG = "grlex-x4-first"


class SchemaError(ValueError):
    pass


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        raise SchemaError(f"expected [re, im], got {v!r}")
    if not all(math.isfinite(x) for x in v):
        raise SchemaError("non-finite coefficient")
    return complex(v[0], v[1])


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def decode_vector(v, n: int) -> np.ndarray:
    if not isinstance(v, list) or len(v) != n:
        raise SchemaError(f"expected {n} complex entries")
    return np.array([decode_complex(x) for x in v])


def quartic_to_json(q: HomPoly) -> dict:
    return {"degree": 4, "coeffs": encode_vector(q.coeffs), "order": ORDER_TAG}


def quartic_from_json(obj) -> HomPoly:
    if not isinstance(obj, dict):
        raise SchemaError("quartic file must be a JSON object")
    if obj.get("degree") != 4:
        raise SchemaError("degree must be 4")
    if obj.get("order") != ORDER_TAG:
        raise SchemaError(f"order must be {ORDER_TAG!r}")
    c = decode_vector(obj.get("coeffs"), 15)
    if not np.any(c):
        raise SchemaError("zero quartic")
    return HomPoly(4, c)


def lines_to_json(lines, extra: dict | None = None) -> dict:
    out = {"lines": [encode_vector(normalize_array(l)) for l in lines], "normalized": True}
    out.update(extra or {})
    return out


def lines_from_json(obj, count: int | None = 28, tol_dup: float = 1e-6) -> np.ndarray:
    if not isinstance(obj, dict) or not isinstance(obj.get("lines"), list):
        raise SchemaError("line set must be an object with a 'lines' list")
    L = obj["lines"]
    if count is not None and len(L) != count:
        raise SchemaError(f"expected {count} lines, got {len(L)}")
    arr = np.array([decode_vector(l, 3) for l in L])
    if np.any(np.linalg.norm(arr, axis=1) == 0):
        raise SchemaError("zero line")
    arr = np.array([normalize_array(l) for l in arr])
    D = pairwise_proj_distance(arr, arr)
    if len(arr) > 1 and np.any(D[np.triu_indices(len(arr), 1)] < tol_dup):
        raise SchemaError("lines must be pairwise distinct")
    return arr


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


def write_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=1)
    if path is None or str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")
    return text
