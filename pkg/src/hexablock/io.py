"""JSON encoding of matrices, tuples and points."""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import WrongShape
from .operator_tuple import OperatorTuple


def _num(x: float) -> float | str:
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def cmatrix_to_json(m: np.ndarray) -> dict[str, Any]:
    m = np.asarray(m, dtype=np.complex128)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "re": [[_num(v) for v in row] for row in m.real],
            "im": [[_num(v) for v in row] for row in m.imag]}


def cmatrix_from_json(d: dict[str, Any]) -> np.ndarray:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float).reshape(rows, cols)
        im = np.asarray(d["im"], dtype=float).reshape(rows, cols)
    except (KeyError, TypeError, ValueError) as exc:
        raise WrongShape(f"malformed matrix: {exc}") from exc
    m = re + 1j * im
    if not np.all(np.isfinite(m)):
        raise WrongShape("matrix has non-finite entries")
    return m


def tuple_to_json(t: OperatorTuple) -> dict[str, Any]:
    return {"kind": t.kind, "entries": [cmatrix_to_json(e) for e in t]}


def tuple_from_json(d: dict[str, Any], tol: float = 1e-9) -> OperatorTuple:
    if "entries" not in d:
        raise WrongShape("tuple JSON needs an 'entries' list")
    mats = [cmatrix_from_json(e) for e in d["entries"]]
    return OperatorTuple(mats, kind=d.get("kind", ""), tol=tol)


def complex_to_json(z: complex) -> list:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def point_from_json(text: str) -> tuple[complex, ...]:
    """Accept [1, 0, [0.5, 0.25], ...]: bare numbers are real, pairs are [re, im]."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WrongShape(f"point is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise WrongShape("point must be a JSON array")
    out = []
    for v in raw:
        if isinstance(v, (int, float)):
            out.append(complex(v))
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(u, (int, float)) for u in v):
            out.append(complex(v[0], v[1]))
        else:
            raise WrongShape(f"bad coordinate {v!r}")
    return tuple(out)


def to_jsonable(obj: Any) -> Any:
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, OperatorTuple):
        return tuple_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return cmatrix_to_json(obj)
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    return obj


def dumps(obj: Any, pretty: bool = False) -> str:
    # repr-based float output is the shortest round-trip form, so equal runs give equal bytes
    return json.dumps(to_jsonable(obj), indent=2 if pretty else None, sort_keys=True)
