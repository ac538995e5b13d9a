"""JSON documents (matrix, map, symbol, spectrum), certificates and reports.

Complex entries are always two-element [re, im] arrays; matrices are
row-major. Output JSON uses sorted keys so equal inputs give equal bytes.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import numbers
from typing import Any, Optional

import numpy as np

from .core import Certificate, ToleranceConfig
from .errors import DimensionMismatch, ParseError, SchemaError
from .maps import SuperOperator, make_builtin
from .majorization import SingularSpectrum
from .schur import SchurSymbol

KINDS = ("matrix", "map", "symbol", "spectrum")


@dataclasses.dataclass
class DocumentEnvelope:
    kind: str
    payload: Any  # ndarray, SuperOperator, SchurSymbol or SingularSpectrum
    meta: dict = dataclasses.field(default_factory=dict)


# parsing -----------------------------------------------------------------

def _reject_constant(name):
    raise ValueError(f"non-decimal number {name}")


def _load_json(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _int_field(obj: dict, field: str, path: str, minimum: int = 1) -> int:
    v = obj.get(field)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{path}{field}", "must be an integer")
    if v < minimum:
        raise SchemaError(f"{path}{field}", f"must be >= {minimum}")
    return v


def _number(v, field: str) -> float:
    if isinstance(v, bool) or not isinstance(v, numbers.Real) or not math.isfinite(v):
        raise SchemaError(field, "entries must be finite decimal numbers")
    return float(v)


def _complex_entries(data, count: int, field: str) -> np.ndarray:
    if not isinstance(data, list):
        raise SchemaError(field, "must be a list of [re, im] pairs")
    if len(data) != count:
        raise SchemaError(field, f"expected {count} entries, got {len(data)}")
    out = np.empty(count, dtype=complex)
    for i, z in enumerate(data):
        if not isinstance(z, list) or len(z) != 2:
            raise SchemaError(f"{field}[{i}]", "complex entries are two-element arrays")
        out[i] = complex(_number(z[0], f"{field}[{i}]"), _number(z[1], f"{field}[{i}]"))
    return out


def parse_matrix_object(obj, path: str = "") -> np.ndarray:
    if not isinstance(obj, dict):
        raise SchemaError(path or "matrix", "must be an object with rows, cols, data")
    rows = _int_field(obj, "rows", path)
    cols = _int_field(obj, "cols", path)
    return _complex_entries(obj.get("data"), rows * cols, f"{path}data").reshape(rows, cols)


def _parse_params(params, path: str) -> dict:
    if not isinstance(params, dict):
        raise SchemaError(path, "must be an object")
    out = {}
    for key, v in params.items():
        out[key] = parse_matrix_object(v, f"{path}.{key}.") if isinstance(v, dict) else v
    return out


def _parse_map(obj: dict) -> SuperOperator:
    din = _int_field(obj, "dim_in", "")
    dout = _int_field(obj, "dim_out", "")
    rep = obj.get("repr")
    if not isinstance(rep, dict) or len({"kraus", "choi", "builtin"} & set(rep)) != 1:
        raise SchemaError("repr", "must hold exactly one of kraus, choi, builtin")
    extra = set(rep) - {"kraus", "choi", "builtin", "params"}
    if extra or ("params" in rep and "builtin" not in rep):
        raise SchemaError("repr", f"unexpected keys {sorted(extra or {'params'})}")
    try:
        if "kraus" in rep:
            ks = rep["kraus"]
            if not isinstance(ks, list) or not ks:
                raise SchemaError("repr.kraus", "must be a non-empty list of matrices")
            mats = [parse_matrix_object(k, f"repr.kraus[{i}].") for i, k in enumerate(ks)]
            for i, k in enumerate(mats):
                if k.shape != (dout, din):
                    raise SchemaError(f"repr.kraus[{i}]", f"shape {k.shape}, expected {(dout, din)}")
            return SuperOperator.from_kraus(mats)
        if "choi" in rep:
            j = parse_matrix_object(rep["choi"], "repr.choi.")
            if j.shape != (din * dout, din * dout):
                raise SchemaError("repr.choi", f"must be {din * dout}x{din * dout}")
            return SuperOperator.from_choi(j, din, dout)
        if "builtin" in rep:
            name = rep["builtin"]
            if not isinstance(name, str):
                raise SchemaError("repr.builtin", "must be a string")
            params = _parse_params(rep.get("params", {}), "repr.params")
            op = make_builtin(name, din, **params)
            if op.dims != (din, dout):
                raise SchemaError("dim_out", f"builtin {name!r} has dims {op.dims}")
            return op
    except KeyError as exc:
        raise SchemaError("repr.params", f"missing parameter {exc}") from exc
    except DimensionMismatch as exc:
        raise SchemaError("repr", str(exc)) from exc
    raise SchemaError("repr", "must hold exactly one of kraus, choi, builtin")


def parse_value(obj) -> DocumentEnvelope:
    if not isinstance(obj, dict):
        raise SchemaError("kind", "document must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise SchemaError("kind", f"must be one of {', '.join(KINDS)}")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict) or not all(isinstance(k, str) and isinstance(v, str)
                                             for k, v in meta.items()):
        raise SchemaError("meta", "must be a string-to-string map")
    if kind == "matrix":
        payload = parse_matrix_object(obj)
    elif kind == "map":
        payload = _parse_map(obj)
    elif kind == "symbol":
        n = _int_field(obj, "n", "")
        payload = SchurSymbol(_complex_entries(obj.get("data"), n * n, "data").reshape(n, n))
    else:
        vals = obj.get("values")
        if not isinstance(vals, list):
            raise SchemaError("values", "must be a list of numbers")
        v = np.array([_number(x, "values") for x in vals], dtype=float)
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise SchemaError("values", "must be non-negative and non-increasing")
        payload = SingularSpectrum(v, v.size)
    return DocumentEnvelope(kind, payload, dict(meta))


def parse_document(text: str) -> DocumentEnvelope:
    return parse_value(_load_json(text))


def load_document(path: str) -> DocumentEnvelope:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_document(text)


# serialization -----------------------------------------------------------

def complex_grid(m) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m, dtype=complex).ravel()]


def matrix_object(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"rows": m.shape[0], "cols": m.shape[1], "data": complex_grid(m)}


def to_value(env: DocumentEnvelope) -> dict:
    p = env.payload
    if env.kind == "matrix":
        out = {"kind": "matrix", **matrix_object(p)}
    elif env.kind == "map":
        out = {"kind": "map", "dim_in": p.dim_in, "dim_out": p.dim_out, "repr": p.describe()}
    elif env.kind == "symbol":
        out = {"kind": "symbol", "n": p.n, "data": complex_grid(p.entries)}
    else:
        out = {"kind": "spectrum", "values": [float(v) for v in p.values]}
    if env.meta:
        out["meta"] = dict(env.meta)
    return out


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False)


def serialize(env: DocumentEnvelope) -> str:
    return dumps(to_value(env))


def jsonable(obj):
    """Plain JSON data from numpy arrays, dataclasses and complex numbers; NaN becomes null."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return matrix_object(obj) if obj.ndim == 2 else complex_grid(obj)
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, Certificate):
        return certificate_to_json(obj)
    if isinstance(obj, ToleranceConfig):
        return obj.as_dict()
    return obj


def certificate_to_json(cert: Certificate) -> dict:
    return {"kind": cert.kind, "value": jsonable(cert.value), "note": cert.note,
            "payload": jsonable(cert.payload)}


def digest(obj) -> str:
    text = json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def certificate_digest(cert: Optional[Certificate]) -> Optional[str]:
    return None if cert is None else digest(certificate_to_json(cert))


def strip_timing(obj):
    """Drop every runtime_ms field, for determinism comparisons."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "runtime_ms"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj
