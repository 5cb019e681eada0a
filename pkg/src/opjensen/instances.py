"""JSON instance and report files.

Instance::

    {"dim": d, "n": n, "cube": [[lo, hi], ...], "rho": M,
     "partition": [M, ...], "field": {"weights": [...], "maps": [M, ...]},
     "tuple_field": [[M, ...], ...], "f": {"expr": "..."} | {"catalog": name, "params": {...}},
     "seed": int (optional)}

Matrices are row-major nested lists whose entries are ``[re, im]`` pairs
(plain numbers are accepted on input as real entries).
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from . import __version__
from .convexfn import function_from_json
from .expectation import build_context
from .fields import DiscreteField, TupleField
from .jensen import JensenInstance, JensenReport
from .jointspec import CubeDomain
from .linalg import DEFAULT_POLICY, TolerancePolicy, ValidationError, as_hermitian


class InstanceError(ValidationError):
    """Schema or structural problem in an instance file, located by JSON path or line."""

    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        where = path or (f"line {line}, column {column}" if line is not None else "")
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.line = line
        self.column = column
        self.detail = message

    def to_json(self) -> dict:
        out = {"error": "invalid_input", "message": self.detail}
        if self.path:
            out["path"] = self.path
        if self.line is not None:
            out["line"] = self.line
            out["column"] = self.column
        return out


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj, path: str, dim: int) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise InstanceError(f"expected a {dim}x{dim} matrix", path)
    out = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise InstanceError(f"row must have {dim} entries", f"{path}[{i}]")
        for j, z in enumerate(row):
            out[i, j] = _scalar(z, f"{path}[{i}][{j}]")
    return out


def _scalar(z, path: str) -> complex:
    if isinstance(z, bool):
        raise InstanceError("expected a number or [re, im]", path)
    if isinstance(z, (int, float)):
        return complex(z)
    if isinstance(z, list) and len(z) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in z):
        return complex(z[0], z[1])
    raise InstanceError("expected a number or [re, im]", path)


def _get(obj: dict, key: str, kind, path: str = ""):
    if not isinstance(obj, dict):
        raise InstanceError("expected an object", path)
    if key not in obj:
        raise InstanceError("missing required key", f"{path}.{key}" if path else key)
    v = obj[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise InstanceError("expected an integer", f"{path}.{key}" if path else key)
    if kind is list and not isinstance(v, list):
        raise InstanceError("expected a list", f"{path}.{key}" if path else key)
    if kind is dict and not isinstance(v, dict):
        raise InstanceError("expected an object", f"{path}.{key}" if path else key)
    return v


def loads_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(exc.msg, line=exc.lineno, column=exc.colno) from exc


def instance_from_json(obj, policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[JensenInstance, int | None]:
    """Build and validate an instance; returns ``(instance, seed)``."""
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    dim = _get(obj, "dim", int)
    n = _get(obj, "n", int)
    if dim < 1 or n < 1:
        raise InstanceError("dim and n must be positive", "dim" if dim < 1 else "n")
    cube_raw = _get(obj, "cube", list)
    if len(cube_raw) != n:
        raise InstanceError(f"expected {n} intervals", "cube")
    ivs = []
    for i, iv in enumerate(cube_raw):
        if not (isinstance(iv, list) and len(iv) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in iv)):
            raise InstanceError("interval must be [lo, hi]", f"cube[{i}]")
        ivs.append(tuple(iv))
    with _at("cube"):
        dom = CubeDomain(tuple(ivs))
    rho = matrix_from_json(_get(obj, "rho", list), "rho", dim)
    parts = [matrix_from_json(p, f"partition[{j}]", dim) for j, p in enumerate(_get(obj, "partition", list))]
    fobj = _get(obj, "field", dict)
    weights = _get(fobj, "weights", list, "field")
    maps = [matrix_from_json(a, f"field.maps[{t}]", dim) for t, a in enumerate(_get(fobj, "maps", list, "field"))]
    for t, w in enumerate(weights):
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            raise InstanceError("weight must be a number", f"field.weights[{t}]")
    tuples = []
    for t, members in enumerate(_get(obj, "tuple_field", list)):
        if not isinstance(members, list) or len(members) != n:
            raise InstanceError(f"expected {n} matrices", f"tuple_field[{t}]")
        row = []
        for i, x in enumerate(members):
            path = f"tuple_field[{t}][{i}]"
            with _at(path):
                row.append(as_hermitian(matrix_from_json(x, path, dim), policy))
        tuples.append(row)
    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise InstanceError("expected an integer", "seed")
    with _at("f"):
        f = function_from_json(_get(obj, "f", dict), n)
    with _at("partition/rho"):
        ctx = build_context(parts, rho, policy)
    with _at("field"):
        field = DiscreteField(np.array(weights, dtype=float), tuple(maps))
    with _at("tuple_field"):
        tfield = TupleField.build(tuples, dom, policy)
    with _at("instance"):
        inst = JensenInstance(ctx, field, tfield, f, dom, policy)
    return inst, seed


class _at:
    """Re-raise validation errors with a JSON path attached."""

    def __init__(self, path: str):
        self.path = path

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        if exc is not None and isinstance(exc, ValidationError) and not isinstance(exc, InstanceError):
            raise InstanceError(str(exc), self.path) from exc
        return False


def instance_to_json(inst: JensenInstance, seed: int | None = None) -> dict:
    out = {
        "dim": inst.ctx.dim,
        "n": inst.dom.n,
        "cube": [list(iv) for iv in inst.dom.intervals],
        "rho": matrix_to_json(inst.ctx.functional.rho),
        "partition": [matrix_to_json(p) for p in inst.ctx.partition.atoms],
        "field": {"weights": [float(w) for w in inst.field.weights],
                  "maps": [matrix_to_json(a) for a in inst.field.maps]},
        "tuple_field": [[matrix_to_json(x) for x in t] for t in inst.tfield.tuples],
        "f": inst.f.to_json(),
    }
    if seed is not None:
        out["seed"] = int(seed)
    return out


def canonical_hash(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(text.encode()).hexdigest()


def report_to_json(report: JensenReport, policy: TolerancePolicy, input_hash: str, seed: int | None) -> dict:
    return {
        "verdict": "pass" if report.passed else "fail",
        "atoms": [a.to_json() for a in report.atoms],
        "convexity": report.convexity.to_json() if report.convexity is not None else None,
        "tolerances": dict(policy.__dict__),
        "input_hash": input_hash,
        "seed": seed,
        "tool_version": __version__,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"
