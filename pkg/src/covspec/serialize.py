"""JSON encoding for every report the package produces.

Floats are written with Python's shortest round-trip representation, so every
report parses back to bit-identical values. Each report kind has a JSON schema in
:data:`SCHEMAS`; :func:`validate` checks a parsed object against it.
"""

from __future__ import annotations

import json

import jsonschema
import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .decomp import euler, mode_params, williamson
from .errors import ValidationError
from .linalg import CovMatrix, Ordering, reorder
from .pairing import PairingClass, Spectrum, spectrum

_NUMBER = {"type": "number"}
_ROW = {"type": "array", "items": _NUMBER}
_MATRIX = {
    "type": "object",
    "required": ["S", "ordering", "entries"],
    "properties": {
        "S": {"type": "integer", "minimum": 1},
        "ordering": {"enum": [o.value for o in Ordering]},
        "entries": {"type": "array", "items": _ROW},
    },
}
_SPECTRUM = {
    "type": "object",
    "required": ["values"],
    "properties": {"values": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 2}},
}
_CASE = {"enum": ["1", "2", "3", None]}

SCHEMAS = {
    "matrix": _MATRIX,
    "spectrum": _SPECTRUM,
    "pairing_report": {
        "type": "object",
        "required": ["matchings", "pure_count", "case", "tolerance_sensitive"],
        "properties": {
            "matchings": {"type": "array", "items": {"type": "array", "items": {
                "type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}}},
            "pure_count": {"type": ["integer", "null"]},
            "case": _CASE,
            "tolerance_sensitive": {"type": "boolean"},
        },
    },
    "verdict": {
        "type": "object",
        "required": ["p1", "p2", "reason", "case", "tolerance_sensitive"],
        "properties": {
            "p1": {"enum": ["in", "not_in", "undetermined"]},
            "p2": {"enum": ["in", "not_in", "undetermined"]},
            "reason": {"enum": ["SMinus1Pure", "AllDegenerateAboveOne", "TrivialOnsOnly", "NotUniquePairing",
                                "Prop1Applies", "Cor1Applies", "Residual"]},
            "case": _CASE,
            "tolerance_sensitive": {"type": "boolean"},
            "witness_hint": {"type": ["string", "null"]},
        },
    },
    "decomposition": {
        "type": "object",
        "required": ["nu", "r", "A", "T", "K", "Q", "L"],
        "properties": {
            "nu": _ROW,
            "r": _ROW,
            **{k: _MATRIX for k in ("A", "T", "K", "Q", "L")},
        },
    },
    "witness": {
        "type": "object",
        "required": ["kind", "checks"],
        "properties": {
            "kind": {"enum": ["violation", "alternative", "trivial"]},
            "D": _MATRIX,
            "O": _MATRIX,
            "Wf": _MATRIX,
            "Gamma_prime": _MATRIX,
            "decomposition": {
                "type": "object",
                "required": ["R", "W"],
                "properties": {"R": _MATRIX, "W": _MATRIX},
            },
            "det_value": _NUMBER,
            "t_p": _NUMBER,
            "params_prime": {"type": "object", "properties": {"nu": _ROW, "r": _ROW}},
            "checks": {"type": "object", "additionalProperties": {"type": ["number", "boolean"]}},
        },
        "allOf": [
            {"if": {"properties": {"kind": {"const": "violation"}}}, "then": {"required": ["Wf", "det_value"]}},
            {"if": {"properties": {"kind": {"const": "alternative"}}}, "then": {"required": ["Gamma_prime", "t_p"]}},
            {"if": {"properties": {"kind": {"const": "trivial"}}}, "then": {"required": ["decomposition"]}},
        ],
    },
}


def validate(kind: str, obj) -> None:
    """Check ``obj`` against the schema for ``kind``; raise :class:`ValidationError` on mismatch."""
    try:
        jsonschema.validate(obj, SCHEMAS[kind])
    except KeyError:
        raise ValidationError(f"unknown report kind {kind!r}") from None
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"{kind} JSON invalid at {where}: {exc.message}") from None


def dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, indent=indent, allow_nan=False)


def loads(text: str):
    """Parse JSON text, turning syntax errors into :class:`ValidationError` with a position."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None


# --- encoders -------------------------------------------------------------

def matrix_to_json(M) -> dict:
    """Matrix object, always in the interleaved ordering."""
    A = M.interleaved() if isinstance(M, CovMatrix) else np.asarray(M, dtype=float)
    return {"S": A.shape[0] // 2, "ordering": Ordering.INTERLEAVED.value, "entries": A.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    """Interleaved array from a matrix object; ``ordering`` defaults to ``"qpqp"``."""
    if isinstance(obj, list):
        obj = {"entries": obj}
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValidationError("matrix JSON needs an 'entries' field")
    A = np.asarray(obj["entries"], dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
        raise ValidationError(f"matrix entries must be an even square array, got shape {A.shape}")
    obj = {"S": A.shape[0] // 2, "ordering": Ordering.INTERLEAVED.value, **obj}
    validate("matrix", obj)
    if obj["S"] != A.shape[0] // 2:
        raise ValidationError(f"S={obj['S']} does not match a {A.shape[0]}x{A.shape[0]} matrix")
    return reorder(A, obj["ordering"], Ordering.INTERLEAVED)


def spectrum_to_json(lam) -> dict:
    return {"values": list(spectrum(lam).values)}


def spectrum_from_json(obj) -> Spectrum:
    if isinstance(obj, list):
        obj = {"values": obj}
    validate("spectrum", obj)
    return spectrum(obj["values"])


def pairing_to_json(pc: PairingClass) -> dict:
    return {
        "matchings": [[list(p) for p in m] for m in pc.matchings],
        "pure_count": pc.pure_count,
        "case": pc.case,
        "tolerance_sensitive": bool(pc.tolerance_sensitive),
    }


def verdict_to_json(v) -> dict:
    return {
        "p1": v.p1.value,
        "p2": v.p2.value,
        "reason": v.reason.value,
        "case": v.case,
        "tolerance_sensitive": bool(v.tolerance_sensitive),
        "witness_hint": v.witness_hint,
    }


def decomposition_to_json(gamma, tol: Tolerances = DEFAULT_TOLERANCES) -> dict:
    """Williamson and Euler factors of ``gamma`` with its mode parameters."""
    wd = williamson(gamma, tol)
    ed = euler(wd.A, tol)
    params = mode_params(gamma, tol)
    return {
        "nu": list(params.nu),
        "r": list(params.r),
        "A": matrix_to_json(wd.A),
        "T": matrix_to_json(wd.T),
        "K": matrix_to_json(ed.K),
        "Q": matrix_to_json(ed.Q),
        "L": matrix_to_json(ed.L),
    }


def _plain(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    return float(value)


def witness_to_json(w) -> dict:
    out = {"kind": w.kind.value, "D": matrix_to_json(w.D)}
    if w.O is not None:
        out["O"] = matrix_to_json(w.O)
    if w.Wf is not None:
        out["Wf"] = matrix_to_json(w.Wf)
    if w.det_value is not None:
        out["det_value"] = float(w.det_value)
    if w.gamma_prime is not None:
        out["Gamma_prime"] = matrix_to_json(w.gamma_prime)
    if w.t_p is not None:
        out["t_p"] = float(w.t_p)
    if w.params_prime is not None:
        out["params_prime"] = {"nu": list(w.params_prime.nu), "r": list(w.params_prime.r)}
    if w.R is not None:
        out["decomposition"] = {"R": matrix_to_json(w.R), "W": matrix_to_json(w.W)}
    out["checks"] = {k: _plain(v) for k, v in w.checks.items()}
    return out
