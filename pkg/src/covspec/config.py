"""Numerical tolerances and the optional JSON config file."""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass

from .errors import ValidationError

CONFIG_ENV = "COVSPEC_CONFIG"


@dataclass(frozen=True)
class Tolerances:
    """Numerical stand-ins for the exact comparisons of the theory.

    sym_tol
        Largest relative asymmetry ``|M - M^T| / |M|`` that is silently symmetrized.
    eig_tol
        Slack on the sign test of ``Gamma + i Omega``.
    degeneracy_rel_tol
        Relative gap below which two eigenvalues count as equal.
    pure_pair_tol
        Band around 1 in which a pair product counts as exactly 1.
    witness_margin
        A 2x2 block determinant must fall below ``1 - witness_margin`` to certify a violation.
    """

    sym_tol: float = 1e-9
    eig_tol: float = 1e-9
    degeneracy_rel_tol: float = 1e-9
    pure_pair_tol: float = 1e-9
    witness_margin: float = 1e-7

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (math.isfinite(value) and 0 <= value < 1):
                raise ValidationError(f"tolerance {field.name}={value!r} must be finite and in [0, 1)")

    def replace(self, **overrides) -> "Tolerances":
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def from_mapping(cls, mapping) -> "Tolerances":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(mapping) - names
        if unknown:
            raise ValidationError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in mapping.items()})


DEFAULT_TOLERANCES = Tolerances()


def load_config(path=None):
    """Read the key-value JSON config named by ``path`` or ``$COVSPEC_CONFIG``.

    Recognised layout::

        {"tolerances": {"eig_tol": 1e-9, ...}, "seed": 1234}

    Returns ``(Tolerances, seed_or_None)``. A missing variable yields defaults.
    """
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return DEFAULT_TOLERANCES, None
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path}: {exc.msg} at line {exc.lineno} column {exc.colno}") from exc
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"config {path} must hold a JSON object")
    tol = Tolerances.from_mapping(data.get("tolerances", {}))
    seed = data.get("seed")
    return tol, (None if seed is None else int(seed))
