"""Seeded random generators for matrices and spectra.

Every generator takes either an integer seed or a ready ``numpy.random.Generator``.
Integer seeds feed a Philox counter-based generator; ``stream`` selects a disjoint
substream so that parallel draws never overlap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .classify import Reason, classify_spectrum
from .config import DEFAULT_TOLERANCES, Tolerances
from .decomp import unitary_to_os_interleaved
from .errors import SamplingExhausted, ValidationError
from .linalg import CovMatrix, is_quantum_cm
from .pairing import Spectrum, classify_pairing, diagonal_representative, spectrum

NU_RANGE = (1.0, 3.0)
R_MAX = 1.5


class ClassTarget(str, enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    PROP1 = "Prop1"
    NOT_UNIQUE = "NotUnique"
    RESIDUAL = "Residual"


def make_rng(seed, stream: int = 0) -> np.random.Generator:
    """Philox generator for ``(seed, stream)``; a ``Generator`` is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or int(seed) < 0:
        raise ValidationError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(stream),))))


def haar_orthogonal(n: int, seed, stream: int = 0) -> np.ndarray:
    """Haar-distributed ``n x n`` orthogonal matrix (QR with a sign-fixed diagonal)."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    rng = make_rng(seed, stream)
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def haar_unitary(n: int, seed, stream: int = 0) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary matrix."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    rng = make_rng(seed, stream)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_os(S: int, seed, stream: int = 0) -> np.ndarray:
    """Random orthosymplectic ``2S x 2S`` matrix, the real image of a Haar unitary."""
    return unitary_to_os_interleaved(haar_unitary(S, seed, stream))


def random_symplectic(S: int, seed, r_max: float = R_MAX, stream: int = 0) -> np.ndarray:
    """``K Q L`` with ``K, L`` random OS and squeezing values uniform on ``[0, r_max]``."""
    if r_max < 0:
        raise ValidationError(f"r_max must be non-negative, got {r_max}")
    rng = make_rng(seed, stream)
    K = random_os(S, rng)
    L = random_os(S, rng)
    r = rng.uniform(0.0, r_max, S)
    Q = np.diag(np.exp(np.repeat(r, 2) * np.tile([1.0, -1.0], S)))
    return K @ Q @ L


def random_cm_with_spectrum(lam, seed, max_rejections: int = 1000, stream: int = 0,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> CovMatrix:
    """``O^T D O`` for Haar ``O``, redrawn until it is a quantum CM.

    Raises
    ------
    SamplingExhausted
        After ``max_rejections`` failed draws; expected for spectra whose quantum
        orbit is thin.
    """
    if max_rejections < 1:
        raise ValidationError("max_rejections must be at least 1")
    D = diagonal_representative(lam)
    rng = make_rng(seed, stream)
    for _ in range(max_rejections):
        O = haar_orthogonal(D.shape[0], rng)
        G = O.T @ D @ O
        G = 0.5 * (G + G.T)
        if is_quantum_cm(G, tol):
            return CovMatrix(G)
    raise SamplingExhausted(f"no quantum CM found in {max_rejections} draws")


@dataclass(frozen=True)
class SampleConfig:
    """Settings for :func:`random_spectrum`."""

    seed: int
    S: int
    max_rejections: int = 10_000
    class_target: ClassTarget | None = None
    nu_range: tuple = NU_RANGE
    r_max: float = R_MAX

    def __post_init__(self):
        if self.max_rejections < 1:
            raise ValidationError("max_rejections must be at least 1")
        if self.S < 1:
            raise ValidationError(f"S must be positive, got {self.S}")
        if self.class_target is not None:
            object.__setattr__(self, "class_target", ClassTarget(self.class_target))


def _values(modes) -> list:
    return [v for nu, r in modes for v in (nu * math.exp(2 * r), nu * math.exp(-2 * r))]


def _draw_pure(rng, k, cfg):
    return [(1.0, rng.uniform(0.0, cfg.r_max)) for _ in range(k)]


def _draw_thermal(rng, k, cfg):
    lo, hi = cfg.nu_range
    return [(rng.uniform(max(lo, 1.0), hi), rng.uniform(0.0, cfg.r_max)) for _ in range(k)]


def _propose(rng, cfg):
    S = cfg.S
    target = cfg.class_target
    if target is ClassTarget.CASE1:
        return _draw_pure(rng, S, cfg)
    if target in (ClassTarget.CASE2, ClassTarget.CASE3):
        return _draw_thermal(rng, 1, cfg) + _draw_pure(rng, S - 1, cfg)
    if target is ClassTarget.PROP1:
        zeta = int(rng.integers(2, S + 1))
        return _draw_thermal(rng, zeta, cfg) + _draw_pure(rng, S - zeta, cfg)
    if target is ClassTarget.NOT_UNIQUE:
        zeta = int(rng.integers(1, S + 1))
        return _draw_thermal(rng, zeta, cfg) + _draw_pure(rng, S - zeta, cfg)
    # residual: three-fold degenerate impure block (a, a, a, b) plus pure modes
    # squeezed beyond it, which keeps the pairing unique and defeats both hypotheses
    a = rng.uniform(max(cfg.nu_range[0], 1.0), cfg.nu_range[1])
    b = math.exp(rng.uniform(-math.log(a), math.log(a)))
    modes = [(a, 0.0), (math.sqrt(a * b), 0.25 * math.log(a / b))]
    floor = 0.5 * math.log(a)
    if floor >= cfg.r_max:
        return modes
    return modes + [(1.0, rng.uniform(floor, cfg.r_max)) for _ in range(S - 2)]


def _matches(lam, cfg, tol) -> bool:
    target = cfg.class_target
    pc = classify_pairing(lam, tol)
    if pc.tolerance_sensitive:
        return False
    if target is ClassTarget.NOT_UNIQUE:
        return not pc.unique
    if not pc.unique:
        return False
    if target in (ClassTarget.CASE1, ClassTarget.CASE2, ClassTarget.CASE3):
        return pc.case == target.value[-1]
    reason = classify_spectrum(lam, tol).reason
    if target is ClassTarget.PROP1:
        return reason is Reason.PROP1_APPLIES
    return reason is Reason.RESIDUAL


def random_spectrum(config: SampleConfig, stream: int = 0, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Spectrum drawn from ``config.class_target`` by rejection over uniform boxes.

    Mode parameters are drawn with thermal values in ``nu_range`` and squeezing in
    ``[0, r_max]``; a proposal is kept only when the classifier puts it in the target
    class and it is not flagged tolerance-sensitive.

    Raises
    ------
    SamplingExhausted
        If ``max_rejections`` proposals all miss the target.
    """
    if config.class_target is None:
        raise ValidationError("random_spectrum needs a class_target")
    if config.class_target is ClassTarget.RESIDUAL and config.S < 3:
        raise ValidationError("the residual class needs at least three modes")
    if config.class_target is ClassTarget.PROP1 and config.S < 2:
        raise ValidationError("the alternative-pairing class needs at least two modes")
    rng = make_rng(config.seed, stream)
    for _ in range(config.max_rejections):
        lam = spectrum(_values(_propose(rng, config)))
        if _matches(lam, config, tol):
            return lam
    raise SamplingExhausted(f"no {config.class_target.value} spectrum in {config.max_rejections} proposals")
