"""Dense real matrix substrate: coordinate orderings, the symplectic form, validity tests.

All matrices are plain ``numpy`` arrays in the interleaved ordering
``(q1, p1, ..., qS, pS)`` unless an :class:`Ordering` says otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DomainError, ValidationError


class Ordering(str, enum.Enum):
    """Phase-space coordinate ordering. Values are the JSON tags."""

    INTERLEAVED = "qpqp"
    SPLIT = "qqpp"

    @classmethod
    def parse(cls, value) -> "Ordering":
        if isinstance(value, cls):
            return value
        aliases = {"interleaved": cls.INTERLEAVED, "split": cls.SPLIT}
        try:
            return aliases.get(str(value).lower()) or cls(value)
        except ValueError:
            raise ValidationError(f"unknown ordering {value!r}; expected 'qpqp' or 'qqpp'") from None


def _mode_count(n: int) -> int:
    if n <= 0 or n % 2:
        raise ValidationError(f"phase-space dimension must be even and positive, got {n}")
    return n // 2


def split_permutation(S: int) -> np.ndarray:
    """Index array ``perm`` with ``M_split = M[perm][:, perm]`` for interleaved ``M``."""
    return np.concatenate([np.arange(0, 2 * S, 2), np.arange(1, 2 * S, 2)])


def symplectic_form(S: int, ordering=Ordering.INTERLEAVED) -> np.ndarray:
    """The canonical antisymmetric form Omega for ``S`` modes.

    Interleaved: block diagonal with blocks ``[[0, 1], [-1, 0]]``.
    Split: ``[[0, I], [-I, 0]]``.
    """
    if int(S) != S or S < 1:
        raise ValidationError(f"mode count must be a positive integer, got {S!r}")
    S = int(S)
    ordering = Ordering.parse(ordering)
    if ordering is Ordering.INTERLEAVED:
        return np.kron(np.eye(S), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    eye = np.eye(S)
    zero = np.zeros((S, S))
    return np.block([[zero, eye], [-eye, zero]])


def reorder(M, source=Ordering.INTERLEAVED, target=Ordering.SPLIT) -> np.ndarray:
    """Conjugate ``M`` by the coordinate permutation taking ``source`` to ``target``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {M.shape}")
    S = _mode_count(M.shape[0])
    source, target = Ordering.parse(source), Ordering.parse(target)
    if source is target:
        return M.copy()
    perm = split_permutation(S)
    if source is Ordering.INTERLEAVED:
        return M[np.ix_(perm, perm)]
    inv = np.argsort(perm)
    return M[np.ix_(inv, inv)]


def symmetrize(M, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Return ``(M + M^T)/2`` if ``M`` is symmetric up to ``tol.sym_tol`` (relative)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError("matrix has non-finite entries")
    scale = max(np.max(np.abs(M)), 1e-300)
    asym = np.max(np.abs(M - M.T)) / scale
    if asym > tol.sym_tol:
        raise ValidationError(f"matrix is not symmetric (relative asymmetry {asym:.3e})")
    return 0.5 * (M + M.T)


@dataclass(frozen=True)
class CovMatrix:
    """A real symmetric positive-definite ``2S x 2S`` matrix tagged with its ordering.

    Construction symmetrizes within ``sym_tol`` and rejects anything else.
    Use :meth:`interleaved` to get the canonical array.
    """

    entries: np.ndarray
    ordering: Ordering = Ordering.INTERLEAVED

    def __post_init__(self):
        M = symmetrize(self.entries)
        _mode_count(M.shape[0])
        if np.linalg.eigvalsh(M)[0] <= 0:
            raise DomainError("covariance matrix must be positive definite")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        object.__setattr__(self, "ordering", Ordering.parse(self.ordering))

    @property
    def S(self) -> int:
        return self.entries.shape[0] // 2

    def interleaved(self) -> np.ndarray:
        return reorder(self.entries, self.ordering, Ordering.INTERLEAVED)


def as_matrix(gamma, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Canonical interleaved symmetric array from a :class:`CovMatrix` or array-like."""
    if isinstance(gamma, CovMatrix):
        return np.array(gamma.interleaved())
    M = symmetrize(gamma, tol)
    _mode_count(M.shape[0])
    return M


def hermitian_realification(gamma) -> np.ndarray:
    """Real symmetric ``4S x 4S`` matrix with the spectrum of ``Gamma + i Omega`` (doubled)."""
    G = np.asarray(gamma, dtype=float)
    Om = symplectic_form(G.shape[0] // 2)
    return np.block([[G, -Om], [Om, G]])


def uncertainty_min_eigenvalue(gamma, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``Gamma + i Omega``."""
    G = as_matrix(gamma, tol)
    return float(np.linalg.eigvalsh(hermitian_realification(G))[0])


def is_quantum_cm(gamma, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Uncertainty-principle test ``Gamma + i Omega >= 0`` up to ``tol.eig_tol``."""
    return uncertainty_min_eigenvalue(gamma, tol) >= -tol.eig_tol


def upper_block_det(gamma) -> float:
    """Determinant of the upper-left ``2 x 2`` block; a value below 1 rules out a quantum CM."""
    G = np.asarray(gamma.interleaved() if isinstance(gamma, CovMatrix) else gamma, dtype=float)
    if G.ndim != 2 or G.shape[0] < 2 or G.shape[1] < 2:
        raise ValidationError(f"need at least a 2x2 matrix, got shape {G.shape}")
    return float(G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0])


def is_orthogonal(M, atol: float = 1e-8) -> bool:
    M = np.asarray(M, dtype=float)
    return M.ndim == 2 and M.shape[0] == M.shape[1] and np.allclose(M.T @ M, np.eye(M.shape[0]), atol=atol, rtol=0)


def is_symplectic(M, atol: float = 1e-8) -> bool:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        return False
    Om = symplectic_form(M.shape[0] // 2)
    return np.allclose(M.T @ Om @ M, Om, atol=atol, rtol=0)


def is_orthosymplectic(M, atol: float = 1e-8) -> bool:
    return is_orthogonal(M, atol) and is_symplectic(M, atol)


def mode_coords(modes) -> np.ndarray:
    """Interleaved coordinate indices ``[2m, 2m+1, ...]`` of the given modes."""
    modes = np.asarray(list(modes), dtype=int)
    return np.stack([2 * modes, 2 * modes + 1], axis=1).ravel()
