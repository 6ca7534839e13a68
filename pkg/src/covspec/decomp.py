"""Williamson and Euler decompositions, symplectic eigenvalues and mode parameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import ConditioningError, DomainError, ValidationError
from .linalg import Ordering, as_matrix, reorder, symplectic_form

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class WilliamsonDecomp:
    """``Gamma = A T A^T`` with ``A`` symplectic and ``T = diag(nu1, nu1, nu2, nu2, ...)``."""

    A: np.ndarray
    T: np.ndarray
    nu: tuple


@dataclass(frozen=True)
class EulerDecomp:
    """``A = K Q L`` with ``K, L`` orthosymplectic and ``Q = diag(e^r1, e^-r1, ...)``."""

    K: np.ndarray
    Q: np.ndarray
    L: np.ndarray
    r: tuple


@dataclass(frozen=True)
class ModeParams:
    """Thermal/squeezing pairs ``(nu_i, r_i)``, sorted by ``(nu desc, r desc)``."""

    pairs: tuple

    @property
    def nu(self):
        return tuple(p[0] for p in self.pairs)

    @property
    def r(self):
        return tuple(p[1] for p in self.pairs)

    def close_to(self, other: "ModeParams", atol: float) -> bool:
        if len(self.pairs) != len(other.pairs):
            return False
        a = np.array(self.pairs, dtype=float)
        b = np.array(other.pairs, dtype=float)
        return bool(np.max(np.abs(a - b), initial=0.0) <= atol)


def sorted_pairs(pairs) -> tuple:
    return tuple(sorted(((float(n), float(r)) for n, r in pairs), key=lambda p: (-p[0], -p[1])))


def _spd_sqrt(G: np.ndarray):
    w, V = np.linalg.eigh(G)
    if w[0] <= 0:
        raise DomainError("matrix is not positive definite")
    if w[-1] / w[0] > MAX_CONDITION:
        raise ConditioningError(f"condition number {w[-1] / w[0]:.3e} exceeds {MAX_CONDITION:.0e}")
    return (V * np.sqrt(w)) @ V.T


def _canonical_basis(Y: np.ndarray):
    """Orthogonal ``O`` and ``nu`` (descending) with ``O^T Y O = (+) nu_k [[0, 1], [-1, 0]]``.

    ``Y`` is real antisymmetric and nonsingular. Uses the Hermitian matrix ``iY``:
    for an eigenvector ``x + iy`` with eigenvalue ``+nu`` the pair ``(sqrt2 x, -sqrt2 y)``
    spans one canonical block.
    """
    n = Y.shape[0]
    S = n // 2
    w, V = np.linalg.eigh(1j * Y)
    idx = np.argsort(w)[::-1][:S]
    nu = w[idx]
    O = np.empty((n, n))
    for k, j in enumerate(idx):
        v = V[:, j]
        big = np.argmax(np.abs(v) > np.abs(v).max() * (1 - 1e-12))
        v = v * np.exp(-1j * np.angle(v[big]))
        O[:, 2 * k] = np.sqrt(2) * v.real
        O[:, 2 * k + 1] = -np.sqrt(2) * v.imag
    return O, nu


def symplectic_eigenvalues(gamma, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple:
    """The ``S`` symplectic eigenvalues of ``Gamma``, non-ascending.

    Computed as the positive eigenvalues of the Hermitian ``i Gamma^1/2 Omega Gamma^1/2``,
    which equal ``|eig(Omega Gamma)|``.
    """
    G = as_matrix(gamma, tol)
    root = _spd_sqrt(G)
    Y = root @ symplectic_form(G.shape[0] // 2) @ root
    w = np.linalg.eigvalsh(1j * Y)
    return tuple(float(x) for x in w[::-1][: G.shape[0] // 2])


def williamson(gamma, tol: Tolerances = DEFAULT_TOLERANCES) -> WilliamsonDecomp:
    """Symplectic diagonalization ``Gamma = A T A^T``; ``nu`` sorted non-ascending."""
    G = as_matrix(gamma, tol)
    S = G.shape[0] // 2
    root = _spd_sqrt(G)
    Y = root @ symplectic_form(S) @ root
    Y = 0.5 * (Y - Y.T)
    O, nu = _canonical_basis(Y)
    t = np.repeat(nu, 2)
    A = root @ O / np.sqrt(t)
    return WilliamsonDecomp(A=A, T=np.diag(t), nu=tuple(float(x) for x in nu))


def _os_basis_from_svd(U: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Pick ``S`` columns of ``U`` (largest singular values first) and complete each
    with its Omega partner so the result is orthosymplectic."""
    n = U.shape[0]
    S = n // 2
    OmT = symplectic_form(S).T
    K = np.zeros((n, n))
    basis = np.zeros((n, 0))
    used = np.zeros(n, dtype=bool)
    for k in range(S):
        proj = U - basis @ (basis.T @ U)
        norms = np.einsum("ij,ij->j", proj, proj)
        norms[used] = -1.0
        best = norms.max()
        j = int(np.argmax(norms >= 0.5 * best))
        used[j] = True
        u = proj[:, j] / np.sqrt(norms[j])
        u *= np.sign(u[np.argmax(np.abs(u))])
        K[:, 2 * k] = u
        K[:, 2 * k + 1] = OmT @ u
        basis = np.column_stack([basis, u, OmT @ u])
    return K


def euler(A, tol: Tolerances = DEFAULT_TOLERANCES, atol: float = 1e-8) -> EulerDecomp:
    """Bloch-Messiah style factorization ``A = K Q L`` of a real symplectic matrix.

    Uses the SVD ``A = U Sigma V^T``: the polar factor ``U V^T`` is orthosymplectic and
    the eigenvectors of ``U Sigma U^T`` are regrouped into reciprocal pairs.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
        raise ValidationError(f"expected an even square matrix, got shape {A.shape}")
    S = A.shape[0] // 2
    Om = symplectic_form(S)
    resid = np.max(np.abs(A.T @ Om @ A - Om))
    if resid > atol * max(1.0, np.max(np.abs(A)) ** 2):
        raise DomainError(f"matrix is not symplectic (residual {resid:.3e})")
    U, sigma, Vt = np.linalg.svd(A)
    K = _os_basis_from_svd(U, sigma)
    P = (U * sigma) @ U.T
    q = np.einsum("ij,ij->j", K, P @ K)
    r = 0.5 * (np.log(q[0::2]) - np.log(q[1::2]))
    order = np.argsort(-r, kind="stable")
    K = K[:, np.repeat(2 * order, 2) + np.tile([0, 1], S)]
    r = r[order]
    Q = np.diag(np.exp(np.repeat(r, 2) * np.tile([1.0, -1.0], S)))
    L = K.T @ U @ Vt
    return EulerDecomp(K=K, Q=Q, L=L, r=tuple(float(x) for x in r))


def unitary_to_os(U, atol: float = 1e-10) -> np.ndarray:
    """Orthosymplectic image ``[[Re U, -Im U], [Im U, Re U]]`` of a unitary (split ordering)."""
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {U.shape}")
    if not np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=atol, rtol=0):
        raise DomainError("matrix is not unitary")
    return np.block([[U.real, -U.imag], [U.imag, U.real]])


def unitary_to_os_interleaved(U, atol: float = 1e-10) -> np.ndarray:
    return reorder(unitary_to_os(U, atol), Ordering.SPLIT, Ordering.INTERLEAVED)


def mode_params(gamma, tol: Tolerances = DEFAULT_TOLERANCES) -> ModeParams:
    """Thermal and squeezing parameters ``(nu_i, r_i)`` of ``Gamma``.

    The squeezing values are the Euler parameters of the Williamson factor ``A``.
    Each Euler mode ``k`` is matched to a thermal value through the diagonal of
    ``L T L^T`` (exact whenever ``L`` commutes with ``T``), by minimum-cost assignment.
    """
    wd = williamson(gamma, tol)
    ed = euler(wd.A, tol)
    M = ed.L @ wd.T @ ed.L.T
    thermal = 0.5 * (np.diag(M)[0::2] + np.diag(M)[1::2])
    nu = np.asarray(wd.nu)
    rows, cols = linear_sum_assignment(np.abs(thermal[:, None] - nu[None, :]))
    return ModeParams(sorted_pairs((nu[c], ed.r[k]) for k, c in zip(rows, cols)))
