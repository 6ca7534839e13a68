"""Constructive evidence for verdicts.

Two kinds of certificate are built here:

* For spectra with a unique ``S - 1``-pure pairing, an orthogonal ``O`` acting on the
  diagonal CM ``D`` either admits an OS matrix ``Wf`` that pushes the upper-left
  ``2 x 2`` block determinant of ``(O Wf)^T D (O Wf)`` below 1 (a *violation*), or
  factors as ``O = R W`` with ``R`` commuting with ``D`` and ``W`` OS (*trivial*).
* For spectra meeting the degeneracy hypotheses of the alternative-pairing result,
  a quantum CM with the same eigenvalues but different symplectic eigenvalues
  (an *alternative*), found on a continuous rotation curve.

All indices are 0-based and all matrices use the interleaved ordering. Column
``2a`` and ``2a + 1`` form mode ``a``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .classify import cor1_hypotheses, general_modes, max_multiplicity, prop1_hypotheses, singleton_entries
from .config import DEFAULT_TOLERANCES, Tolerances
from .decomp import ModeParams, mode_params, symplectic_eigenvalues, unitary_to_os
from .errors import (ConditioningError, DomainError, InconclusiveError, PreconditionError,
                     StructuralError, ValidationError)
from .linalg import (Ordering, is_orthogonal, is_orthosymplectic, is_quantum_cm, mode_coords, reorder,
                     symplectic_form)
from .pairing import buckets, classify_pairing, diagonal_representative, spectrum

ORTHO_ATOL = 1e-8
STRUCT_ATOL = 1e-7
DET_EXACT_BAND = 1e-9
BISECT_TOL = 1e-10
BISECT_MAX_ITER = 200
PARAM_SHIFT = 1e-6


class WitnessKind(str, enum.Enum):
    VIOLATION = "violation"
    ALTERNATIVE = "alternative"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class Witness:
    """A certificate produced by :func:`thm1_violation_witness`, :func:`trivial_witness`
    or :func:`prop1_alternative_cm`.

    Only the fields relevant to ``kind`` are set. ``checks`` maps check names to the
    residuals or booleans that were verified when the witness was built.
    """

    kind: WitnessKind
    D: np.ndarray
    O: np.ndarray | None = None
    Wf: np.ndarray | None = None
    det_value: float | None = None
    gamma_prime: np.ndarray | None = None
    params_prime: ModeParams | None = None
    t_p: float | None = None
    R: np.ndarray | None = None
    W: np.ndarray | None = None
    checks: dict = field(default_factory=dict)
    trace: tuple = ()


# ---------------------------------------------------------------------------
# Cauchy-Binet machinery

def _require_orthogonal(O, atol=ORTHO_ATOL) -> np.ndarray:
    O = np.asarray(O, dtype=float)
    if O.ndim != 2 or O.shape[0] != O.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {O.shape}")
    if not is_orthogonal(O, atol):
        raise DomainError("matrix is not orthogonal")
    return O


def _minor_squares(C: np.ndarray) -> np.ndarray:
    """``P[l, k] = det(C[[l, k], :])^2`` for a two-column ``C``."""
    m = np.outer(C[:, 0], C[:, 1])
    m = m - m.T
    return m * m


def cauchy_binet_weights(O, cols=(0, 1), atol: float = ORTHO_ATOL) -> dict:
    """Squared ``2 x 2`` minors of the column pair ``cols`` of an orthogonal ``O``.

    Returns ``{(l, k): p_lk}`` over all row pairs ``l < k``; the weights sum to 1.
    """
    O = _require_orthogonal(O, atol)
    P = _minor_squares(O[:, list(cols)])
    n = O.shape[0]
    return {(l, k): float(P[l, k]) for l in range(n) for k in range(l + 1, n)}


def _diag_entries(D) -> np.ndarray:
    D = np.asarray(D, dtype=float)
    if D.ndim == 1:
        return D
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {D.shape}")
    d = np.diag(D)
    if np.max(np.abs(D - np.diag(d)), initial=0.0) > 0:
        raise ValidationError("D must be diagonal")
    return d


def block_det_expansion(D, O, cols=(0, 1), atol: float = ORTHO_ATOL) -> float:
    """``sum_{l<k} p_lk D_ll D_kk``: the determinant of the ``2 x 2`` block of ``O^T D O``
    on ``cols``, expanded over the Cauchy-Binet weights of those columns of ``O``."""
    d = _diag_entries(D)
    O = _require_orthogonal(O, atol)
    if O.shape[0] != d.size:
        raise ValidationError(f"shape mismatch: D has {d.size} entries, O is {O.shape}")
    P = _minor_squares(O[:, list(cols)])
    return float(0.5 * np.einsum("lk,l,k->", P, d, d))


def block_det_direct(gamma, mode: int = 0) -> float:
    """Plain determinant of the ``2 x 2`` diagonal block of ``gamma`` on ``mode``."""
    i = 2 * mode
    G = np.asarray(gamma, dtype=float)
    return float(G[i, i] * G[i + 1, i + 1] - G[i, i + 1] * G[i + 1, i])


# ---------------------------------------------------------------------------
# OS completions and coset lemmas

def _conjugate(S: int) -> np.ndarray:
    """Map taking the first column of an OS mode pair to the second: ``Omega^T``."""
    return symplectic_form(S).T


def os_with_column(c, mode: int) -> np.ndarray:
    """An OS matrix whose columns ``2 mode`` and ``2 mode + 1`` are ``c`` and ``Omega^T c``.

    ``c`` is read as the complex vector ``u_m = c[2m] + i c[2m + 1]`` and completed to a
    unitary, whose real image is the result.
    """
    c = np.asarray(c, dtype=float)
    S = c.size // 2
    u = c[0::2] + 1j * c[1::2]
    norm = np.linalg.norm(u)
    if norm < 1e-12:
        raise StructuralError("cannot complete a zero column to an OS matrix")
    u = u / norm
    Q, _ = np.linalg.qr(np.column_stack([u, np.eye(S, dtype=complex)]))
    Q = Q[:, :S]
    Q[:, 0] *= np.vdot(Q[:, 0], u)
    order = list(range(1, S))
    order.insert(mode, 0)
    return reorder(unitary_to_os(Q[:, order], atol=1e-8), Ordering.SPLIT, Ordering.INTERLEAVED)


def _active(S: int, modes) -> list:
    modes = list(range(S)) if modes is None else sorted(int(m) for m in modes)
    if not modes or modes[0] < 0 or modes[-1] >= S:
        raise ValidationError(f"mode set {modes} out of range for S={S}")
    return modes


def _restrict(O: np.ndarray, modes: list):
    """Active block of ``O``; ``O`` must leave the span of the active coordinates invariant."""
    idx = mode_coords(modes)
    block = O[np.ix_(idx, idx)]
    if not is_orthogonal(block, ORTHO_ATOL):
        raise StructuralError("O mixes active and inactive modes")
    return idx, block


def _embed(block: np.ndarray, idx, n: int) -> np.ndarray:
    M = np.eye(n)
    M[np.ix_(idx, idx)] = block
    return M


def proportional_cols_ws(O, i: int, j: int, modes=None, lam: float = 1.0) -> np.ndarray:
    """OS ``W`` making columns ``2i, 2i + 1`` of ``O W`` proportional on every row but ``j``.

    Rows ``l != j`` satisfy ``(OW)[l, 2i] = lam (OW)[l, 2i + 1]``. The construction puts
    ``c - lam Omega^T c`` on the kernel of ``O`` with row ``j`` deleted, which is spanned
    by row ``j`` of ``O``. With ``modes`` given, ``W`` acts only on those modes.
    """
    O = _require_orthogonal(O)
    n = O.shape[0]
    modes = _active(n // 2, modes)
    if i not in modes:
        raise ValidationError(f"mode {i} is not active")
    idx, block = _restrict(O, modes)
    where = np.flatnonzero(idx == j)
    if where.size == 0:
        raise ValidationError(f"row {j} is not an active coordinate")
    J = _conjugate(len(modes))
    v = block[where[0], :]
    for lam_try in (lam, -1.0, 0.5):
        c = np.linalg.solve(np.eye(idx.size) - lam_try * J, v)
        if np.linalg.norm(c) >= 1e-8:
            break
    else:
        raise StructuralError("kernel direction degenerated for every trial constant")
    return _embed(os_with_column(c, modes.index(i)), idx, n)


def zero_rows_ws(O, i: int, rows, modes=None, null_tol: float = 1e-10, gap_tol: float = 1e-7) -> np.ndarray:
    """OS ``W`` such that the given rows of columns ``2i, 2i + 1`` of ``O W`` vanish.

    ``rows`` must hold one fewer index than there are active modes. The first column of
    the mode pair is taken from the kernel of the rows of ``O`` stacked on the same rows
    times ``Omega^T``; among kernel vectors the one closest to ``e_{2i}`` is used.

    Raises
    ------
    ConditioningError
        When a singular value of the stacked system sits between ``null_tol`` and
        ``gap_tol``, so that the kernel dimension is numerically ambiguous.
    """
    O = _require_orthogonal(O)
    n = O.shape[0]
    modes = _active(n // 2, modes)
    if i not in modes:
        raise ValidationError(f"mode {i} is not active")
    rows = [int(r) for r in rows]
    if len(rows) != len(modes) - 1:
        raise PreconditionError(f"need {len(modes) - 1} rows, got {len(rows)}")
    idx, block = _restrict(O, modes)
    local = [int(np.flatnonzero(idx == r)[0]) for r in rows if r in idx]
    if len(local) != len(rows):
        raise ValidationError("every row must be an active coordinate")
    J = _conjugate(len(modes))
    stacked = np.vstack([block[local], block[local] @ J]) if local else np.zeros((0, idx.size))
    if stacked.size:
        sv = np.linalg.svd(stacked, compute_uv=False)
        if np.any((sv > null_tol) & (sv < gap_tol)):
            raise ConditioningError("stacked kernel system is numerically rank-ambiguous")
        N = null_space(stacked, rcond=null_tol / max(sv[0], 1e-300))
    else:
        N = np.eye(idx.size)
    target = 2 * modes.index(i)
    for start in [target] + [k for k in range(idx.size) if k != target]:
        c = N @ N[start]
        if np.linalg.norm(c) > 1e-6:
            break
    return _embed(os_with_column(c, modes.index(i)), idx, n)


def fix_basis_ws(O, e: int, modes=None) -> np.ndarray:
    """OS ``W`` whose column ``e`` is row ``e`` of ``O``, so that ``O W`` fixes basis vector ``e``."""
    O = _require_orthogonal(O)
    n = O.shape[0]
    modes = _active(n // 2, modes)
    idx, block = _restrict(O, modes)
    where = np.flatnonzero(idx == e)
    if where.size == 0:
        raise ValidationError(f"coordinate {e} is not active")
    k = int(where[0])
    c = block[k, :]
    if k % 2:
        c = symplectic_form(len(modes)) @ c
    return _embed(os_with_column(c, k // 2), idx, n)


def mode_swap(S: int, a: int, b: int) -> np.ndarray:
    """Symplectic permutation exchanging the column pairs of modes ``a`` and ``b``."""
    perm = np.arange(S)
    perm[[a, b]] = perm[[b, a]]
    idx = mode_coords(perm)
    return np.eye(2 * S)[:, idx]


def _rotation(x: float, y: float) -> np.ndarray:
    return np.array([[x, -y], [y, x]])


def _householder(x: np.ndarray, target: int, n: int) -> np.ndarray:
    """Reflection sending unit ``x`` to basis vector ``target``; identity off their support."""
    w = x.copy()
    w[target] -= 1.0
    nw = w @ w
    if nw < 1e-30:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(w, w) / nw


def _template_row(C: np.ndarray, atol: float):
    """Row ``k`` such that ``C`` minus row ``k`` has rank one, with its direction ``z``."""
    best = None
    for k in np.flatnonzero(np.linalg.norm(C, axis=1) > atol):
        rest = np.delete(C, k, axis=0)
        _, s, vt = np.linalg.svd(rest)
        second = s[1] if s.size > 1 else 0.0
        if second <= atol and (best is None or second < best[0]):
            best = (second, int(k), vt[0])
    if best is None:
        raise StructuralError("columns are not proportional outside a single row")
    return best[1], best[2]


def mode_removal(O, a: int, k: int | None = None, modes=None, atol: float = STRUCT_ATOL):
    """Orthogonal ``R`` and OS ``W`` giving ``R O W`` an identity block on the mode of row ``k``.

    The column pair of mode ``a`` must be proportional on every row except ``k``.
    A rotation inside mode ``a`` concentrates one column on row ``k``; a reflection ``R``
    supported on the other nonzero rows and the conjugate of ``k`` aligns the second
    column; a symplectic swap then moves the pair onto the mode of ``k``.

    Raises
    ------
    StructuralError
        If the columns do not have that form.
    """
    O = _require_orthogonal(O)
    n = O.shape[0]
    modes = _active(n // 2, modes)
    idx, block = _restrict(O, modes)
    la = modes.index(a)
    C = block[:, [2 * la, 2 * la + 1]]
    if k is None:
        kl, z = _template_row(C, atol)
    else:
        kl = int(np.flatnonzero(idx == k)[0])
        rest = np.delete(C, kl, axis=0)
        _, s, vt = np.linalg.svd(rest)
        if s.size > 1 and s[1] > atol:
            raise StructuralError(f"columns are not proportional outside row {k}")
        z = vt[0]
    z = z / np.linalg.norm(z)
    # rows parallel to z must vanish in the column that is concentrated on row k
    if kl % 2 == 0:
        x, y = z[1], -z[0]
    else:
        x, y = z[0], z[1]
    rot = _rotation(x, y)
    Cn = C @ rot
    lead, other, partner = (0, 1, kl + 1) if kl % 2 == 0 else (1, 0, kl - 1)
    if Cn[kl, lead] < 0:
        rot, Cn = -rot, -Cn
    if abs(Cn[kl, lead] - 1.0) > atol:
        raise StructuralError("rotated column is not concentrated on the distinguished row")
    R = _householder(Cn[:, other], partner, idx.size)
    W1 = np.eye(idx.size)
    W1[2 * la:2 * la + 2, 2 * la:2 * la + 2] = rot
    W = W1 @ mode_swap(len(modes), la, kl // 2)
    return _embed(R, idx, n), _embed(W, idx, n)


# ---------------------------------------------------------------------------
# violation-witness driver

def thm1_diagonal(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Diagonal CM ``diag[nu e^{-2 r_1}, nu e^{2 r_1}, e^{-2 r_2}, e^{2 r_2}, ...]``.

    The first mode carries the single impure pair (or, when all pairs are pure, the
    pair with the least squeezing); the remaining pure modes follow with squeezing
    non-decreasing.
    """
    pc = classify_pairing(lam, tol)
    if not pc.unique or pc.pure_count < pc.S - 1:
        raise PreconditionError("spectrum does not satisfy the S-1-pure unique pairing condition")
    impure = [m for m in pc.modes if not m.pure]
    pure = sorted((m for m in pc.modes if m.pure), key=lambda m: m.r)
    order = impure + pure if impure else pure
    return np.diag([v for m in order for v in (m.small, m.big)])


class _ModeInfo:
    """Per-mode view of a diagonal ``D``: small and big entry and where they sit."""

    def __init__(self, d: np.ndarray, tol: Tolerances):
        S = d.size // 2
        self.small = np.minimum(d[0::2], d[1::2])
        self.big = np.maximum(d[0::2], d[1::2])
        self.small_at = np.where(d[0::2] <= d[1::2], 2 * np.arange(S), 2 * np.arange(S) + 1)
        self.big_at = np.where(d[0::2] <= d[1::2], 2 * np.arange(S) + 1, 2 * np.arange(S))
        self.r = 0.25 * np.log(self.big / self.small)
        self.pure = np.abs(self.small * self.big - 1.0) <= tol.pure_pair_tol
        impure = np.flatnonzero(~self.pure)
        if impure.size > 1:
            raise PreconditionError("D has more than one impure mode")
        self.impure = int(impure[0]) if impure.size else None


def _argmax_r(info, modes):
    best = max(info.r[m] for m in modes)
    return max(m for m in modes if info.r[m] >= best - 1e-12)


def _argmin_r(info, modes):
    best = min(info.r[m] for m in modes)
    return min(m for m in modes if info.r[m] <= best + 1e-12)


def _column_mode(info, active):
    if info.impure is not None and info.impure in active:
        return info.impure
    return _argmin_r(info, active)


def _plan_step(info, active, a, tol):
    """Pick the coset lemma for this round: ``("prop", row)`` or ``("zero", rows)``."""
    if a != info.impure:
        return "prop", int(info.small_at[_argmax_r(info, active)])
    others = [m for m in active if m != a]
    hot = [m for m in others if info.small[a] * info.big[m] > 1.0 + tol.pure_pair_tol]
    if hot:
        return "prop", int(info.small_at[_argmax_r(info, hot)])
    anchor = _argmin_r(info, others)
    return "zero", [int(info.big_at[a])] + [int(info.big_at[m]) for m in others if m != anchor]


def _commutes(R, d, atol=1e-8) -> bool:
    return bool(np.max(np.abs(R * d[None, :] - d[:, None] * R), initial=0.0) <= atol * max(1.0, np.max(d)))


def _eigen_labels(vals: np.ndarray, rel_tol: float) -> np.ndarray:
    """Eigenspace label per coordinate, grouping values the way :func:`buckets` does."""
    order = np.argsort(-vals, kind="stable")
    label = np.empty(vals.size, dtype=int)
    g = 0
    for prev, cur in zip(order[:-1], order[1:]):
        label[prev] = g
        if vals[prev] - vals[cur] > rel_tol * vals[prev]:
            g += 1
    label[order[-1]] = g
    return label


def _eigenspace_removal(Op, a, active, d, tol, atol=STRUCT_ATOL):
    """Fallback removal: rotate inside mode ``a`` until each column lies in one eigenspace
    of ``D``, then reflect within those eigenspaces onto a whole mode."""
    n = Op.shape[0]
    idx, block = _restrict(Op, active)
    dl = d[idx]
    la = active.index(a)
    C = block[:, [2 * la, 2 * la + 1]]
    label = _eigen_labels(dl, tol.degeneracy_rel_tol)
    best = None
    for lm in range(len(active)):
        for q, p in ((2 * lm, 2 * lm + 1),):
            off_q = C[label != label[q]]
            off_p = C[label != label[p]]
            cands = []
            for M, which in ((off_q, 0), (off_p, 1)):
                if M.shape[0]:
                    t = np.linalg.svd(M)[2][-1]
                else:
                    t = np.array([1.0, 0.0])
                cands.append(t if which == 0 else np.array([t[1], -t[0]]))
            for r0 in cands:
                r1 = np.array([-r0[1], r0[0]])
                res = np.linalg.norm(off_q @ r0) + np.linalg.norm(off_p @ r1)
                if best is None or res < best[0]:
                    best = (res, lm, r0)
    res, lm, r0 = best
    if res > atol:
        raise StructuralError(f"no rotation aligns the mode-{a} columns with eigenspaces (residual {res:.2e})")
    rot = _rotation(r0[0], r0[1])
    Cn = C @ rot
    # confine each column to its eigenspace so the reflections cannot pick up
    # rounding noise from other eigenspaces when a column is already near its target
    v0 = np.where(label == label[2 * lm], Cn[:, 0], 0.0)
    v1 = np.where(label == label[2 * lm + 1], Cn[:, 1], 0.0)
    H1 = _householder(v0 / np.linalg.norm(v0), 2 * lm, idx.size)
    v1 = H1 @ v1
    v1[2 * lm] = 0.0
    H2 = _householder(v1 / np.linalg.norm(v1), 2 * lm + 1, idx.size)
    R = H2 @ H1
    W1 = np.eye(idx.size)
    W1[2 * la:2 * la + 2, 2 * la:2 * la + 2] = rot
    W = W1 @ mode_swap(len(active), la, lm)
    return _embed(R, idx, n), _embed(W, idx, n)


def _removed_mode(Ok, active, atol=1e-7):
    for m in active:
        i = 2 * m
        if (np.allclose(Ok[i:i + 2, i:i + 2], np.eye(2), atol=atol)
                and np.linalg.norm(Ok[i:i + 2, :]) ** 2 <= 2 + atol):
            return m
    return None


def _trivial(O, D, R_total, Ok, W_total, trace, note):
    R = R_total.T
    W = Ok @ W_total.T
    d = np.diag(D)
    checks = {
        "reconstruction": float(np.linalg.norm(R @ W - O)),
        "R_commutes_with_D": float(np.max(np.abs(R @ D @ R.T - D))),
        "W_orthosymplectic": bool(is_orthosymplectic(W, 1e-8)),
        "R_orthogonal": bool(is_orthogonal(R, 1e-8)),
    }
    if checks["reconstruction"] > 1e-7 or not _commutes(R, d) or not checks["W_orthosymplectic"]:
        raise InconclusiveError(f"trivial factorization failed its checks ({note})", trace)
    return Witness(kind=WitnessKind.TRIVIAL, D=D, O=O, R=R, W=W, checks=checks,
                   trace=tuple(trace) + ({"stop": note},))


def _single_value_outlier(vals, tol):
    groups = buckets(vals, tol.degeneracy_rel_tol)
    if len(groups) == 1:
        return True, None
    if len(groups) == 2 and min(len(g) for g in groups) == 1:
        return True, next(g for g in groups if len(g) == 1)[0]
    return False, None


def thm1_violation_witness(lam, O, tol: Tolerances = DEFAULT_TOLERANCES, D=None,
                           max_rounds: int | None = None) -> Witness:
    """Attack ``O^T D O`` for a spectrum with a unique ``S - 1``-pure pairing.

    ``D`` defaults to :func:`thm1_diagonal`; any diagonal quantum CM with spectrum
    ``lam`` may be passed instead. Each round right-multiplies by an OS matrix from a
    coset lemma and evaluates the block determinant of the current column mode. A value
    below ``1 - witness_margin`` is returned as a violation; a value of 1 means the
    current columns can be split off, which is done with an orthogonal ``R`` commuting
    with ``D`` and the loop continues on the remaining modes.

    Raises
    ------
    PreconditionError
        If ``lam`` is outside the class or ``D`` does not match it.
    InconclusiveError
        On a determinant inside the tolerance band, an unexpected structure, or when
        ``max_rounds`` (default ``4 S``) is exceeded.
    """
    lam = spectrum(lam)
    if D is None:
        D = thm1_diagonal(lam, tol)
    else:
        pc = classify_pairing(lam, tol)
        if not pc.unique or pc.pure_count < pc.S - 1:
            raise PreconditionError("spectrum does not satisfy the S-1-pure unique pairing condition")
        D = np.diag(_diag_entries(D))
        if not np.allclose(np.sort(np.diag(D))[::-1], lam.values, rtol=1e-9, atol=0):
            raise PreconditionError("D does not carry the spectrum")
        if not is_quantum_cm(D, tol):
            raise PreconditionError("D is not a quantum CM")
    O = _require_orthogonal(O)
    n = D.shape[0]
    S = n // 2
    if O.shape[0] != n:
        raise ValidationError(f"O has shape {O.shape}, D has {n} rows")
    d = np.diag(D)
    info = _ModeInfo(d, tol)
    active = list(range(S))
    Ok, W_total, R_total = O.copy(), np.eye(n), np.eye(n)
    trace = []
    for rnd in range(max_rounds or 4 * S):
        idx, block = _restrict(Ok, active)
        if is_orthosymplectic(block, 1e-9):
            return _trivial(O, D, R_total, Ok, W_total, trace, "remaining block is OS")
        if _commutes(block, d[idx]):
            step = _embed(block.T, idx, n)
            return _trivial(O, D, step @ R_total, step @ Ok, W_total, trace, "remaining block commutes with D")
        flat, outlier = _single_value_outlier(d[idx], tol)
        if flat and outlier is not None:
            e = int(idx[np.argmin(np.abs(d[idx] - outlier))])
            W = fix_basis_ws(Ok, e, active)
            Op = Ok @ W
            step = _embed(Op[np.ix_(idx, idx)].T, idx, n)
            trace.append({"round": rnd, "lemma": "fix_basis", "coordinate": e})
            return _trivial(O, D, step @ R_total, step @ Op, W_total @ W, trace, "single outlier fixed")
        a = _column_mode(info, active)
        kind, rows = _plan_step(info, active, a, tol)
        if kind == "prop":
            W = proportional_cols_ws(Ok, a, rows, active)
        else:
            W = zero_rows_ws(Ok, a, rows, active)
        Op = Ok @ W
        det = block_det_expansion(D, Op, cols=(2 * a, 2 * a + 1))
        trace.append({"round": rnd, "lemma": kind, "rows": rows, "mode": a, "det": det, "active": list(active)})
        if det < 1.0 - tol.witness_margin:
            Wf = W_total @ W @ mode_swap(S, 0, a)
            OW = O @ Wf
            G = OW.T @ D @ OW
            direct = block_det_direct(G, 0)
            quantum = is_quantum_cm(0.5 * (G + G.T), tol)
            if direct >= 1.0 - tol.witness_margin or quantum:
                raise InconclusiveError("violation did not survive direct re-evaluation", trace, True)
            checks = {"det_expansion": det, "det_direct": direct, "Wf_orthosymplectic":
                      bool(is_orthosymplectic(Wf, 1e-8)), "uncertainty_violated": not quantum}
            return Witness(kind=WitnessKind.VIOLATION, D=D, O=O, Wf=Wf, det_value=direct,
                           checks=checks, trace=tuple(trace))
        if det < 1.0 - DET_EXACT_BAND:
            raise InconclusiveError(f"block determinant {det!r} is inside the tolerance band", trace, True)
        try:
            R, W2 = mode_removal(Op, a, modes=active)
            if not _commutes(R, d):
                raise StructuralError("template reflection does not commute with D")
            trace[-1]["removal"] = "template"
        except StructuralError:
            try:
                R, W2 = _eigenspace_removal(Op, a, active, d, tol)
            except StructuralError as exc:
                raise InconclusiveError(f"round {rnd}: {exc}", trace) from exc
            trace[-1]["removal"] = "eigenspace"
        Ok = R @ Op @ W2
        W_total = W_total @ W @ W2
        R_total = R @ R_total
        m = _removed_mode(Ok, active)
        if m is None:
            raise InconclusiveError(f"round {rnd}: removal left no identity block", trace)
        trace[-1]["removed"] = m
        active.remove(m)
        if len(active) == 1:
            idx, block = _restrict(Ok, active)
            if np.linalg.det(block) < 0:
                flip = np.eye(n)
                flip[idx[1], idx[1]] = -1.0
                Ok, R_total = flip @ Ok, flip @ R_total
            return _trivial(O, D, R_total, Ok, W_total, trace, "all modes removed")
    raise InconclusiveError(f"no certificate after {max_rounds or 4 * S} rounds", trace)


def trivial_witness(lam, O, tol: Tolerances = DEFAULT_TOLERANCES) -> Witness:
    """Factor ``O = R W`` for spectra where all but at most one eigenvalue coincide.

    ``W`` is OS with its column on the outlier coordinate equal to the matching row of
    ``O``; the remaining factor fixes that coordinate and commutes with ``D``.
    """
    lam = spectrum(lam)
    flat, outlier = _single_value_outlier(lam.values, tol)
    if not flat:
        raise PreconditionError("spectrum has more than one value off the common eigenvalue")
    D = diagonal_representative(lam)
    O = _require_orthogonal(O)
    n = D.shape[0]
    d = np.diag(D)
    if outlier is None:
        return _trivial(O, D, O.T, np.eye(n), np.eye(n), [], "fully degenerate")
    e = int(np.argmin(np.abs(d - outlier)))
    W = fix_basis_ws(O, e)
    Op = O @ W
    return _trivial(O, D, Op.T, np.eye(n), W, [{"lemma": "fix_basis", "coordinate": e}], "single outlier fixed")


# ---------------------------------------------------------------------------
# Alternative CM on a rotation curve

def _general_diagonal(modes) -> np.ndarray:
    return np.diag([v for m in modes for v in (m.small, m.big)])


def _pick_modes(lam, modes, tol):
    """Two impure modes whose 4-tuple has at most a two-fold degeneracy."""
    impure = [i for i, m in enumerate(modes) if not m.pure]
    rel = tol.degeneracy_rel_tol

    def ok(i, j):
        vals = (modes[i].small, modes[i].big, modes[j].small, modes[j].big)
        return max_multiplicity(vals, rel) <= 2

    if prop1_hypotheses(lam, tol):
        return impure[0], impure[1]
    if not cor1_hypotheses(lam, tol):
        raise PreconditionError("neither degeneracy hypothesis holds for this spectrum")
    flat = [(i, v) for i in impure for v in (modes[i].small, modes[i].big)]
    single = singleton_entries([v for _, v in flat], rel)
    owners = []
    for s in single[:2]:
        owners.append(next(i for i, v in flat if abs(v - s) <= rel * max(v, s)))
    if owners[0] != owners[1] and ok(*owners):
        return tuple(sorted(owners))
    for j in impure:
        if j != owners[0] and ok(owners[0], j):
            return tuple(sorted((owners[0], j)))
    raise StructuralError("no impure mode pair with an at most two-fold degenerate 4-tuple")


def _givens(n, x, y, angle):
    G = np.eye(n)
    c, s = math.cos(angle), math.sin(angle)
    G[x, x] = G[y, y] = c
    G[x, y], G[y, x] = -s, s
    return G


def prop1_alternative_cm(lam, tol: Tolerances = DEFAULT_TOLERANCES, scan_steps: int = 64) -> Witness:
    """Quantum CM with the eigenvalues of ``lam`` but different symplectic eigenvalues.

    Two impure modes ``A, B`` are selected, and a coordinate ``x`` of ``A`` and ``y`` of
    ``B`` such that exchanging their entries creates a pair with product below 1. The
    curve ``O(t)`` rotates the ``(x, y)`` plane by ``t pi/2``; the smallest symplectic
    eigenvalue of ``O(t)^T D O(t)`` on the two modes crosses 1 somewhere in ``(0, 1)``,
    which is located by bisection. ``t_p`` is found by stepping back from the crossing
    until the symplectic eigenvalues have moved by more than ``1e-6``.

    Raises
    ------
    PreconditionError
        If the pairing is not unique, the spectrum is ``S - 1``-pure, or neither
        degeneracy hypothesis holds.
    InconclusiveError
        If no admissible ``t_p`` is found even after refining the scan.
    """
    lam = spectrum(lam)
    pc = classify_pairing(lam, tol)
    if not pc.unique:
        raise PreconditionError("the spectrum does not have a unique pairing")
    if pc.pure_count >= pc.S - 1:
        raise PreconditionError("the spectrum satisfies the S-1-pure unique pairing condition")
    modes = general_modes(lam, tol)
    A, B = _pick_modes(lam, modes, tol)
    D = _general_diagonal(modes)
    d = np.diag(D)
    n = d.size
    sub = mode_coords([A, B])
    choice = None
    for x in (2 * A, 2 * A + 1):
        for y in (2 * B, 2 * B + 1):
            dd = d.copy()
            dd[[x, y]] = dd[[y, x]]
            prods = (dd[2 * A] * dd[2 * A + 1], dd[2 * B] * dd[2 * B + 1])
            if min(prods) < 1.0 - tol.pure_pair_tol and (choice is None or min(prods) < choice[0]):
                choice = (min(prods), x, y)
    if choice is None:
        raise StructuralError("no coordinate exchange produces a pair with product below 1")
    _, x, y = choice
    nu0 = np.array(symplectic_eigenvalues(D, tol))

    def gamma(t):
        G = _givens(n, x, y, t * math.pi / 2)
        M = G.T @ D @ G
        return 0.5 * (M + M.T)

    def low(t):
        return symplectic_eigenvalues(gamma(t)[np.ix_(sub, sub)], tol)[-1]

    lo, hi = 0.0, 1.0
    if not (low(lo) > 1.0 and low(hi) < 1.0):
        raise StructuralError("rotation curve does not cross the uncertainty boundary")
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        if low(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    crossing = lo
    trace = [{"modes": [A, B], "coordinates": [x, y], "crossing": crossing}]
    for steps in (scan_steps, 8 * scan_steps):
        h = crossing / steps
        for k in range(1, steps + 1):
            t = crossing - k * h
            G = gamma(t)
            if not is_quantum_cm(G, tol):
                continue
            nu = np.array(symplectic_eigenvalues(G, tol))
            shift = float(np.max(np.abs(nu - nu0)))
            if shift > PARAM_SHIFT:
                eig = np.sort(np.linalg.eigvalsh(G))[::-1]
                checks = {
                    "eigenvalue_residual": float(np.max(np.abs(eig - np.array(lam.values)))),
                    "quantum": True,
                    "min_symplectic_eigenvalue": float(nu[-1]),
                    "symplectic_shift": shift,
                }
                return Witness(kind=WitnessKind.ALTERNATIVE, D=D, gamma_prime=G, params_prime=mode_params(G, tol),
                               t_p=float(t), checks=checks, trace=tuple(trace))
        trace.append({"scan_steps": steps, "result": "no admissible point"})
    raise InconclusiveError("no point before the crossing moved the symplectic eigenvalues", trace)
