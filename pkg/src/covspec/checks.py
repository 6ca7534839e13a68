"""Property suites run by ``covspec verify`` and by the acceptance tests.

Each suite draws its inputs from a fixed seed, checks the property at the stated
tolerance and returns a :class:`CheckResult`. ``scale`` shrinks the draw counts
for quick runs; the full suites use ``scale=1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classify import Membership, Reason, classify_spectrum
from .config import DEFAULT_TOLERANCES, Tolerances
from .decomp import euler, mode_params, symplectic_eigenvalues, williamson
from .errors import ConditioningError, InconclusiveError, SamplingExhausted
from .linalg import is_orthosymplectic, is_quantum_cm, symplectic_form, uncertainty_min_eigenvalue
from .pairing import classify_pairing, diagonal_representative, mode_params_of_diag, spectrum
from .sampling import (ClassTarget, SampleConfig, haar_orthogonal, make_rng, random_os, random_spectrum,
                       random_symplectic)
from .witness import (WitnessKind, block_det_direct, block_det_expansion, cauchy_binet_weights, fix_basis_ws,
                      mode_removal, prop1_alternative_cm, proportional_cols_ws, thm1_violation_witness,
                      zero_rows_ws)


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        info = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title} ({info})"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _count(n, scale):
    return max(1, int(round(n * scale)))


def _cm_draw(rng, S, nu_lo=0.3, nu_hi=3.0):
    """``S_0 T_0 S_0^T`` with thermal values on both sides of 1."""
    nu = rng.uniform(nu_lo, nu_hi, S)
    A = random_symplectic(S, rng, r_max=1.0)
    return A @ np.diag(np.repeat(nu, 2)) @ A.T, nu


def uncertainty_equivalence(draws=1000, seed=1, tol: Tolerances = DEFAULT_TOLERANCES) -> CheckResult:
    """Hermitian test versus ``min nu >= 1`` on random positive-definite matrices."""
    rng = make_rng(seed)
    hard = soft = quantum = 0
    for k in range(draws):
        S = int(rng.integers(1, 5))
        if k % 2:
            G, _ = _cm_draw(rng, S)
        else:
            X = rng.standard_normal((2 * S, 2 * S))
            G = X @ X.T + rng.uniform(0.05, 2.0) * np.eye(2 * S)
        G = 0.5 * (G + G.T)
        lam_min = uncertainty_min_eigenvalue(G, tol)
        herm = lam_min >= -tol.eig_tol
        sympl = symplectic_eigenvalues(G, tol)[-1] >= 1.0
        quantum += herm
        if herm != sympl:
            if abs(lam_min) <= tol.eig_tol:
                soft += 1
            else:
                hard += 1
    return CheckResult(1, "uncertainty test equivalence", hard == 0,
                       {"draws": draws, "quantum": quantum, "band_disagreements": soft, "hard_disagreements": hard})


def decomposition_round_trips(draws=500, seed=2, tol: Tolerances = DEFAULT_TOLERANCES) -> CheckResult:
    """Williamson and Euler reconstructions and construct-then-recover checks."""
    rng = make_rng(seed)
    worst = {"williamson_rel": 0.0, "A_symplectic": 0.0, "nu_recovery": 0.0,
             "euler_rel": 0.0, "KL_os": 0.0, "r_recovery": 0.0}
    for _ in range(draws):
        S = int(rng.integers(1, 5))
        Om = symplectic_form(S)
        nu = rng.uniform(1.0, 3.0, S)
        S0 = random_symplectic(S, rng)
        G = S0 @ np.diag(np.repeat(nu, 2)) @ S0.T
        G = 0.5 * (G + G.T)
        wd = williamson(G, tol)
        worst["williamson_rel"] = max(worst["williamson_rel"],
                                      np.linalg.norm(wd.A @ wd.T @ wd.A.T - G) / np.linalg.norm(G))
        worst["A_symplectic"] = max(worst["A_symplectic"], np.max(np.abs(wd.A.T @ Om @ wd.A - Om)))
        worst["nu_recovery"] = max(worst["nu_recovery"], np.max(np.abs(np.sort(wd.nu) - np.sort(nu))))

        r = rng.uniform(0.0, 1.5, S)
        A = random_os(S, rng) @ np.diag(np.exp(np.repeat(r, 2) * np.tile([1.0, -1.0], S))) @ random_os(S, rng)
        ed = euler(A, tol)
        worst["euler_rel"] = max(worst["euler_rel"], np.linalg.norm(ed.K @ ed.Q @ ed.L - A) / np.linalg.norm(A))
        os_res = max(np.max(np.abs(M.T @ M - np.eye(2 * S))) + np.max(np.abs(M.T @ Om @ M - Om))
                     for M in (ed.K, ed.L))
        worst["KL_os"] = max(worst["KL_os"], os_res)
        worst["r_recovery"] = max(worst["r_recovery"], np.max(np.abs(np.sort(ed.r) - np.sort(r))))
    passed = (worst["williamson_rel"] <= 1e-8 and worst["A_symplectic"] <= 1e-8 and worst["nu_recovery"] <= 1e-7
              and worst["euler_rel"] <= 1e-8 and worst["KL_os"] <= 1e-8 and worst["r_recovery"] <= 1e-7)
    return CheckResult(2, "decomposition round trips", passed, {"draws": draws, **worst})


def cauchy_binet_identity(draws=1000, seed=3) -> CheckResult:
    """Weights of every conjugate column pair sum to 1; expansion matches the direct determinant."""
    rng = make_rng(seed)
    sum_err = det_err = 0.0
    for _ in range(draws):
        S = int(rng.integers(1, 5))
        O = haar_orthogonal(2 * S, rng)
        d = rng.uniform(0.1, 10.0, 2 * S)
        G = O.T @ np.diag(d) @ O
        for m in range(S):
            cols = (2 * m, 2 * m + 1)
            sum_err = max(sum_err, abs(sum(cauchy_binet_weights(O, cols).values()) - 1.0))
            det_err = max(det_err, abs(block_det_expansion(d, O, cols) - block_det_direct(G, m)))
    return CheckResult(3, "Cauchy-Binet weights and block determinant", sum_err <= 1e-10 and det_err <= 1e-9,
                       {"draws": draws, "weight_sum_err": sum_err, "det_err": det_err})


def _os_residual(W):
    n = W.shape[0]
    Om = symplectic_form(n // 2)
    return max(np.max(np.abs(W.T @ W - np.eye(n))), np.max(np.abs(W.T @ Om @ W - Om)))


def lemma_suites(draws=200, seed=4) -> CheckResult:
    """Postconditions of the four coset constructions on random orthogonal inputs."""
    rng = make_rng(seed)
    worst = {"proportional": 0.0, "zero_rows": 0.0, "fix_basis": 0.0, "removal": 0.0, "os": 0.0}
    skipped = 0
    for _ in range(draws):
        S = int(rng.integers(1, 5))
        n = 2 * S
        O = haar_orthogonal(n, rng)
        i = int(rng.integers(S))

        j = int(rng.integers(n))
        W = proportional_cols_ws(O, i, j)
        OW = O @ W
        rows = [l for l in range(n) if l != j]
        worst["proportional"] = max(worst["proportional"],
                                    np.max(np.abs(OW[rows, 2 * i] - OW[rows, 2 * i + 1]), initial=0.0))
        worst["os"] = max(worst["os"], _os_residual(W))

        R, W2 = mode_removal(OW, i)
        Ok = R @ OW @ W2
        blocks = [np.max(np.abs(Ok[2 * m:2 * m + 2, :] - np.eye(n)[2 * m:2 * m + 2, :]))
                  + np.max(np.abs(Ok[:, 2 * m:2 * m + 2] - np.eye(n)[:, 2 * m:2 * m + 2])) for m in range(S)]
        worst["removal"] = max(worst["removal"], min(blocks), np.max(np.abs(R.T @ R - np.eye(n))))
        worst["os"] = max(worst["os"], _os_residual(W2))

        zrows = sorted(int(x) for x in rng.choice(n, size=S - 1, replace=False))
        try:
            W = zero_rows_ws(O, i, zrows)
        except ConditioningError:
            skipped += 1
        else:
            worst["zero_rows"] = max(worst["zero_rows"],
                                     np.max(np.abs((O @ W)[np.ix_(zrows, [2 * i, 2 * i + 1])]), initial=0.0))
            worst["os"] = max(worst["os"], _os_residual(W))

        e = int(rng.integers(n))
        W = fix_basis_ws(O, e)
        OW = O @ W
        unit = np.eye(n)[e]
        worst["fix_basis"] = max(worst["fix_basis"], np.max(np.abs(OW[:, e] - unit)), np.max(np.abs(OW[e, :] - unit)))
        worst["os"] = max(worst["os"], _os_residual(W))
    passed = all(v <= 1e-8 for v in worst.values()) and skipped == 0
    return CheckResult(4, "coset lemma postconditions", passed, {"draws": draws, **worst, "rank_ambiguous": skipped})


_CASES = (ClassTarget.CASE1, ClassTarget.CASE2, ClassTarget.CASE3)


def _thm1_spectra(count, seed):
    out = []
    for k in range(count):
        cfg = SampleConfig(seed=seed, S=2 + k % 3, class_target=_CASES[(k // 3) % 3])
        out.append(random_spectrum(cfg, stream=k))
    return out


def thm1_monte_carlo(n_spectra=50, n_conj=100, seed=5, tol: Tolerances = DEFAULT_TOLERANCES) -> CheckResult:
    """Haar conjugates of ``S - 1``-pure diagonal CMs that are quantum keep the diagonal's parameters."""
    accepted = counter = 0
    for k, lam in enumerate(_thm1_spectra(n_spectra, seed)):
        D = diagonal_representative(lam)
        ref = mode_params_of_diag(lam, tol)
        rng = make_rng(seed + 1, stream=k)
        for _ in range(n_conj):
            O = haar_orthogonal(D.shape[0], rng)
            G = O.T @ D @ O
            G = 0.5 * (G + G.T)
            if is_quantum_cm(G, tol):
                accepted += 1
                if not mode_params(G, tol).close_to(ref, 1e-6):
                    counter += 1
    return CheckResult(5, "Haar conjugates of S-1-pure spectra", counter == 0,
                       {"spectra": n_spectra, "conjugates": n_spectra * n_conj, "quantum_accepted": accepted,
                        "counterexamples": counter})


def thm1_constructive(n_spectra=50, n_attacks=20, seed=6, tol: Tolerances = DEFAULT_TOLERANCES) -> CheckResult:
    """Violation or trivial factorization for Haar orthogonal attacks on ``S - 1``-pure spectra."""
    counts = {"violation": 0, "trivial": 0, "inconclusive": 0, "inconclusive_unflagged": 0, "bad_certificate": 0}
    for k, lam in enumerate(_thm1_spectra(n_spectra, seed)):
        rng = make_rng(seed + 1, stream=k)
        for _ in range(n_attacks):
            O = haar_orthogonal(2 * lam.S, rng)
            if is_orthosymplectic(O, 1e-9):
                continue
            try:
                w = thm1_violation_witness(lam, O, tol)
            except InconclusiveError as exc:
                counts["inconclusive"] += 1
                counts["inconclusive_unflagged"] += not exc.tolerance_sensitive
                continue
            if w.kind is WitnessKind.VIOLATION:
                G = (O @ w.Wf).T @ w.D @ (O @ w.Wf)
                ok = block_det_direct(G, 0) < 1 - tol.witness_margin and not is_quantum_cm(0.5 * (G + G.T), tol)
            else:
                ok = (np.linalg.norm(w.R @ w.W - O) <= 1e-7 and is_orthosymplectic(w.W, 1e-8)
                      and np.max(np.abs(w.R @ w.D @ w.R.T - w.D)) <= 1e-7)
            counts[w.kind.value] += 1
            counts["bad_certificate"] += not ok
    total = n_spectra * n_attacks
    passed = (counts["bad_certificate"] == 0 and counts["inconclusive"] < 0.02 * total
              and counts["inconclusive_unflagged"] == 0)
    return CheckResult(6, "constructive witnesses for S-1-pure spectra", passed, {"attacks": total, **counts})


def _cor1_spectra(count, rng, tol):
    out = []
    while len(out) < count:
        a = rng.uniform(1.1, 3.0)
        nu, r = rng.uniform(1.1, 3.0), rng.uniform(0.1, 1.5)
        vals = [a] * 4 + [nu * math.exp(2 * r), nu * math.exp(-2 * r)]
        if rng.uniform() < 0.5:
            sq = math.exp(2 * rng.uniform(1.0, 1.5))
            vals += [sq, 1.0 / sq]
        if classify_spectrum(vals, tol).reason is Reason.COR1_APPLIES:
            out.append(spectrum(vals))
    return out


def prop1_alternatives(n_spectra=50, seed=7, tol: Tolerances = DEFAULT_TOLERANCES) -> CheckResult:
    """Alternative quantum CMs for spectra meeting either degeneracy hypothesis."""
    n_cor = max(1, n_spectra // 5)
    spectra = [random_spectrum(SampleConfig(seed=seed, S=2 + k % 3, class_target=ClassTarget.PROP1), stream=k)
               for k in range(n_spectra - n_cor)]
    spectra += _cor1_spectra(n_cor, make_rng(seed + 1), tol)
    ok = 0
    worst_eig = 0.0
    min_shift = math.inf
    for lam in spectra:
        try:
            w = prop1_alternative_cm(lam, tol)
        except (InconclusiveError, ConditioningError):
            continue
        G = w.gamma_prime
        eig_err = float(np.max(np.abs(np.sort(np.linalg.eigvalsh(G))[::-1] - np.array(lam.values))))
        shift = float(np.max(np.abs(np.array(symplectic_eigenvalues(G, tol))
                                    - np.array(symplectic_eigenvalues(w.D, tol)))))
        worst_eig = max(worst_eig, eig_err)
        min_shift = min(min_shift, shift)
        ok += eig_err <= 1e-7 and is_quantum_cm(G, tol) and shift > 1e-6
    return CheckResult(7, "alternative CMs under the degeneracy hypotheses", ok == len(spectra),
                       {"spectra": len(spectra), "succeeded": ok, "max_eig_err": worst_eig, "min_shift": min_shift})


def _oracle(values, ptol=1e-9, rel=1e-9):
    """Exhaustive matching over indices, deduplicated by value-class pairs."""
    vals = list(values)
    order = sorted(range(len(vals)), key=lambda i: -vals[i])
    cls = {}
    c = 0
    for a, b in zip(order, order[1:]):
        cls[a] = c
        if vals[a] - vals[b] > rel * vals[a]:
            c += 1
    cls[order[-1]] = c
    found = {}

    def rec(left, acc):
        if not left:
            key = tuple(sorted(tuple(sorted((cls[i], cls[j]))) for i, j in acc))
            found.setdefault(key, list(acc))
            return
        i = left[0]
        for j in left[1:]:
            if vals[i] * vals[j] >= 1 - ptol:
                rec([x for x in left if x not in (i, j)], acc + [(i, j)])

    rec(list(range(len(vals))), [])
    matchings = list(found.values())
    pure = None
    if len(matchings) == 1:
        pure = sum(abs(vals[i] * vals[j] - 1) <= ptol for i, j in matchings[0])
    return len(matchings), pure


def _mixed_spectrum(rng, k):
    S = int(rng.integers(1, 5))
    targets = list(ClassTarget)
    pick = k % (len(targets) + 1)
    if pick < len(targets):
        t = targets[pick]
        if not (t is ClassTarget.RESIDUAL and S < 3) and not (t is ClassTarget.PROP1 and S < 2):
            try:
                return random_spectrum(SampleConfig(seed=int(rng.integers(2**31)), S=S, class_target=t)).values
            except SamplingExhausted:
                pass
    return tuple(np.exp(rng.uniform(-2.0, 2.0, 2 * S)))


def classifier_vs_oracle(draws=500, seed=8, tol: Tolerances = DEFAULT_TOLERANCES) -> CheckResult:
    """Uniqueness and pure counts agree with exhaustive enumeration; ``P1`` membership implies ``P2``."""
    rng = make_rng(seed)
    mismatch = implication = non_quantum = 0
    for k in range(draws):
        vals = _mixed_spectrum(rng, k)
        n, pure = _oracle(vals, tol.pure_pair_tol, tol.degeneracy_rel_tol)
        if n == 0:
            non_quantum += 1
            continue
        pc = classify_pairing(vals, tol)
        if (len(pc.matchings) > 1) != (n > 1) or (n == 1 and pc.pure_count != pure):
            mismatch += 1
        v = classify_spectrum(vals, tol)
        if v.p1 is Membership.IN and v.p2 is not Membership.IN:
            implication += 1
    return CheckResult(8, "classifier versus exhaustive oracle", mismatch == 0 and implication == 0,
                       {"draws": draws, "no_matching": non_quantum, "mismatches": mismatch,
                        "p1_without_p2": implication})


def worked_instances(tol: Tolerances = DEFAULT_TOLERANCES) -> CheckResult:
    """The shared-value two-mode example, the single-outlier pattern and the fully degenerate spectrum."""
    nu1, nu2 = 2.0, 1.5
    r2 = 0.5 * math.log(nu1 / nu2)
    shared = [nu1, nu1, nu2 * math.exp(2 * r2), nu2 * math.exp(-2 * r2)]
    outlier = [2.5 ** 2] + [1.0] * 5
    degenerate = [1.7] * 6
    got = {name: classify_spectrum(vals, tol) for name, vals in
           (("shared", shared), ("outlier", outlier), ("degenerate", degenerate))}
    ok = (got["shared"].p1 is Membership.IN and got["shared"].p2 is Membership.IN
          and got["outlier"].reason is Reason.TRIVIAL_ONS_ONLY
          and got["degenerate"].p1 is Membership.IN and got["degenerate"].p2 is Membership.IN)
    return CheckResult(9, "worked instances", ok, {k: f"{v.p1.value}/{v.p2.value}:{v.reason.value}"
                                                    for k, v in got.items()})


def run_all(scale: float = 1.0, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """All nine suites; ``scale < 1`` shrinks every draw count proportionally."""
    return [
        uncertainty_equivalence(_count(1000, scale), tol=tol),
        decomposition_round_trips(_count(500, scale), tol=tol),
        cauchy_binet_identity(_count(1000, scale)),
        lemma_suites(_count(200, scale)),
        thm1_monte_carlo(_count(50, scale), _count(100, scale), tol=tol),
        thm1_constructive(_count(50, scale), _count(20, scale), tol=tol),
        prop1_alternatives(_count(50, scale), tol=tol),
        classifier_vs_oracle(_count(500, scale), tol=tol),
        worked_instances(tol),
    ]

