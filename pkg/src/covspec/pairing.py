"""Eigenspectrum-level machinery: the pairing graph, its perfect matchings and purity.

Eigenvalues ``l_i, l_j`` may be matched when ``l_i l_j >= 1``; a matched pair is *pure*
when the product is exactly 1. Matchings are compared as multisets of value pairs, so
permutations among degenerate eigenvalues do not produce new matchings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .decomp import ModeParams, sorted_pairs
from .errors import AmbiguousPairingError, NotQuantumSpectrumError, ValidationError

MAX_MODES = 10
SENSITIVITY_FACTOR = 100.0


@dataclass(frozen=True)
class Spectrum:
    """``2S`` positive eigenvalues, sorted non-ascending."""

    values: tuple

    def __post_init__(self):
        vals = [float(v) for v in self.values]
        if len(vals) == 0 or len(vals) % 2:
            raise ValidationError(f"spectrum needs an even, nonzero number of values, got {len(vals)}")
        if not all(math.isfinite(v) and v > 0 for v in vals):
            raise ValidationError("spectrum values must be finite and positive")
        object.__setattr__(self, "values", tuple(sorted(vals, reverse=True)))

    @property
    def S(self) -> int:
        return len(self.values) // 2

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def spectrum(values) -> Spectrum:
    if isinstance(values, Spectrum):
        return values
    if isinstance(values, dict):
        values = values.get("values", ())
    return Spectrum(tuple(values))


def eigenspectrum(gamma) -> Spectrum:
    """Spectrum of a symmetric matrix."""
    return Spectrum(tuple(np.linalg.eigvalsh(np.asarray(gamma, dtype=float))))


def diagonal_representative(lam) -> np.ndarray:
    """Diagonal CM whose ``j``-th mode holds ``(l_j, l_{2S+1-j})``."""
    vals = spectrum(lam).values
    n = len(vals)
    d = np.empty(n)
    d[0::2] = vals[: n // 2]
    d[1::2] = vals[::-1][: n // 2]
    return np.diag(d)


def buckets(values, rel_tol: float) -> list:
    """Group descending values into runs whose consecutive relative gaps are <= rel_tol."""
    groups = []
    for v in sorted(values, reverse=True):
        if groups and groups[-1][-1] - v <= rel_tol * groups[-1][-1]:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


def _edge(a: float, b: float, tol: Tolerances) -> bool:
    return a * b >= 1.0 - tol.pure_pair_tol


def _pure(a: float, b: float, tol: Tolerances) -> bool:
    return abs(a * b - 1.0) <= tol.pure_pair_tol


def _bucket_matchings(reps, counts, tol):
    """Yield bucket-index pair lists forming perfect matchings (a multiset may repeat)."""
    first = next((i for i, c in enumerate(counts) if c), None)
    if first is None:
        yield ()
        return
    counts[first] -= 1
    for j in range(first, len(reps)):
        if counts[j] == 0 or not _edge(reps[first], reps[j], tol):
            continue
        counts[j] -= 1
        for rest in _bucket_matchings(reps, counts, tol):
            yield ((first, j),) + rest
        counts[j] += 1
    counts[first] += 1


def _check_size(lam: Spectrum):
    if lam.S > MAX_MODES:
        raise ValidationError(f"exhaustive matching enumeration is capped at S={MAX_MODES}, got S={lam.S}")


def _matchings_by_bucket(lam: Spectrum, tol: Tolerances):
    _check_size(lam)
    groups = buckets(lam.values, tol.degeneracy_rel_tol)
    reps = [g[0] for g in groups]
    found = list(dict.fromkeys(
        tuple(sorted(m)) for m in _bucket_matchings(reps, [len(g) for g in groups], tol)))
    if not found:
        raise NotQuantumSpectrumError(
            "the pairing graph has no perfect matching: no quantum covariance matrix has this spectrum")
    return groups, found


def valid_matchings(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Distinct perfect matchings of the pairing graph, each a sorted tuple of
    ``(larger, smaller)`` value pairs using the leading value of each degeneracy bucket."""
    groups, found = _matchings_by_bucket(spectrum(lam), tol)
    reps = [g[0] for g in groups]
    return [tuple(sorted(((reps[i], reps[j]) for i, j in m), reverse=True)) for m in found]


def matched_pairs(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Actual-value pairs ``(big, small)`` of the unique matching.

    Raises :class:`AmbiguousPairingError` when the matching is not unique.
    """
    lam = spectrum(lam)
    groups, found = _matchings_by_bucket(lam, tol)
    if len(found) > 1:
        reps = [g[0] for g in groups]
        sets = [_params_of_pairs([(reps[i], reps[j]) for i, j in m]) for m in found]
        raise AmbiguousPairingError(f"spectrum admits {len(found)} distinct pairings", sets)
    pools = [list(g) for g in groups]
    pairs = []
    for i, j in found[0]:
        a = pools[i].pop(0)
        b = pools[j].pop(0)
        pairs.append((max(a, b), min(a, b)))
    return pairs


def _params_of_pairs(pairs) -> ModeParams:
    return ModeParams(sorted_pairs((math.sqrt(a * b), 0.25 * math.log(a / b)) for a, b in pairs))


def mode_params_of_diag(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> ModeParams:
    """Closed-form parameters of the diagonal representative:
    ``nu = sqrt(l_j l_{2S+1-j})`` and ``r = ln(l_j / l_{2S+1-j}) / 4``."""
    lam = spectrum(lam)
    matched_pairs(lam, tol)
    vals = lam.values
    n = len(vals)
    return _params_of_pairs([(vals[j], vals[n - 1 - j]) for j in range(n // 2)])


@dataclass(frozen=True)
class Mode:
    """One matched pair viewed as a mode of a diagonal CM ``diag(small, big)``."""

    small: float
    big: float
    pure: bool

    @property
    def nu(self) -> float:
        return math.sqrt(self.small * self.big)

    @property
    def r(self) -> float:
        return 0.25 * math.log(self.big / self.small)


def modes_of(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Modes of the unique matching, sorted by ``(nu desc, r desc)``."""
    pairs = matched_pairs(lam, tol)
    modes = [Mode(small=b, big=a, pure=_pure(a, b, tol)) for a, b in pairs]
    return sorted(modes, key=lambda m: (m.pure, 0.0 if m.pure else -m.nu, -m.r))


@dataclass(frozen=True)
class PairingClass:
    """Result of :func:`classify_pairing`.

    ``pure_count`` and ``case`` are ``None`` unless the pairing is unique; ``case`` is
    one of ``"1"``, ``"2"``, ``"3"`` and is set iff ``pure_count >= S - 1``.
    """

    S: int
    matchings: tuple
    pure_count: int | None = None
    case: str | None = None
    tolerance_sensitive: bool = False
    modes: tuple = field(default=(), repr=False)

    @property
    def unique(self) -> bool:
        return len(self.matchings) == 1


def thm1_case(modes, tol: Tolerances = DEFAULT_TOLERANCES) -> str | None:
    """Case label for a unique matching with at least ``S - 1`` pure pairs."""
    impure = [m for m in modes if not m.pure]
    if not impure:
        return "1"
    if len(impure) > 1:
        return None
    lead = impure[0]
    pure = [m for m in modes if m.pure]
    if not pure:
        return "2"
    least = min(pure, key=lambda m: m.r)
    # nu e^{2 r1 - 2 r2} and nu e^{-2 r1 + 2 r2} as pair products
    if lead.big * least.small <= 1.0 + tol.pure_pair_tol:
        return "2"
    if lead.small * least.big <= 1.0 + tol.pure_pair_tol:
        return "3"
    return None


def _near_threshold(x: float, band: float) -> bool:
    return band / SENSITIVITY_FACTOR < abs(x) <= band * SENSITIVITY_FACTOR


def tolerance_sensitive(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True when some pair product or eigenvalue gap sits close to a tolerance threshold,
    i.e. the verdict could flip if the tolerances moved by two orders of magnitude."""
    v = np.asarray(spectrum(lam).values)
    prods = np.outer(v, v)[np.triu_indices(len(v), 1)] - 1.0
    if any(_near_threshold(p, tol.pure_pair_tol) for p in prods):
        return True
    gaps = (v[:-1] - v[1:]) / v[:-1]
    return any(_near_threshold(g, tol.degeneracy_rel_tol) for g in gaps)


def classify_pairing(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> PairingClass:
    lam = spectrum(lam)
    found = valid_matchings(lam, tol)
    sensitive = tolerance_sensitive(lam, tol)
    if len(found) > 1:
        return PairingClass(S=lam.S, matchings=tuple(found), tolerance_sensitive=sensitive)
    modes = modes_of(lam, tol)
    pure_count = sum(m.pure for m in modes)
    case = thm1_case(modes, tol) if pure_count >= lam.S - 1 else None
    return PairingClass(S=lam.S, matchings=tuple(found), pure_count=pure_count, case=case,
                        tolerance_sensitive=sensitive, modes=tuple(modes))
