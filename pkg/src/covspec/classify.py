"""Membership verdicts for the two spectrum classes.

``P1`` holds spectra whose quantum CMs form a single orthogonal-symplectic orbit,
``P2`` those whose quantum CMs all share thermal and squeezing parameters.
Every verdict is one of ``in``, ``not_in`` or ``undetermined``; the last is
returned as is and never rounded to a definite answer.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import PreconditionError
from .pairing import Mode, _pure, buckets, classify_pairing, matched_pairs, spectrum


class Membership(str, enum.Enum):
    IN = "in"
    NOT_IN = "not_in"
    UNDETERMINED = "undetermined"


class Reason(str, enum.Enum):
    S_MINUS_1_PURE = "SMinus1Pure"
    ALL_DEGENERATE_ABOVE_ONE = "AllDegenerateAboveOne"
    TRIVIAL_ONS_ONLY = "TrivialOnsOnly"
    NOT_UNIQUE_PAIRING = "NotUniquePairing"
    PROP1_APPLIES = "Prop1Applies"
    COR1_APPLIES = "Cor1Applies"
    RESIDUAL = "Residual"


# which witness construction backs a verdict, if any
_HINTS = {
    Reason.S_MINUS_1_PURE: "thm1",
    Reason.TRIVIAL_ONS_ONLY: "trivial",
    Reason.ALL_DEGENERATE_ABOVE_ONE: "trivial",
    Reason.PROP1_APPLIES: "prop1",
    Reason.COR1_APPLIES: "prop1",
}


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`classify_spectrum`.

    Invariants: ``p1 == IN`` implies ``p2 == IN``; a non-unique pairing gives
    ``NOT_IN`` on both.
    """

    p1: Membership
    p2: Membership
    reason: Reason
    case: str | None = None
    tolerance_sensitive: bool = False
    witness_hint: str | None = None

    def __post_init__(self):
        if self.p1 is Membership.IN and self.p2 is not Membership.IN:
            raise ValueError("a spectrum in P1 must also be in P2")
        if self.reason is Reason.NOT_UNIQUE_PAIRING and (self.p1, self.p2) != (Membership.NOT_IN,) * 2:
            raise ValueError("a non-unique pairing rules out both classes")


def general_modes(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Modes of the unique matching sorted by ``(nu desc, r desc)``.

    This is the layout ``diag[nu_1 e^{-2 r_1}, nu_1 e^{2 r_1}, ...]`` with
    ``nu_1 >= nu_2 >= ...`` used for spectra outside the ``S - 1``-pure class.
    """

    pairs = matched_pairs(lam, tol)
    modes = [Mode(small=b, big=a, pure=_pure(a, b, tol)) for a, b in pairs]
    return sorted(modes, key=lambda m: (-m.nu, -m.r))


def mode_tuple(modes) -> tuple:
    """Flatten modes into ``(small_1, big_1, small_2, big_2, ...)``."""
    return tuple(v for m in modes for v in (m.small, m.big))


def max_multiplicity(values, rel_tol: float) -> int:
    """Largest number of entries that coincide up to ``rel_tol``."""
    return max((len(g) for g in buckets(values, rel_tol)), default=0)


def singleton_entries(values, rel_tol: float) -> list:
    """Entries that differ from every other entry of ``values``."""
    return [g[0] for g in buckets(values, rel_tol) if len(g) == 1]


def _impure_modes(lam, tol):
    pc = classify_pairing(lam, tol)
    if not pc.unique:
        raise PreconditionError("the spectrum does not have a unique pairing")
    if pc.pure_count >= pc.S - 1:
        raise PreconditionError("the spectrum already satisfies the S-1-pure unique pairing condition")
    return [m for m in general_modes(lam, tol) if not m.pure]


def prop1_tuple(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple:
    """The ordered 4-tuple built from the two modes with the largest thermal values."""
    modes = _impure_modes(lam, tol)
    return mode_tuple(modes[:2])


def prop1_hypotheses(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff the leading 4-tuple has no value repeated three or more times."""
    return max_multiplicity(prop1_tuple(lam, tol), tol.degeneracy_rel_tol) <= 2


def cor1_tuple(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple:
    """The ordered ``2 zeta``-tuple of all modes with thermal value above 1."""
    return mode_tuple(_impure_modes(lam, tol))


def cor1_hypotheses(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff at least two entries of the ``2 zeta``-tuple differ from all the others."""
    return len(singleton_entries(cor1_tuple(lam, tol), tol.degeneracy_rel_tol)) >= 2


def _same(a: float, b: float, tol: Tolerances) -> bool:
    return abs(a - b) <= tol.degeneracy_rel_tol * max(abs(a), abs(b))


def _one_outlier(lam, tol):
    """``(common, outlier)`` when all but one value coincide, else ``None``."""
    groups = buckets(spectrum(lam).values, tol.degeneracy_rel_tol)
    sizes = Counter(len(g) for g in groups)
    if len(groups) == 2 and sizes.get(1) == 1:
        common = next(g for g in groups if len(g) > 1)[0]
        outlier = next(g for g in groups if len(g) == 1)[0]
        return common, outlier
    return None


def is_unit_outlier_pattern(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Spectrum ``(nu^2, 1, ..., 1)`` with ``nu > 1``: one squeezed thermal mode, the rest vacuum."""
    found = _one_outlier(lam, tol)
    return found is not None and _same(found[0], 1.0, tol) and found[1] > 1.0


def is_two_mode_shared_pattern(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Two-mode spectrum ``(a, a, a, b)`` with ``1/a < b < a`` and ``a > 1``.

    Its diagonal representative is ``diag[nu_1, nu_1, nu_2 e^{2 r_2}, nu_2 e^{-2 r_2}]`` with
    ``nu_2 e^{2 r_2} = nu_1``, ``r_2 > 0`` and both thermal values above 1.
    """
    lam = spectrum(lam)
    found = _one_outlier(lam, tol)
    if lam.S != 2 or found is None:
        return False
    a, b = found
    return a > 1.0 and b < a and a * b > 1.0 + tol.pure_pair_tol


def classify_spectrum(lam, tol: Tolerances = DEFAULT_TOLERANCES) -> Verdict:
    """Decide membership of ``lam`` in ``P1`` and ``P2``.

    Branches are tried in order and the first that applies wins:

    (a) several pairings: not in either class;
    (b) unique pairing with at least ``S - 1`` pure pairs: in both classes;
    (c) unique pairing whose impure part has two singleton entries: in neither;
    (d) the proven degenerate patterns: in both classes;
    (e) anything else: undetermined.

    Raises
    ------
    NotQuantumSpectrumError
        If the spectrum has no valid pairing at all.
    """
    lam = spectrum(lam)
    pc = classify_pairing(lam, tol)
    flag = pc.tolerance_sensitive

    def verdict(p, reason, case=None):
        p2 = Membership.IN if p is Membership.IN else p
        return Verdict(p1=p, p2=p2, reason=reason, case=case, tolerance_sensitive=flag,
                       witness_hint=_HINTS.get(reason))

    if not pc.unique:
        return verdict(Membership.NOT_IN, Reason.NOT_UNIQUE_PAIRING)
    if pc.pure_count >= lam.S - 1:
        reason = Reason.TRIVIAL_ONS_ONLY if is_unit_outlier_pattern(lam, tol) else Reason.S_MINUS_1_PURE
        return verdict(Membership.IN, reason, pc.case)
    if prop1_hypotheses(lam, tol):
        return verdict(Membership.NOT_IN, Reason.PROP1_APPLIES)
    if cor1_hypotheses(lam, tol):
        return verdict(Membership.NOT_IN, Reason.COR1_APPLIES)
    if pc.pure_count == 0:
        if max_multiplicity(lam.values, tol.degeneracy_rel_tol) == len(lam) and lam.values[0] > 1.0:
            return verdict(Membership.IN, Reason.ALL_DEGENERATE_ABOVE_ONE)
        if is_two_mode_shared_pattern(lam, tol):
            return verdict(Membership.IN, Reason.TRIVIAL_ONS_ONLY)
    return verdict(Membership.UNDETERMINED, Reason.RESIDUAL)
