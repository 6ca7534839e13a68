"""Eigenspectrum classification of Gaussian covariance matrices.

Decides when the eigenvalues of a quantum covariance matrix pin down its
orthosymplectic orbit or its thermal and squeezing parameters, and builds
certificates for those verdicts.
"""

__version__ = "0.1.0"

from .classify import Membership, Reason, Verdict, classify_spectrum
from .config import DEFAULT_TOLERANCES, Tolerances, load_config
from .decomp import ModeParams, euler, mode_params, symplectic_eigenvalues, unitary_to_os, williamson
from .errors import (AmbiguousPairingError, ConditioningError, CovspecError, DomainError, InconclusiveError,
                     NotQuantumSpectrumError, PreconditionError, SamplingExhausted, StructuralError,
                     ValidationError)
from .linalg import CovMatrix, Ordering, is_orthosymplectic, is_quantum_cm, reorder, symplectic_form
from .pairing import (Spectrum, classify_pairing, diagonal_representative, mode_params_of_diag, spectrum,
                      valid_matchings)
from .witness import (Witness, WitnessKind, block_det_expansion, cauchy_binet_weights, prop1_alternative_cm,
                      thm1_violation_witness, trivial_witness)

__all__ = [name for name in dir() if not name.startswith("_")]
