import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covspec.errors import DomainError, ValidationError
from covspec.linalg import (CovMatrix, Ordering, as_matrix, hermitian_realification, is_orthosymplectic,
                            is_quantum_cm, mode_coords, reorder, symplectic_form, uncertainty_min_eigenvalue,
                            upper_block_det)
from covspec.sampling import random_os


def test_symplectic_form_interleaved_single_mode():
    np.testing.assert_array_equal(symplectic_form(1), [[0, 1], [-1, 0]])


def test_symplectic_form_split_two_modes():
    expected = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    np.testing.assert_array_equal(symplectic_form(2, Ordering.SPLIT), expected)


def test_orderings_agree_for_one_mode():
    np.testing.assert_array_equal(symplectic_form(1, "qqpp"), symplectic_form(1, "qpqp"))


@pytest.mark.parametrize("bad", [0, -1, 1.5])
def test_symplectic_form_rejects_bad_mode_count(bad):
    with pytest.raises(ValidationError):
        symplectic_form(bad)


def test_reorder_identity_and_omega():
    M = np.arange(16.0).reshape(4, 4)
    np.testing.assert_array_equal(reorder(M, "qpqp", "qpqp"), M)
    np.testing.assert_array_equal(reorder(symplectic_form(2), "qpqp", "qqpp"), symplectic_form(2, "qqpp"))


def test_reorder_permutes_diagonal():
    out = reorder(np.diag([1.0, 2.0, 3.0, 4.0]), Ordering.INTERLEAVED, Ordering.SPLIT)
    np.testing.assert_array_equal(np.diag(out), [1.0, 3.0, 2.0, 4.0])


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_reorder_round_trip(S, seed):
    M = np.random.default_rng(seed).standard_normal((2 * S, 2 * S))
    back = reorder(reorder(M, "qpqp", "qqpp"), "qqpp", "qpqp")
    np.testing.assert_array_equal(back, M)


def test_unknown_ordering():
    with pytest.raises(ValidationError):
        Ordering.parse("pqpq")


def test_quantum_cm_examples():
    assert is_quantum_cm(np.eye(4))
    assert not is_quantum_cm(np.diag([0.5, 0.5]))
    assert is_quantum_cm(np.diag([math.exp(-2), math.exp(2)]))


def test_hermitian_test_min_eigenvalue_of_thermal_state():
    # Gamma + i Omega for nu * I has eigenvalues nu +- 1
    assert uncertainty_min_eigenvalue(2.5 * np.eye(2)) == pytest.approx(1.5)
    assert np.linalg.eigvalsh(hermitian_realification(np.eye(2)))[0] == pytest.approx(0.0, abs=1e-15)


def test_upper_block_det_examples():
    assert upper_block_det(np.eye(4)) == 1.0
    assert upper_block_det(np.diag([2.0, 3.0, 1.0, 1.0])) == 6.0
    assert upper_block_det(np.diag([math.exp(-2), math.exp(2), 1, 1])) == pytest.approx(1.0)


def test_covmatrix_symmetrizes_small_asymmetry_and_rejects_large():
    M = np.eye(2)
    M[0, 1] = 1e-12
    cm = CovMatrix(M)
    assert cm.entries[0, 1] == cm.entries[1, 0] == pytest.approx(5e-13)
    M[0, 1] = 1e-3
    with pytest.raises(ValidationError):
        CovMatrix(M)


def test_covmatrix_rejects_indefinite_and_odd():
    with pytest.raises(DomainError):
        CovMatrix(np.diag([1.0, -1.0]))
    with pytest.raises(ValidationError):
        CovMatrix(np.eye(3))


def test_covmatrix_split_input_is_converted():
    cm = CovMatrix(np.diag([1.0, 2.0, 3.0, 4.0]), "qqpp")
    np.testing.assert_array_equal(np.diag(cm.interleaved()), [1.0, 3.0, 2.0, 4.0])
    np.testing.assert_array_equal(as_matrix(cm), cm.interleaved())


@settings(max_examples=50)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_os_conjugation_preserves_quantumness(S, seed):
    W = random_os(S, seed)
    assert is_orthosymplectic(W, 1e-9)
    nu = 1.0 + np.random.default_rng(seed).uniform(0, 2, S)
    G = W.T @ np.diag(np.repeat(nu, 2)) @ W
    assert is_quantum_cm(0.5 * (G + G.T))


def test_mode_coords():
    np.testing.assert_array_equal(mode_coords([0, 2]), [0, 1, 4, 5])
