import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covspec.decomp import (euler, mode_params, symplectic_eigenvalues, unitary_to_os,
                            unitary_to_os_interleaved, williamson)
from covspec.errors import ConditioningError, DomainError
from covspec.linalg import is_orthosymplectic, reorder, symplectic_form
from covspec.sampling import random_os, random_symplectic

from conftest import givens


def _abs_eig_omega_gamma(G):
    """Independent oracle: absolute eigenvalues of Omega Gamma, each appearing twice."""
    w = np.sort(np.abs(np.linalg.eigvals(symplectic_form(G.shape[0] // 2) @ G)))[::-1]
    return w[::2]


def test_symplectic_eigenvalues_of_identity_and_squeezed_mode():
    assert symplectic_eigenvalues(np.eye(6)) == pytest.approx((1.0, 1.0, 1.0))
    nu, r = 1.7, 0.4
    assert symplectic_eigenvalues(np.diag([nu * math.exp(2 * r), nu * math.exp(-2 * r)])) == pytest.approx((nu,))


def test_symplectic_eigenvalues_of_rotated_diagonal_match_oracle():
    G = givens(4, 1, 2, math.pi / 5)
    gamma = G.T @ np.diag([3.0, 1 / 3, 2.0, 2.0]) @ G
    np.testing.assert_allclose(symplectic_eigenvalues(gamma), _abs_eig_omega_gamma(gamma), rtol=1e-12)


def test_williamson_trivial_inputs():
    wd = williamson(np.diag([3.0, 3.0, 2.0, 2.0]))
    np.testing.assert_allclose(wd.A @ wd.T @ wd.A.T, np.diag([3.0, 3.0, 2.0, 2.0]), atol=1e-12)
    assert wd.nu == pytest.approx((3.0, 2.0))
    wd = williamson(np.diag([math.exp(-2), math.exp(2)]))
    np.testing.assert_allclose(wd.T, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(np.abs(wd.A), np.diag([math.exp(-1), math.exp(1)]), atol=1e-12)


@settings(max_examples=60)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_williamson_construct_then_recover(S, seed):
    rng = np.random.default_rng(seed)
    nu = np.sort(rng.uniform(1.0, 3.0, S))[::-1]
    S0 = random_symplectic(S, seed)
    G = S0 @ np.diag(np.repeat(nu, 2)) @ S0.T
    wd = williamson(G)
    np.testing.assert_allclose(wd.nu, nu, atol=1e-8)
    np.testing.assert_allclose(wd.A @ wd.T @ wd.A.T, G, rtol=0, atol=1e-8 * np.linalg.norm(G))
    Om = symplectic_form(S)
    np.testing.assert_allclose(wd.A.T @ Om @ wd.A, Om, atol=1e-8)


def test_williamson_rejects_indefinite_and_ill_conditioned():
    with pytest.raises(DomainError):
        williamson(np.diag([1.0, -1.0]))
    with pytest.raises(ConditioningError):
        williamson(np.diag([1e-7, 1e7]))


def test_euler_trivial_inputs():
    ed = euler(np.eye(4))
    for M in (ed.K, ed.Q, ed.L):
        np.testing.assert_allclose(M, np.eye(4), atol=1e-12)
    A = np.diag([math.exp(0.3), math.exp(-0.3)])
    ed = euler(A)
    assert ed.r == pytest.approx((0.3,))
    np.testing.assert_allclose(ed.K @ ed.Q @ ed.L, A, atol=1e-12)


def test_euler_recovers_known_squeezing():
    Q = np.diag([math.exp(0.7), math.exp(-0.7), math.exp(0.2), math.exp(-0.2)])
    A = random_os(2, 11) @ Q @ random_os(2, 12)
    ed = euler(A)
    assert ed.r == pytest.approx((0.7, 0.2), abs=1e-8)
    assert is_orthosymplectic(ed.K) and is_orthosymplectic(ed.L)
    np.testing.assert_allclose(ed.K @ ed.Q @ ed.L, A, atol=1e-10)


def test_euler_rejects_non_symplectic():
    with pytest.raises(DomainError):
        euler(np.diag([2.0, 2.0]))


def test_unitary_to_os_examples():
    np.testing.assert_array_equal(unitary_to_os(np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(unitary_to_os(np.array([[1j]])), [[0, -1], [1, 0]])
    t1, t2 = 0.3, 1.1
    W = unitary_to_os_interleaved(np.diag([np.exp(1j * t1), np.exp(1j * t2)]))
    rot = lambda t: np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    expected = np.zeros((4, 4))
    expected[:2, :2], expected[2:, 2:] = rot(t1), rot(t2)
    np.testing.assert_allclose(W, expected, atol=1e-15)


def test_unitary_to_os_rejects_non_unitary():
    with pytest.raises(DomainError):
        unitary_to_os(np.array([[2.0]]))


def test_mode_params_examples():
    np.testing.assert_allclose(mode_params(np.eye(4)).pairs, [(1.0, 0.0), (1.0, 0.0)], atol=1e-12)
    nu, r = 1.4, 0.35
    got = mode_params(np.diag([nu * math.exp(-2 * r), nu * math.exp(2 * r)]))
    np.testing.assert_allclose(got.pairs, [(nu, r)], atol=1e-12)


def test_mode_params_invariant_under_os_conjugation():
    D = np.diag([1.3 * math.exp(-0.8), 1.3 * math.exp(0.8), math.exp(-0.3), math.exp(0.3)])
    W = random_os(2, 5)
    got = mode_params(W.T @ D @ W)
    np.testing.assert_allclose(got.pairs, [(1.3, 0.4), (1.0, 0.15)], atol=1e-8)


def test_split_ordering_matches_interleaved():
    W = random_os(3, 9)
    G = W.T @ np.diag([4.0, 0.25, 2.0, 0.5, 1.5, 1.5]) @ W
    split = reorder(G, "qpqp", "qqpp")
    from covspec.linalg import CovMatrix
    assert symplectic_eigenvalues(CovMatrix(split, "qqpp")) == pytest.approx(symplectic_eigenvalues(G))
