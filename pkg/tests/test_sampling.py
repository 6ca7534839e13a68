import numpy as np
import pytest

from covspec.classify import Reason, classify_spectrum
from covspec.errors import SamplingExhausted, ValidationError
from covspec.linalg import is_orthosymplectic, is_quantum_cm
from covspec.pairing import classify_pairing
from covspec.sampling import (ClassTarget, SampleConfig, haar_orthogonal, haar_unitary, make_rng,
                              random_cm_with_spectrum, random_os, random_spectrum, random_symplectic)

from conftest import squeezed_pair

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_same_seed_and_stream_reproduce():
    np.testing.assert_array_equal(haar_orthogonal(5, 11), haar_orthogonal(5, 11))
    np.testing.assert_array_equal(random_symplectic(3, 4, stream=2), random_symplectic(3, 4, stream=2))
    assert not np.array_equal(haar_orthogonal(5, 11, stream=0), haar_orthogonal(5, 11, stream=1))


def test_negative_seed_rejected():
    with pytest.raises(ValidationError):
        make_rng(-1)


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_haar_matrices_are_orthogonal_or_unitary(n):
    O = haar_orthogonal(n, n)
    np.testing.assert_allclose(O.T @ O, np.eye(n), atol=1e-12)
    U = haar_unitary(n, n)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(n), atol=1e-12)


def test_haar_of_size_one_is_a_sign():
    signs = {float(haar_orthogonal(1, s)[0, 0]) for s in range(20)}
    assert signs == {1.0, -1.0}


def test_random_os_single_mode_is_rotation():
    K = random_os(1, 3)
    np.testing.assert_allclose(K.T @ K, np.eye(2), atol=1e-12)
    assert np.linalg.det(K) == pytest.approx(1.0)
    np.testing.assert_allclose(K @ J2, J2 @ K, atol=1e-12)


@pytest.mark.parametrize("S", [1, 2, 4])
def test_random_os_and_symplectic(S):
    assert is_orthosymplectic(random_os(S, 0), 1e-10)
    J = np.kron(np.eye(S), J2)
    M = random_symplectic(S, 0)
    np.testing.assert_allclose(M @ J @ M.T, J, atol=1e-9)
    assert is_orthosymplectic(random_symplectic(S, 0, r_max=0.0), 1e-10)


def test_random_symplectic_rejects_negative_squeezing():
    with pytest.raises(ValidationError):
        random_symplectic(2, 0, r_max=-1.0)


def test_cm_with_vacuum_spectrum_is_identity():
    G = random_cm_with_spectrum([1.0] * 4, 0)
    np.testing.assert_allclose(G.interleaved(), np.eye(4), atol=1e-12)


def test_cm_with_thermal_spectrum_is_quantum():
    G = random_cm_with_spectrum([3.0, 3.0, 2.0, 2.0], 1)
    assert is_quantum_cm(G.interleaved())


def test_cm_with_thin_orbit_exhausts():
    lam = squeezed_pair(1.0, 1.5) + squeezed_pair(1.0, 1.0)
    with pytest.raises(SamplingExhausted):
        random_cm_with_spectrum(lam, 0, max_rejections=50)


@pytest.mark.parametrize("target,S", [
    (ClassTarget.CASE1, 3), (ClassTarget.CASE2, 3), (ClassTarget.CASE3, 3),
    (ClassTarget.PROP1, 2), (ClassTarget.PROP1, 4), (ClassTarget.NOT_UNIQUE, 3), (ClassTarget.RESIDUAL, 3),
])
def test_spectra_land_in_their_class(target, S):
    for k in range(10):
        lam = random_spectrum(SampleConfig(seed=5, S=S, class_target=target), stream=k)
        assert lam.S == S
        pc = classify_pairing(lam)
        assert not pc.tolerance_sensitive
        if target is ClassTarget.NOT_UNIQUE:
            assert not pc.unique
        elif target is ClassTarget.PROP1:
            assert classify_spectrum(lam).reason is Reason.PROP1_APPLIES
        elif target is ClassTarget.RESIDUAL:
            assert classify_spectrum(lam).reason is Reason.RESIDUAL
        else:
            assert pc.case == target.value[-1]


def test_spectrum_sampling_reproducible():
    cfg = SampleConfig(seed=2, S=3, class_target="Case2")
    assert random_spectrum(cfg, stream=4).values == random_spectrum(cfg, stream=4).values


def test_spectrum_sampling_exhaustion_and_bad_configs():
    with pytest.raises(SamplingExhausted):
        random_spectrum(SampleConfig(seed=0, S=1, max_rejections=20, class_target=ClassTarget.CASE3))
    with pytest.raises(ValidationError):
        random_spectrum(SampleConfig(seed=0, S=2, class_target=ClassTarget.RESIDUAL))
    with pytest.raises(ValidationError):
        random_spectrum(SampleConfig(seed=0, S=1, class_target=ClassTarget.PROP1))
    with pytest.raises(ValidationError):
        SampleConfig(seed=0, S=0)
    with pytest.raises(ValueError):
        SampleConfig(seed=0, S=2, class_target="Case4")
