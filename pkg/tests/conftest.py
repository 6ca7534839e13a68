import math

import numpy as np
import pytest

from covspec.sampling import make_rng


def givens(n, i, j, theta):
    """Rotation by ``theta`` in the ``(i, j)`` coordinate plane."""
    G = np.eye(n)
    c, s = math.cos(theta), math.sin(theta)
    G[i, i] = G[j, j] = c
    G[i, j], G[j, i] = -s, s
    return G


def squeezed_pair(nu, r):
    """Eigenvalues ``(nu e^{2r}, nu e^{-2r})`` of one diagonal mode."""
    return [nu * math.exp(2 * r), nu * math.exp(-2 * r)]


@pytest.fixture
def rng():
    return make_rng(20240611)
