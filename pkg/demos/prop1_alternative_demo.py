"""Two quantum CMs with the same eigenvalues but different thermal parameters.

With two thermal modes and a unique pairing, a rotation mixing one coordinate of
each mode moves the symplectic eigenvalues while the ordinary spectrum stays fixed. The construction
walks along that rotation until the smallest symplectic eigenvalue would drop
below one and stops just short of it.

Run with ``python3 demos/prop1_alternative_demo.py``.
"""

import math

import numpy as np

from covspec import prop1_alternative_cm, symplectic_eigenvalues
from covspec.pairing import diagonal_representative

lam = [1.2 * math.exp(2), 1.2 * math.exp(-2), 1.1 * math.exp(0.2), 1.1 * math.exp(-0.2)]
w = prop1_alternative_cm(lam)
G0 = diagonal_representative(lam)

print("eigenvalues (diag)  :", np.round(np.sort(np.linalg.eigvalsh(G0)), 6))
print("eigenvalues (alt)   :", np.round(np.sort(np.linalg.eigvalsh(w.gamma_prime)), 6))
print("thermal (diag)      :", np.round(symplectic_eigenvalues(G0), 6))
print("thermal (alt)       :", np.round(symplectic_eigenvalues(w.gamma_prime), 6))
print("curve parameter t'  :", round(w.t_p, 6))
print("checks              :", w.checks)
