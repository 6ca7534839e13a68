"""Attack a diagonal CM with an orthogonal map and watch the witness being built.

The diagonal CM of two pure squeezed modes has a single OS orbit of
quantum CMs. Any other orthogonal conjugate ``O^T D O`` must fail the uncertainty
test, and the witness shows it: an OS matrix ``W`` whose first 2x2 block of
``(OW)^T D (OW)`` has determinant below one.

Run with ``python3 demos/thm1_witness_demo.py``.
"""

import numpy as np

from covspec import is_quantum_cm, thm1_violation_witness
from covspec.sampling import haar_orthogonal
from covspec.witness import block_det_direct

lam = [4.0, 2.0, 0.5, 0.25]
O = haar_orthogonal(4, seed=11)
w = thm1_violation_witness(lam, O)

print("D diagonal      :", np.round(np.diag(w.D), 4))
print("witness kind    :", w.kind.value)
for step in w.trace:
    print("  ", step)
G = (O @ w.Wf).T @ w.D @ (O @ w.Wf)
print("first block det :", block_det_direct(G, 0))
print("O^T D O quantum :", is_quantum_cm(0.5 * (O.T @ w.D @ O + (O.T @ w.D @ O).T)))

# a product of a D-commuting orthogonal map and an OS map is a trivial attack
R = np.diag([1.0, -1.0, 1.0, 1.0])
K = np.linalg.qr(np.array([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0],
                           [-1.0, 0.0, 1.0, 0.0], [0.0, -1.0, 0.0, 1.0]]))[0]
t = thm1_violation_witness(lam, R @ K)
print("\ntrivial attack  :", t.kind.value, " |RW - O| =", np.linalg.norm(t.R @ t.W - R @ K))
