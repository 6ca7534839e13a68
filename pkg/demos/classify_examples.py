"""Classify a handful of eigenvalue spectra and show how the verdict is reached.

Run with ``python3 demos/classify_examples.py``.
"""

import math

from covspec import classify_pairing, classify_spectrum


def squeezed(nu, r):
    return [nu * math.exp(2 * r), nu * math.exp(-2 * r)]


SPECTRA = {
    "two pure modes": [4.0, 2.0, 0.5, 0.25],
    "several valid pairings": [3.0, 2.0, 1.5, 1.0],
    "two thermal modes": squeezed(1.2, 1.0) + squeezed(1.1, 0.1),
    "fully degenerate above one": [2.5] * 6,
    "large outlier over vacuum": [6.25, 1.0, 1.0, 1.0],
}

for name, values in SPECTRA.items():
    pc = classify_pairing(values)
    v = classify_spectrum(values)
    print(f"{name}: {[round(x, 4) for x in values]}")
    print(f"  valid pairings : {len(pc.matchings)}")
    if pc.unique:
        print(f"  pure modes     : {pc.pure_count} of {pc.S}   case: {pc.case}")
    print(f"  verdict        : p1={v.p1.value} p2={v.p2.value} ({v.reason.value})")
    print(f"  next step      : {v.witness_hint or 'none'}\n")
