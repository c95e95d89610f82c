"""Pure NumPy fallbacks for the compiled kernels in gyrator._kernels.

Selected by gyrator.backend when the extension is unavailable or when
GYRATOR_BACKEND=python is set.  Signatures and semantics mirror the
compiled versions; the keystream is bit-identical by construction.
"""

import numpy as np


def direct_gyrator_sum(g, cot_a, csc_a, dx, dy, du, dv, out_n1, out_n2, scale):
    """Brute-force gyrator sum, vectorized over the input grid per output sample."""
    n1, n2 = g.shape
    mc = (np.arange(n1) - n1 // 2).astype(float)
    nc = (np.arange(n2) - n2 // 2).astype(float)
    in_chirp = np.exp(1j * cot_a * dx * dy * np.outer(mc, nc)) * g
    pcs = (np.arange(out_n1) - out_n1 // 2).astype(float)
    qcs = (np.arange(out_n2) - out_n2 // 2).astype(float)

    out = np.empty((out_n1, out_n2), dtype=np.complex128)
    for i, pc in enumerate(pcs):
        row_m = np.exp(-1j * csc_a * du * dy * pc * nc)
        for k, qc in enumerate(qcs):
            col_m = np.exp(-1j * csc_a * dv * dx * qc * mc)
            total = np.sum(in_chirp * np.outer(col_m, row_m))
            out[i, k] = total * np.exp(1j * cot_a * du * dv * pc * qc)
    return scale * out


def logistic_keystream(x0, r, burn_in, nbits):
    """Threshold bits of a logistic-map orbit after a burn-in prefix."""
    out = np.empty(nbits, dtype=np.uint8)
    x = float(x0)
    r = float(r)
    for _ in range(burn_in):
        x = r * x * (1.0 - x)
    for i in range(nbits):
        x = r * x * (1.0 - x)
        out[i] = 1 if x > 0.5 else 0
    return out
