"""Hot sampling kernels for the Pauli-frame Monte Carlo.

Frames fit in single 64-bit words (x mask, z mask, measurement-flip mask),
so one shot is a categorical draw per fault atom followed by XOR folds.  The
numba path compiles the inner loop; set QFILTER_NO_NUMBA=1 to force the
vectorized numpy fallback (also used when numba is unavailable).
"""

from __future__ import annotations

import os

import numpy as np


def _sample_loop(u, offsets, cum, ox, oz, of,
                 cond_bits, cond_x, cond_z, cond_f,
                 ps_mask, sys_mask):
    shots = u.shape[0]
    n_atoms = offsets.shape[0] - 1
    n_cond = cond_bits.shape[0]
    accepted = 0
    identity = 0
    for s in range(shots):
        fx = np.uint64(0)
        fz = np.uint64(0)
        fl = np.uint64(0)
        for a in range(n_atoms):
            k = offsets[a]
            end = offsets[a + 1] - 1
            uu = u[s, a]
            while k < end and uu >= cum[k]:
                k += 1
            fx ^= ox[k]
            fz ^= oz[k]
            fl ^= of[k]
        for c in range(n_cond):
            if (fl >> cond_bits[c]) & np.uint64(1):
                fx ^= cond_x[c]
                fz ^= cond_z[c]
                fl ^= cond_f[c]
        if (fl & ps_mask) == np.uint64(0):
            accepted += 1
            if ((fx | fz) & sys_mask) == np.uint64(0):
                identity += 1
    return accepted, identity


def _sample_numpy(u, offsets, cum, ox, oz, of,
                  cond_bits, cond_x, cond_z, cond_f,
                  ps_mask, sys_mask):
    """Vectorized fallback: same contract as the compiled loop."""
    shots, n_atoms = u.shape
    fx = np.zeros(shots, dtype=np.uint64)
    fz = np.zeros(shots, dtype=np.uint64)
    fl = np.zeros(shots, dtype=np.uint64)
    for a in range(n_atoms):
        lo, hi = int(offsets[a]), int(offsets[a + 1])
        # Outcome index within the atom by threshold comparison.
        k = lo + np.searchsorted(cum[lo:hi - 1], u[:, a], side="right")
        fx ^= ox[k]
        fz ^= oz[k]
        fl ^= of[k]
    one = np.uint64(1)
    for c in range(cond_bits.shape[0]):
        hit = ((fl >> np.uint64(cond_bits[c])) & one).astype(bool)
        fx[hit] ^= cond_x[c]
        fz[hit] ^= cond_z[c]
        fl[hit] ^= cond_f[c]
    ok = (fl & ps_mask) == 0
    ident = ok & (((fx | fz) & sys_mask) == 0)
    return int(ok.sum()), int(ident.sum())


def _build_kernel():
    if os.environ.get("QFILTER_NO_NUMBA"):
        return _sample_numpy, "numpy"
    try:
        from numba import njit
    except ImportError:
        return _sample_numpy, "numpy"
    return njit(cache=True, nogil=True)(_sample_loop), "numba"


sample_chunk, KERNEL_BACKEND = _build_kernel()
