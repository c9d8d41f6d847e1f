"""Cyclic Jacobi diagonalization of complex Hermitian matrices (fallback).

Pure-Python twin of the compiled ``qir._jacobi`` extension. One sweep
visits every off-diagonal pair (p, q) with p < q in row order and applies
a unitary plane rotation chosen to zero that entry:

    R[p,p] = c, R[p,q] = -conj(s), R[q,p] = s, R[q,q] = c,

with ``c`` real and ``s = t*c*exp(-i*arg(a[p,q]))`` where ``t`` is the
smaller root of ``t^2 - 2*theta*t - 1 = 0``, ``theta`` being the scaled
diagonal gap. Sweeps repeat until the off-diagonal Frobenius norm falls
below ``OFF_NORM_FACTOR`` times the Frobenius norm of the input, or the
rotation budget runs out.
"""

import math

import numpy as np

OFF_NORM_FACTOR = 1e-14


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(a: np.ndarray, v: np.ndarray, max_rotations: int) -> tuple[int, bool]:
    """Diagonalize Hermitian ``a`` in place, accumulating the unitary in ``v``.

    Same contract as the compiled kernel: ``a`` Hermitian, ``v`` the
    identity on entry; returns ``(rotations, converged)``.
    """
    n = a.shape[0]
    if a.shape != (n, n) or v.shape != (n, n):
        raise ValueError("kernel buffers must be square and of equal size")

    thr = OFF_NORM_FACTOR * float(np.linalg.norm(a))
    skip = thr / n if n > 0 else 0.0
    rotations = 0

    while True:
        if _offdiag_norm(a) <= thr:
            return rotations, True
        if rotations >= max_rotations:
            return rotations, False
        for p in range(n - 1):
            if rotations >= max_rotations:
                break
            for q in range(p + 1, n):
                if rotations >= max_rotations:
                    break
                apq = a[p, q]
                beta = abs(apq)
                if beta <= skip:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * beta)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = -sgn / (sgn * theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c * (apq.conjugate() / beta)

                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp + s * colq
                a[:, q] = -np.conj(s) * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp + np.conj(s) * rowq
                a[q, :] = -s * rowp + c * rowq
                # pin the entries the rotation fixes exactly
                a[p, p] = app + t * beta
                a[q, q] = aqq - t * beta
                a[p, q] = 0.0
                a[q, p] = 0.0

                colp = v[:, p].copy()
                colq = v[:, q].copy()
                v[:, p] = c * colp + s * colq
                v[:, q] = -np.conj(s) * colp + c * colq
                rotations += 1
