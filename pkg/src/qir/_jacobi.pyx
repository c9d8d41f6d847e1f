# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Cyclic Jacobi diagonalization of complex Hermitian matrices (compiled core).

Compiled twin of ``qir._jacobi_py``; the two implementations follow the
same rotation schedule and formulas and must stay step-for-step identical.
"""

from libc.math cimport sqrt

# Off-diagonal Frobenius threshold = OFF_NORM_FACTOR * ||input||_F.
OFF_NORM_FACTOR = 1e-14

cdef double _FACTOR = 1e-14


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def jacobi_eigh(double complex[:, ::1] a, double complex[:, ::1] v, long max_rotations):
    """Diagonalize Hermitian ``a`` in place, accumulating the unitary in ``v``.

    ``a`` must be Hermitian and ``v`` the identity on entry. On exit the
    eigenvalues sit on the diagonal of ``a`` (unordered) and the columns of
    ``v`` are the matching eigenvectors. Returns ``(rotations, converged)``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef double thr, skip, fro2, off2, beta, theta, t, c, sigma, app, aqq, sgn
    cdef double complex apq, s, akp, akq, vkp, vkq
    cdef Py_ssize_t p, q, k
    cdef long rotations = 0
    cdef bint converged = 0

    if a.shape[1] != n or v.shape[0] != n or v.shape[1] != n:
        raise ValueError("kernel buffers must be square and of equal size")

    with nogil:
        fro2 = 0.0
        for p in range(n):
            for q in range(n):
                fro2 += _abs2(a[p, q])
        thr = _FACTOR * sqrt(fro2)
        skip = thr / n if n > 0 else 0.0

        while True:
            off2 = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off2 += 2.0 * _abs2(a[p, q])
            if sqrt(off2) <= thr:
                converged = 1
                break
            if rotations >= max_rotations:
                converged = 0
                break
            for p in range(n - 1):
                if rotations >= max_rotations:
                    break
                for q in range(p + 1, n):
                    if rotations >= max_rotations:
                        break
                    apq = a[p, q]
                    beta = sqrt(_abs2(apq))
                    if beta <= skip:
                        continue
                    app = a[p, p].real
                    aqq = a[q, q].real
                    theta = (aqq - app) / (2.0 * beta)
                    sgn = 1.0 if theta >= 0.0 else -1.0
                    t = -sgn / (sgn * theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(1.0 + t * t)
                    sigma = t * c
                    # s = sigma * conj(apq / beta): beats the rotation phase
                    # onto the plane of the pivot entry.
                    s = sigma * (apq.conjugate() / beta)
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp + s * akq
                        a[k, q] = -s.conjugate() * akp + c * akq
                        a[p, k] = a[k, p].conjugate()
                        a[q, k] = a[k, q].conjugate()
                    a[p, p] = app + t * beta
                    a[q, q] = aqq - t * beta
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp + s * vkq
                        v[k, q] = -s.conjugate() * vkp + c * vkq
                    rotations += 1

    return rotations, bool(converged)
