"""Dense complex linear algebra for small operators.

Everything operates on square ``complex128`` arrays in row-major layout.
Composite systems put the A factor on the slow (outer) index: ``kron(a, b)``
tiles ``b`` inside the blocks of ``a``. The Hermitian eigensolver is a
cyclic Jacobi scheme (compiled core with a pure-Python fallback, see
``qir.backend``); products, adjoints, Kronecker products, and partial
traces are delegated to numpy behind these wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DimensionMismatch, InvariantViolation, NoConvergence, NotHermitian

HERMITICITY_TOL = 1e-10


def as_operator(m) -> np.ndarray:
    """Validate ``m`` as a finite square complex matrix and return it."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InvariantViolation("matrix contains non-finite entries")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product of two equal-dimension square matrices."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a) -> np.ndarray:
    """Conjugate transpose, returned as a fresh row-major array."""
    return np.ascontiguousarray(as_operator(a).conj().T)


def kron(a, b) -> np.ndarray:
    """Kronecker product with ``a`` on the slow (outer) index."""
    return np.kron(as_operator(a), as_operator(b))


def _bipartite(m, d_a: int, d_b: int) -> np.ndarray:
    a = as_operator(m)
    if d_a < 1 or d_b < 1 or a.shape[0] != d_a * d_b:
        raise DimensionMismatch(
            f"matrix of dim {a.shape[0]} does not factor as {d_a} x {d_b}"
        )
    return a.reshape(d_a, d_b, d_a, d_b)


def partial_trace_a(m, d_a: int, d_b: int) -> np.ndarray:
    """Trace out the first (A) factor, leaving a d_b x d_b matrix."""
    return np.einsum("ijik->jk", _bipartite(m, d_a, d_b))


def partial_trace_b(m, d_a: int, d_b: int) -> np.ndarray:
    """Trace out the second (B) factor, leaving a d_a x d_a matrix."""
    return np.einsum("ijkj->ik", _bipartite(m, d_a, d_b))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Spectrum (ascending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def herm_eig(m, max_rotations: int | None = None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.

    The input may deviate from exact Hermiticity by at most 1e-10 in any
    entry (it is symmetrized before diagonalization); a larger defect
    raises ``NotHermitian``. The rotation budget defaults to 100 * dim**2;
    exceeding it raises ``NoConvergence``.
    """
    a = as_operator(m)
    n = a.shape[0]
    defect = float(np.abs(a - a.conj().T).max()) if n else 0.0
    if defect > HERMITICITY_TOL:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds {HERMITICITY_TOL:.0e}")
    work = np.ascontiguousarray((a + a.conj().T) / 2.0)
    vecs = np.eye(n, dtype=np.complex128)
    if max_rotations is None:
        max_rotations = 100 * n * n
    rotations, converged = backend.jacobi_eigh(work, vecs, max_rotations)
    if not converged:
        raise NoConvergence(f"off-diagonal norm still above threshold after {rotations} rotations")
    w = np.diag(work).real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], np.ascontiguousarray(vecs[:, order]))
