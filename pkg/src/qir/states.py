"""Bipartite density matrices and observable eigenbases.

Constructors cover the named states used throughout (maximally entangled,
maximally mixed, Schmidt-form pure states, the Werner family) and the two
random ensembles (Haar pure, induced mixed), plus computational, discrete
Fourier, and Haar-random bases. All random constructors take an explicit
seed and are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from ._rng import Seed, spawn_rng
from .errors import (
    BadDimension,
    ConfigError,
    DimensionMismatch,
    InvariantViolation,
    NotNormalized,
    OutOfRange,
)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
UNITARITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix on system A (dim ``d_a``) and memory B (dim ``d_b``).

    Construction validates Hermiticity (defect <= 1e-10, then symmetrizes),
    unit trace (<= 1e-10), and positivity (smallest eigenvalue >= -1e-10).
    The eigenvalues found during validation are kept in ``spectrum``
    (ascending); every entropy downstream needs only those.
    """

    d_a: int
    d_b: int
    rho: np.ndarray
    spectrum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.d_a < 2:
            raise BadDimension(f"d_a must be >= 2, got {self.d_a}")
        if self.d_b < 1:
            raise BadDimension(f"d_b must be >= 1, got {self.d_b}")
        rho = linalg.as_operator(self.rho)
        if rho.shape[0] != self.d_a * self.d_b:
            raise DimensionMismatch(
                f"matrix dim {rho.shape[0]} != d_a*d_b = {self.d_a * self.d_b}"
            )
        defect = float(np.abs(rho - rho.conj().T).max())
        if defect > HERMITICITY_TOL:
            raise InvariantViolation(f"state not Hermitian (defect {defect:.3e})")
        rho = (rho + rho.conj().T) / 2.0
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantViolation(f"state trace {tr!r} != 1")
        spectrum = linalg.herm_eig(rho).eigenvalues
        if spectrum[0] < -PSD_TOL:
            raise InvariantViolation(
                f"state not positive semidefinite (min eigenvalue {spectrum[0]:.3e})"
            )
        rho.setflags(write=False)
        spectrum.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "spectrum", spectrum)

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b

    def reduced_a(self) -> np.ndarray:
        return linalg.partial_trace_b(self.rho, self.d_a, self.d_b)

    def reduced_b(self) -> np.ndarray:
        return linalg.partial_trace_a(self.rho, self.d_a, self.d_b)

    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    """Orthonormal eigenbasis of a non-degenerate observable (columns)."""

    d: int
    vectors: np.ndarray

    def __post_init__(self):
        v = linalg.as_operator(self.vectors)
        if v.shape[0] != self.d:
            raise DimensionMismatch(f"basis matrix dim {v.shape[0]} != d = {self.d}")
        defect = float(np.abs(v.conj().T @ v - np.eye(self.d)).max())
        if defect > UNITARITY_TOL:
            raise InvariantViolation(f"basis columns not orthonormal (defect {defect:.3e})")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    def column(self, i: int) -> np.ndarray:
        return self.vectors[:, i]


def _pure(d_a: int, d_b: int, psi: np.ndarray) -> BipartiteState:
    return BipartiteState(d_a, d_b, np.outer(psi, psi.conj()))


def max_entangled(d: int) -> BipartiteState:
    """Maximally entangled pure state on d x d, amplitudes 1/sqrt(d) on |ii>."""
    if d < 2:
        raise BadDimension(f"need d >= 2, got {d}")
    psi = np.zeros(d * d, dtype=np.complex128)
    psi[np.arange(d) * d + np.arange(d)] = 1.0 / np.sqrt(d)
    return _pure(d, d, psi)


def max_mixed(d_a: int, d_b: int) -> BipartiteState:
    """Maximally mixed state, identity over the total dimension."""
    dim = d_a * d_b
    return BipartiteState(d_a, d_b, np.eye(dim, dtype=np.complex128) / dim)


def pure_from_schmidt(coeffs) -> BipartiteState:
    """Pure state sum_i c_i |ii> from nonnegative Schmidt coefficients."""
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1:
        raise NotNormalized("Schmidt coefficients must be a flat vector")
    if np.any(c < 0):
        raise NotNormalized("Schmidt coefficients must be nonnegative")
    total = float(np.sum(c * c))
    if abs(total - 1.0) > 1e-10:
        raise NotNormalized(f"sum of squared coefficients is {total!r}, not 1")
    d = len(c)
    psi = np.zeros(d * d, dtype=np.complex128)
    psi[np.arange(d) * d + np.arange(d)] = c
    return _pure(d, d, psi)


def werner(w: float) -> BipartiteState:
    """Convex mix of the d=2 maximally entangled and maximally mixed states.

    Spectrum is ((1+3w)/4, (1-w)/4 three-fold), so the state is positive
    exactly on 0 <= w <= 1 given the mixing convention used here.
    """
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise OutOfRange(f"werner weight must lie in [0, 1], got {w}")
    rho = w * max_entangled(2).rho + (1.0 - w) * np.eye(4) / 4.0
    return BipartiteState(2, 2, rho)


def haar_random_pure(d_a: int, d_b: int, seed: Seed) -> BipartiteState:
    """Pure state from the unitarily invariant measure; deterministic per seed."""
    if d_a < 2 or d_b < 1:
        raise BadDimension(f"need d_a >= 2 and d_b >= 1, got ({d_a}, {d_b})")
    rng = spawn_rng(seed)
    n = d_a * d_b
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return _pure(d_a, d_b, z / np.linalg.norm(z))


def random_mixed(d_a: int, d_b: int, rank_env: int, seed: Seed) -> BipartiteState:
    """Induced-measure mixed state: environment of dim ``rank_env`` traced out."""
    if d_a < 2 or d_b < 1:
        raise BadDimension(f"need d_a >= 2 and d_b >= 1, got ({d_a}, {d_b})")
    if rank_env < 1:
        raise BadDimension(f"rank_env must be >= 1, got {rank_env}")
    rng = spawn_rng(seed)
    n = d_a * d_b
    z = rng.standard_normal((n, rank_env)) + 1j * rng.standard_normal((n, rank_env))
    rho = z @ z.conj().T
    return BipartiteState(d_a, d_b, rho / np.trace(rho).real)


def computational_basis(d: int) -> ObservableBasis:
    if d < 2:
        raise BadDimension(f"need d >= 2, got {d}")
    return ObservableBasis(d, np.eye(d, dtype=np.complex128))


def fourier_basis(d: int) -> ObservableBasis:
    """Discrete Fourier basis; mutually unbiased with the computational one."""
    if d < 2:
        raise BadDimension(f"need d >= 2, got {d}")
    jk = np.outer(np.arange(d), np.arange(d))
    return ObservableBasis(d, np.exp(2j * np.pi * jk / d) / np.sqrt(d))


def random_basis(d: int, seed: Seed) -> ObservableBasis:
    """Haar-random basis: QR of a Ginibre matrix with the phase-fix correction."""
    if d < 2:
        raise BadDimension(f"need d >= 2, got {d}")
    rng = spawn_rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return ObservableBasis(d, q * (diag / np.abs(diag)))


def state_from_token(token: str) -> BipartiteState:
    """Build a named state from a string token.

    Supported: ``bell:d``, ``mixed:dA,dB``, ``werner:w``, ``haar:dA,dB,seed``.
    """
    kind, _, arg = token.partition(":")
    try:
        if kind == "bell":
            return max_entangled(int(arg))
        if kind == "mixed":
            d_a, d_b = (int(s) for s in arg.split(","))
            return max_mixed(d_a, d_b)
        if kind == "werner":
            return werner(float(arg))
        if kind == "haar":
            d_a, d_b, seed = (int(s) for s in arg.split(","))
            return haar_random_pure(d_a, d_b, seed)
    except (ValueError, BadDimension, OutOfRange) as exc:
        raise ConfigError(f"bad state token {token!r}: {exc}") from exc
    raise ConfigError(f"unknown state token {token!r}")


def basis_from_token(token: str) -> ObservableBasis:
    """Build a named basis from a string token.

    Supported: ``comp:d``, ``fourier:d``, ``haar:d,seed``.
    """
    kind, _, arg = token.partition(":")
    try:
        if kind == "comp":
            return computational_basis(int(arg))
        if kind == "fourier":
            return fourier_basis(int(arg))
        if kind == "haar":
            d, seed = (int(s) for s in arg.split(","))
            return random_basis(d, seed)
    except (ValueError, BadDimension) as exc:
        raise ConfigError(f"bad basis token {token!r}: {exc}") from exc
    raise ConfigError(f"unknown basis token {token!r}")
