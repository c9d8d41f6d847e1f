"""Scalar entropy functionals, all in nats.

Shannon and von Neumann entropies, the conditional entropies H(A|B) and
H(X|B), quantum relative entropy on the support of its second argument,
and the irreality of an observable (the entropy gained by dephasing the
state in that observable's eigenbasis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channels import dephase
from .errors import DimensionMismatch, InvariantViolation, NotDistribution
from .states import BipartiteState, ObservableBasis

EIG_CLIP = 1e-10
SUPPORT_CUTOFF = 1e-12
SUPPORT_LEAK_TOL = 1e-9
SUM_TOL = 1e-8


def shannon(p) -> float:
    """-sum p_i ln p_i with 0 ln 0 = 0; clips and renormalizes tiny noise."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise NotDistribution("expected a nonempty probability vector")
    if arr.min() < -EIG_CLIP:
        raise NotDistribution(f"negative weight {arr.min():.3e} beyond tolerance")
    arr = np.clip(arr, 0.0, None)
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise NotDistribution(f"weights sum to {total!r}, not 1")
    arr = arr / total
    pos = arr[arr > 0.0]
    return float(-(pos * np.log(pos)).sum()) + 0.0


def _clipped_spectrum(w: np.ndarray) -> np.ndarray:
    if w.min() < -EIG_CLIP:
        raise InvariantViolation(f"eigenvalue {w.min():.3e} below -{EIG_CLIP:.0e}")
    return np.clip(w, 0.0, None)


def _density_matrix(rho) -> np.ndarray:
    if isinstance(rho, BipartiteState):
        return rho.rho
    return linalg.as_operator(rho)


def _density_spectrum(rho) -> np.ndarray:
    if isinstance(rho, BipartiteState):
        return rho.spectrum
    return linalg.herm_eig(rho).eigenvalues


def vn_entropy(rho) -> float:
    """von Neumann entropy -Tr(rho ln rho) of a state or density matrix."""
    return shannon(_clipped_spectrum(_density_spectrum(rho)))


def cond_entropy(rho: BipartiteState) -> float:
    """Conditional entropy H(A|B) = S(rho_AB) - S(rho_B); negative values
    certify entanglement."""
    return vn_entropy(rho) - vn_entropy(rho.reduced_b())


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy Tr rho (ln rho - ln sigma) in nats.

    ``ln sigma`` is taken on the support of ``sigma`` (eigenvalues above
    1e-12); if ``rho`` carries more than 1e-9 weight outside that support
    the divergence is infinite and ``math.inf`` is returned.
    """
    r = _density_matrix(rho)
    s = _density_matrix(sigma)
    if r.shape != s.shape:
        raise DimensionMismatch(f"operands of shape {r.shape} and {s.shape}")
    eig_s = linalg.herm_eig(s)
    on_support = eig_s.eigenvalues > SUPPORT_CUTOFF
    vecs = eig_s.eigenvectors[:, on_support]
    weights = np.einsum("ij,ik,kj->j", vecs.conj(), r, vecs).real
    leak = float(np.trace(r).real - weights.sum())
    if leak > SUPPORT_LEAK_TOL:
        return math.inf
    w_r = _clipped_spectrum(_density_spectrum(rho))
    pos = w_r[w_r > 0.0]
    tr_r_ln_r = float((pos * np.log(pos)).sum())
    tr_r_ln_s = float((weights * np.log(eig_s.eigenvalues[on_support])).sum())
    return tr_r_ln_r - tr_r_ln_s


def _check_pair(x: ObservableBasis, rho: BipartiteState) -> None:
    if x.d != rho.d_a:
        raise DimensionMismatch(f"basis dim {x.d} != state d_a {rho.d_a}")


def uncertainty(x: ObservableBasis, rho: BipartiteState) -> float:
    """Memory-assisted uncertainty H(X|B) = S(dephased state) - S(rho_B).

    Nonnegative (the dephased state is separable across the A:B cut); for
    d_b = 1 it reduces to the Shannon entropy of the outcome probabilities.
    """
    _check_pair(x, rho)
    return vn_entropy(dephase(x, rho)) - vn_entropy(rho.reduced_b())


def irreality(x: ObservableBasis, rho: BipartiteState) -> float:
    """Entropy gained by dephasing in the eigenbasis of ``x``.

    Vanishes exactly when the state is already invariant under that
    dephasing, i.e. when the observable is fully real for the state.
    """
    _check_pair(x, rho)
    return vn_entropy(dephase(x, rho)) - vn_entropy(rho)


@dataclass(frozen=True)
class EntropyProfile:
    """The five scalars describing one (state, observable) pair, in nats."""

    h_ab: float
    h_b: float
    h_a_given_b: float
    h_x_given_b: float
    irreality_x: float

    def __post_init__(self):
        if self.irreality_x < -1e-9:
            raise InvariantViolation(f"irreality {self.irreality_x:.3e} below -1e-9")
        if self.h_x_given_b < -1e-9:
            raise InvariantViolation(f"H(X|B) {self.h_x_given_b:.3e} below -1e-9")


def profile(x: ObservableBasis, rho: BipartiteState) -> EntropyProfile:
    """Bundle H(AB), H(B), H(A|B), H(X|B), and the irreality of ``x``."""
    _check_pair(x, rho)
    h_ab = vn_entropy(rho)
    h_b = vn_entropy(rho.reduced_b())
    h_xb = vn_entropy(dephase(x, rho))
    return EntropyProfile(
        h_ab=h_ab,
        h_b=h_b,
        h_a_given_b=h_ab - h_b,
        h_x_given_b=h_xb - h_b,
        irreality_x=h_xb - h_ab,
    )
