"""CPTP maps acting on the measured subsystem.

``dephase`` projects the A factor onto an observable's eigenbasis (an
unread projective measurement); ``monitor`` mixes the input with its
dephased image, modelling a measurement of strength ``eps``. Outputs are
re-symmetrized to keep round-off from accumulating across long chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OutOfRange
from .states import BipartiteState, ObservableBasis

NULL_PROB = 1e-12


def _check_pair(x: ObservableBasis, rho: BipartiteState) -> None:
    if x.d != rho.d_a:
        raise DimensionMismatch(f"basis dim {x.d} != state d_a {rho.d_a}")


def _measured_frame(x: ObservableBasis, rho: BipartiteState) -> np.ndarray:
    """State rewritten in the eigenbasis of the measured observable."""
    w = np.kron(x.vectors, np.eye(rho.d_b))
    return w.conj().T @ rho.rho @ w


def dephase(x: ObservableBasis, rho: BipartiteState) -> BipartiteState:
    """Sum of projections (P_i x 1_B) rho (P_i x 1_B) over the basis columns.

    Idempotent, trace preserving, and leaves the B marginal untouched.
    """
    _check_pair(x, rho)
    d_a, d_b, dim = rho.d_a, rho.d_b, rho.dim
    tilted = _measured_frame(x, rho).reshape(d_a, d_b, d_a, d_b)
    kept = np.zeros_like(tilted)
    idx = np.arange(d_a)
    kept[idx, :, idx, :] = tilted[idx, :, idx, :]
    w = np.kron(x.vectors, np.eye(d_b))
    out = w @ kept.reshape(dim, dim) @ w.conj().T
    out = (out + out.conj().T) / 2.0
    return BipartiteState(d_a, d_b, out)


@dataclass(frozen=True, eq=False)
class DephasedDecomposition:
    """Separable form of a dephased state: outcome probabilities and the
    conditional B states, one per basis column (None where the outcome
    probability is below ``NULL_PROB``)."""

    basis: ObservableBasis
    d_b: int
    probs: np.ndarray
    cond_states: tuple

    def reconstruct(self) -> np.ndarray:
        """Assemble sum_i p_i |x_i><x_i| (x) sigma_i as a dense matrix."""
        d_a, d_b = self.basis.d, self.d_b
        out = np.zeros((d_a * d_b, d_a * d_b), dtype=np.complex128)
        for i, sigma in enumerate(self.cond_states):
            if sigma is None:
                continue
            col = self.basis.column(i)
            out += self.probs[i] * np.kron(np.outer(col, col.conj()), sigma)
        return out


def dephased_decomposition(x: ObservableBasis, rho: BipartiteState) -> DephasedDecomposition:
    """Outcome probabilities and conditional B states of the dephased state."""
    _check_pair(x, rho)
    d_a, d_b = rho.d_a, rho.d_b
    tilted = _measured_frame(x, rho).reshape(d_a, d_b, d_a, d_b)
    probs = np.empty(d_a)
    cond = []
    for i in range(d_a):
        block = tilted[i, :, i, :]
        p = float(np.trace(block).real)
        probs[i] = p
        if p <= NULL_PROB:
            cond.append(None)
        else:
            sigma = block / p
            cond.append((sigma + sigma.conj().T) / 2.0)
    return DephasedDecomposition(x, d_b, probs, tuple(cond))


def monitor(y: ObservableBasis, eps: float, rho: BipartiteState) -> BipartiteState:
    """Weak unread measurement: (1-eps) * rho + eps * dephase(y, rho)."""
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"monitoring strength must lie in [0, 1], got {eps}")
    _check_pair(y, rho)
    if eps == 0.0:
        return rho
    mixed = (1.0 - eps) * rho.rho + eps * dephase(y, rho).rho
    mixed = (mixed + mixed.conj().T) / 2.0
    return BipartiteState(rho.d_a, rho.d_b, mixed)


def monitor_n(y: ObservableBasis, eps: float, n: int, rho: BipartiteState) -> BipartiteState:
    """n-fold application of ``monitor``, computed iteratively.

    Equals a single application at strength 1 - (1-eps)**n; keeping the
    iteration genuine lets tests treat the composition law as a check
    rather than a definition.
    """
    if n < 0:
        raise OutOfRange(f"repetition count must be >= 0, got {n}")
    out = rho
    for _ in range(n):
        out = monitor(y, eps, out)
    return out
