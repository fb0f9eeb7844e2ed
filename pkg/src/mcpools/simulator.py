"""Exact real-statevector simulation.

States are float64 arrays of length 2^n; bit j of the basis index is the
occupation of qubit j.  Odd strings A square to -1, so rotations are exact:
exp(theta A) = cos(theta) I + sin(theta) A, one permute-scale-add per layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from .hamiltonians import PauliSumHamiltonian
from .paulis import PauliString

SIMULATOR_MAX_QUBITS = 14
STORE_BUDGET_BYTES = 2 << 30  # adjoint sweep keeps forward states below this


@lru_cache(maxsize=8192)
def _tables(n: int, x_mask: int, z_mask: int):
    """(permutation, signs) with (P s)[k] = signs[k^x] * s[k^x]."""
    idx = np.arange(1 << n, dtype=np.intp)
    perm = idx ^ x_mask
    par = np.bitwise_count(idx & np.intp(z_mask)).astype(np.intp)
    par += (x_mask & z_mask).bit_count()
    signs = (1.0 - 2.0 * (par & 1)).astype(np.float64)
    perm.flags.writeable = False
    signs.flags.writeable = False
    return perm, signs


def _check_n(n: int) -> None:
    if not 1 <= n <= SIMULATOR_MAX_QUBITS:
        raise ValueError(
            f"simulator handles 1..{SIMULATOR_MAX_QUBITS} qubits, got {n}")


def basis_state(n_qubits: int, occupation: int) -> np.ndarray:
    _check_n(n_qubits)
    dim = 1 << n_qubits
    if not 0 <= occupation < dim:
        raise ValueError(f"occupation {occupation} out of range for {n_qubits} qubits")
    s = np.zeros(dim)
    s[occupation] = 1.0
    return s


def apply_pauli(p: PauliString, state: np.ndarray) -> np.ndarray:
    perm, signs = _tables(p.n_qubits, p.x_mask, p.z_mask)
    if state.shape[-1] != perm.size:
        raise ValueError("state length does not match operator width")
    return signs[perm] * state[..., perm]


def apply_rotation(p: PauliString, theta: float, state: np.ndarray) -> np.ndarray:
    """exp(theta A)|state> for odd A; exact, norm-preserving."""
    if not p.is_odd:
        raise ValueError(f"rotation generator {p} must be an odd string")
    perm, signs = _tables(p.n_qubits, p.x_mask, p.z_mask)
    if state.shape[-1] != perm.size:
        raise ValueError("state length does not match operator width")
    out = np.cos(theta) * state
    out += np.sin(theta) * (signs[perm] * state[..., perm])
    return out


def expectation(h: PauliSumHamiltonian, state: np.ndarray) -> float:
    return float(state @ h.apply(state))


def pool_gradients(h: PauliSumHamiltonian, state: np.ndarray,
                   pool: Sequence[PauliString]) -> np.ndarray:
    """d/dtheta <psi|e^{-tA} H e^{tA}|psi> at t=0 for each pool operator:
    <psi|[H,A]|psi> = 2 <H psi, A psi>."""
    hs = h.apply(state)
    g = np.empty(len(pool))
    for i, p in enumerate(pool):
        if not p.is_odd:
            raise ValueError(f"pool operator {p} must be an odd string")
        g[i] = 2.0 * (hs @ apply_pauli(p, state))
    return g


@dataclass
class Ansatz:
    """Ordered rotation layers exp(theta_k A_k) applied to a reference
    basis state, first generator innermost."""

    n_qubits: int
    reference: int
    generators: tuple = ()
    thetas: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        _check_n(self.n_qubits)
        self.generators = tuple(self.generators)
        self.thetas = np.asarray(self.thetas, dtype=np.float64).copy()
        if len(self.generators) != self.thetas.size:
            raise ValueError("one angle per generator required")
        for p in self.generators:
            if p.n_qubits != self.n_qubits:
                raise ValueError("generator width mismatch")
            if not p.is_odd:
                raise ValueError(f"ansatz generator {p} must be odd")

    def __len__(self) -> int:
        return len(self.generators)

    def with_thetas(self, thetas) -> "Ansatz":
        return Ansatz(self.n_qubits, self.reference, self.generators, thetas)

    def extended(self, generator: PauliString, theta: float = 0.0) -> "Ansatz":
        return Ansatz(self.n_qubits, self.reference,
                      self.generators + (generator,),
                      np.append(self.thetas, theta))


def prepare_state(ansatz: Ansatz) -> np.ndarray:
    s = basis_state(ansatz.n_qubits, ansatz.reference)
    for p, t in zip(ansatz.generators, ansatz.thetas):
        s = apply_rotation(p, float(t), s)
    return s


def ansatz_energy_gradient(ansatz: Ansatz, h: PauliSumHamiltonian,
                           store_budget: int = STORE_BUDGET_BYTES
                           ) -> Tuple[float, np.ndarray]:
    """Energy and its full gradient in one adjoint sweep, O(L * 2^n).

    Forward states are stored when they fit the budget; otherwise they are
    recomputed by inverse rotations during the backward pass (rotations are
    exactly invertible, so both paths agree to rounding).
    """
    if h.n_qubits != ansatz.n_qubits:
        raise ValueError("Hamiltonian width does not match ansatz")
    L = len(ansatz)
    dim = 1 << ansatz.n_qubits
    store = (L + 1) * dim * 8 <= store_budget

    psi = basis_state(ansatz.n_qubits, ansatz.reference)
    kept = [psi] if store else None
    for p, t in zip(ansatz.generators, ansatz.thetas):
        psi = apply_rotation(p, float(t), psi)
        if store:
            kept.append(psi)

    lam = h.apply(psi)
    energy = float(psi @ lam)
    grad = np.empty(L)
    for k in range(L - 1, -1, -1):
        p = ansatz.generators[k]
        t = float(ansatz.thetas[k])
        psi_k = kept[k + 1] if store else psi
        grad[k] = 2.0 * (lam @ apply_pauli(p, psi_k))
        lam = apply_rotation(p, -t, lam)
        if not store:
            psi = apply_rotation(p, -t, psi)
    return energy, grad
