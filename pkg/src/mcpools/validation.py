"""Input normalization shared by the solver API and the CLI."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .paulis import PauliString, parse_pauli


def as_occupation(value, n_qubits: int) -> int:
    """Accept an int basis index or a 0/1 string (leftmost char = qubit 0)."""
    if isinstance(value, str):
        if len(value) != n_qubits or any(c not in "01" for c in value):
            raise ValueError(
                f"occupation string must be 0/1 of length {n_qubits}, got {value!r}")
        mask = 0
        for j, c in enumerate(value):
            if c == "1":
                mask |= 1 << j
        return mask
    idx = int(value)
    if not 0 <= idx < (1 << n_qubits):
        raise ValueError(f"occupation {value} out of range for {n_qubits} qubits")
    return idx


def as_operator_list(ops, n_qubits: Optional[int] = None) -> tuple:
    """Normalize an iterable of PauliString | str into a tuple of PauliString."""
    out = []
    for op in ops:
        p = parse_pauli(op) if isinstance(op, str) else op
        if not isinstance(p, PauliString):
            raise TypeError(f"expected PauliString or str, got {type(op).__name__}")
        if n_qubits is not None and p.n_qubits != n_qubits:
            raise ValueError(f"operator {p} is on {p.n_qubits} qubits, want {n_qubits}")
        out.append(p)
    if not out:
        raise ValueError("empty operator list")
    return tuple(out)


def as_state_array(states, n_qubits: int) -> np.ndarray:
    """Validate a (dim,) or (m, dim) float array of unit-norm real states."""
    arr = np.asarray(states, dtype=np.float64)
    dim = 1 << n_qubits
    if arr.ndim not in (1, 2) or arr.shape[-1] != dim:
        raise ValueError(f"state array must have last dimension {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state array contains non-finite entries")
    return arr
