"""Real Pauli-sum Hamiltonians: file format, random generation, exact ground
energies.

File format, one term per line, '#' comments:

    0.17128249292094 IIZZ
    -0.2227859302428 ZIII

Only even strings (even number of Ys) are allowed -- odd strings are
antisymmetric in the real convention and would make the operator non-real.
Duplicate strings merge by coefficient addition.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import gf2, symmetry
from .paulis import PauliString, parse_pauli

GROUND_ENERGY_MAX_QUBITS = 16
DENSE_MATRIX_MAX_QUBITS = 10
LANCZOS_RESIDUAL_TOL = 1e-10


class HamiltonianError(ValueError):
    pass


class GroundEnergyError(RuntimeError):
    pass


class PauliSumHamiltonian:
    """Immutable real operator sum c_t * P_t over even Pauli strings."""

    def __init__(self, terms: Iterable[Tuple[float, PauliString]]):
        merged: dict = {}
        order: List[Tuple[int, int]] = []
        n = None
        for coeff, p in terms:
            if n is None:
                n = p.n_qubits
            elif p.n_qubits != n:
                raise HamiltonianError(
                    f"qubit count mismatch: {p.n_qubits} vs {n}")
            if p.is_odd:
                raise HamiltonianError(
                    f"odd string {p} would make the Hamiltonian non-real")
            c = float(coeff)
            if not np.isfinite(c):
                raise HamiltonianError(f"non-finite coefficient for {p}")
            key = (p.x_mask, p.z_mask)
            if key in merged:
                merged[key] = (merged[key][0] + c, p)
            else:
                merged[key] = (c, p)
                order.append(key)
        if n is None:
            raise HamiltonianError("a Hamiltonian needs at least one term")
        self.n_qubits = n
        self.terms = tuple(merged[k] for k in order)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PauliSumHamiltonian)
                and self.n_qubits == other.n_qubits
                and self.terms == other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @cached_property
    def matrix(self):
        """Dense up to 10 qubits, CSR beyond; built once and reused."""
        n = self.n_qubits
        dim = 1 << n
        idx = np.arange(dim, dtype=np.int64)
        if n <= DENSE_MATRIX_MAX_QUBITS:
            m = np.zeros((dim, dim))
            for c, p in self.terms:
                m[idx ^ p.x_mask, idx] += c * _column_signs(p, idx)
            return m
        rows, cols, data = [], [], []
        for c, p in self.terms:
            rows.append(idx ^ p.x_mask)
            cols.append(idx)
            data.append(c * _column_signs(p, idx))
        m = sp.coo_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim))
        return m.tocsr()

    def apply(self, state: np.ndarray) -> np.ndarray:
        return self.matrix @ state


def _column_signs(p: PauliString, idx: np.ndarray) -> np.ndarray:
    """Sign of P|k> for every basis index k (the image index is k ^ x_mask)."""
    par = np.bitwise_count(idx & np.int64(p.z_mask)).astype(np.int64)
    par += p.y_count
    return 1.0 - 2.0 * (par & 1)


def parse_hamiltonian(text: str, source: str = "<string>") -> PauliSumHamiltonian:
    terms = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise HamiltonianError(
                f"{source}:{lineno}: expected '<coefficient> <string>', got {line!r}")
        try:
            coeff = float(parts[0])
        except ValueError:
            raise HamiltonianError(
                f"{source}:{lineno}: bad coefficient {parts[0]!r}") from None
        try:
            p = parse_pauli(parts[1])
        except ValueError as exc:
            raise HamiltonianError(f"{source}:{lineno}: {exc}") from None
        if n is None:
            n = p.n_qubits
        elif p.n_qubits != n:
            raise HamiltonianError(
                f"{source}:{lineno}: string length {p.n_qubits} != {n}")
        if p.is_odd:
            raise HamiltonianError(
                f"{source}:{lineno}: odd string {p} makes the operator non-real")
        terms.append((coeff, p))
    if not terms:
        raise HamiltonianError(f"{source}: no terms found")
    return PauliSumHamiltonian(terms)


def format_hamiltonian(h: PauliSumHamiltonian) -> str:
    """17 significant digits: parse(format(h)) reproduces h exactly."""
    return "\n".join(f"{c:.17g} {p}" for c, p in h.terms) + "\n"


def load_hamiltonian(path) -> PauliSumHamiltonian:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hamiltonian(fh.read(), source=str(path))


def save_hamiltonian(path, h: PauliSumHamiltonian) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_hamiltonian(h))


def _count_even_strings(xs: List[int], n: int, include_identity: bool) -> int:
    total = 0
    for x in xs:
        total += (1 << n) if x == 0 and include_identity else (1 << (n - 1))
    return total


def random_real_hamiltonian(n_qubits: int, n_terms: int, seed: int,
                            constraints: Optional[symmetry.ConstraintSet] = None,
                            max_flip_weight: Optional[int] = None,
                            brillouin_reference: Optional[int] = None
                            ) -> PauliSumHamiltonian:
    """Random even-string Hamiltonian with standard-normal coefficients.

    `constraints` keeps every term inside the symmetry sector (x-masks from
    the compatible flip subspace).  `max_flip_weight` bounds popcount(x),
    e.g. 4 for two-body-like structure.  `brillouin_reference` projects the
    coefficients of each 2-flip x-mask family so that all matrix elements
    <m|H|m^f> with popcount(f)=2 vanish at basis state m, emulating a
    reference that is optimal under single excitations; exact-zero terms are
    dropped, so the result can hold fewer than n_terms terms.
    """
    n = n_qubits
    if n < 1:
        raise ValueError("n_qubits must be positive")
    rng = np.random.default_rng(seed)

    if constraints is not None:
        if constraints.n_qubits != n:
            raise ValueError("constraint qubit count mismatch")
        kernel = gf2.parity_kernel_basis(constraints.basis, n)
        xs_all = [int(v) for v in gf2.enumerate_span(kernel)]
    else:
        kernel = None
        xs_all = None

    # capacity check so an impossible request fails fast instead of spinning
    if xs_all is not None:
        pool_xs = [x for x in xs_all
                   if max_flip_weight is None or x.bit_count() <= max_flip_weight]
        capacity = _count_even_strings(pool_xs, n, include_identity=True)
    elif max_flip_weight is not None and n <= 24:
        pool_xs = [x for x in range(1 << n) if x.bit_count() <= max_flip_weight]
        capacity = _count_even_strings(pool_xs, n, include_identity=True)
    elif n <= 24:
        # all even strings: 2^n choices of z at x=0, 2^{n-1} for each x != 0
        capacity = (1 << n) + ((1 << n) - 1) * (1 << (n - 1))
    else:
        capacity = None
    if capacity is not None and n_terms > capacity:
        raise HamiltonianError(f"asked for {n_terms} terms, only {capacity} "
                               f"distinct even strings available")

    seen = set()
    strings: List[PauliString] = []
    while len(strings) < n_terms:
        if kernel is not None:
            coord = int.from_bytes(rng.bytes(8), "little") & ((1 << len(kernel)) - 1)
            x = 0
            for i, row in enumerate(kernel):
                if (coord >> i) & 1:
                    x ^= row
        else:
            x = int.from_bytes(rng.bytes(8), "little") & ((1 << n) - 1)
        if max_flip_weight is not None and x.bit_count() > max_flip_weight:
            continue
        z = int.from_bytes(rng.bytes(8), "little") & ((1 << n) - 1)
        if (x & z).bit_count() & 1:   # force even: flip lowest x bit
            if x == 0:
                continue
            z ^= x & -x
        key = (x, z)
        if key in seen:
            continue
        seen.add(key)
        strings.append(PauliString(n, x, z))

    coeffs = rng.standard_normal(n_terms)
    if brillouin_reference is not None:
        coeffs = _project_single_couplings(coeffs, strings, brillouin_reference)
    terms = [(float(c), p) for c, p in zip(coeffs, strings) if c != 0.0]
    if not terms:
        raise HamiltonianError("projection removed every term; ask for more terms")
    return PauliSumHamiltonian(terms)


def _project_single_couplings(coeffs, strings, reference: int):
    """Within each popcount-2 x-mask family, remove the component of the
    coefficient vector along the signs of the terms' action on |reference>,
    zeroing <reference|H|reference ^ x>."""
    coeffs = coeffs.copy()
    families: dict = {}
    for i, p in enumerate(strings):
        if p.x_mask.bit_count() == 2:
            families.setdefault(p.x_mask, []).append(i)
    for idxs in families.values():
        signs = np.array([float(strings[i].basis_action(reference)[1])
                          for i in idxs])
        c = coeffs[idxs]
        coeffs[idxs] = c - (c @ signs) / (signs @ signs) * signs
    return coeffs


def ground_energy(h: PauliSumHamiltonian, seed: int = 0,
                  max_qubits: int = GROUND_ENERGY_MAX_QUBITS) -> float:
    """Lowest eigenvalue by Lanczos (ARPACK) with a seeded start vector.

    The eigenpair is verified against an explicit residual bound; tiny
    systems fall back to a dense solve where Lanczos has no room to run.
    """
    n = h.n_qubits
    if n > max_qubits:
        raise GroundEnergyError(
            f"{n} qubits exceeds the exact-diagonalization cap {max_qubits}")
    dim = 1 << n
    if n <= 4:
        m = h.matrix
        return float(np.linalg.eigvalsh(m)[0])
    v0 = np.random.default_rng(seed).standard_normal(dim)
    v0 /= np.linalg.norm(v0)
    try:
        vals, vecs = spla.eigsh(h.matrix, k=1, which="SA", v0=v0, tol=0)
    except spla.ArpackNoConvergence as exc:
        raise GroundEnergyError(f"Lanczos did not converge: {exc}") from exc
    e = float(vals[0])
    v = vecs[:, 0]
    residual = float(np.linalg.norm(h.apply(v) - e * v))
    if residual > LANCZOS_RESIDUAL_TOL:
        raise GroundEnergyError(
            f"eigenpair residual {residual:.3e} above {LANCZOS_RESIDUAL_TOL:.0e}")
    return e
