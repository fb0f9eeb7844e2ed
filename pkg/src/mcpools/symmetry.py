"""Z2 symmetry data for molecular-style systems and the derived constraints.

A system is described by a small text spec:

    qubits: 8
    alpha: 10101010          # 1 = alpha spin-orbital, read qubit 0 leftmost
    hf: 11110000             # Hartree-Fock occupation
    character: +1 -1 +1 -1   # one line per point-group operation; +-1 per
                             # qubit, or per spatial orbital (expanded a,b)

Each abelian point-group operation and each spin sector contributes a parity
functional on flip masks: a Pauli string keeps the symmetry sector iff its
x-mask overlaps every functional mask on an even number of bits.  Degenerate
irreps (characters other than +-1) are out of scope and rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Union

from . import gf2
from .paulis import PauliString


class SymmetrySpecError(ValueError):
    pass


@dataclass(frozen=True)
class SymmetrySpec:
    n_qubits: int
    alpha_mask: int
    hf_occupation: int
    character_columns: tuple = ()

    def __post_init__(self):
        full = (1 << self.n_qubits) - 1
        for name in ("alpha_mask", "hf_occupation"):
            v = getattr(self, name)
            if not 0 <= v <= full:
                raise ValueError(f"{name} out of range for {self.n_qubits} qubits")
        for m in self.character_columns:
            if not 0 <= m <= full:
                raise ValueError("character mask out of range")

    @property
    def beta_mask(self) -> int:
        return ~self.alpha_mask & ((1 << self.n_qubits) - 1)

    @property
    def n_electrons(self) -> int:
        return self.hf_occupation.bit_count()


@dataclass(frozen=True)
class ConstraintSet:
    """GF(2)-reduced parity functionals on flip masks."""

    n_qubits: int
    masks: tuple          # raw functional masks (alpha, beta, characters)
    basis: tuple          # RREF of masks
    pivots: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)


def build_constraints(spec: SymmetrySpec) -> ConstraintSet:
    masks = (spec.alpha_mask, spec.beta_mask) + tuple(spec.character_columns)
    basis, pivots = gf2.rref(masks)
    return ConstraintSet(spec.n_qubits, masks, tuple(basis), tuple(pivots))


def x_mask_satisfies(x_mask: int, constraints: ConstraintSet) -> bool:
    return all(((x_mask & m).bit_count() & 1) == 0 for m in constraints.basis)


def satisfies_constraints(p: PauliString, constraints: ConstraintSet) -> bool:
    """Does the string map the symmetry sector to itself?  Only the flip
    part matters: Z factors never leave an abelian-symmetry sector."""
    if p.n_qubits != constraints.n_qubits:
        raise ValueError(
            f"qubit count mismatch: {p.n_qubits} vs {constraints.n_qubits}")
    return x_mask_satisfies(p.x_mask, constraints)


def expected_pool_size(spec_or_constraints) -> int:
    """Minimal complete pool size in the presence of the symmetries:
    2n - 2 - rank(constraints).  Accepts a SymmetrySpec or a ConstraintSet."""
    cons = spec_or_constraints
    if not isinstance(cons, ConstraintSet):
        cons = build_constraints(cons)
    return 2 * cons.n_qubits - 2 - cons.rank


def allowed_flip_masks(constraints: ConstraintSet) -> List[int]:
    """Every nonzero flip mask compatible with the constraints (the kernel
    subspace minus zero).  Small by construction: dim = n - rank."""
    kernel = gf2.parity_kernel_basis(constraints.basis, constraints.n_qubits)
    return sorted(int(v) for v in gf2.enumerate_span(kernel) if v != 0)


def starter_x_satisfies(x_mask: int, spec: SymmetrySpec) -> bool:
    if x_mask.bit_count() != 4:
        return False
    occ = spec.hf_occupation
    virt = ~occ & ((1 << spec.n_qubits) - 1)
    for sector in (spec.alpha_mask, spec.beta_mask):
        if (x_mask & occ & sector).bit_count() != (x_mask & virt & sector).bit_count():
            return False
    for m in spec.character_columns:
        if (x_mask & m).bit_count() & 1:
            return False
    return True


def is_starter(p: PauliString, spec: SymmetrySpec) -> bool:
    """Starters are the double-excitation-like strings: four flipped qubits,
    balanced between occupied and virtual within each spin sector, with even
    overlap against every point-group column.  Only such operators can pick
    up a gradient on the very first step from the Hartree-Fock state."""
    if p.n_qubits != spec.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {spec.n_qubits}")
    return p.is_odd and starter_x_satisfies(p.x_mask, spec)


def starter_flip_masks(spec: SymmetrySpec) -> List[int]:
    """All x-masks a starter may carry, in sorted order.

    Balanced popcount-4 masks come in three occupied->virtual patterns:
    both excitations in the alpha sector, both in beta, or one in each.
    """
    from itertools import combinations

    n = spec.n_qubits
    occ = spec.hf_occupation
    a_occ = _bits(spec.alpha_mask & occ, n)
    a_virt = _bits(spec.alpha_mask & ~occ, n)
    b_occ = _bits(spec.beta_mask & occ, n)
    b_virt = _bits(spec.beta_mask & ~occ, n)

    cands = set()
    for occ_bits, virt_bits in ((a_occ, a_virt), (b_occ, b_virt)):
        for oo in combinations(occ_bits, 2):
            for vv in combinations(virt_bits, 2):
                cands.add((1 << oo[0]) | (1 << oo[1]) |
                          (1 << vv[0]) | (1 << vv[1]))
    for ao in a_occ:
        for av in a_virt:
            for bo in b_occ:
                for bv in b_virt:
                    cands.add((1 << ao) | (1 << av) | (1 << bo) | (1 << bv))

    return sorted(x for x in cands
                  if all(((x & m).bit_count() & 1) == 0
                         for m in spec.character_columns))


def _bits(mask: int, n: int) -> List[int]:
    return [j for j in range(n) if (mask >> j) & 1]


def parse_symmetry_spec(text: str, source: str = "<string>") -> SymmetrySpec:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise SymmetrySpecError(
                f"{source}:{lineno}: expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        entries.append((key.strip().lower(), value.strip(), lineno))

    fields = {}
    characters = []
    for key, value, lineno in entries:
        if key == "qubits":
            try:
                fields["qubits"] = int(value)
            except ValueError:
                raise SymmetrySpecError(
                    f"{source}:{lineno}: qubits must be an integer") from None
        elif key in ("alpha", "hf"):
            fields[key] = (value, lineno)
        elif key == "character":
            characters.append((value, lineno))
        else:
            raise SymmetrySpecError(f"{source}:{lineno}: unknown key {key!r}")

    if "qubits" not in fields:
        raise SymmetrySpecError(f"{source}: missing 'qubits:' line")
    n = fields["qubits"]
    if n < 2 or n % 2:
        raise SymmetrySpecError(f"{source}: qubits must be even and >= 2, got {n}")
    for key in ("alpha", "hf"):
        if key not in fields:
            raise SymmetrySpecError(f"{source}: missing '{key}:' line")

    alpha = _parse_bitstring(*fields["alpha"], n=n, source=source, key="alpha")
    hf = _parse_bitstring(*fields["hf"], n=n, source=source, key="hf")
    columns = tuple(_parse_characters(v, lineno, n, source)
                    for v, lineno in characters)
    return SymmetrySpec(n, alpha, hf, columns)


def _parse_bitstring(value: str, lineno: int, n: int, source: str, key: str) -> int:
    if len(value) != n or any(c not in "01" for c in value):
        raise SymmetrySpecError(
            f"{source}:{lineno}: {key} must be a 0/1 string of length {n}")
    mask = 0
    for j, c in enumerate(value):  # leftmost char is qubit 0
        if c == "1":
            mask |= 1 << j
    return mask


def _parse_characters(value: str, lineno: int, n: int, source: str) -> int:
    tokens = value.split()
    if len(tokens) == n // 2:
        tokens = [t for t in tokens for _ in range(2)]  # per spatial orbital
    if len(tokens) != n:
        raise SymmetrySpecError(
            f"{source}:{lineno}: character row needs {n} (or {n // 2}) entries, "
            f"got {len(tokens)}")
    mask = 0
    for j, t in enumerate(tokens):
        if t in ("+1", "1"):
            continue
        if t == "-1":
            mask |= 1 << j
        else:
            raise SymmetrySpecError(
                f"{source}:{lineno}: character {t!r} is not +-1; degenerate "
                f"irreps are not supported")
    return mask


def load_symmetry_spec(path) -> SymmetrySpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_symmetry_spec(fh.read(), source=str(path))
