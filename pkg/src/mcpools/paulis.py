"""Pauli strings over the reals.

A string is stored as a pair of bitmasks (x_mask, z_mask); bit j describes
qubit j, which is the j-th letter from the LEFT of the text form:

    (x=0, z=0) -> I      (x=1, z=0) -> X
    (x=0, z=1) -> Z      (x=1, z=1) -> Y

Every Y is implicitly multiplied by i, so a string with an odd number of Ys
("odd" string) is a real antisymmetric matrix and a string with an even
number ("even" string) is real symmetric.  All products are taken modulo
scalar phase, which keeps the whole algebra inside these mask pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_QUBITS = 64

_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_MASKS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


class PauliParseError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PauliString:
    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        n = self.n_qubits
        if not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n}")
        full = (1 << n) - 1
        if not 0 <= self.x_mask <= full:
            raise ValueError(f"x_mask 0x{self.x_mask:x} out of range for {n} qubits")
        if not 0 <= self.z_mask <= full:
            raise ValueError(f"z_mask 0x{self.z_mask:x} out of range for {n} qubits")

    @property
    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    @property
    def is_odd(self) -> bool:
        """True iff the string holds an odd number of Ys (antisymmetric matrix)."""
        return bool(self.y_count & 1)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def flip_weight(self) -> int:
        """Number of X/Y letters, i.e. bits flipped on a basis state."""
        return self.x_mask.bit_count()

    def letter(self, j: int) -> str:
        return _LETTER[(self.x_mask >> j) & 1, (self.z_mask >> j) & 1]

    def __str__(self) -> str:
        return "".join(self.letter(j) for j in range(self.n_qubits))

    def commutes(self, other: "PauliString") -> bool:
        """Symplectic criterion: commute iff the two cross overlaps agree mod 2."""
        _check_same_width(self, other)
        a = (self.x_mask & other.z_mask).bit_count() & 1
        b = (self.z_mask & other.x_mask).bit_count() & 1
        return a == b

    def __mul__(self, other: "PauliString") -> "PauliString":
        """Product modulo scalar phase: masks simply XOR."""
        _check_same_width(self, other)
        return PauliString(self.n_qubits, self.x_mask ^ other.x_mask,
                           self.z_mask ^ other.z_mask)

    def basis_action(self, index: int) -> tuple[int, int]:
        """Apply to a computational basis state (bit j of index = qubit j).

        Returns (target_index, sign) with sign in {+1, -1}: the string maps
        |index> to sign * |target_index>.  Per qubit: X flips, Z gives
        (-1)^bit, and iY both flips and gives -1 on bit 0 / +1 on bit 1.
        """
        if not 0 <= index < (1 << self.n_qubits):
            raise ValueError(f"basis index {index} out of range")
        target = index ^ self.x_mask
        par = (self.y_count + (index & self.z_mask).bit_count()) & 1
        return target, -1 if par else 1

    def to_dense(self):
        """Real 2^n x 2^n matrix (column k gets the image of |k>)."""
        import numpy as np

        dim = 1 << self.n_qubits
        m = np.zeros((dim, dim))
        for k in range(dim):
            t, s = self.basis_action(k)
            m[t, k] = s
        return m


def _check_same_width(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


def parse_pauli(text: str) -> PauliString:
    """Parse a text form like 'XZIIXY'; leftmost letter acts on qubit 0."""
    if not text:
        raise PauliParseError("empty Pauli string")
    if len(text) > MAX_QUBITS:
        raise PauliParseError(f"string longer than {MAX_QUBITS} qubits")
    x = z = 0
    for j, c in enumerate(text):
        try:
            xb, zb = _MASKS[c]
        except KeyError:
            raise PauliParseError(
                f"invalid character {c!r} at position {j} (want I, X, Y or Z)"
            ) from None
        x |= xb << j
        z |= zb << j
    return PauliString(len(text), x, z)


def identity(n_qubits: int) -> PauliString:
    return PauliString(n_qubits, 0, 0)


def anticommutes(a: PauliString, b: PauliString) -> bool:
    return not a.commutes(b)
