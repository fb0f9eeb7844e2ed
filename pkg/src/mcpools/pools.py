"""Randomized construction of minimal complete pools, plain and
symmetry-adapted, plus the one-string-per-line pool file format."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import gf2, groups, symmetry
from .paulis import PauliParseError, PauliString, parse_pauli


class SearchBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class Pool:
    operators: tuple
    n_qubits: int
    seed: Optional[int] = None
    attempts: Optional[int] = None
    check_level: Optional[str] = None
    spec: Optional[symmetry.SymmetrySpec] = None

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, i):
        return self.operators[i]

    @property
    def starter_flags(self) -> Optional[tuple]:
        if self.spec is None:
            return None
        return tuple(symmetry.is_starter(p, self.spec) for p in self.operators)

    @property
    def starter_count(self) -> Optional[int]:
        flags = self.starter_flags
        return None if flags is None else sum(flags)


def _rand_mask(rng: np.random.Generator, n: int) -> int:
    return int.from_bytes(rng.bytes(8), "little") & ((1 << n) - 1)


def _rand_odd_z(rng: np.random.Generator, n: int, x_mask: int) -> int:
    """Uniform z with popcount(x & z) odd: draw and, if even, flip the lowest
    x bit -- a bijection between the parity classes."""
    assert x_mask, "odd strings need at least one X/Y"
    z = _rand_mask(rng, n)
    if ((x_mask & z).bit_count() & 1) == 0:
        z ^= x_mask & -x_mask
    return z


def _rand_odd_string(rng: np.random.Generator, n: int) -> PauliString:
    while True:
        x = _rand_mask(rng, n)
        if x == 0:
            continue
        return PauliString(n, x, _rand_odd_z(rng, n, x))


def random_mcp(n_qubits: int, seed: int, level: Optional[str] = None,
               max_attempts: int = 100_000) -> Pool:
    """Draw pools of 2n-2 distinct odd strings until one verifies complete.

    Attempts are a deterministic function of the seed; the accepted pool and
    the attempt count are recorded on the returned Pool.
    """
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits")
    level = groups.resolve_level(level, n_qubits)
    rng = np.random.default_rng(seed)
    size = 2 * n_qubits - 2
    for attempt in range(1, max_attempts + 1):
        seen = set()
        ops: List[PauliString] = []
        while len(ops) < size:
            p = _rand_odd_string(rng, n_qubits)
            key = (p.x_mask, p.z_mask)
            if key not in seen:
                seen.add(key)
                ops.append(p)
        # cheap gate first: a wrong rank kills most bad draws without the
        # closure machinery
        if groups.build_group(ops).rank != size:
            continue
        report = groups.check_pool(ops, level=level)
        if report.complete:
            return Pool(tuple(ops), n_qubits, seed=seed, attempts=attempt,
                        check_level=level)
    raise SearchBudgetError(
        f"no complete pool in {max_attempts} attempts (n={n_qubits}, seed={seed})")


def _draw_starter(rng, spec, starter_xs):
    x = starter_xs[int(rng.integers(0, len(starter_xs)))]
    return PauliString(spec.n_qubits, x, _rand_odd_z(rng, spec.n_qubits, x))


def _draw_compatible(rng, spec, kernel_basis):
    """Odd string whose x-mask sits in the compatible flip subspace."""
    n = spec.n_qubits
    while True:
        coord = int.from_bytes(rng.bytes(8), "little") & ((1 << len(kernel_basis)) - 1)
        x = 0
        for i, row in enumerate(kernel_basis):
            if (coord >> i) & 1:
                x ^= row
        if x == 0:
            continue
        return PauliString(n, x, _rand_odd_z(rng, n, x))


def symmetry_adapted_mcp(spec: symmetry.SymmetrySpec, n_starters: int, seed: int,
                         level: Optional[str] = None,
                         max_attempts: int = 100_000) -> Pool:
    """Random minimal complete pool with exactly n_starters starter operators,
    every operator compatible with the symmetry constraints."""
    n = spec.n_qubits
    level = groups.resolve_level(level, n)
    expected = symmetry.expected_pool_size(spec)
    if not 0 <= n_starters <= expected - 1:
        raise ValueError(
            f"n_starters must be in [0, {expected - 1}] for this spec, "
            f"got {n_starters}")
    constraints = symmetry.build_constraints(spec)
    starter_xs = symmetry.starter_flip_masks(spec)
    if n_starters > 0 and not starter_xs:
        raise ValueError("spec admits no starter operators")
    kernel_basis = gf2.parity_kernel_basis(constraints.basis, n)

    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        seen = set()
        ops: List[PauliString] = []
        while len(ops) < n_starters:
            p = _draw_starter(rng, spec, starter_xs)
            key = (p.x_mask, p.z_mask)
            if key not in seen:
                seen.add(key)
                ops.append(p)
        while len(ops) < expected:
            p = _draw_compatible(rng, spec, kernel_basis)
            if symmetry.is_starter(p, spec):
                continue
            key = (p.x_mask, p.z_mask)
            if key not in seen:
                seen.add(key)
                ops.append(p)
        if groups.build_group(ops).rank != expected:
            continue
        report = groups.check_pool(ops, level=level, spec=spec)
        if report.complete:
            return Pool(tuple(ops), n, seed=seed, attempts=attempt,
                        check_level=level, spec=spec)
    raise SearchBudgetError(
        f"no complete adapted pool in {max_attempts} attempts "
        f"(n={n}, starters={n_starters}, seed={seed})")


def default_starter_count(spec: symmetry.SymmetrySpec) -> int:
    """Half the pool, rounded up -- a solid default for fast early progress."""
    return math.ceil(expected_size(spec) / 2)


def expected_size(spec: symmetry.SymmetrySpec) -> int:
    return symmetry.expected_pool_size(spec)


def read_pool(path) -> List[PauliString]:
    """Pool file: one string per line, '#' comments, blanks ignored."""
    ops = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                ops.append(parse_pauli(line))
            except ValueError as exc:
                raise PauliParseError(f"{path}:{lineno}: {exc}") from None
    if not ops:
        raise ValueError(f"{path}: no operators found")
    widths = {p.n_qubits for p in ops}
    if len(widths) > 1:
        raise ValueError(f"{path}: inconsistent string lengths {sorted(widths)}")
    return ops


def write_pool(path, pool, header_comments: Sequence[str] = ()) -> None:
    """Write a pool file with a metadata comment block.  Pool objects carry
    seed/attempts/level and per-line starter flags; bare lists write plain."""
    lines = []
    for c in header_comments:
        lines.append(f"# {c}")
    if isinstance(pool, Pool):
        meta = [f"n_qubits={pool.n_qubits}"]
        if pool.seed is not None:
            meta.append(f"seed={pool.seed}")
        if pool.attempts is not None:
            meta.append(f"attempts={pool.attempts}")
        if pool.check_level is not None:
            meta.append(f"level={pool.check_level}")
        if pool.starter_count is not None:
            meta.append(f"starters={pool.starter_count}")
        lines.append("# " + " ".join(meta))
        flags = pool.starter_flags
        for i, p in enumerate(pool.operators):
            tag = "  # starter" if flags and flags[i] else ""
            lines.append(f"{p}{tag}")
    else:
        for p in pool:
            lines.append(str(p))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
