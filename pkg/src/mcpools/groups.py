"""Group- and algebra-level structure of Pauli operator pools.

Pool elements live (mod phase) in the abelian group F_2^{2n} under mask XOR.
A pool of k strings generates a subgroup of size 2^rank; completeness of a
pool is decided by three increasingly strict levels:

  group       rank equals the expected value and every allowed nonzero flip
              mask is realized by an odd element of the generated group
  inseparable group level + the anticommutation graph of the pool is connected
  algebra     inseparable level + the nested-commutator closure of the pool
              spans every odd (symmetry-compatible) string of the group

The closure works in GF(2) coordinates relative to a reduced basis of the
pool's span: an element is an int of rank bits, products are XORs, and
anticommutation is a bit-parity against a precomputed symplectic Gram matrix.
That keeps the worklist sweeps fully vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import gf2
from .paulis import PauliString

ENUMERATION_CAP = 26  # max group rank for explicit 2^rank enumeration

LEVELS = ("group", "inseparable", "algebra")


class EnumerationCapError(RuntimeError):
    pass


class OddParityError(ValueError):
    pass


def sym_vector(p: PauliString) -> int:
    """Symplectic encoding x | z << n used for all GF(2) work."""
    return p.x_mask | p.z_mask << p.n_qubits


def from_sym_vector(v: int, n_qubits: int) -> PauliString:
    full = (1 << n_qubits) - 1
    return PauliString(n_qubits, v & full, v >> n_qubits)


def omega(a: int, b: int, n_qubits: int) -> int:
    """Symplectic form on encoded vectors: 1 iff the strings anticommute."""
    full = (1 << n_qubits) - 1
    ax, az = a & full, a >> n_qubits
    bx, bz = b & full, b >> n_qubits
    return ((ax & bz).bit_count() + (az & bx).bit_count()) & 1


def _common_width(pool: Sequence[PauliString]) -> int:
    if not pool:
        raise ValueError("empty pool")
    n = pool[0].n_qubits
    for p in pool:
        if p.n_qubits != n:
            raise ValueError(f"qubit count mismatch in pool: {p.n_qubits} vs {n}")
    return n


@dataclass(frozen=True)
class GeneratedGroup:
    """Subgroup of F_2^{2n} generated by a pool, held as an RREF basis."""

    n_qubits: int
    basis: tuple
    pivots: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << self.rank

    def contains(self, p: PauliString) -> bool:
        return gf2.in_span(sym_vector(p), self.basis, self.pivots)

    def elements(self) -> list:
        """All group elements as PauliStrings (small ranks only)."""
        if self.rank > ENUMERATION_CAP:
            raise EnumerationCapError(
                f"rank {self.rank} exceeds enumeration cap {ENUMERATION_CAP}")
        return [from_sym_vector(int(v), self.n_qubits)
                for v in gf2.enumerate_span(self.basis)]


def build_group(pool: Sequence[PauliString]) -> GeneratedGroup:
    n = _common_width(pool)
    basis, pivots = gf2.rref(sym_vector(p) for p in pool)
    return GeneratedGroup(n, tuple(basis), tuple(pivots))


def _span_masks(group: GeneratedGroup, enumeration_cap: int = ENUMERATION_CAP):
    """Yield (x_masks, z_masks) uint64 chunk pairs over the whole group."""
    if group.rank > enumeration_cap:
        raise EnumerationCapError(
            f"rank {group.rank} exceeds enumeration cap {enumeration_cap}")
    full = np.uint64((1 << group.n_qubits) - 1)
    shift = np.uint64(group.n_qubits)
    for chunk in gf2.iter_span_chunks(group.basis):
        yield chunk & full, chunk >> shift


def flip_coverage(pool_or_group, allowed_flips: Optional[Iterable[int]] = None,
                  enumeration_cap: int = ENUMERATION_CAP) -> bool:
    """Does some odd group element realize every (allowed) nonzero flip mask?

    `allowed_flips` restricts the targets (e.g. to the symmetry-compatible
    flip subspace); by default every nonzero n-bit mask must be covered.
    """
    group = pool_or_group
    if not isinstance(group, GeneratedGroup):
        group = build_group(group)
    n = group.n_qubits
    covered = np.zeros(1 << n, dtype=bool)
    for x, z in _span_masks(group, enumeration_cap):
        odd = (np.bitwise_count(x & z) & np.uint8(1)).astype(bool)
        covered[x[odd].astype(np.int64)] = True
    if allowed_flips is None:
        return bool(covered[1:].all())
    targets = [f for f in allowed_flips if f != 0]
    if not targets:
        return True
    return bool(covered[np.asarray(targets, dtype=np.int64)].all())


def count_odd_elements(group: GeneratedGroup,
                       constraint_masks: Optional[Iterable[int]] = None,
                       enumeration_cap: int = ENUMERATION_CAP) -> int:
    """Number of odd group elements, optionally restricted to x-masks with
    even overlap against every constraint mask."""
    masks = [np.uint64(m) for m in constraint_masks] if constraint_masks else []
    total = 0
    one = np.uint8(1)
    for x, z in _span_masks(group, enumeration_cap):
        keep = (np.bitwise_count(x & z) & one).astype(bool)
        for m in masks:
            keep &= ~(np.bitwise_count(x & m) & one).astype(bool)
        total += int(keep.sum())
    return total


def odd_count_target(n_qubits: int) -> int:
    """Odd strings in a maximal minimally-generated group: 2^{n-1}(2^{n-1}+1)/2."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    h = 1 << (n_qubits - 1)
    return h * (h + 1) // 2


def canonical_minimal_generators(n_qubits: int) -> list:
    """The 2n-2 element reference construction: single Z and Y on the first
    n-2 qubits, Y on qubit n-2, and ZY on the last pair."""
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits")
    n = n_qubits
    gens = []
    for j in range(n - 2):
        gens.append(PauliString(n, 0, 1 << j))            # Z_j
    for j in range(n - 2):
        gens.append(PauliString(n, 1 << j, 1 << j))       # Y_j
    gens.append(PauliString(n, 1 << (n - 2), 1 << (n - 2)))   # Y_{n-2}
    gens.append(PauliString(n, 1 << (n - 1), 3 << (n - 2)))   # Z_{n-2} Y_{n-1}
    return gens


def inseparability(pool: Sequence[PauliString]) -> bool:
    """Is the anticommutation graph of the pool connected?"""
    _common_width(pool)
    k = len(pool)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if not pool[i].commutes(pool[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    roots = {find(i) for i in range(k)}
    return len(roots) == 1


@dataclass(frozen=True)
class LieClosure:
    n_qubits: int
    elements: tuple
    capped: bool

    @property
    def size(self) -> int:
        return len(self.elements)


def _coord_wvecs(coords: np.ndarray, gram_rows: np.ndarray) -> np.ndarray:
    """Symplectic pairing row for each coordinate int: XOR of Gram rows
    selected by its bits."""
    w = np.zeros_like(coords)
    for i in range(gram_rows.size):
        w ^= np.where((coords >> i) & 1 == 1, gram_rows[i], 0)
    return w


def lie_closure(pool: Sequence[PauliString], cap: Optional[int] = None,
                enumeration_cap: int = ENUMERATION_CAP) -> LieClosure:
    """Close the pool under nested commutators of anticommuting pairs.

    For odd strings the commutator of an anticommuting pair is (mod scalars)
    just their product, so the closure lives inside the generated group and
    is computed by a worklist sweep in GF(2) coordinates.  Enumeration stops
    once the element count exceeds `cap` (default: one past the maximal-group
    odd count, which a correct run can never hit).
    """
    n = _common_width(pool)
    for p in pool:
        if not p.is_odd:
            raise OddParityError(f"pool member {p} is even; closure needs odd strings")
    if cap is None:
        cap = odd_count_target(n) + 1

    basis, pivots = gf2.rref(sym_vector(p) for p in pool)
    r = len(basis)
    if r > enumeration_cap:
        raise EnumerationCapError(
            f"pool rank {r} exceeds enumeration cap {enumeration_cap}")

    gram = np.zeros(r, dtype=np.int64)
    for i in range(r):
        row = 0
        for j in range(r):
            row |= omega(basis[i], basis[j], n) << j
        gram[i] = row

    seeds = sorted({gf2.coordinates(sym_vector(p), basis, pivots) for p in pool})
    coords = np.asarray(seeds, dtype=np.int64)
    wvecs = _coord_wvecs(coords, gram)
    seen = np.zeros(1 << r, dtype=bool)
    seen[coords] = True

    all_c, all_w = coords, wvecs
    frontier_c, frontier_w = coords, wvecs
    capped = False
    budget = 1 << 23
    while frontier_c.size and not capped:
        step = max(1, budget // max(1, all_c.size))
        found = []
        for i in range(0, frontier_c.size, step):
            fc = frontier_c[i:i + step, None]
            fw = frontier_w[i:i + step, None]
            anti = (np.bitwise_count((fw & all_c[None, :]).astype(np.uint64))
                    & np.uint64(1)).astype(bool)
            cand = (fc ^ all_c[None, :])[anti]
            if cand.size:
                cand = np.unique(cand)
                cand = cand[~seen[cand]]
                if cand.size:
                    seen[cand] = True
                    found.append(cand)
        if not found:
            break
        new_c = np.concatenate(found)
        new_w = _coord_wvecs(new_c, gram)
        all_c = np.concatenate([all_c, new_c])
        all_w = np.concatenate([all_w, new_w])
        frontier_c, frontier_w = new_c, new_w
        if all_c.size > cap:
            capped = True

    vecs = np.zeros_like(all_c)
    for i, b in enumerate(basis):
        vecs ^= np.where((all_c >> i) & 1 == 1, np.int64(b), 0)
    elements = tuple(from_sym_vector(int(v), n) for v in np.sort(vecs))
    return LieClosure(n, elements, capped)


@dataclass(frozen=True)
class CompletenessReport:
    n_qubits: int
    pool_size: int
    expected_size: int
    level: str
    all_odd: bool
    distinct: bool
    rank: int
    rank_ok: bool
    constraints_ok: Optional[bool] = None
    coverage_ok: Optional[bool] = None
    inseparable: Optional[bool] = None
    closure_size: Optional[int] = None
    closure_target: Optional[int] = None
    closure_capped: Optional[bool] = None
    algebra_ok: Optional[bool] = None
    complete: bool = False
    failures: tuple = field(default_factory=tuple)

    def to_text(self) -> str:
        lines = [
            f"pool: {self.pool_size} operators on {self.n_qubits} qubits "
            f"(expected {self.expected_size})",
            f"check level: {self.level}",
            f"all odd: {_yn(self.all_odd)}    distinct: {_yn(self.distinct)}",
            f"group rank: {self.rank} (want {self.expected_size}): "
            f"{_yn(self.rank_ok)}",
        ]
        if self.constraints_ok is not None:
            lines.append(f"symmetry constraints satisfied: {_yn(self.constraints_ok)}")
        if self.coverage_ok is not None:
            lines.append(f"odd flip coverage: {_yn(self.coverage_ok)}")
        if self.inseparable is not None:
            lines.append(f"inseparable (anticommutation graph connected): "
                         f"{_yn(self.inseparable)}")
        if self.closure_size is not None:
            capped = " (capped)" if self.closure_capped else ""
            lines.append(f"commutator closure: {self.closure_size}{capped} "
                         f"of {self.closure_target} odd strings: {_yn(self.algebra_ok)}")
        verdict = "COMPLETE" if self.complete else "INCOMPLETE"
        if self.failures:
            verdict += " (" + ", ".join(self.failures) + ")"
        lines.append(verdict)
        return "\n".join(lines)

    def to_kv(self) -> str:
        pairs = [
            ("n_qubits", self.n_qubits),
            ("pool_size", self.pool_size),
            ("expected_size", self.expected_size),
            ("level", self.level),
            ("all_odd", self.all_odd),
            ("distinct", self.distinct),
            ("rank", self.rank),
            ("rank_ok", self.rank_ok),
        ]
        for name in ("constraints_ok", "coverage_ok", "inseparable",
                     "closure_size", "closure_target", "closure_capped",
                     "algebra_ok"):
            v = getattr(self, name)
            if v is not None:
                pairs.append((name, v))
        pairs.append(("complete", self.complete))
        return "\n".join(f"{k}={_kvval(v)}" for k, v in pairs)


def _yn(b) -> str:
    return "yes" if b else "no"


def _kvval(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def resolve_level(level: Optional[str], n_qubits: int) -> str:
    """'auto'/None picks the full algebra check up to 10 qubits, then backs
    off to the inseparability check."""
    if level in (None, "auto"):
        return "algebra" if n_qubits <= 10 else "inseparable"
    if level not in LEVELS:
        raise ValueError(f"unknown check level {level!r}; want one of {LEVELS}")
    return level


def check_pool(pool: Sequence[PauliString], level: Optional[str] = None,
               spec=None, enumeration_cap: int = ENUMERATION_CAP,
               closure_cap: Optional[int] = None) -> CompletenessReport:
    """Run the completeness battery on a pool and collect a report.

    With a symmetry spec the expectations change: rank and pool size target
    the reduced count, flips only need covering inside the compatible
    subspace, and the closure target is the enumerated count of odd
    compatible strings in the generated group.  A wrong pool size is a
    reported failure, not an error.
    """
    from . import symmetry  # local import; symmetry sits above this module

    n = _common_width(pool)
    level = resolve_level(level, n)
    failures = []

    if spec is not None:
        if spec.n_qubits != n:
            raise ValueError(
                f"symmetry spec is for {spec.n_qubits} qubits, pool has {n}")
        constraints = symmetry.build_constraints(spec)
        expected = symmetry.expected_pool_size(spec)
        allowed = symmetry.allowed_flip_masks(constraints)
        constraint_masks = constraints.basis
    else:
        constraints = None
        expected = 2 * n - 2
        allowed = None
        constraint_masks = None

    all_odd = all(p.is_odd for p in pool)
    if not all_odd:
        failures.append("even operator present")
    distinct = len({(p.x_mask, p.z_mask) for p in pool}) == len(pool)
    if not distinct:
        failures.append("duplicate operators")
    if len(pool) != expected:
        failures.append(f"size {len(pool)} != expected {expected}")

    constraints_ok = None
    if constraints is not None:
        constraints_ok = all(
            symmetry.satisfies_constraints(p, constraints) for p in pool)
        if not constraints_ok:
            failures.append("constraint-violating operator")

    group = build_group(pool)
    rank_ok = group.rank == expected
    if not rank_ok:
        failures.append(f"rank {group.rank} != {expected}")

    coverage_ok = flip_coverage(group, allowed_flips=allowed,
                                enumeration_cap=enumeration_cap)
    if not coverage_ok:
        failures.append("flip coverage gap")

    inseparable = None
    if level in ("inseparable", "algebra"):
        inseparable = inseparability(pool)
        if not inseparable:
            failures.append("separable pool")

    closure_size = closure_target = closure_capped = algebra_ok = None
    if level == "algebra":
        if constraints is not None:
            closure_target = count_odd_elements(
                group, constraint_masks=constraint_masks,
                enumeration_cap=enumeration_cap)
        else:
            closure_target = odd_count_target(n)
        if all_odd:
            closure = lie_closure(pool, cap=closure_cap,
                                  enumeration_cap=enumeration_cap)
            closure_size = closure.size
            closure_capped = closure.capped
            algebra_ok = (not closure.capped) and closure_size == closure_target
        else:
            algebra_ok = False
        if not algebra_ok:
            failures.append("closure does not span")

    complete = not failures
    return CompletenessReport(
        n_qubits=n, pool_size=len(pool), expected_size=expected, level=level,
        all_odd=all_odd, distinct=distinct, rank=group.rank, rank_ok=rank_ok,
        constraints_ok=constraints_ok, coverage_ok=coverage_ok,
        inseparable=inseparable, closure_size=closure_size,
        closure_target=closure_target, closure_capped=closure_capped,
        algebra_ok=algebra_ok, complete=complete, failures=tuple(failures))
