"""GF(2) linear algebra on int-encoded bit vectors.

Vectors are python ints (bit i = coordinate i).  Everything here is exact;
numpy enters only for bulk span enumeration, where subsets are materialized
as uint64 arrays in chunks.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np


def rref(rows: Iterable[int]) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form with lowest-set-bit pivots.

    Returns (basis, pivots): independent rows, each the unique one with its
    pivot bit set, ordered by ascending pivot.  Zero rows are dropped.
    """
    basis: List[int] = []
    pivots: List[int] = []
    for row in rows:
        for b, p in zip(basis, pivots):
            if (row >> p) & 1:
                row ^= b
        if row == 0:
            continue
        p = (row & -row).bit_length() - 1
        for i, b in enumerate(basis):
            if (b >> p) & 1:
                basis[i] = b ^ row
        basis.append(row)
        pivots.append(p)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [basis[i] for i in order], [pivots[i] for i in order]


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows)[0])


def coordinates(v: int, basis: Sequence[int], pivots: Sequence[int]) -> int:
    """Express v in an RREF basis; bit i of the result selects basis[i].

    Raises ValueError if v is outside the span.
    """
    c = 0
    for i, (b, p) in enumerate(zip(basis, pivots)):
        if (v >> p) & 1:
            v ^= b
            c |= 1 << i
    if v:
        raise ValueError("vector outside span")
    return c


def in_span(v: int, basis: Sequence[int], pivots: Sequence[int]) -> bool:
    for b, p in zip(basis, pivots):
        if (v >> p) & 1:
            v ^= b
    return v == 0


def parity_kernel_basis(checks: Sequence[int], width: int) -> List[int]:
    """Basis of {v : popcount(v & m) even for every m in checks}, within
    `width` bits."""
    cb, cp = rref(checks)
    pivot_set = set(cp)
    out: List[int] = []
    for f in range(width):
        if f in pivot_set:
            continue
        v = 1 << f
        for row, p in zip(cb, cp):
            if (row >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


def span_size(basis: Sequence[int]) -> int:
    return 1 << len(basis)


def iter_span_chunks(basis: Sequence[int], chunk_bits: int = 20) -> Iterator[np.ndarray]:
    """Yield every XOR-combination of basis rows as uint64 arrays.

    The low min(rank, chunk_bits) rows are expanded once into a table by
    repeated doubling; remaining rows are folded in Gray-code order so each
    outer step is a single XOR.  Rows must fit in 64 bits.
    """
    r = len(basis)
    low = min(r, chunk_bits)
    table = np.zeros(1, dtype=np.uint64)
    for row in basis[:low]:
        table = np.concatenate([table, table ^ np.uint64(row)])
    hi = basis[low:]
    yield table.copy()
    cur = 0
    for g in range(1, 1 << len(hi)):
        flip = (g & -g).bit_length() - 1
        cur ^= hi[flip]
        yield table ^ np.uint64(cur)


def enumerate_span(basis: Sequence[int]) -> np.ndarray:
    """All 2^rank combinations as one uint64 array (small ranks only)."""
    return np.concatenate(list(iter_span_chunks(basis)))
