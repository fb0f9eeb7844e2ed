import itertools

import numpy as np
import pytest

from mcpools import gf2


def rank_oracle(rows, width):
    """GF(2) rank via numpy row reduction on an explicit 0/1 matrix."""
    if not rows:
        return 0
    mat = np.array([[(r >> j) & 1 for j in range(width)] for r in rows],
                   dtype=np.uint8)
    rank = 0
    for col in range(width):
        pivots = np.nonzero(mat[rank:, col])[0]
        if pivots.size == 0:
            continue
        pivot = rank + pivots[0]
        mat[[rank, pivot]] = mat[[pivot, rank]]
        for i in range(mat.shape[0]):
            if i != rank and mat[i, col]:
                mat[i] ^= mat[rank]
        rank += 1
    return rank


def span_oracle(rows):
    out = {0}
    for r in rows:
        out |= {v ^ r for v in out}
    return out


def test_rref_rank_matches_oracle():
    rng = np.random.default_rng(21)
    for _ in range(200):
        width = int(rng.integers(1, 12))
        rows = [int(rng.integers(0, 1 << width)) for _ in range(rng.integers(0, 8))]
        basis, pivots = gf2.rref(rows)
        assert len(basis) == gf2.rank(rows) == rank_oracle(rows, width)
        assert len(pivots) == len(basis)
        # pivots strictly increasing, each pivot bit set in exactly one row
        assert list(pivots) == sorted(pivots)
        for i, piv in enumerate(pivots):
            for j, b in enumerate(basis):
                assert ((b >> piv) & 1) == (i == j)


def test_rref_span_preserved():
    rng = np.random.default_rng(22)
    for _ in range(100):
        width = int(rng.integers(1, 10))
        rows = [int(rng.integers(0, 1 << width)) for _ in range(rng.integers(1, 6))]
        basis, _ = gf2.rref(rows)
        assert span_oracle(rows) == span_oracle(basis)


def test_coordinates_reconstruct():
    rng = np.random.default_rng(23)
    for _ in range(200):
        width = int(rng.integers(2, 14))
        rows = [int(rng.integers(1, 1 << width)) for _ in range(rng.integers(1, 7))]
        basis, pivots = gf2.rref(rows)
        # random element of the span
        v = 0
        for b in basis:
            if rng.integers(2):
                v ^= b
        coord = gf2.coordinates(v, basis, pivots)
        rebuilt = 0
        for i, b in enumerate(basis):
            if (coord >> i) & 1:
                rebuilt ^= b
        assert rebuilt == v
        assert gf2.in_span(v, basis, pivots)


def test_coordinates_outside_span_raises():
    # span of {011, 101} is {000, 011, 101, 110}
    basis, pivots = gf2.rref([0b011, 0b101])
    assert gf2.in_span(0b110, basis, pivots)
    assert not gf2.in_span(0b001, basis, pivots)
    with pytest.raises(ValueError):
        gf2.coordinates(0b001, basis, pivots)


def test_span_size_and_enumeration():
    rng = np.random.default_rng(24)
    for _ in range(60):
        width = int(rng.integers(1, 10))
        rows = [int(rng.integers(0, 1 << width)) for _ in range(rng.integers(0, 5))]
        basis, _ = gf2.rref(rows)
        want = span_oracle(rows)
        assert gf2.span_size(basis) == len(want)
        got = gf2.enumerate_span(basis)
        assert set(int(v) for v in got) == want
        assert len(got) == len(want)


def test_iter_span_chunks_small_chunking():
    # force the Gray-code outer loop by keeping the chunk tiny
    basis, _ = gf2.rref([0b0001, 0b0010, 0b0100, 0b1000])
    seen = []
    for chunk in gf2.iter_span_chunks(basis, chunk_bits=2):
        seen.extend(int(v) for v in chunk)
    assert sorted(seen) == list(range(16))


def test_parity_kernel_basis():
    rng = np.random.default_rng(25)
    for _ in range(100):
        width = int(rng.integers(1, 10))
        checks = [int(rng.integers(0, 1 << width)) for _ in range(rng.integers(0, 4))]
        kernel = gf2.parity_kernel_basis(checks, width)
        assert len(kernel) == width - rank_oracle(checks, width)
        # every kernel span element has even overlap with every check
        for v in span_oracle(kernel):
            for c in checks:
                assert (v & c).bit_count() % 2 == 0
        # and the kernel is not missing solutions: counts agree
        brute = sum(1 for v in range(1 << width)
                    if all((v & c).bit_count() % 2 == 0 for c in checks))
        assert gf2.span_size(kernel) == brute


def test_empty_inputs():
    basis, pivots = gf2.rref([])
    assert basis == [] and pivots == []
    assert gf2.rank([0, 0, 0]) == 0
    assert gf2.span_size([]) == 1
    assert list(gf2.enumerate_span([])) == [0]


def test_duplicate_and_dependent_rows():
    basis, _ = gf2.rref([0b11, 0b11, 0b01, 0b10])
    assert len(basis) == 2
    assert span_oracle(basis) == {0b00, 0b01, 0b10, 0b11}
