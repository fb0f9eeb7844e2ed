"""Shared fixtures and independent dense-matrix oracles.

The oracle helpers here deliberately avoid the package's own bitmask fast
paths: operators are built with explicit numpy Kronecker products and
closures with a plain python fixpoint loop, so the tests compare two
independent routes to the same numbers.
"""

import itertools
from pathlib import Path

import numpy as np
import pytest

import mcpools

FIXTURES = Path(__file__).parent / "fixtures"

# Single-qubit matrices in the real convention (Y carries its i: Y -> iY).
_MAT = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Y": np.array([[0.0, 1.0], [-1.0, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}


def dense_pauli(label):
    """Kron-built matrix for a Pauli string (real convention).

    Accepts a letter string or a PauliString.  The first letter acts on
    qubit 0, which indexes the least significant bit of a basis state, so
    it is the last factor of the Kronecker product.
    """
    if isinstance(label, mcpools.PauliString):
        label = str(label)
    out = np.eye(1)
    for c in reversed(label):
        out = np.kron(out, _MAT[c])
    return out


def dense_hamiltonian(h):
    out = np.zeros((2 ** h.n_qubits, 2 ** h.n_qubits))
    for coeff, p in h.terms:
        out += coeff * dense_pauli(p)
    return out


def random_pauli(rng, n, odd=None):
    """Draw a uniform random Pauli string, optionally with fixed Y parity."""
    while True:
        letters = "".join(rng.choice(list("IXYZ"), size=n))
        p = mcpools.parse_pauli(letters)
        if odd is None or p.is_odd == odd:
            return p


def brute_force_closure(pool):
    """Fixpoint of products of anticommuting pairs, as (x, z) mask pairs.

    Independent of the package's vectorized closure: plain python sets and
    pairwise sweeps.  Only usable for closures up to a few thousand strings.
    """
    elems = {(p.x_mask, p.z_mask) for p in pool}
    while True:
        new = set()
        pairs = itertools.combinations(elems, 2)
        for (ax, az), (bx, bz) in pairs:
            if ((ax & bz).bit_count() + (az & bx).bit_count()) % 2:
                prod = (ax ^ bx, az ^ bz)
                if prod not in elems:
                    new.add(prod)
        if not new:
            return elems
        elems |= new


def load_pool(name):
    return mcpools.read_pool(FIXTURES / name)


@pytest.fixture(scope="session")
def h4_spec():
    return mcpools.load_symmetry_spec(FIXTURES / "h4.sym")


@pytest.fixture(scope="session")
def lih_spec():
    return mcpools.load_symmetry_spec(FIXTURES / "lih.sym")


@pytest.fixture(scope="session")
def beh2_spec():
    return mcpools.load_symmetry_spec(FIXTURES / "beh2.sym")


@pytest.fixture(scope="session")
def pool_n6():
    return load_pool("pool_n6_reference.pool")


@pytest.fixture(scope="session")
def pool_n8():
    return load_pool("pool_n8_reference.pool")


@pytest.fixture(scope="session")
def h4_pool():
    return load_pool("h4_pool.pool")


@pytest.fixture(scope="session")
def lih_pool():
    return load_pool("lih_pool.pool")


@pytest.fixture(scope="session")
def beh2_pool():
    return load_pool("beh2_pool.pool")
