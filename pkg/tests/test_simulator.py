import numpy as np
import pytest
import scipy.linalg

import mcpools
from mcpools import simulator
from mcpools.paulis import parse_pauli

from conftest import dense_hamiltonian, dense_pauli, random_pauli


def random_state(rng, n):
    v = rng.standard_normal(1 << n)
    return v / np.linalg.norm(v)


def random_hamiltonian(rng, n, n_terms=10):
    terms = []
    seen = set()
    while len(terms) < n_terms:
        p = random_pauli(rng, n, odd=False)
        if p not in seen:
            seen.add(p)
            terms.append((float(rng.standard_normal()), p))
    return mcpools.PauliSumHamiltonian(terms)


def random_ansatz(rng, n, length):
    gens = [random_pauli(rng, n, odd=True) for _ in range(length)]
    thetas = rng.uniform(-1.0, 1.0, size=length)
    return mcpools.Ansatz(n, int(rng.integers(0, 1 << n)), gens, thetas)


def test_basis_state():
    s = mcpools.basis_state(3, 0b101)
    assert s.shape == (8,)
    assert s[0b101] == 1.0 and np.count_nonzero(s) == 1
    with pytest.raises(ValueError):
        mcpools.basis_state(3, 8)


def test_apply_pauli_matches_dense():
    rng = np.random.default_rng(61)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        p = random_pauli(rng, n)
        v = random_state(rng, n)
        assert np.allclose(mcpools.apply_pauli(p, v), dense_pauli(p) @ v,
                           atol=1e-13)


def test_apply_pauli_width_check():
    with pytest.raises(ValueError):
        mcpools.apply_pauli(parse_pauli("XX"), np.zeros(8))


def test_apply_rotation_matches_expm():
    rng = np.random.default_rng(62)
    for _ in range(60):
        n = int(rng.integers(1, 6))
        p = random_pauli(rng, n, odd=True)
        theta = float(rng.uniform(-3, 3))
        v = random_state(rng, n)
        want = scipy.linalg.expm(theta * dense_pauli(p)) @ v
        got = mcpools.apply_rotation(p, theta, v)
        assert np.allclose(got, want, atol=1e-12)
        assert abs(np.linalg.norm(got) - 1.0) < 1e-12


def test_apply_rotation_rejects_even_generator():
    with pytest.raises(ValueError):
        mcpools.apply_rotation(parse_pauli("XX"), 0.3, np.zeros(4))


def test_apply_rotation_batched_rows():
    rng = np.random.default_rng(63)
    p = random_pauli(rng, 4, odd=True)
    batch = rng.standard_normal((5, 16))
    out = mcpools.apply_rotation(p, 0.7, batch)
    for i in range(5):
        assert np.allclose(out[i], mcpools.apply_rotation(p, 0.7, batch[i]))


def test_expectation_matches_dense():
    rng = np.random.default_rng(64)
    for n in (2, 3, 5):
        h = random_hamiltonian(rng, n)
        v = random_state(rng, n)
        want = float(v @ dense_hamiltonian(h) @ v)
        assert abs(mcpools.expectation(h, v) - want) < 1e-12


def test_pool_gradients_formula_and_fd():
    # g_i = 2 <H psi, A_i psi> and also the derivative of the energy of
    # exp(theta A_i)|psi> at theta = 0
    rng = np.random.default_rng(65)
    n = 4
    h = random_hamiltonian(rng, n)
    psi = random_state(rng, n)
    ops = [random_pauli(rng, n, odd=True) for _ in range(12)]
    grads = mcpools.pool_gradients(h, psi, ops)

    hm = dense_hamiltonian(h)
    for g, p in zip(grads, ops):
        a = dense_pauli(p)
        assert abs(g - 2.0 * (hm @ psi) @ (a @ psi)) < 1e-12
        eps = 1e-6
        plus = mcpools.apply_rotation(p, eps, psi)
        minus = mcpools.apply_rotation(p, -eps, psi)
        fd = (mcpools.expectation(h, plus) - mcpools.expectation(h, minus)) / (2 * eps)
        assert abs(g - fd) < 1e-8


def test_ansatz_validation():
    y0 = parse_pauli("YII")
    with pytest.raises(ValueError):
        mcpools.Ansatz(3, 0, [y0], [0.1, 0.2])       # angle count
    with pytest.raises(ValueError):
        mcpools.Ansatz(3, 0, [parse_pauli("YY")], [0.1])   # even generator
    with pytest.raises(ValueError):
        mcpools.Ansatz(4, 0, [y0], [0.1])            # width mismatch
    a = mcpools.Ansatz(3, 5, [y0], [0.3])
    b = a.with_thetas([0.9])
    assert b.thetas[0] == 0.9 and b.generators == a.generators
    c = a.extended(parse_pauli("IYI"))
    assert len(c) == 2 and c.thetas[-1] == 0.0


def test_prepare_state_matches_dense_product():
    rng = np.random.default_rng(66)
    for _ in range(20):
        n = 4
        ans = random_ansatz(rng, n, 6)
        psi = mcpools.basis_state(n, ans.reference)
        for p, t in zip(ans.generators, ans.thetas):
            psi = scipy.linalg.expm(float(t) * dense_pauli(p)) @ psi
        assert np.allclose(mcpools.prepare_state(ans), psi, atol=1e-12)


def test_adjoint_gradient_matches_finite_differences():
    rng = np.random.default_rng(67)
    for _ in range(5):
        n, length = 4, 8
        ans = random_ansatz(rng, n, length)
        h = random_hamiltonian(rng, n)
        energy, grad = mcpools.ansatz_energy_gradient(ans, h)
        assert abs(energy - mcpools.expectation(h, mcpools.prepare_state(ans))) < 1e-12
        eps = 1e-5
        for k in range(length):
            tp, tm = ans.thetas.copy(), ans.thetas.copy()
            tp[k] += eps
            tm[k] -= eps
            ep = mcpools.expectation(h, mcpools.prepare_state(ans.with_thetas(tp)))
            em = mcpools.expectation(h, mcpools.prepare_state(ans.with_thetas(tm)))
            fd = (ep - em) / (2 * eps)
            denom = max(1.0, abs(fd))
            assert abs(grad[k] - fd) / denom < 1e-6, (k, grad[k], fd)


def test_adjoint_gradient_low_memory_path_identical():
    rng = np.random.default_rng(68)
    ans = random_ansatz(rng, 5, 12)
    h = random_hamiltonian(rng, 5)
    e_full, g_full = mcpools.ansatz_energy_gradient(ans, h)
    e_lean, g_lean = mcpools.ansatz_energy_gradient(ans, h, store_budget=0)
    assert e_full == e_lean
    assert np.allclose(g_full, g_lean, atol=1e-12)


def test_empty_ansatz_gradient():
    h = mcpools.parse_hamiltonian("1.0 ZI\n0.5 IZ\n")
    ans = mcpools.Ansatz(2, 0b00)
    energy, grad = mcpools.ansatz_energy_gradient(ans, h)
    assert energy == pytest.approx(1.5)
    assert grad.size == 0


def test_simulator_width_guard():
    with pytest.raises(ValueError):
        mcpools.basis_state(15, 0)
