"""Tests for tensor-product and density-matrix utilities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlocality.linalg import (hermitian_eigenvalues, kron, partial_trace,
                              partial_transpose, permute_qubits)
from nlocality.states import amplitude_damped_ghz

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def random_density(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def test_kron_matches_numpy_and_associates():
    rng = np.random.default_rng(0)
    a, b, c = (random_hermitian(rng, 2) for _ in range(3))
    expected = np.kron(np.kron(a, b), c)
    assert np.allclose(kron(a, b, c), expected)
    assert np.allclose(kron(kron(a, b), c), expected)


def test_permute_identity_is_noop():
    rng = np.random.default_rng(1)
    state = rng.normal(size=8) + 1j * rng.normal(size=8)
    assert np.allclose(permute_qubits(state, (0, 1, 2)), state)


def test_permute_moves_qubit_zero():
    # |100> on 3 qubits, qubit 0 sent to position 2 -> |001>
    state = np.zeros(8)
    state[4] = 1.0
    out = permute_qubits(state, (2, 0, 1))
    expected = np.zeros(8)
    expected[1] = 1.0
    assert np.allclose(out, expected)


def test_permute_rejects_non_bijection():
    state = np.zeros(8)
    state[0] = 1.0
    with pytest.raises(ValueError):
        permute_qubits(state, (0, 0, 1))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.permutations(list(range(3))))
def test_permute_preserves_operator_spectrum(seed, perm):
    rho = random_density(np.random.default_rng(seed), 8)
    out = permute_qubits(rho, tuple(perm))
    assert np.allclose(np.sort(np.linalg.eigvalsh(out)),
                       np.sort(np.linalg.eigvalsh(rho)))


def test_partial_trace_product_state():
    rng = np.random.default_rng(2)
    r1 = random_density(rng, 2)
    r2 = random_density(rng, 4)
    rho = kron(r1, r2)
    assert np.allclose(partial_trace(rho, 3, {0}), r1)
    assert np.allclose(partial_trace(rho, 3, {1, 2}), r2)


def test_partial_trace_composes():
    rho = random_density(np.random.default_rng(3), 8)
    step = partial_trace(rho, 3, {0, 1})
    direct = partial_trace(rho, 3, {0})
    assert np.allclose(partial_trace(step, 2, {0}), direct)
    assert abs(np.trace(direct) - 1.0) < 1e-12


def test_partial_transpose_involution_and_trace():
    rho = random_density(np.random.default_rng(4), 8)
    pt = partial_transpose(rho, 3, {1})
    assert abs(np.trace(pt) - 1.0) < 1e-12
    assert np.allclose(partial_transpose(pt, 3, {1}), rho)


def test_partial_transpose_amplitude_damped_spectrum():
    # brute-force spectral reference for the damped GHZ state at gamma=0.3
    pt = partial_transpose(amplitude_damped_ghz(0.3), 3, {0})
    eigs = hermitian_eigenvalues(pt)
    expected = [-0.241083041, 0.0315, 0.0315, 0.0735, 0.0735, 0.1715,
                0.346083041, 0.5135]
    assert np.allclose(eigs, expected, atol=1e-9)


def test_hermitian_eigenvalues_basics():
    assert np.allclose(hermitian_eigenvalues(np.eye(2)), [1.0, 1.0])
    assert np.allclose(hermitian_eigenvalues(SX), [-1.0, 1.0])
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
