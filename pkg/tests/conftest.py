"""Shared independent oracles for the test suite.

Everything here is deliberately written from first principles (explicit
loops, dense matrices) rather than reusing package internals, so that a bug
in a fast path cannot hide behind the same bug in its test.
"""

from typing import List, Tuple

import numpy as np
import pytest

from levelq import IsingInstance

# Single-qubit operators in the computational basis.
I2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def op_on_qubit(op: np.ndarray, q: int, n: int) -> np.ndarray:
    """Embed a 2x2 operator on qubit q of an n-qubit register.

    Index bit q is the q-th least significant bit, so qubit 0 sits in the
    rightmost kron factor.
    """
    return np.kron(np.eye(1 << (n - 1 - q)), np.kron(op, np.eye(1 << q)))


def energy_of_bits(inst: IsingInstance, bits: List[int]) -> float:
    """Per-bitstring energy, written out longhand (z = 1 - 2x)."""
    z = [1.0 - 2.0 * b for b in bits]
    total = 0.0
    for i, j, w in inst.couplings:
        total += w * z[i] * z[j]
    for i, h in inst.fields:
        total += h * z[i]
    return total


def energy_of_index(inst: IsingInstance, k: int) -> float:
    bits = [(k >> i) & 1 for i in range(inst.n)]
    return energy_of_bits(inst, bits)


def dense_hamiltonian(inst: IsingInstance) -> np.ndarray:
    """H_C as an explicit dense matrix built from Pauli Z embeddings."""
    dim = 1 << inst.n
    h = np.zeros((dim, dim), dtype=np.complex128)
    for i, j, w in inst.couplings:
        h += w * (op_on_qubit(PAULI_Z, i, inst.n) @ op_on_qubit(PAULI_Z, j, inst.n))
    for i, w in inst.fields:
        h += w * op_on_qubit(PAULI_Z, i, inst.n)
    return h


def dense_cost_unitary(inst: IsingInstance, gamma: float) -> np.ndarray:
    dim = 1 << inst.n
    phases = np.array([np.exp(-1j * gamma * energy_of_index(inst, k))
                       for k in range(dim)])
    return np.diag(phases)


def x_rotation(theta: float) -> np.ndarray:
    # e^{-i theta X}
    return np.cos(theta) * I2 - 1j * np.sin(theta) * PAULI_X


def dense_mixer_unitary(theta: float, n: int) -> np.ndarray:
    u = np.eye(1 << n, dtype=np.complex128)
    for q in range(n):
        u = op_on_qubit(x_rotation(theta), q, n) @ u
    return u


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return psi / np.linalg.norm(psi)


def random_instance(rng: np.random.Generator, n: int, with_fields: bool,
                    label: str = "") -> IsingInstance:
    """Random dense-ish instance with weights in [-1, 1] and >= 1 coupling."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = [p for p in pairs if rng.random() < 0.7]
    if not keep:
        keep = [pairs[int(rng.integers(len(pairs)))]]
    couplings = tuple((i, j, float(rng.uniform(-1.0, 1.0))) for i, j in keep)
    fields: Tuple[Tuple[int, float], ...] = ()
    if with_fields:
        fields = tuple((i, float(rng.uniform(-1.0, 1.0))) for i in range(n)
                       if rng.random() < 0.8)
        if not any(w != 0.0 for _, w in fields):
            fields = ((0, float(rng.uniform(0.1, 1.0))),)
    return IsingInstance(n, couplings, fields, label)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)
