"""Brute-force density-matrix versions of swapping and purification.

Only used to cross-check the closed forms in :mod:`mpep.quantum`.  Qubits
are ordered as written in each function name's docstring; ``kron`` order is
big-endian (first qubit is the most significant bit).
"""
from __future__ import annotations

import numpy as np

PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
PHI_MINUS = np.array([1.0, 0.0, 0.0, -1.0]) / np.sqrt(2.0)
PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0)
PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
BELL_BASIS = (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS)


def isotropic_state(f: float) -> np.ndarray:
    """4x4 state ``(4f-1)/3 |phi+><phi+| + (1-f)/3 * I``."""
    proj = np.outer(PHI_PLUS, PHI_PLUS.conj())
    return ((4 * f - 1) / 3) * proj + ((1 - f) / 3) * np.eye(4)


def fidelity(rho: np.ndarray, ket: np.ndarray = PHI_PLUS) -> float:
    return float(np.real(ket.conj() @ rho @ ket))


def check_density_matrix(rho: np.ndarray, atol: float = 1e-12) -> None:
    if not np.allclose(rho, rho.conj().T, atol=atol):
        raise ValueError("not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError(f"trace {np.trace(rho)} != 1")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise ValueError("not positive semidefinite")


def _cnot(n_qubits: int, control: int, target: int) -> np.ndarray:
    dim = 2**n_qubits
    perm = np.arange(dim)
    cbit = 1 << (n_qubits - 1 - control)
    tbit = 1 << (n_qubits - 1 - target)
    perm[(perm & cbit) != 0] ^= tbit
    op = np.zeros((dim, dim))
    op[perm, np.arange(dim)] = 1.0
    return op


def swap_outcome(f1: float, f2: float, outcome: int = 0) -> tuple[float, float]:
    """Bell measurement on the middle qubits of ``rho(f1)_{A,B1} x rho(f2)_{B2,C}``.

    Returns ``(probability, fidelity)`` of the A-C state for the given Bell
    outcome (index into :data:`BELL_BASIS`), after the Pauli correction that
    maps that outcome back to ``|phi+>``.
    """
    rho = np.kron(isotropic_state(f1), isotropic_state(f2))
    bell = BELL_BASIS[outcome]
    # qubits A, B1, B2, C -> project (B1, B2) onto the Bell vector
    r = rho.reshape([2] * 8)
    b = bell.reshape(2, 2)
    # r[a, b1, b2, c, a', b1', b2', c']
    rho_ac = np.einsum("xy,axycdzwe,zw->acde", b.conj(), r, b).reshape(4, 4)
    prob = float(np.real(np.trace(rho_ac)))
    rho_ac = rho_ac / prob
    # the post-measurement A-C state is the Bell state matching the outcome
    return prob, fidelity(rho_ac, bell)


def swap_fidelity(f1: float, f2: float) -> float:
    return swap_outcome(f1, f2, 0)[1]


def purify_outcome(f1: float, f2: float) -> tuple[float, float, np.ndarray]:
    """Bilateral CNOT purification of control pair ``rho(f1)`` with target ``rho(f2)``.

    Qubit order is A1, B1, A2, B2 (pair 1 = A1 B1).  CNOTs act A1->A2 and
    B1->B2; the target pair is measured in Z and kept on equal outcomes.
    Returns ``(success probability, fidelity, normalised 4x4 state)``.
    """
    rho = np.kron(isotropic_state(f1), isotropic_state(f2))
    op = _cnot(4, 0, 2) @ _cnot(4, 1, 3)
    rho = op @ rho @ op.T
    r = rho.reshape([2] * 8)
    # keep target outcomes 00 and 11 on both sides
    kept = r[:, :, 0, 0, :, :, 0, 0] + r[:, :, 1, 1, :, :, 1, 1]
    kept = kept.reshape(4, 4)
    prob = float(np.real(np.trace(kept)))
    out = kept / prob
    return prob, fidelity(out), out
