"""Dense complex linear algebra kernel for few-qubit states.

Qubit convention: qubit 1 is the most significant bit of the
computational-basis index, so |q1 q2 q3> has index q1*4 + q2*2 + q3.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-9

IDENT2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.abs(m - m.conj().T).max() <= tol)


def is_unitary(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.abs(m @ m.conj().T - np.eye(m.shape[0])).max() <= tol)


def is_normalized(v: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return bool(abs(np.linalg.norm(v) - 1.0) <= tol)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(a, b)


def n_qubits_of(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of 2")
    return n


def partial_trace(rho: np.ndarray, n_qubits: int, keep) -> np.ndarray:
    """Reduced density matrix on the 1-based qubit indices in `keep`.

    Kept qubits stay in their original relative order; the trace is
    preserved.
    """
    keep = sorted(set(int(k) for k in keep))
    if rho.shape != (2**n_qubits, 2**n_qubits):
        raise ValueError(
            f"expected a {2**n_qubits}x{2**n_qubits} matrix, got {rho.shape}"
        )
    if not keep or any(k < 1 or k > n_qubits for k in keep):
        raise ValueError(f"keep={keep} is not a nonempty subset of 1..{n_qubits}")
    t = rho.reshape([2] * (2 * n_qubits))
    for q in reversed(range(n_qubits)):
        if q + 1 not in keep:
            t = np.trace(t, axis1=q, axis2=q + t.ndim // 2)
    d = 2 ** len(keep)
    return t.reshape(d, d)


def hermitian_eigs(m: np.ndarray, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues sorted descending, eigenvector columns in the
    matching order). Raises on non-Hermitian input.
    """
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values, descending, clamped at zero."""
    sv = np.linalg.svd(m, compute_uv=False)
    return np.clip(sv, 0.0, None)


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values, tr sqrt(M^dag M)."""
    return float(singular_values(m).sum())


def u3_unitary(theta: float, phi: float, chi: float) -> np.ndarray:
    """2x2 unitary [[cos t, e^{i phi} sin t], [-e^{-i chi} sin t, e^{i(phi-chi)} cos t]].

    Three parameters cover SU(2) up to an irrelevant global phase.
    """
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [c, np.exp(1j * phi) * s],
            [-np.exp(-1j * chi) * s, np.exp(1j * (phi - chi)) * c],
        ]
    )


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase fixing."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rng: np.random.Generator, rank: int = None) -> np.ndarray:
    """Random density matrix from the Ginibre ensemble (optionally rank-limited)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def haar_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state on n qubits (complex normal, normalized)."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    dim = 2**n_qubits
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
