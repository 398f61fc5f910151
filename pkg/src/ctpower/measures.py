"""Entanglement and teleportation-fidelity functionals.

Two-qubit channel quality is expressed three equivalent ways:

* the fully entangled fraction f, the best overlap with a maximally
  entangled state, computed spectrally in the magic basis;
* the average teleportation fidelity F = (2f + 1)/3;
* F = (3 + Nt)/6 where Nt is the Pauli correlation matrix norm entering
  the optimal protocol.

Nt is the sum of the singular values of T with the smallest one
sign-flipped when det T > 0: only correlation matrices of negative
determinant are reachable by maximally entangled states, so a positive
determinant forces one reflection. With that correction the three
expressions agree to machine precision (see fef_numeric for the
independent check).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .qlinalg import (
    DEFAULT_TOL,
    PAULIS,
    PAULI_Y,
    partial_trace,
    singular_values,
    u3_unitary,
)
from .states import PureState

# Magic basis columns: (|00>+|11>)/sqrt2, i(|00>-|11>)/sqrt2,
# i(|01>+|10>)/sqrt2, (|01>-|10>)/sqrt2. Maximally entangled states are
# exactly the real unit vectors in this basis.
MAGIC = np.array(
    [
        [1, 1j, 0, 0],
        [0, 0, 1j, 1],
        [0, 0, 1j, -1],
        [1, -1j, 0, 0],
    ],
    dtype=complex,
) / np.sqrt(2)

_YY = np.kron(PAULI_Y, PAULI_Y)
_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
# stacked sigma_m x sigma_n, index m*3 + n
_PAULI_PAIRS = np.stack(
    [np.kron(a, b) for a in PAULIS for b in PAULIS]
)


def validate_density(rho: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a 4x4 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a two-qubit density matrix, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("density matrix trace is not 1 within tolerance")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if evals.min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def concurrence(rho: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = validate_density(rho, tol)
    m = rho @ _YY @ rho.conj() @ _YY
    lam = np.sqrt(np.clip(np.sort(np.abs(np.linalg.eigvals(m)))[::-1], 0.0, None))
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


@dataclass(frozen=True)
class CorrelationMatrix:
    """3x3 real matrix of two-qubit Pauli expectations tr(rho sigma_m x sigma_n)."""

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        object.__setattr__(self, "t", t)
        if t.shape != (3, 3) or np.abs(t).max() > 1 + 1e-9:
            raise ValueError("correlation entries must be in [-1, 1]")


def correlation_matrix(rho: np.ndarray, tol: float = DEFAULT_TOL) -> CorrelationMatrix:
    rho = validate_density(rho, tol)
    vals = np.einsum("kij,ji->k", _PAULI_PAIRS, rho)
    if np.abs(vals.imag).max() > 1e-10:
        raise ValueError("correlation entries are not real within tolerance")
    return CorrelationMatrix(vals.real.reshape(3, 3))


def protocol_norm(t: np.ndarray) -> float:
    """Correlation norm entering the optimal teleportation fidelity.

    Sum of singular values, with the smallest sign-flipped when det T > 0.
    """
    sv = singular_values(np.asarray(t, dtype=float))
    total = float(sv.sum())
    if np.linalg.det(t) > 0:
        total -= 2.0 * float(sv[-1])
    return total


def fidelity_from_T(rho: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Optimal average teleportation fidelity from the correlation matrix."""
    t = correlation_matrix(rho, tol).t
    return (3.0 + protocol_norm(t)) / 6.0


def fidelity_from_f(f: float) -> float:
    """F = (2f + 1)/3."""
    return (2.0 * f + 1.0) / 3.0


def fully_entangled_fraction(
    rho: np.ndarray,
    tol: float = DEFAULT_TOL,
    cross_check: bool = False,
    cross_check_tol: float = 1e-6,
) -> float:
    """max_e <e|rho|e> over maximally entangled |e>.

    Computed as the largest eigenvalue of the symmetrized real part of rho
    in the magic basis. With cross_check=True the value is verified against
    direct numeric maximization over parametrized |e>.
    """
    rho = validate_density(rho, tol)
    a = MAGIC.conj().T @ rho @ MAGIC
    r = (a.real + a.real.T) / 2
    f = float(np.linalg.eigvalsh(r)[-1])
    if cross_check:
        f_num = fef_numeric(rho)
        if abs(f - f_num) > cross_check_tol:
            raise AssertionError(
                f"magic-basis FEF {f} disagrees with numeric maximization {f_num}"
            )
    return f


def fef_numeric(rho: np.ndarray, grid: int = 8) -> float:
    """Direct maximization of <e|rho|e> over |e> = (I x W)|Phi+>.

    Coarse grid over the (theta, phi, chi) parametrization of W followed by
    Nelder-Mead refinement; independent of the magic-basis route.
    """
    rho = np.asarray(rho, dtype=complex)

    def overlap(x):
        e = np.kron(np.eye(2), u3_unitary(*x)) @ _PHI_PLUS
        return float((e.conj() @ rho @ e).real)

    thetas = np.linspace(0, np.pi / 2, grid)
    phis = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    chis = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    best_x, best = None, -1.0
    for th in thetas:
        for ph in phis:
            for ch in chis:
                v = overlap((th, ph, ch))
                if v > best:
                    best, best_x = v, (th, ph, ch)
    res = minimize(
        lambda x: -overlap(x),
        best_x,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000},
    )
    return max(best, float(-res.fun))


def _pure_marginal_concurrence(psi: PureState, pair, traced: int) -> float:
    """Concurrence of the two-qubit marginal of a 3-qubit pure state.

    Uses the subnormalized decomposition over the traced qubit: the
    Wootters spectrum equals the singular values of the symmetric 2x2
    matrix tau_ab = x_a^T (sy x sy) x_b, which avoids the precision loss
    of square-rooting near-zero eigenvalues.
    """
    t = psi.amplitudes.reshape(2, 2, 2)
    t = np.moveaxis(t, (pair[0] - 1, pair[1] - 1, traced - 1), (0, 1, 2))
    x = [t[:, :, m].reshape(4) for m in (0, 1)]
    tau = np.array(
        [[x[a] @ _YY @ x[b] for b in (0, 1)] for a in (0, 1)], dtype=complex
    )
    sv = np.linalg.svd(tau, compute_uv=False)
    return max(0.0, float(sv[0] - sv[1]))


def one_side_tangle(psi: PureState, j: int) -> float:
    """Squared concurrence between qubit j and the rest: 4 det(rho_j)."""
    rho_j = partial_trace(psi.density_matrix(), psi.n_qubits, [j])
    return float(np.clip(4.0 * np.linalg.det(rho_j).real, 0.0, 1.0))


def _others(j: int):
    return tuple(q for q in (1, 2, 3) if q != j)


def three_tangle(psi: PureState, agree_tol: float = 1e-8) -> float:
    """Residual tangle C^2_{j(kl)} - C^2_{jk} - C^2_{jl}.

    Computed for all three focus qubits; the values must agree within
    agree_tol and their mean is returned.
    """
    if psi.n_qubits != 3:
        raise ValueError("three_tangle is defined for 3-qubit states")
    taus = []
    for j in (1, 2, 3):
        k, l = _others(j)
        c_jk = _pure_marginal_concurrence(psi, (j, k), l)
        c_jl = _pure_marginal_concurrence(psi, (j, l), k)
        taus.append(one_side_tangle(psi, j) - c_jk**2 - c_jl**2)
    spread = max(taus) - min(taus)
    if spread > agree_tol:
        raise AssertionError(f"three-tangle depends on the focus qubit: {taus}")
    return float(np.mean(taus))


def partial_tangle(psi: PureState, j: int, k: int, agree_tol: float = 1e-8) -> float:
    """tau_jk = sqrt(C^2_{j(kl)} - C^2_{jl}) = sqrt(tau + C^2_{jk})."""
    if psi.n_qubits != 3:
        raise ValueError("partial_tangle is defined for 3-qubit states")
    if j == k:
        raise ValueError("j and k must differ")
    (l,) = tuple(q for q in (1, 2, 3) if q not in (j, k))
    c_jl = _pure_marginal_concurrence(psi, (j, l), k)
    c_jk = _pure_marginal_concurrence(psi, (j, k), l)
    direct = one_side_tangle(psi, j) - c_jl**2
    via_tau = three_tangle(psi, agree_tol) + c_jk**2
    if abs(direct - via_tau) > agree_tol:
        raise AssertionError(
            f"partial-tangle expressions disagree: {direct} vs {via_tau}"
        )
    return float(np.sqrt(max(0.0, direct)))
