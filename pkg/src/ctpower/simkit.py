"""Brute-force teleportation protocol simulation.

Everything here recomputes fidelities from the protocol itself (Bell
measurement, Pauli correction, controller measurements) so it can serve
as an independent oracle for the closed forms in `control` and the
correlation-matrix route in `measures`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import minimize

from .measures import MAGIC, validate_density
from .qlinalg import IDENT2, PAULI_X, PAULI_Z, partial_trace, u3_unitary
from .states import Partition, PureState

# Bell basis columns Phi+, Psi+, Phi-, Psi- and the matching receiver
# corrections (each its own inverse up to a global phase).
_BELL = np.array(
    [
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [0, 1, 0, -1],
        [1, 0, -1, 0],
    ],
    dtype=complex,
) / np.sqrt(2)
_CORRECTIONS = (IDENT2, PAULI_X, PAULI_Z, PAULI_X @ PAULI_Z)

# K realizes <e|phi> structure: phi^T K phi equals the squared magic-basis
# row sum, so the fully entangled fraction of a pure |phi> is
# (1 + |phi^T K phi|)/2.
_K = np.conj(MAGIC @ MAGIC.T)


class OracleBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class ProtocolConfig:
    mc_samples: int = 20000
    grid_resolution: int = 16
    refinement_iterations: int = 500
    seed: int = 0
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if self.grid_resolution < 8:
            raise ValueError("grid_resolution must be >= 8")


@dataclass(frozen=True)
class FidelityEstimate:
    value: float
    stderr: float
    n_samples: int


@dataclass(frozen=True)
class OracleResult:
    value: float
    sweeps: int
    converged: bool
    joint_prob_value: float


def _haar_qubits(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def teleport_once(channel: np.ndarray, input_state: np.ndarray, rng) -> float:
    """One run of the standard protocol: Bell-measure (input, sender half),
    sample the outcome, Pauli-correct the receiver half, return the
    overlap with the input."""
    channel = validate_density(channel)
    xi = np.asarray(input_state, dtype=complex)
    xi = xi / np.linalg.norm(xi)
    joint = np.kron(np.outer(xi, xi.conj()), channel)
    probs = np.empty(4)
    fids = np.empty(4)
    for t in range(4):
        bell = _BELL[:, t]
        proj = np.kron(np.outer(bell, bell.conj()), IDENT2)
        post = proj @ joint @ proj
        p = float(np.trace(post).real)
        probs[t] = p
        if p < 1e-14:
            fids[t] = 0.0
            continue
        rho_b = partial_trace(post, 3, [3]) / p
        out = _CORRECTIONS[t] @ rho_b @ _CORRECTIONS[t].conj().T
        fids[t] = float((xi.conj() @ out @ xi).real)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    t = int(rng.choice(4, p=probs))
    return fids[t]


def _channel_terms(channel: np.ndarray):
    """Eigendecomposition of the channel as weighted pure 2x2 'matrices'
    (sender index x receiver index)."""
    w, v = np.linalg.eigh((channel + channel.conj().T) / 2)
    keep = w > 1e-14
    return w[keep], [v[:, i].reshape(2, 2) for i in np.nonzero(keep)[0]]


def _protocol_maps(weights, chis, u_a: np.ndarray, u_b: np.ndarray):
    """2x2 maps G[t][s] with per-input fidelity sum_ts w_s |xi^dag G xi|^2."""
    maps = np.empty((4, len(chis), 2, 2), dtype=complex)
    for s, chi in enumerate(chis):
        chi_p = u_a @ chi @ u_b.T
        for t in range(4):
            b_mat = _BELL[:, t].reshape(2, 2)
            maps[t, s] = _CORRECTIONS[t] @ chi_p.T @ b_mat.conj().T
    return maps


def _mc_fidelities(maps, weights, inputs) -> np.ndarray:
    z = np.einsum("ni,tsij,nj->nts", inputs.conj(), maps, inputs)
    return (weights[None, None, :] * np.abs(z) ** 2).sum(axis=(1, 2)).real


def _haar_average_fidelity(maps, weights) -> float:
    """Exact Haar average of the per-input protocol fidelity (second-moment
    quadrature of |xi^dag G xi|^2); used only to make the optimizer's
    objective noise-free."""
    tr = np.trace(maps, axis1=2, axis2=3)
    gram = np.einsum("tsij,tsij->ts", maps, maps.conj()).real
    per = (np.abs(tr) ** 2 + gram) / 6.0
    return float((weights[None, :] * per).sum())


def mc_teleportation_fidelity(channel: np.ndarray, cfg: ProtocolConfig) -> FidelityEstimate:
    """Monte-Carlo average teleportation fidelity over Haar inputs, with the
    channel pre-processed by the best local unitary pair U_A x U_B found by
    grid search plus Nelder-Mead over the 3+3 angles."""
    channel = validate_density(channel)
    weights, chis = _channel_terms(channel)
    rng = np.random.default_rng(cfg.seed)

    def objective(angles):
        maps = _protocol_maps(
            weights, chis, u3_unitary(*angles[:3]), u3_unitary(*angles[3:])
        )
        return _haar_average_fidelity(maps, weights)

    per_axis = max(2, int(round(np.sqrt(cfg.grid_resolution))))
    thetas = np.linspace(0, np.pi / 2, per_axis)
    phases = np.linspace(0, 2 * np.pi, per_axis, endpoint=False)
    best_val, best_angles = -1.0, None
    for combo in product(thetas, phases, phases, thetas, phases, phases):
        val = objective(combo)
        if val > best_val:
            best_val, best_angles = val, combo
    res = minimize(
        lambda x: -objective(x),
        best_angles,
        method="Nelder-Mead",
        options={
            "xatol": 1e-8,
            "fatol": 1e-12,
            "maxiter": cfg.refinement_iterations * 6,
        },
    )
    angles = res.x if -res.fun > best_val else np.array(best_angles)

    maps = _protocol_maps(
        weights, chis, u3_unitary(*angles[:3]), u3_unitary(*angles[3:])
    )
    total, total_sq, n_done = 0.0, 0.0, 0
    while n_done < cfg.mc_samples:
        chunk = min(8192, cfg.mc_samples - n_done)
        fids = _mc_fidelities(maps, weights, _haar_qubits(chunk, rng))
        total += fids.sum()
        total_sq += (fids**2).sum()
        n_done += chunk
    mean = total / n_done
    var = max(0.0, total_sq / n_done - mean**2)
    stderr = float(np.sqrt(var / n_done)) if n_done > 1 else 0.0
    return FidelityEstimate(float(mean), stderr, n_done)


def _pure_fef_terms(v: np.ndarray):
    """For unnormalized pure 2-qubit vectors v (last axis 4):
    returns (p, |s|) with p the norm^2 and FEF = (1 + |s|/p)/2."""
    p = np.einsum("...i,...i->...", v.conj(), v).real
    s = np.abs(np.einsum("...i,ij,...j->...", v, _K, v))
    return p, s


def _measurement_vectors(theta, phi, chi):
    """Basis {U^dag|0>, U^dag|1>} of the u3 parametrization; arrays broadcast."""
    c, s = np.cos(theta), np.sin(theta)
    m0 = np.stack([c, np.exp(-1j * phi) * s], axis=-1)
    m1 = np.stack(
        [-np.exp(1j * chi) * s, np.exp(-1j * (phi - chi)) * c], axis=-1
    )
    return m0, m1


def _angle_grid(g: int):
    th = np.linspace(0, np.pi / 2, g)
    ph = np.linspace(0, 2 * np.pi, g, endpoint=False)
    ch = np.linspace(0, 2 * np.pi, g, endpoint=False)
    tt, pp, cc = np.meshgrid(th, ph, ch, indexing="ij")
    return tt.ravel(), pp.ravel(), cc.ravel()


def ct_fidelity_oracle(psi: PureState, j: int, cfg: ProtocolConfig) -> float:
    """Maximal average worker fidelity over controller-j measurement bases.

    Brute-force maximization of sum_t p_t F(workers | outcome t) with F of
    each pure conditional from its fully entangled fraction; grid-seeded
    Nelder-Mead over the measurement basis angles.
    """
    if psi.n_qubits != 3:
        raise ValueError("ct_fidelity_oracle expects a 3-qubit state")
    workers = tuple(q for q in (1, 2, 3) if q != j)
    t = psi.amplitudes.reshape(2, 2, 2)
    t = np.moveaxis(t, (j - 1, workers[0] - 1, workers[1] - 1), (0, 1, 2))
    psi_mat = t.reshape(2, 4)

    def objective_vec(theta, phi, chi):
        m0, m1 = _measurement_vectors(theta, phi, chi)
        total = 0.0
        for m in (m0, m1):
            v = np.einsum("...c,cw->...w", m.conj(), psi_mat)
            _, s = _pure_fef_terms(v)
            total = total + s
        return (2.0 + total) / 3.0

    tt, pp, cc = _angle_grid(cfg.grid_resolution)
    vals = objective_vec(tt, pp, cc)
    order = np.argsort(vals)[::-1]
    best = float(vals[order[0]])
    for idx in order[:3]:
        res = minimize(
            lambda x: -float(objective_vec(*x)),
            np.array([tt[idx], pp[idx], cc[idx]]),
            method="Nelder-Mead",
            options={
                "xatol": 1e-10,
                "fatol": 1e-13,
                "maxiter": cfg.refinement_iterations * 3,
            },
        )
        best = max(best, float(-res.fun))
    return best


def _marginal(psi: PureState, q: int) -> np.ndarray:
    return partial_trace(psi.density_matrix(), psi.n_qubits, [q])


def ct_fidelity_oracle_n(
    psi: PureState, partition: Partition, cfg: ProtocolConfig
) -> OracleResult:
    """Controlled-teleportation fidelity for a controller subset J.

    Objective: sum over outcome strings of the product of the controllers'
    single-qubit marginal probabilities times the conditional workers'
    teleportation fidelity, maximized by coordinate ascent over each
    controller's measurement basis (grid seed + Nelder-Mead per
    coordinate). The result is a certified lower bound on the maximum;
    `joint_prob_value` reports the same objective weighted by the true
    joint outcome probabilities as a diagnostic.
    """
    n = psi.n_qubits
    ctrl = list(partition.controllers)
    nc = len(ctrl)
    if nc > 3:
        raise OracleBudgetError("oracle supports at most 3 controllers")
    t = psi.amplitudes.reshape([2] * n)
    src = [c - 1 for c in ctrl] + [w - 1 for w in sorted(partition.workers)]
    t = np.moveaxis(t, src, range(n))
    tensor = t.reshape([2] * nc + [4])
    marginals = [_marginal(psi, q) for q in ctrl]
    rng = np.random.default_rng(cfg.seed)
    angles = rng.uniform(0.0, np.pi, size=(nc, 3))

    def basis(a):
        m0, m1 = _measurement_vectors(*a)
        return np.stack([m0, m1])

    def project_others(i):
        """Project all controllers but i onto their current bases.

        Returns the residual tensor with axes (qubit i, workers, flattened
        other-outcome string) and the product of the others' single-qubit
        marginal outcome probabilities per string.
        """
        rest = np.moveaxis(tensor, i, 0)
        weights = np.ones(1)
        for pos in [p for p in range(nc) if p != i]:
            b = basis(angles[pos])
            # contract the first remaining other-controller axis; its
            # outcome axis lands at the end
            rest = np.tensordot(rest, b.conj(), axes=([1], [1]))
            probs = np.einsum(
                "oc,cd,od->o", b.conj(), marginals[pos], b
            ).real
            weights = np.multiply.outer(weights, probs)
        return rest.reshape(2, 4, -1), weights.ravel()

    def coord_value(i, theta, phi, chi, rest, w_other, joint):
        """Objective as a function of controller i's angles (broadcasting);
        `joint=True` weights by true joint probabilities instead of the
        marginal product."""
        rho_i = marginals[i]
        total = 0.0
        for m in _measurement_vectors(theta, phi, chi):
            v = np.einsum("...c,cwo->...wo", m.conj(), rest)
            p = np.einsum("...wo,...wo->...o", v.conj(), v).real
            s = np.abs(np.einsum("...wo,wu,...uo->...o", v, _K, v))
            fid = np.where(
                p > 1e-12, (2.0 + s / np.where(p > 1e-12, p, 1.0)) / 3.0, 0.0
            )
            if joint:
                weight = p
            else:
                q_t = np.einsum("...c,cd,...d->...", m.conj(), rho_i, m).real
                weight = q_t[..., None] * w_other
            total = total + (weight * fid).sum(axis=-1)
        return total

    tt, pp, cc = _angle_grid(cfg.grid_resolution)

    def ascend():
        """One coordinate-ascent run from the current angles; returns
        (value, sweeps, converged)."""
        value = -1.0
        sweeps, converged = 0, False
        for _ in range(30):
            sweeps += 1
            for i in range(nc):
                rest, w_other = project_others(i)
                vals = coord_value(i, tt, pp, cc, rest, w_other, False)
                idx = int(np.argmax(vals))
                res = minimize(
                    lambda x: -float(coord_value(i, *x, rest, w_other, False)),
                    np.array([tt[idx], pp[idx], cc[idx]]),
                    method="Nelder-Mead",
                    options={
                        "xatol": 1e-9,
                        "fatol": 1e-12,
                        "maxiter": cfg.refinement_iterations * 3,
                    },
                )
                if -res.fun >= vals[idx]:
                    angles[i] = res.x
                else:
                    angles[i] = [tt[idx], pp[idx], cc[idx]]
            rest, w_other = project_others(0)
            new_value = float(coord_value(0, *angles[0], rest, w_other, False))
            if new_value - value < cfg.tolerance:
                value = max(value, new_value)
                converged = True
                break
            value = new_value
        return value, sweeps, converged

    # a few random restarts guard against non-global fixed points of the
    # ascent (e.g. all controllers stuck on a measurement the others make
    # uninformative)
    best = None
    for _ in range(3):
        value, sweeps, converged = ascend()
        if best is None or value > best[0]:
            best = (value, sweeps, converged, angles.copy())
        angles[:] = rng.uniform(0.0, np.pi, size=(nc, 3))
    value, sweeps, converged, angles[:] = best[0], best[1], best[2], best[3]
    rest, w_other = project_others(0)
    joint_value = float(coord_value(0, *angles[0], rest, w_other, True))
    return OracleResult(value, sweeps, converged, joint_value)
