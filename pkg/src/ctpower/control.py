"""Control power of controlled teleportation: generic pipeline and the
closed-form family evaluators.

For the GHZ family and the three-qubit generic pipeline the per-partition
power is the fidelity gap P = F_ct - F(rho_kl).  The W-type closed form
follows the conventional piecewise expression
P = (1 + |1 - 2(|a_k|^2 + |a_l|^2)|)/6, which is kept as published even
though it exceeds the fidelity gap whenever the workers' marginal is
itself useful for teleportation; the reports still carry the
protocol-accurate fidelities so the discrepancy is visible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .measures import (
    fidelity_from_T,
    partial_tangle,
    protocol_norm,
)
from .qlinalg import partial_trace
from .states import (
    Partition,
    PureState,
    all_partitions,
    make_ghz,
    make_w_class,
    make_w_ntype,
)

CLASSICAL_FIDELITY = 2.0 / 3.0
_MEANINGFUL_CT_TOL = 1e-12
_MEANINGFUL_NC_TOL = 1e-9


class UnsupportedStateError(ValueError):
    """No closed form applies and no numeric oracle budget was given."""


class OracleBudgetError(ValueError):
    """Controller subset too large for the numeric oracle."""


@dataclass(frozen=True)
class PartitionRecord:
    partition: Partition
    F_ct: float
    F_no_control: float
    P: float

    @property
    def f_no_control(self) -> float:
        return (3.0 * self.F_no_control - 1.0) / 2.0


@dataclass(frozen=True)
class ControlReport:
    records: tuple
    minimal_P: float
    argmin_partition: Partition
    meaningful: bool

    def as_dict(self) -> dict:
        return {
            "partitions": [
                {
                    "J": list(r.partition.controllers),
                    "k": r.partition.workers[0],
                    "l": r.partition.workers[1],
                    "F_ct": r.F_ct,
                    "F_no_control": r.F_no_control,
                    "f_no_control": r.f_no_control,
                    "P": r.P,
                }
                for r in self.records
            ],
            "minimal_P": self.minimal_P,
            "argmin": {
                "J": list(self.argmin_partition.controllers),
                "k": self.argmin_partition.workers[0],
                "l": self.argmin_partition.workers[1],
            },
            "meaningful": self.meaningful,
        }


def _assemble(records, meaningful=None) -> ControlReport:
    records = tuple(sorted(records, key=lambda r: r.partition.workers))
    best = min(records, key=lambda r: r.P)
    if meaningful is None:
        meaningful = all(
            r.F_ct > CLASSICAL_FIDELITY + _MEANINGFUL_CT_TOL
            and r.F_no_control <= CLASSICAL_FIDELITY + _MEANINGFUL_NC_TOL
            for r in records
        )
    return ControlReport(records, best.P, best.partition, bool(meaningful))


def _workers_of(j: int):
    return tuple(q for q in (1, 2, 3) if q != j)


def fct_three_qubit(psi: PureState, j: int) -> float:
    """Controlled teleportation fidelity (2 + tau_kl)/3 for controller j."""
    k, l = _workers_of(j)
    return (2.0 + partial_tangle(psi, k, l)) / 3.0


def control_power(psi: PureState, j: int) -> float:
    """F_ct minus the workers' no-control teleportation fidelity."""
    k, l = _workers_of(j)
    rho_kl = partial_trace(psi.density_matrix(), 3, [k, l])
    return fct_three_qubit(psi, j) - fidelity_from_T(rho_kl)


def _three_qubit_report(psi: PureState) -> ControlReport:
    records = []
    for j in (1, 2, 3):
        k, l = _workers_of(j)
        rho_kl = partial_trace(psi.density_matrix(), 3, [k, l])
        f_ct = fct_three_qubit(psi, j)
        f_nc = fidelity_from_T(rho_kl)
        records.append(
            PartitionRecord(Partition(3, (j,), (k, l)), f_ct, f_nc, f_ct - f_nc)
        )
    return _assemble(records)


def _ghz_coefficients(psi: PureState):
    amps = psi.amplitudes
    body = amps[1:-1]
    if np.abs(body).max(initial=0.0) <= 1e-12:
        return amps[0], amps[-1]
    return None


def _w_type_coefficients(psi: PureState):
    n = psi.n_qubits
    amps = psi.amplitudes
    one_hot = [1 << (n - 1 - i) for i in range(n)]
    mask = np.ones(amps.size, dtype=bool)
    mask[one_hot] = False
    if np.abs(amps[mask]).max(initial=0.0) > 1e-12:
        return None
    return amps[one_hot]


def minimal_control_power(psi: PureState, partitions=None) -> ControlReport:
    """Complete control report over all (or the given) controller subsets.

    Three-qubit states go through the generic tangle/correlation pipeline.
    Larger states must belong to the GHZ or W-type family; anything else
    needs the protocol-simulation oracle (see simkit / the verify command).
    """
    if psi.n_qubits == 3:
        report = _three_qubit_report(psi)
    else:
        ghz = _ghz_coefficients(psi)
        w = _w_type_coefficients(psi)
        if ghz is not None:
            report = ghz_closed_form(psi.n_qubits, *ghz)
        elif w is not None:
            report = w_ntype_closed_form(w)
        else:
            raise UnsupportedStateError(
                "no closed form for this state; use the numeric oracle (verify)"
            )
    if partitions is not None:
        wanted = {tuple(p.workers) for p in partitions}
        report = _assemble(
            [r for r in report.records if r.partition.workers in wanted],
            meaningful=report.meaningful,
        )
    return report


def ghz_closed_form(n: int, a: complex, b: complex) -> ControlReport:
    """a|0...0> + b|1...1>: every partition has P = 2|a||b|/3."""
    make_ghz(n, a, b)  # validates normalization
    ab = abs(a) * abs(b)
    f_ct = 2.0 * (ab + 1.0) / 3.0
    records = [
        PartitionRecord(p, f_ct, CLASSICAL_FIDELITY, 2.0 * ab / 3.0)
        for p in all_partitions(n)
    ]
    return _assemble(records)


def _wclass_norm(l0, lam, j, k, l) -> float:
    """Closed-form protocol norm of T^j for the zero-three-tangle class.

    The two sign patterns give (s+ + s-)^2 and (s+ - s-)^2 for the
    singular values s+- of the off-center 2x2 block; det T^j > 0 exactly
    when 2*lam_j^2 > 1, which triggers the same smallest-value sign flip
    as protocol_norm.
    """
    lj, lk, ll = lam[j - 1], lam[k - 1], lam[l - 1]
    a_up = (l0**2 + (-lj + lk + ll) ** 2) * (l0**2 + (lj + lk + ll) ** 2)
    a_lo = (l0**2 + (lj - lk + ll) ** 2) * (l0**2 + (lj + lk - ll) ** 2)
    c_kl = 2.0 * lk * ll
    s_plus = (np.sqrt(max(a_up, a_lo)) + np.sqrt(min(a_up, a_lo))) / 2.0
    s_minus = (np.sqrt(max(a_up, a_lo)) - np.sqrt(min(a_up, a_lo))) / 2.0
    total = c_kl + s_plus + s_minus
    det_positive = c_kl > 0 and 2.0 * lj**2 - 1.0 > 0
    if det_positive:
        total -= 2.0 * min(c_kl, s_minus)
    return float(total)


def wclass_closed_form(l0: float, l1: float, l2: float, l3: float) -> ControlReport:
    """Closed forms for the zero-three-tangle class, cross-checked entrywise
    against the generic correlation-matrix pipeline on the built state."""
    psi = make_w_class(l0, l1, l2, l3)
    lam = (l1, l2, l3)
    records = []
    for j in (1, 2, 3):
        k, l = _workers_of(j)
        c_kl = 2.0 * lam[k - 1] * lam[l - 1]
        f_ct = (2.0 + c_kl) / 3.0
        f_nc = (3.0 + _wclass_norm(l0, lam, j, k, l)) / 6.0
        rho_kl = partial_trace(psi.density_matrix(), 3, [k, l])
        f_nc_generic = fidelity_from_T(rho_kl)
        if abs(f_nc - f_nc_generic) > 1e-9:
            raise AssertionError(
                f"closed-form fidelity {f_nc} disagrees with the correlation "
                f"pipeline {f_nc_generic} for j={j}"
            )
        records.append(
            PartitionRecord(Partition(3, (j,), (k, l)), f_ct, f_nc, f_ct - f_nc)
        )
    return _assemble(records)


def w_ntype_closed_form(alphas) -> ControlReport:
    """Single-excitation family on n qubits.

    P uses the published piecewise form (1 + |1 - 2 s_kl|)/6 with
    s_kl = |a_k|^2 + |a_l|^2; the fidelities are the protocol-accurate
    values, so P >= F_ct - F_no_control with equality only at s_kl = 1/2.
    Meaningful iff every amplitude is nonzero.
    """
    psi = make_w_ntype(alphas)
    n = psi.n_qubits
    mods = np.abs(np.asarray(alphas, dtype=complex))
    records = []
    for k, l in combinations(range(1, n + 1), 2):
        ak, al = mods[k - 1], mods[l - 1]
        s = ak**2 + al**2
        f_ct = (2.0 * ak * al + 2.0) / 3.0
        # T = diag(2 ak al, 2 ak al, 1 - 2 s); det > 0 iff s < 1/2.
        t = np.diag([2.0 * ak * al, 2.0 * ak * al, 1.0 - 2.0 * s])
        f_nc = (3.0 + protocol_norm(t)) / 6.0
        p = (1.0 + abs(1.0 - 2.0 * s)) / 6.0
        ctrl = tuple(q for q in range(1, n + 1) if q not in (k, l))
        records.append(PartitionRecord(Partition(n, ctrl, (k, l)), f_ct, f_nc, p))
    return _assemble(records, meaningful=bool((mods > 0).all()))
