"""Construction, validation and JSON serialization of multiqubit pure states."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .qlinalg import DEFAULT_TOL, n_qubits_of

NORM_TOL = 1e-9


class StateError(ValueError):
    """Base class for state construction/IO failures."""


class NormalizationError(StateError):
    pass


class DimensionError(StateError):
    pass


class StateFormatError(StateError):
    """Malformed state file."""


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over n qubits (qubit 1 = most significant)."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 1 or amps.size != 2**self.n_qubits:
            raise DimensionError(
                f"expected {2**self.n_qubits} amplitudes, got {amps.shape}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > NORM_TOL:
            raise NormalizationError(f"state norm {nrm} is not 1 within {NORM_TOL}")

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class Partition:
    """Controller subset J and worker pair (k, l), 1-based qubit labels."""

    n_qubits: int
    controllers: tuple
    workers: tuple

    def __post_init__(self):
        object.__setattr__(self, "controllers", tuple(sorted(self.controllers)))
        object.__setattr__(self, "workers", tuple(self.workers))
        k, l = self.workers
        full = set(self.controllers) | {k, l}
        if k == l or len(self.controllers) != self.n_qubits - 2 or full != set(
            range(1, self.n_qubits + 1)
        ):
            raise ValueError(
                f"controllers {self.controllers} and workers {self.workers} "
                f"do not partition 1..{self.n_qubits}"
            )


def all_partitions(n_qubits: int):
    """Every (n-2)-controller partition, ordered by the worker pair."""
    out = []
    for k, l in combinations(range(1, n_qubits + 1), 2):
        ctrl = tuple(q for q in range(1, n_qubits + 1) if q not in (k, l))
        out.append(Partition(n_qubits, ctrl, (k, l)))
    return out


def make_ghz(n: int, a: complex, b: complex) -> PureState:
    """a|00...0> + b|11...1> on n >= 3 qubits."""
    if n < 3:
        raise DimensionError("GHZ family needs n >= 3")
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > NORM_TOL:
        raise NormalizationError("|a|^2 + |b|^2 must be 1")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = a
    amps[-1] = b
    return PureState(n, amps)


def make_w_class(l0: float, l1: float, l2: float, l3: float) -> PureState:
    """l0|100> + l1|000> + l2|110> + l3|101> with nonnegative coefficients."""
    lam = np.array([l0, l1, l2, l3], dtype=float)
    if (lam < 0).any():
        raise NormalizationError("coefficients must be nonnegative")
    if abs((lam**2).sum() - 1.0) > NORM_TOL:
        raise NormalizationError("sum of squared coefficients must be 1")
    amps = np.zeros(8, dtype=complex)
    amps[0b100] = l0
    amps[0b000] = l1
    amps[0b110] = l2
    amps[0b101] = l3
    return PureState(3, amps)


def make_w_ntype(alphas) -> PureState:
    """Single-excitation state: alpha_i on the basis vector with a 1 at qubit i."""
    alphas = np.asarray(alphas, dtype=complex)
    n = alphas.size
    if n < 3:
        raise DimensionError("W-type family needs n >= 3")
    if abs((np.abs(alphas) ** 2).sum() - 1.0) > NORM_TOL:
        raise NormalizationError("sum of |alpha_i|^2 must be 1")
    amps = np.zeros(2**n, dtype=complex)
    for i, a in enumerate(alphas):
        amps[1 << (n - 1 - i)] = a
    return PureState(n, amps)


def save_state(state: PureState, path) -> None:
    data = {
        "n": state.n_qubits,
        "amplitudes": [[z.real, z.imag] for z in state.amplitudes],
    }
    with open(path, "w") as fh:
        json.dump(data, fh)
        fh.write("\n")


def load_state(path) -> PureState:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data or "amplitudes" not in data:
        raise StateFormatError('expected {"n": ..., "amplitudes": [[re, im], ...]}')
    try:
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"bad amplitude entries: {exc}") from exc
    try:
        n = n_qubits_of(amps.size)
    except ValueError as exc:
        raise DimensionError(str(exc)) from exc
    if n != data["n"]:
        raise DimensionError(
            f"file claims {data['n']} qubits but has {amps.size} amplitudes"
        )
    return PureState(n, amps)
