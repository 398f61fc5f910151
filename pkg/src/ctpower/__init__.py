"""Minimal control power of controlled quantum teleportation."""

from .control import (
    CLASSICAL_FIDELITY,
    ControlReport,
    PartitionRecord,
    UnsupportedStateError,
    control_power,
    fct_three_qubit,
    ghz_closed_form,
    minimal_control_power,
    w_ntype_closed_form,
    wclass_closed_form,
)
from .measures import (
    concurrence,
    correlation_matrix,
    fef_numeric,
    fidelity_from_T,
    fidelity_from_f,
    fully_entangled_fraction,
    one_side_tangle,
    partial_tangle,
    protocol_norm,
    three_tangle,
)
from .simkit import (
    FidelityEstimate,
    OracleBudgetError,
    OracleResult,
    ProtocolConfig,
    ct_fidelity_oracle,
    ct_fidelity_oracle_n,
    mc_teleportation_fidelity,
    teleport_once,
)
from .states import (
    Partition,
    PureState,
    all_partitions,
    load_state,
    make_ghz,
    make_w_class,
    make_w_ntype,
    save_state,
)

__version__ = "0.1.0"

__all__ = [
    "CLASSICAL_FIDELITY",
    "ControlReport",
    "FidelityEstimate",
    "OracleBudgetError",
    "OracleResult",
    "Partition",
    "PartitionRecord",
    "ProtocolConfig",
    "PureState",
    "UnsupportedStateError",
    "all_partitions",
    "concurrence",
    "control_power",
    "correlation_matrix",
    "ct_fidelity_oracle",
    "ct_fidelity_oracle_n",
    "fct_three_qubit",
    "fef_numeric",
    "fidelity_from_T",
    "fidelity_from_f",
    "fully_entangled_fraction",
    "ghz_closed_form",
    "load_state",
    "make_ghz",
    "make_w_class",
    "make_w_ntype",
    "mc_teleportation_fidelity",
    "minimal_control_power",
    "one_side_tangle",
    "partial_tangle",
    "protocol_norm",
    "save_state",
    "teleport_once",
    "three_tangle",
    "w_ntype_closed_form",
    "wclass_closed_form",
]
