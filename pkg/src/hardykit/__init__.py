"""Bipartite nonlocality toolkit.

Born-rule probabilities for small bipartite systems, the generalized
zero-probability witness and the Clauser-Horne expression, exact local-model
feasibility via vertex enumeration and linear programming, and derivative-free
search over measurement settings.
"""

from .errors import (
    DimensionMismatch,
    HardykitError,
    InvalidQVector,
    MalformedMeasure,
    MaximallyEntangled,
    NoCrossing,
    NoSolution,
    NotEntangled,
    UnknownLabel,
)
from .lhv import (
    DeterministicStrategy,
    FeasibilityResult,
    FiniteMeasure,
    enumerate_strategies,
    lhv_feasible,
    proof_step_inequalities,
    set_expression,
    strategy_matrix,
    vertex_expression_value,
    vertex_table,
    vertex_table_csv,
)
from .qcore import (
    BlochDirection,
    Observable,
    QuantumState,
    bloch_vector,
    joint_probability,
    marginal_probability,
    maximally_mixed,
    observable_from_dict,
    observable_to_dict,
    singlet,
    spin_observable,
    state_from_dict,
    state_to_dict,
    tensor,
    werner_state,
)
from .search import (
    SchmidtState,
    SearchConfig,
    SearchResult,
    hardy_observables,
    max_hardy_probability,
    optimize_violation,
    werner_sweep,
)
from .witness import (
    QVector,
    Scenario,
    WitnessReport,
    ch_expression,
    classify,
    generalized_expression,
    planar_scenario,
    q_vector,
    scenario_from_dict,
    scenario_to_dict,
    witness_report,
)

__version__ = "0.1.0"

__all__ = [
    "BlochDirection",
    "DeterministicStrategy",
    "DimensionMismatch",
    "FeasibilityResult",
    "FiniteMeasure",
    "HardykitError",
    "InvalidQVector",
    "MalformedMeasure",
    "MaximallyEntangled",
    "NoCrossing",
    "NoSolution",
    "NotEntangled",
    "Observable",
    "QVector",
    "QuantumState",
    "Scenario",
    "SchmidtState",
    "SearchConfig",
    "SearchResult",
    "UnknownLabel",
    "WitnessReport",
    "bloch_vector",
    "ch_expression",
    "classify",
    "enumerate_strategies",
    "generalized_expression",
    "hardy_observables",
    "joint_probability",
    "lhv_feasible",
    "marginal_probability",
    "max_hardy_probability",
    "maximally_mixed",
    "observable_from_dict",
    "observable_to_dict",
    "optimize_violation",
    "planar_scenario",
    "proof_step_inequalities",
    "q_vector",
    "scenario_from_dict",
    "scenario_to_dict",
    "set_expression",
    "singlet",
    "spin_observable",
    "state_from_dict",
    "state_to_dict",
    "strategy_matrix",
    "tensor",
    "vertex_expression_value",
    "vertex_table",
    "vertex_table_csv",
    "werner_state",
    "werner_sweep",
    "witness_report",
]
