"""Effort of quantum state trajectories and difficulty of unitaries.

Conventions used throughout: hbar = 1, U(t) = e^{+iHt} (so exp_i(A) =
e^{+iA}), and principal phases live in (-pi, pi] with the branch point
mapped to +pi.
"""

from .errors import AmbiguousMatchError, NumericalError, QeffortError, ValidationError
from .linalg import (
    DEGENERACY_TOL,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    EigenSystem,
    exp_i,
    fold_angle,
    principal_log_unitary,
    reunitarize,
    spectral_decompose,
    unitary_eigenphases,
)
from .evolution import (
    DEFAULT_MAX_STEP,
    HamiltonianTrajectory,
    StateTrajectory,
    StepPolicy,
    UnitaryTrajectory,
    apply,
    constant_hamiltonian,
    evolve,
    interpolated_hamiltonian,
    piecewise_hamiltonian,
    state_trajectory,
)
from .action import (
    ActionOperator,
    ActionTrack,
    action_at,
    action_derivative,
    action_expectation,
    export_track_csv,
    track_action,
)
from .effort import (
    EffortBounds,
    EffortReport,
    area_swept,
    blockwise_energy_integral,
    effort_bounds,
    effort_energy_integral,
    effort_line_integral,
    effort_report,
    export_state_trace_csv,
    hilbert_distance,
)
from .difficulty import (
    CLASSICAL_GATES,
    GATE_X,
    GATE_Y,
    GATE_Z,
    HADAMARD,
    S_GATE,
    SQRT_NOT,
    T_GATE,
    BlochDecomposition,
    DifficultyResult,
    LevitinComparison,
    MinimalityCheck,
    axis_eigenvectors,
    bloch_decompose,
    classical_circuit_effort_bound,
    controlled_unitary,
    difficulty_controlled,
    difficulty_u2,
    export_gate_table_csv,
    gate_table,
    levitin_comparison,
    optimal_hamiltonian,
    phase_gate,
    unitary_distance,
    verify_minimality,
)
from .infidelity import (
    ORTHOGONALITY_TOL,
    InfidelityPlan,
    InfidelityRealization,
    MLCheck,
    cycle_hamiltonian,
    fidelity,
    infidelity,
    ml_check,
    orthogonalization_time,
    plan_infidelity,
)
from .berry import BerryCheckResult, aa_phase_check, export_berry_csv
from .serialize import (
    csv_text,
    dump_json,
    hamiltonian_from_json,
    hamiltonian_to_json,
    matrix_from_json,
    matrix_to_json,
    state_from_json,
    state_to_json,
    write_csv,
    write_json,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousMatchError",
    "NumericalError",
    "QeffortError",
    "ValidationError",
    "DEGENERACY_TOL",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "EigenSystem",
    "exp_i",
    "fold_angle",
    "principal_log_unitary",
    "reunitarize",
    "spectral_decompose",
    "unitary_eigenphases",
    "DEFAULT_MAX_STEP",
    "HamiltonianTrajectory",
    "StateTrajectory",
    "StepPolicy",
    "UnitaryTrajectory",
    "apply",
    "constant_hamiltonian",
    "evolve",
    "interpolated_hamiltonian",
    "piecewise_hamiltonian",
    "state_trajectory",
    "ActionOperator",
    "ActionTrack",
    "action_at",
    "action_derivative",
    "action_expectation",
    "export_track_csv",
    "track_action",
    "EffortBounds",
    "EffortReport",
    "area_swept",
    "blockwise_energy_integral",
    "effort_bounds",
    "effort_energy_integral",
    "effort_line_integral",
    "effort_report",
    "export_state_trace_csv",
    "hilbert_distance",
    "CLASSICAL_GATES",
    "GATE_X",
    "GATE_Y",
    "GATE_Z",
    "HADAMARD",
    "S_GATE",
    "SQRT_NOT",
    "T_GATE",
    "BlochDecomposition",
    "DifficultyResult",
    "LevitinComparison",
    "MinimalityCheck",
    "axis_eigenvectors",
    "bloch_decompose",
    "classical_circuit_effort_bound",
    "controlled_unitary",
    "difficulty_controlled",
    "difficulty_u2",
    "export_gate_table_csv",
    "gate_table",
    "levitin_comparison",
    "optimal_hamiltonian",
    "phase_gate",
    "unitary_distance",
    "verify_minimality",
    "ORTHOGONALITY_TOL",
    "InfidelityPlan",
    "InfidelityRealization",
    "MLCheck",
    "cycle_hamiltonian",
    "fidelity",
    "infidelity",
    "ml_check",
    "orthogonalization_time",
    "plan_infidelity",
    "BerryCheckResult",
    "aa_phase_check",
    "export_berry_csv",
    "csv_text",
    "dump_json",
    "hamiltonian_from_json",
    "hamiltonian_to_json",
    "matrix_from_json",
    "matrix_to_json",
    "state_from_json",
    "state_to_json",
    "write_csv",
    "write_json",
]
