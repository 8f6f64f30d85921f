"""Exact simulation of anonymous quantum leader election."""

from .baseline import ClassicalRound, run_classical_election
from .circuits import (
    PhaseParams,
    build_even_symmetry_breaker,
    build_odd_symmetry_breaker,
    consistency_oracle,
    prepare_ghz_state,
    prepare_uniform_register,
    prepare_w_state,
)
from .election import (
    Algorithm,
    Branch,
    ElectionTranscript,
    ProcessorState,
    RoundRecord,
    Status,
    TournamentRound,
    run_tani_election,
    run_tani_round,
    run_tournament,
    run_w_state_election,
)
from .errors import CapacityError, ProtocolViolation
from .metrics import TrialStats, sigma_z_consensus, summarize_trials
from .network import (
    BroadcastRound,
    NetworkConfig,
    ProcessorRegisters,
    RegisterLayout,
    assign_registers,
    broadcast,
)
from .qsim import (
    MeasurementOutcome,
    StateVector,
    UnitaryMatrix,
    apply_basis_permutation,
    apply_unitary,
    basis_state,
    expectation_z,
    fidelity,
    measure_qubits,
    probability_of_basis_state,
    tensor_product,
)

__version__ = "0.1.0"
