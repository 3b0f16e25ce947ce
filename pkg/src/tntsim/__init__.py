"""Simulator and metrology toolkit for interaction-based readout of collective spins."""

from .spin import (
    BasisSpec,
    Operator,
    ParityReport,
    SpinSystem,
    StateVector,
    basis_matrix,
    build_spin_operators,
    check_parity_conditions,
    coherent_state,
    eigenbasis,
    min_eigenstate,
    parity_operator,
    spin_direction,
)
from .dynamics import (
    HamiltonianSpec,
    ProtocolSpec,
    ReadoutKind,
    build_hamiltonian,
    final_state_and_derivative,
    ground_state,
    make_protocol,
    mean_spin,
    phase_unitary,
    prepared_state,
    propagator,
    readout_unitary,
    run_protocol,
    with_phase,
)
from .metrology import (
    FisherResult,
    NoiseModel,
    ProbDist,
    cfi,
    convolve_noise,
    hellinger_cfi_estimate,
    hellinger_distance_sq,
    measurement_probs,
    noise_kernel,
    optimal_generator_direction,
    protocol_probs,
    qfi_pure,
    spin_covariance,
    squeezing_gain,
)

from .optimize import (
    BasisOptimum,
    BasisSearchSpec,
    SweepResult,
    budget_sweep,
    echo_time_sweep,
    noise_sweep,
    optimize_basis,
    snl_crossing,
)
from .husimi import QGrid, QGridSpec, husimi_point, husimi_q, quadrature_norm

__version__ = "1.0.0"
