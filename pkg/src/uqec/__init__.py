"""Measurement-free quantum error correction on density matrices.

Encode a qubit into the 3-, 5-, or 9-qubit code, push it through a
probabilistic Pauli channel, and recover it with a single orthogonal matrix:
the output factorizes exactly as (original qubit) x (diagnostic ancilla), so
no syndrome measurement or projection is ever applied.
"""

from .analysis import (
    DEFAULT_TOL,
    INPUT_STATES,
    FactorizationResult,
    NonDiagonalAncillaError,
    RecoveryReport,
    TrajectoryReport,
    check_product_form,
    fidelity_pure,
    report_to_json,
    run_experiment,
    simplex_grid,
    syndrome_distribution,
    trajectory_statistics,
    verification_probability_vectors,
    verify_code,
    verify_permutation_factorization_3qubit,
)
from .codes import (
    CODE_NAMES,
    Code,
    ErrorOperator,
    PureQubitState,
    bitflip3,
    divincenzo5,
    encode_state,
    encoding_unitary,
    error_operator,
    get_code,
    shor9,
    standard_error_set,
)
from .linalg import (
    QubitSplit,
    frobenius_distance,
    kron,
    orthonormal_completion,
    partial_trace,
    permutation_matrix,
    read_matrix,
    write_matrix,
)
from .recovery import (
    DensityMatrix,
    ErrorChannel,
    KLReport,
    KLViolationError,
    RecoveryMatrix,
    apply_channel,
    apply_recovery,
    build_recovery,
    conventional_recovery_bitflip3,
    read_channel_file,
    recovery_for,
    recovery_row_order,
    sample_trajectory,
    validate_kl,
)

__version__ = "0.1.0"
