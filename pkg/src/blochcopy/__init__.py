"""Optimal two-copy qubit copying: geometry, circuits, qualities, trade-offs."""

from .channel import (
    AffineBlochMap,
    ConstraintReport,
    DiagonalForm,
    E_HAT,
    affine_map_from_isometry,
    b_from_e,
    bloch_vector,
    check_physical,
    complex_matrix_from_json,
    complex_matrix_to_json,
    density_from_bloch,
    diagonalize,
    e_from_b,
    extract_e_vectors,
    gram_from_transfer,
    gram_matrix,
    isometry_from_beta,
    isometry_from_e_vectors,
    isometry_residuals,
    map_bloch,
    realize_e_vectors,
    tetrahedron_check,
    tetrahedron_violations,
    transfer_from_gram,
)
from .circuit import (
    CIRCUIT_A,
    CIRCUIT_B,
    CIRCUIT_B_FIRST,
    apply_circuit,
    apply_gate,
    beta_from_error_rates,
    channel_tomography,
    circuit_a,
    circuit_b,
    circuit_unitary,
    prepare_ancilla,
    reduced_state,
)
from .errors import (
    NotHermitianError,
    NotIsometricError,
    NotNormalizedError,
    NotPhysicalError,
    NotPossibleError,
    NotPositiveOptimalError,
)
from .optimizer import (
    JacobianPair,
    OptimalPair,
    b_from_beta,
    beta_from_b,
    class_p_check,
    classify_pair,
    g_map,
    g_map_many,
    gamma_from_beta,
    h_vector,
    isotropic_tradeoff,
    jacobians,
    positive_optimal_condition,
    same_order,
    sign_flip_variants,
)
from .pauli import SIGMA, l_table, l_tensor, lambda_matrix, pauli
from .quality import (
    distinguishability,
    min_error_rate,
    omega_e,
    quality_bloch,
    quality_c_from_circuit,
    quality_e,
    quality_e_diagonal,
    quality_e_from_vectors,
    trace_norm,
)
from .validation import (
    ScanConfig,
    ScanReport,
    concavity_check,
    mixed_isometry,
    monotonicity_scan,
    random_physical_gram,
    sample_good_region,
    sample_outside_region,
    symmetry_check,
    time_reversed_gram,
)

__version__ = "0.1.0"
