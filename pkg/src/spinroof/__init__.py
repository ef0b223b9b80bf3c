"""spinroof: variances, quantum Fisher information, optimal pure-state
decompositions, and rotation-sensing limits for spin systems."""

from .spinops import (
    Spin,
    Triad,
    as_direction,
    collective_operator,
    collective_spin_operators,
    complete_triad,
    direction_operator,
    is_hermitian,
    normalized,
    random_triad,
    spin_operators,
)
from .states import (
    DensityMatrix,
    GinibreMixed,
    HaarPure,
    RandomSpec,
    bloch_to_density,
    bloch_to_ket,
    density_from_json,
    density_to_bloch,
    density_to_json,
    diagonal_spin1,
    dicke_ket,
    dicke_state,
    embed_symmetric_ket,
    ghz_ket,
    ket_to_bloch,
    product_ket,
    product_state,
    purity,
    random_state,
    symmetric_embedding,
    tetrahedron_ket,
    tetrahedron_state,
)
from .fluctuation import (
    TangentBloch,
    covariance_matrix,
    expectation,
    fisher_matrix,
    ket_variance,
    purity_gap_bound,
    qfi,
    qfi_bloch_curve,
    qfi_bloch_unitary,
    variance,
)
from .roofs import (
    ChordDecomposition,
    Decomposition,
    DualityReport,
    RoofResult,
    average_variance,
    chord_decomposition,
    decomposition_from_json,
    eigendecomposition_gaps,
    maximal_decomposition,
    min_max_duality_check,
    minimal_decomposition,
    numeric_convex_roof,
    parallel_axis_gaps,
)
from .relations import (
    CsResult,
    RelationReport,
    check_angle_pair,
    check_angle_pair_qfi,
    check_robertson,
    check_robertson_qfi,
    check_robertson_tightening,
    check_sum2,
    check_sum2_qfi,
    check_sum3,
    check_sum3_qfi,
    compute_c,
    fit_loglog_slope,
    purity_band,
    qubit_equalities,
)
from .metrology import (
    AxisSet,
    ConstraintReport,
    FullSphere,
    LimitReport,
    Plane,
    builtin_state,
    classical_limit,
    crb,
    min_fisher_direction,
    min_qfi,
    optimal_state,
    quantum_limit,
    separable_constraints_check,
    witness_entanglement,
)

__version__ = "0.1.0"
