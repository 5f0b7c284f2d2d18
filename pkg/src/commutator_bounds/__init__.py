"""Variance-product uncertainty bounds from state-weighted commutator norms.

The package computes five lower bounds on the variance product of two
observables (Robertson, Schroedinger, Luo-Park, and two bounds built from
the state-weighted Frobenius norm of the commutator), verifies the weighted
generalization of the Boettcher-Wenzel inequality by alternating
maximization, and reproduces the qubit and mutually-unbiased-pair averages
in closed form and by Monte Carlo.
"""

from .averages import (
    AveragedBounds,
    BOUND_NAMES,
    FIG1_HEADER,
    MCEstimate,
    MomentMatrixEstimate,
    Moments,
    averaged_bounds_qubit,
    crossover_purities,
    fig1_rows,
    merge_moments,
    monte_carlo_qubit_average,
    qubit_bound_samples,
    sphere_moment_check,
)
from .bounds import (
    BoundReport,
    batch_bounds,
    bound_luo_park,
    bound_one,
    bound_report,
    bound_robertson,
    bound_schrodinger,
    bound_two,
    classical_uncertainty,
    expectation,
    qubit_bounds_closed_form,
    qubit_closed_form_batch,
    qubit_commutator_norm_identity,
    skew_information,
    variance,
    violation_masks,
)
from .errors import (
    DimensionMismatchError,
    EigensolverError,
    InvalidStateError,
    NotHermitianError,
    NumericalConsistencyError,
)
from .linalg import (
    EigenSystem,
    anticommutator,
    commutator,
    frobenius_norm_sq,
    hermitian_eigensystem,
    weighted_inner_product,
    weighted_norm_sq,
)
from .mub import (
    FIG2_HEADER,
    MUBPair,
    MubAverages,
    fig2_rows,
    fourier_mub_pair,
    fourier_phases,
    mc_mub_average,
    mub_b2_average,
    mub_commutator_norm,
    mub_commutator_norm_average,
    mub_lp_average,
    mub_pair,
    mub_sample_columns,
    mub_vanishing_check,
    qubit_mub_theta_lp,
    qubit_spectrum_from_purity,
)
from .optimizer import (
    OptimizationResult,
    conjectured_constant,
    equality_witness,
    loose_constant,
    matrix_from_pairs,
    matrix_to_pairs,
    maximize_ratio,
    ratio,
    result_record,
)
from .states import (
    BlochVector,
    DensityMatrix,
    Observable,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PAULIS,
    sample_density,
    sample_density_batch,
    sample_hermitian,
    sample_hermitian_batch,
    sample_observable_unit,
    sample_unit_vector,
    sample_unit_vectors,
    sample_unitary,
    spectral_summary,
)

__version__ = "0.1.0"

__all__ = [
    "AveragedBounds",
    "BOUND_NAMES",
    "BlochVector",
    "BoundReport",
    "DensityMatrix",
    "DimensionMismatchError",
    "EigenSystem",
    "EigensolverError",
    "FIG1_HEADER",
    "FIG2_HEADER",
    "InvalidStateError",
    "MCEstimate",
    "MUBPair",
    "MomentMatrixEstimate",
    "Moments",
    "MubAverages",
    "NotHermitianError",
    "NumericalConsistencyError",
    "Observable",
    "OptimizationResult",
    "PAULIS",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "anticommutator",
    "averaged_bounds_qubit",
    "batch_bounds",
    "bound_luo_park",
    "bound_one",
    "bound_report",
    "bound_robertson",
    "bound_schrodinger",
    "bound_two",
    "classical_uncertainty",
    "commutator",
    "conjectured_constant",
    "crossover_purities",
    "equality_witness",
    "expectation",
    "fig1_rows",
    "fig2_rows",
    "fourier_mub_pair",
    "fourier_phases",
    "frobenius_norm_sq",
    "hermitian_eigensystem",
    "loose_constant",
    "matrix_from_pairs",
    "matrix_to_pairs",
    "maximize_ratio",
    "mc_mub_average",
    "merge_moments",
    "monte_carlo_qubit_average",
    "mub_b2_average",
    "mub_commutator_norm",
    "mub_commutator_norm_average",
    "mub_lp_average",
    "mub_pair",
    "mub_sample_columns",
    "mub_vanishing_check",
    "qubit_bound_samples",
    "qubit_bounds_closed_form",
    "qubit_closed_form_batch",
    "qubit_commutator_norm_identity",
    "qubit_mub_theta_lp",
    "qubit_spectrum_from_purity",
    "ratio",
    "result_record",
    "sample_density",
    "sample_density_batch",
    "sample_hermitian",
    "sample_hermitian_batch",
    "sample_observable_unit",
    "sample_unit_vector",
    "sample_unit_vectors",
    "sample_unitary",
    "skew_information",
    "spectral_summary",
    "sphere_moment_check",
    "variance",
    "violation_masks",
    "weighted_inner_product",
    "weighted_norm_sq",
]
