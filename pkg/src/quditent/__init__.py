"""Negativity, concurrence and symmetric invariants of bipartite qudit states."""

from ._kernels import BACKEND
from .errors import (
    ArgumentError,
    ConvergenceError,
    DimensionError,
    InvariantError,
    QuditentError,
    SymmetryError,
    UndefinedMeasureError,
)
from .linalg import hermitian_eigensystem, singular_value_decomposition, trace_norm
from .measures import (
    InvariantSet,
    MeasureReport,
    PeresClass,
    build_shift_operator,
    chen_gap,
    concurrence_pure,
    concurrence_schmidt,
    concurrence_spin_flip_2q,
    measure_report,
    negativity,
    negativity_operator,
    negativity_schmidt,
    peres_classify,
    quadrit_residuals,
    qutrit_residual,
    symmetric_invariants,
    x_shift_expectation,
)
from .roof import (
    Ensemble,
    Measure,
    OptimizerConfig,
    RoofResult,
    convex_roof,
    ensemble_from_isometry,
    wootters_concurrence_mixed,
)
from .states import (
    BipartiteDims,
    DensityMatrix,
    PureState,
    SchmidtForm,
    coefficient_matrix,
    from_schmidt,
    partial_transpose,
    projector,
    random_mixed_state,
    random_pure_state,
    random_schmidt_vector,
    reduced_density,
    schmidt_decompose,
    werner_state,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "hermitian_eigensystem",
    "singular_value_decomposition",
    "trace_norm",
    "ArgumentError",
    "ConvergenceError",
    "DimensionError",
    "InvariantError",
    "QuditentError",
    "SymmetryError",
    "UndefinedMeasureError",
    "InvariantSet",
    "MeasureReport",
    "PeresClass",
    "build_shift_operator",
    "chen_gap",
    "concurrence_pure",
    "concurrence_schmidt",
    "concurrence_spin_flip_2q",
    "measure_report",
    "negativity",
    "negativity_operator",
    "negativity_schmidt",
    "peres_classify",
    "quadrit_residuals",
    "qutrit_residual",
    "symmetric_invariants",
    "x_shift_expectation",
    "Ensemble",
    "Measure",
    "OptimizerConfig",
    "RoofResult",
    "convex_roof",
    "ensemble_from_isometry",
    "wootters_concurrence_mixed",
    "BipartiteDims",
    "DensityMatrix",
    "PureState",
    "SchmidtForm",
    "coefficient_matrix",
    "from_schmidt",
    "partial_transpose",
    "projector",
    "random_mixed_state",
    "random_pure_state",
    "random_schmidt_vector",
    "reduced_density",
    "schmidt_decompose",
    "werner_state",
]
