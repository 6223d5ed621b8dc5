"""defindex: deficiency indices of adjacency matrices on locally finite
graphs.

Builds antitrees, glued copies and trees as finite truncations, reduces
radially symmetric adjacency operators to Jacobi matrices, and decides
the deficiency index by combining the Carleman and Berezanskii criteria,
Kato-Rellich perturbation stability, direct-sum composition rules, and an
independent numerical limit-point / limit-circle classifier.
"""

from ._backend import KERNEL_BACKEND
from .engine import (
    INFINITE,
    AnalysisSettings,
    AntitreeDesc,
    DeficiencyReport,
    DisjointUnionDesc,
    FiniteGraphDesc,
    GluedDesc,
    JacobiDesc,
    TraceEntry,
    TreeDesc,
    analyze,
    descriptor_from_json,
    direct_sum_index,
)
from .errors import (
    ContractError,
    DefindexError,
    FloorBoundaryError,
    InternalInconsistencyError,
    InvariantViolationError,
    ReductionInconsistencyError,
    TruncationError,
)
from .graphs import (
    AntitreeSpec,
    Graph,
    SphereDecomposition,
    TreeCheck,
    bfs_spheres,
    build_antitree,
    degree,
    glue_copies,
    is_connected,
    is_tree,
    sphere_sizes,
    tree_check,
)
from .jacobi import (
    AnalyticRules,
    ClassifierResult,
    ClassifierTolerances,
    CriterionResult,
    JacobiMatrix,
    PerturbationBound,
    RecurrenceSolution,
    berezanskii_test,
    bounded_difference,
    carleman_test,
    classify_limit,
    floor_power_rules,
    free_jacobi,
    power_jacobi,
    relative_residuals,
    solve_recurrence,
    wronskian,
)
from .operators import (
    FiniteFunction,
    SparseSymmetricMatrix,
    apply_adjacency,
    apply_laplacian,
    truncated_matrix,
)
from .radial import (
    RadialFunction,
    ReductionCheckReport,
    check_reduction_consistency,
    project_radial,
    radial_profile,
    reduce_to_jacobi,
    weight_transform,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "INFINITE",
    "AnalysisSettings",
    "AnalyticRules",
    "AntitreeDesc",
    "AntitreeSpec",
    "ClassifierResult",
    "ClassifierTolerances",
    "ContractError",
    "CriterionResult",
    "DeficiencyReport",
    "DefindexError",
    "DisjointUnionDesc",
    "FiniteFunction",
    "FiniteGraphDesc",
    "FloorBoundaryError",
    "Graph",
    "GluedDesc",
    "InternalInconsistencyError",
    "InvariantViolationError",
    "JacobiDesc",
    "JacobiMatrix",
    "PerturbationBound",
    "RadialFunction",
    "RecurrenceSolution",
    "ReductionCheckReport",
    "ReductionInconsistencyError",
    "SparseSymmetricMatrix",
    "SphereDecomposition",
    "TraceEntry",
    "TreeCheck",
    "TreeDesc",
    "TruncationError",
    "analyze",
    "apply_adjacency",
    "apply_laplacian",
    "berezanskii_test",
    "bfs_spheres",
    "bounded_difference",
    "build_antitree",
    "carleman_test",
    "check_reduction_consistency",
    "classify_limit",
    "degree",
    "descriptor_from_json",
    "direct_sum_index",
    "floor_power_rules",
    "free_jacobi",
    "glue_copies",
    "is_connected",
    "is_tree",
    "power_jacobi",
    "project_radial",
    "radial_profile",
    "reduce_to_jacobi",
    "relative_residuals",
    "solve_recurrence",
    "sphere_sizes",
    "tree_check",
    "truncated_matrix",
    "weight_transform",
]
