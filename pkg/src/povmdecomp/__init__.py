"""Decompose finite quantum measurements into extremal rank-1 POVMs.

Any POVM on a d-dimensional Hilbert space equals a convex combination of
extremal rank-1 POVMs followed by classical relabeling of outcomes. This
package finds such combinations constructively via linear programming over
generalized Bloch coordinates, certifies extremality and infeasibility, and
supports ranked (ordered) factor selection for small instances.
"""

from .bloch import GeneratorBasis, from_bloch, generator_basis, pure_state_norm, to_bloch
from .decompose import (
    Decomposition,
    ExtremalityReport,
    ExtremalityStatus,
    Term,
    build_feasibility_lp,
    check_extremal,
    decompose,
    extract_step,
    lp_from_elements,
    reconstruct,
    separating_vector,
)
from .errors import (
    DimensionTooSmall,
    EmptyPovm,
    FileFormatError,
    InternalInfeasible,
    IterationLimitExceeded,
    LengthMismatch,
    NotComplete,
    NotPsd,
    NotUnitTrace,
    NumericalStall,
    PovmdecompError,
    TooLarge,
    Unbounded,
    Unsupported,
)
from .linalg import EigenDecomposition, eigendecompose, hermitize, is_psd, matrix_rank
from .ordered import (
    DEFAULT_ENUMERATION_CAP,
    Strategy,
    Vertex,
    VertexCatalog,
    enumerate_vertices,
    ordered_decompose,
    q_bounds,
    q_cost,
)
from .povm import (
    PreparedPovm,
    RelabelMap,
    WeightedPovm,
    aggregate_by_target,
    povm_equal,
    prepare_rank1,
    validate_povm,
)
from .sampling import haar_state, haar_unitary, random_full_rank_povm, random_rank1_povm
from .simplex import (
    BasicFeasibleSolution,
    InfeasibilityCertificate,
    StandardLp,
    find_vertex,
    optimize,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__version__ = "0.1.0"

__all__ = [
    "BasicFeasibleSolution",
    "DEFAULT_ENUMERATION_CAP",
    "DEFAULT_TOLERANCES",
    "Decomposition",
    "DimensionTooSmall",
    "EigenDecomposition",
    "EmptyPovm",
    "ExtremalityReport",
    "ExtremalityStatus",
    "FileFormatError",
    "GeneratorBasis",
    "InfeasibilityCertificate",
    "InternalInfeasible",
    "IterationLimitExceeded",
    "LengthMismatch",
    "NotComplete",
    "NotPsd",
    "NotUnitTrace",
    "NumericalStall",
    "PovmdecompError",
    "PreparedPovm",
    "RelabelMap",
    "StandardLp",
    "Strategy",
    "Term",
    "TooLarge",
    "Tolerances",
    "Unbounded",
    "Unsupported",
    "Vertex",
    "VertexCatalog",
    "WeightedPovm",
    "aggregate_by_target",
    "build_feasibility_lp",
    "check_extremal",
    "decompose",
    "eigendecompose",
    "enumerate_vertices",
    "extract_step",
    "find_vertex",
    "from_bloch",
    "generator_basis",
    "haar_state",
    "haar_unitary",
    "hermitize",
    "is_psd",
    "lp_from_elements",
    "matrix_rank",
    "optimize",
    "ordered_decompose",
    "povm_equal",
    "prepare_rank1",
    "pure_state_norm",
    "q_bounds",
    "q_cost",
    "random_full_rank_povm",
    "random_rank1_povm",
    "reconstruct",
    "separating_vector",
    "to_bloch",
    "validate_povm",
]
