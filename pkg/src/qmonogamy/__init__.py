"""qmonogamy: multiqubit correlation measures and monogamy/polygamy bound
verification with Hamming-weight coefficient schemes."""

__version__ = "0.1.0"

from ._backend import active_backend
from .errors import NumericError, StateFormatError
from .measures import (
    RoofConfig,
    RoofResult,
    coa_two_qubit,
    concurrence_pure,
    concurrence_two_qubit,
    convex_roof,
    default_gamma,
    negativity,
    negativity_pure,
    scren_mixed,
    scren_pure,
    scren_two_qubit,
    screnoa_mixed,
    screnoa_pure,
    screnoa_two_qubit,
)
from .monogamy import (
    BoundEntry,
    BoundReport,
    BoundSpec,
    PairValues,
    binary_vector,
    check_descending,
    check_dominance,
    coeff_base,
    hamming_weight,
    lower_bound,
    split_point,
    upper_bound,
    verdict,
)
from .states import (
    DensityOperator,
    MultipartiteState,
    PairReductions,
    ghz_state,
    haar_random_pure,
    load_state,
    ou_state,
    pair_reductions,
    random_mixed,
    save_state,
    w_state,
)
from .tensor import (
    EigenDecomposition,
    hermitian_eig,
    kron,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    trace_norm_hermitian,
)

__all__ = [
    "__version__",
    "active_backend",
    "NumericError",
    "StateFormatError",
    "RoofConfig",
    "RoofResult",
    "coa_two_qubit",
    "concurrence_pure",
    "concurrence_two_qubit",
    "convex_roof",
    "default_gamma",
    "negativity",
    "negativity_pure",
    "scren_mixed",
    "scren_pure",
    "scren_two_qubit",
    "screnoa_mixed",
    "screnoa_pure",
    "screnoa_two_qubit",
    "BoundEntry",
    "BoundReport",
    "BoundSpec",
    "PairValues",
    "binary_vector",
    "check_descending",
    "check_dominance",
    "coeff_base",
    "hamming_weight",
    "lower_bound",
    "split_point",
    "upper_bound",
    "verdict",
    "DensityOperator",
    "MultipartiteState",
    "PairReductions",
    "ghz_state",
    "haar_random_pure",
    "load_state",
    "ou_state",
    "pair_reductions",
    "random_mixed",
    "save_state",
    "w_state",
    "EigenDecomposition",
    "hermitian_eig",
    "kron",
    "matrix_sqrt_psd",
    "partial_trace",
    "partial_transpose",
    "trace_norm_hermitian",
]
