"""Two-qubit entanglement from connected correlation matrices.

Submodules
----------
qmat         small dense matrix kernel (Jacobi eigensolver, 3x3 SVD, ...)
states       canonical three-qubit states and reduced density matrices
measures     E1..E5, concurrences, negativity
correlation  R and connected R matrices, cubic invariants, CHSH maxima
lhv          vector-observable hidden-variable model
scan         parameter scans, binning, CSV format
cli          ``python -m conncorr`` entry point
"""
from .correlation import (
    CubicClassification,
    MeasurementSetting,
    alpha_connected,
    alpha_quantum,
    bell_value,
    chsh_optimize,
    classify,
    connected_r_matrix,
    max_violation_eigen,
    r_matrix,
)
from .measures import (
    MeasureSet,
    bipartite_concurrence,
    e5_matrix,
    measures_from_params,
    measures_from_state,
    negativity,
    wootters_concurrence,
)
from .qmat import DomainError, NumericError
from .states import (
    CanonicalParams,
    canonical_state,
    density,
    from_amplitudes,
    reduce_pair,
    reduce_single,
    sample_canonical,
)

__version__ = "0.1.0"
