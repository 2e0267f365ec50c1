"""Recovery of sparse spike and spline signals from Fourier magnitudes."""

__version__ = "0.1.0"

from .errors import (
    AmbiguousCase,
    DegenerateInput,
    EmptyModel,
    InconsistentSystem,
    InvalidSignal,
    NotTriangular,
    NumericalFailure,
    PoolInconsistent,
    PreconditionError,
    RankDeficient,
    RetrievalError,
    RootCountMismatch,
    SingularMatrix,
    SparsePhaseError,
    UnmatchedDistance,
)
from .model import (
    IntensitySamples,
    RecoveryConfig,
    RecoveryReport,
    SpikeSignal,
    SplineSignal,
    SymmetricExponentialSum,
    make_signal,
    validate,
)
from .prony import ApmConfig, approximate_prony, classical_prony, reduced_prony
from .retrieval import canonicalize, equivalent_mod_trivial, recover_signal, recover_support
from .synthesis import derivative_weight, intensity_squared, sample_intensities

__all__ = [
    "AmbiguousCase", "DegenerateInput", "EmptyModel", "InconsistentSystem", "InvalidSignal",
    "NotTriangular", "NumericalFailure", "PoolInconsistent", "PreconditionError",
    "RankDeficient", "RetrievalError", "RootCountMismatch", "SingularMatrix",
    "SparsePhaseError", "UnmatchedDistance",
    "IntensitySamples", "RecoveryConfig", "RecoveryReport", "SpikeSignal", "SplineSignal",
    "SymmetricExponentialSum", "make_signal", "validate",
    "ApmConfig", "approximate_prony", "classical_prony", "reduced_prony",
    "canonicalize", "equivalent_mod_trivial", "recover_signal", "recover_support",
    "derivative_weight", "intensity_squared", "sample_intensities",
]
