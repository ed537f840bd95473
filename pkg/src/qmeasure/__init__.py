"""Quantum measures, decoherence functionals and quantum integrals on finite sample spaces."""

from ._kernels import backend
from .decoherence import (
    ConsistencyError,
    State,
    StateError,
    decoherence_functional,
    decoherence_operator,
    gram_matrix,
    interference,
    pure_state,
    q_measure,
    q_measure_operator,
)
from .linalg import (
    EigenDecomposition,
    LinearOperator,
    NotHermitianError,
    embed,
    eigvalsh,
    hermitian_eig,
    is_psd,
    operator_norm,
    rank_one,
    unembed,
)
from .measure import (
    DimensionError,
    Event,
    MeasureSpace,
    SimpleForm,
    chi,
    expectation,
    inner,
    norm,
    nu,
    pos_neg_split,
    simple_form,
)
from .paths import (
    CapExceeded,
    NormalizationError,
    NotUnitaryError,
    PathConfig,
    PathEnsemble,
    PathSpace,
    UnitarySystem,
    amplitude,
    bridge_check,
    build_ensemble,
    class_operator,
    compose,
    dense_decoherence_matrix,
    path_decoherence,
    path_q_measure,
)
from .quantization import (
    quadratic_form,
    quantize,
    quantum_integral,
    scale_check,
    simple_quadratic_form,
    tail_sum,
)
from .rng import SplitMix64
from .scenario import PathScenario, Scenario, ScenarioError, parse_scenario, serialize

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
