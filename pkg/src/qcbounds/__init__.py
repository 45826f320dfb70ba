"""Analytic bounds on measurement outcome probabilities over qubit-channel classes.

The five classes, ordered by inclusion where applicable:

    D   constant (depolarize-to-a-point) channels
    R   random-unitary (unitary mixture) channels
    UE  unital entanglement-breaking channels
    GE  general entanglement-breaking channels
    C   all channels

For a binary process measurement with effect S = 2 w tau (tau a two-qubit
state, w the outcome weight), `all_bounds` returns per-class maxima of the
outcome probability, `fef` the best overlap with a maximally entangled state
reachable by output unitaries, and the convertibility module reduces the
pure-state pair conversion problem to the overlaps of the two pairs.
"""

from .errors import InfeasibleError, ValidationError
from .qubit_core import (
    PAULI,
    bloch_vector,
    correlation_matrix,
    density_from_bloch,
    fidelity,
    ket,
    kyfan_norm,
    partial_trace,
    projector,
    rotation_trace_max,
    singular_values,
    svd3,
)
from .channels import (
    GeneralizedExtremePoint,
    QubitChannel,
    UnitalCanonicalForm,
    choi_to_kraus,
    choi_to_ptm,
    identity_channel,
    is_entanglement_breaking_unital,
    kraus_to_choi,
    kraus_to_ptm,
    make_depolarizing,
    make_extreme_cq,
    make_generalized_extreme,
    make_random_unitary,
    make_unitary,
    ptm_to_choi,
    rotation_from_unitary,
    unitary_from_rotation,
    unital_canonical_decomposition,
)
from .measurement import (
    POVM,
    PPOVM,
    ProcessEffect,
    ancilla_free_ppovm,
    channel_probability,
    entangled_ppovm,
    make_povm,
    normalize_effect,
    state_probability,
)
from .bounds import (
    BoundReport,
    all_bounds,
    bound_all_channels,
    bound_depolarizing,
    bound_for_class,
    bound_general_eb,
    bound_unital,
    bound_unital_eb,
    channel_overlap,
    dominance_check,
    fef,
)
from .convertibility import (
    ConversionAssessment,
    ConversionInstance,
    assess_instance,
    build_achiever,
    build_tau,
    class_value,
    compare_classes,
    convertibility_value,
    from_overlaps,
    is_convertible_all_channels,
    tau_singular_values,
)
from .oracle import OracleConfig, OracleResult, dominance_sweep, maximize
from .detection import (
    DetectionResult,
    detect_not_eb,
    detect_not_eb_sampled,
    prob_ancilla_free,
    prob_entangled_input,
    scheme_threshold,
    threshold_sweep,
    werner_channel,
)
from . import sampling, serialize

__version__ = "0.1.0"

__all__ = [
    "InfeasibleError",
    "ValidationError",
    "PAULI",
    "bloch_vector",
    "correlation_matrix",
    "density_from_bloch",
    "fidelity",
    "ket",
    "kyfan_norm",
    "partial_trace",
    "projector",
    "rotation_trace_max",
    "singular_values",
    "svd3",
    "GeneralizedExtremePoint",
    "QubitChannel",
    "UnitalCanonicalForm",
    "choi_to_kraus",
    "choi_to_ptm",
    "identity_channel",
    "is_entanglement_breaking_unital",
    "kraus_to_choi",
    "kraus_to_ptm",
    "make_depolarizing",
    "make_extreme_cq",
    "make_generalized_extreme",
    "make_random_unitary",
    "make_unitary",
    "ptm_to_choi",
    "rotation_from_unitary",
    "unitary_from_rotation",
    "unital_canonical_decomposition",
    "POVM",
    "PPOVM",
    "ProcessEffect",
    "ancilla_free_ppovm",
    "channel_probability",
    "entangled_ppovm",
    "make_povm",
    "normalize_effect",
    "state_probability",
    "BoundReport",
    "all_bounds",
    "bound_all_channels",
    "bound_depolarizing",
    "bound_for_class",
    "bound_general_eb",
    "bound_unital",
    "bound_unital_eb",
    "channel_overlap",
    "dominance_check",
    "fef",
    "ConversionAssessment",
    "ConversionInstance",
    "assess_instance",
    "build_achiever",
    "build_tau",
    "class_value",
    "compare_classes",
    "convertibility_value",
    "from_overlaps",
    "is_convertible_all_channels",
    "tau_singular_values",
    "OracleConfig",
    "OracleResult",
    "dominance_sweep",
    "maximize",
    "DetectionResult",
    "detect_not_eb",
    "detect_not_eb_sampled",
    "prob_ancilla_free",
    "prob_entangled_input",
    "scheme_threshold",
    "threshold_sweep",
    "werner_channel",
    "sampling",
    "serialize",
    "__version__",
]
