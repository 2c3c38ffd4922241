"""All-orders WKB and leading-order SWKB quantization of the angular momentum."""
from ._accel import backend
from .algebra import (
    N_MAX,
    CanonicalPhase,
    PhaseExpr,
    PhaseTerm,
    Poly,
    closed_form_C0,
    differentiate,
    extract_canonical,
    multiply,
    normalize,
    phase_derivatives,
    wkb_recursion_step,
)
from .series import (
    ProblemParams,
    QuantizationRecord,
    action_term,
    partial_sum_energy,
    reduce_parameters,
    summed_quantization,
    torus_limit,
)

__version__ = "0.1.0"
