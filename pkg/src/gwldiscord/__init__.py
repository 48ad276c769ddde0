"""Quantum discord and entanglement of formation of two-qubit Werner-like states."""

from .measures import (
    CorrelationReport,
    binary_entropy,
    conditional_entropy_analytic,
    correlation_report,
    discord_analytic,
    eof,
    gwl_concurrence,
    gwl_entropy,
    p_critical,
    pure_concurrence,
    reduced_entropy,
    von_neumann_entropy,
    wootters_concurrence,
)
from .numkernel import herm_eigvals, kron, psd_sqrt
from .oracle import (
    MeasuredEnsemble,
    MeasurementDirection,
    OptimizerConfig,
    amplitude_check,
    bell_threshold,
    conditional_entropy_numeric,
    discord_numeric,
    intersection_point,
    luders_update,
    outcome_probability,
    projector_pair,
)
from .states import (
    PureState,
    apply_unitary,
    gwl,
    named_state,
    parse_state,
    reduced,
    spin_flip,
    werner,
)

__version__ = "0.1.0"
