"""Chained-interferometer link model with closed forms and a brute-force oracle.

The public API re-exports the core types and operations; see the individual
modules for the physics and the bookkeeping conventions.
"""

from .backend import BACKEND_NAME
from .oracle import (
    ExposureConvention,
    LossGroup,
    ModeNetwork,
    PropagationTrace,
    build_network,
    channel_exposure,
    propagate,
)
from .protocol import (
    InnerCoefficients,
    OutcomeReport,
    ProtocolParams,
    TransferCoefficients,
    balanced_kappa1,
    equivalent_inner_dissipation,
    eta_nb_closed_form,
    evaluate,
    inner_coefficients,
    outer_coefficients,
)
from .states import (
    InputState,
    OutputStateSummary,
    StateKind,
    output_state,
    ratio_invariance_check,
)
from .transfer import (
    ModeVector2,
    TransferMatrix2,
    bs_matrix,
    chain_matrix,
    loss_matrix,
    matrix_power,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "__version__",
    "TransferMatrix2",
    "ModeVector2",
    "bs_matrix",
    "loss_matrix",
    "chain_matrix",
    "matrix_power",
    "ProtocolParams",
    "InnerCoefficients",
    "TransferCoefficients",
    "OutcomeReport",
    "inner_coefficients",
    "equivalent_inner_dissipation",
    "balanced_kappa1",
    "outer_coefficients",
    "evaluate",
    "eta_nb_closed_form",
    "LossGroup",
    "ExposureConvention",
    "ModeNetwork",
    "PropagationTrace",
    "build_network",
    "propagate",
    "channel_exposure",
    "StateKind",
    "InputState",
    "OutputStateSummary",
    "output_state",
    "ratio_invariance_check",
]
