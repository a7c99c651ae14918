from bmmpy.core.sbl.ridge import (
    EstimationMode,
    RidgeEstimate,
    SblSettings,
    SblState,
    estimate_on_support,
    initial_state,
    ridge_solve,
    sbl_fit,
    sbl_objective,
)

__all__ = [
    "EstimationMode",
    "RidgeEstimate",
    "SblSettings",
    "SblState",
    "estimate_on_support",
    "initial_state",
    "ridge_solve",
    "sbl_fit",
    "sbl_objective",
]
