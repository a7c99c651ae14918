from bmmpy.core.model.instance_file import load_instance, save_instance
from bmmpy.core.model.problem import (
    NOISELESS_EPSILON_FACTOR,
    ProblemInstance,
    SensingModel,
    SignalPrior,
    default_epsilon,
    gen_matrix,
    gen_signal,
    is_noiseless,
    sigma_w_from_snr,
    synthesize,
)
from bmmpy.core.model.rng import make_rng

__all__ = [
    "NOISELESS_EPSILON_FACTOR",
    "ProblemInstance",
    "SensingModel",
    "SignalPrior",
    "default_epsilon",
    "gen_matrix",
    "gen_signal",
    "is_noiseless",
    "load_instance",
    "make_rng",
    "save_instance",
    "sigma_w_from_snr",
    "synthesize",
]
