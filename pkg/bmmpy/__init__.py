from __future__ import annotations

from bmmpy.core.config.configuration import TOMLConfiguration
from bmmpy.core.config.variables import VariableLibrary

VariableLibrary()

from bmmpy.core.linalg import OrthoBasis, least_squares
from bmmpy.core.model import (
    ProblemInstance,
    SensingModel,
    SignalPrior,
    load_instance,
    save_instance,
)
from bmmpy.core.detection import CorrelationKind
from bmmpy.core.sbl import EstimationMode
from bmmpy.core.solvers import RecoveryResult, SolverConfig, SolverType, run_solver

__all__ = [
    "CorrelationKind",
    "EstimationMode",
    "OrthoBasis",
    "ProblemInstance",
    "RecoveryResult",
    "SensingModel",
    "SignalPrior",
    "SolverConfig",
    "SolverType",
    "TOMLConfiguration",
    "VariableLibrary",
    "least_squares",
    "load_instance",
    "run_solver",
    "save_instance",
]
