from bmmpy.core.solvers.bmmp import bmmp, grow_extended_support
from bmmpy.core.solvers.common import reconstruct_signal
from bmmpy.core.solvers.config import Selector, SolverConfig
from bmmpy.core.solvers.greedy import cosamp, gomp, gomp_cap, omp, sp
from bmmpy.core.solvers.result import CandidateTrace, RecoveryResult
from bmmpy.core.solvers.types import SolverType, get_solver_names, run_solver

__all__ = [
    "CandidateTrace",
    "RecoveryResult",
    "Selector",
    "SolverConfig",
    "SolverType",
    "bmmp",
    "cosamp",
    "get_solver_names",
    "gomp",
    "gomp_cap",
    "grow_extended_support",
    "omp",
    "reconstruct_signal",
    "run_solver",
    "sp",
]
