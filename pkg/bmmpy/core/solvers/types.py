from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, replace

from bmmpy.core.model import ProblemInstance
from bmmpy.core.solvers.bmmp import bmmp
from bmmpy.core.solvers.config import Selector, SolverConfig
from bmmpy.core.solvers.greedy import cosamp, gomp, omp, sp
from bmmpy.core.solvers.result import RecoveryResult
from bmmpy.core.utils.exceptions import InfeasibleSizeError, UnknownSolverError


def _always(m: int, config: SolverConfig) -> str | None:
    return None


def _gomp_feasibility(m: int, config: SolverConfig) -> str | None:
    if config.gomp_t >= config.k:
        return f"gOMP needs t < k, got t={config.gomp_t} and k={config.k}"
    return None


def _sp_feasibility(m: int, config: SolverConfig) -> str | None:
    if 2 * config.k > m:
        return f"SP needs 2k <= m, got k={config.k} and m={m}"
    return None


def _cosamp_feasibility(m: int, config: SolverConfig) -> str | None:
    if 3 * config.k > m:
        return f"CoSaMP needs 3k <= m, got k={config.k} and m={m}"
    return None


def _no_update(config: SolverConfig) -> SolverConfig:
    return config.with_overrides(replace_size=0)


def _no_update_multiple(config: SolverConfig) -> SolverConfig:
    return config.with_overrides(replace_size=0, g=1)


def _no_update_multiple_extended(config: SolverConfig) -> SolverConfig:
    return config.with_overrides(replace_size=0, g=1, max_extended_size=config.k)


@dataclass
class SolverType:
    name: str
    full_name: str
    description: str
    runner: Callable[[ProblemInstance, SolverConfig], RecoveryResult]
    feasibility: Callable[[int, SolverConfig], str | None] = _always
    adjust_config: Callable[[SolverConfig], SolverConfig] | None = None

    @classmethod
    def from_name(cls, name: str) -> SolverType | None:
        for solver_type in _get_solver_types():
            if solver_type.name == name:
                return solver_type
        return None

    @classmethod
    def get(cls, name: str) -> SolverType:
        solver_type = cls.from_name(name)
        if solver_type is None:
            raise UnknownSolverError(
                f"Unknown solver '{name}'! Available solvers: "
                f"{', '.join(get_solver_names())}"
            )
        return solver_type

    def resolve_config(self, config: SolverConfig) -> SolverConfig:
        if self.adjust_config is None:
            return config
        return self.adjust_config(config)

    def infeasibility(self, m: int, config: SolverConfig) -> str | None:
        config = self.resolve_config(config)
        if config.k >= m:
            return f"{self.full_name} needs k < m, got k={config.k} and m={m}"
        return self.feasibility(m, config)

    def solve(self, problem: ProblemInstance, config: SolverConfig) -> RecoveryResult:
        reason = self.infeasibility(problem.m, config)
        if reason is not None:
            raise InfeasibleSizeError(f"{reason}!")

        result = self.runner(problem, self.resolve_config(config))

        return replace(result, solver=self.name)


def _get_solver_types() -> list[SolverType]:
    return [
        SolverType(
            name="bmmp",
            full_name="BMMP",
            description="Bayesian multiple matching pursuit with g support candidates.",
            runner=bmmp,
        ),
        SolverType(
            name="omp",
            full_name="OMP",
            description="Orthogonal matching pursuit on the raw correlation.",
            runner=lambda p, c: omp(p, c.k, Selector.RAW, config=c),
        ),
        SolverType(
            name="gomp",
            full_name="gOMP",
            description="Generalized OMP selecting t indices per step.",
            runner=lambda p, c: gomp(p, c.k, c.gomp_t, Selector.RAW, config=c),
            feasibility=_gomp_feasibility,
        ),
        SolverType(
            name="sp",
            full_name="SP",
            description="Subspace pursuit with an extended support of size 2k.",
            runner=lambda p, c: sp(p, c.k, Selector.RAW, config=c),
            feasibility=_sp_feasibility,
        ),
        SolverType(
            name="cosamp",
            full_name="CoSaMP",
            description="Compressive sampling matching pursuit, extended size 3k.",
            runner=lambda p, c: cosamp(p, c.k, Selector.RAW, config=c),
            feasibility=_cosamp_feasibility,
        ),
        SolverType(
            name="map-omp",
            full_name="MAP-OMP",
            description="OMP with MAP support detection (normalized correlation).",
            runner=lambda p, c: omp(p, c.k, Selector.MAP_H, config=c),
        ),
        SolverType(
            name="map-gomp",
            full_name="MAP-gOMP",
            description="gOMP with MAP support detection (normalized correlation).",
            runner=lambda p, c: gomp(p, c.k, c.gomp_t, Selector.MAP_H, config=c),
            feasibility=_gomp_feasibility,
        ),
        SolverType(
            name="map-sp",
            full_name="MAP-SP",
            description="SP with MAP support detection (normalized correlation).",
            runner=lambda p, c: sp(p, c.k, Selector.MAP_H, config=c),
            feasibility=_sp_feasibility,
        ),
        SolverType(
            name="map-cosamp",
            full_name="MAP-CoSaMP",
            description="CoSaMP with MAP support detection (normalized correlation).",
            runner=lambda p, c: cosamp(p, c.k, Selector.MAP_H, config=c),
            feasibility=_cosamp_feasibility,
        ),
        SolverType(
            name="map-gomp-g",
            full_name="MAP-gOMP (RA-ORMP)",
            description="MAP-gOMP scoring the rank-aware RA-ORMP correlation.",
            runner=lambda p, c: gomp(p, c.k, c.gomp_t, Selector.MAP_G, config=c),
            feasibility=_gomp_feasibility,
        ),
        SolverType(
            name="bmmp-no-u",
            full_name="BMMP\\{U}",
            description="BMMP without replacing a subset of the extended support.",
            runner=bmmp,
            adjust_config=_no_update,
        ),
        SolverType(
            name="bmmp-no-um",
            full_name="BMMP\\{U,M}",
            description="BMMP\\{U} with a single support candidate.",
            runner=bmmp,
            adjust_config=_no_update_multiple,
        ),
        SolverType(
            name="bmmp-no-ume",
            full_name="BMMP\\{U,M,E}",
            description="BMMP\\{U,M} with the extended support capped at k.",
            runner=bmmp,
            adjust_config=_no_update_multiple_extended,
        ),
    ]


def get_solver_names() -> list[str]:
    return [solver_type.name for solver_type in _get_solver_types()]


def run_solver(
    name: str, problem: ProblemInstance, config: SolverConfig
) -> RecoveryResult:
    return SolverType.get(name).solve(problem, config)
