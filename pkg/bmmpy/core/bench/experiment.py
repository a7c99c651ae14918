from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from rich.progress import track

from bmmpy.core.model import ProblemInstance, SignalPrior, is_noiseless
from bmmpy.core.solvers import SolverConfig, SolverType
from bmmpy.core.utils.exceptions import InvalidInputError
from bmmpy.core.utils.utils import derive_seed


class ExperimentKind(Enum):
    PHASE_TRANSITION = "phase_transition"
    MSE_VS_SNR = "mse_vs_snr"
    ABLATION = "ablation"
    DETECTOR_COMPARE = "detector_compare"
    IMAGE_DEMO = "image_demo"

    @property
    def x_axis(self) -> str:
        return {
            ExperimentKind.PHASE_TRANSITION: "k",
            ExperimentKind.MSE_VS_SNR: "snr_db",
            ExperimentKind.ABLATION: "k",
            ExperimentKind.DETECTOR_COMPARE: "m",
            ExperimentKind.IMAGE_DEMO: "m",
        }[self]

    @property
    def metric(self) -> str:
        if self is ExperimentKind.MSE_VS_SNR:
            return "mse"
        return "recovery_rate"


@dataclass(frozen=True)
class GridPoint:
    m: int
    n: int
    k: int
    snr_db: float | None = None

    def label(self) -> str:
        snr = "noiseless" if self.snr_db is None else repr(float(self.snr_db))
        return f"m={self.m}|n={self.n}|k={self.k}|snr={snr}"


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    experiment: ExperimentKind
    m: tuple[int, ...]
    solvers: tuple[str, ...]
    n: tuple[int, ...] | None = None
    k_sweep: tuple[int, ...] | None = None
    k_divisor: float | None = None
    snr_sweep_db: tuple[float | None, ...] = (None,)
    trials: int = 100
    seed_base: int = 0
    prior: SignalPrior = field(default_factory=SignalPrior.uniform)
    solver_options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.m or not self.solvers or not self.snr_sweep_db:
            raise InvalidInputError("The m, solver and SNR sweeps must not be empty!")
        if self.trials < 1:
            raise InvalidInputError(
                f"At least one trial is required, got {self.trials}!"
            )
        if (self.k_sweep is None) == (self.k_divisor is None):
            raise InvalidInputError(
                "Exactly one of a sparsity sweep and a sparsity divisor is required!"
            )
        if self.k_sweep is not None and not self.k_sweep:
            raise InvalidInputError("The sparsity sweep must not be empty!")
        if self.n is not None and len(self.n) != len(self.m):
            raise InvalidInputError("The n values have to pair up with the m values!")
        for solver in self.solvers:
            SolverType.get(solver)

    def grid(self) -> list[GridPoint]:
        n_values = self.n if self.n is not None else tuple(2 * m for m in self.m)
        points = []

        for m, n in zip(self.m, n_values):
            k_values = (
                self.k_sweep
                if self.k_sweep is not None
                else (int(np.floor(m / self.k_divisor)),)
            )
            for k in k_values:
                for snr in self.snr_sweep_db:
                    points.append(
                        GridPoint(
                            m=int(m),
                            n=int(n),
                            k=int(k),
                            snr_db=None if is_noiseless(snr) else float(snr),
                        )
                    )

        return points

    def trial_seed(self, point: GridPoint, trial: int) -> int:
        return derive_seed(self.seed_base, point.label(), trial)

    def with_overrides(self, **overrides) -> ExperimentConfig:
        return replace(self, **overrides)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "experiment": self.experiment.value,
            "m": list(self.m),
            "n": list(self.n) if self.n is not None else [2 * m for m in self.m],
            "k_sweep": list(self.k_sweep) if self.k_sweep is not None else None,
            "k_divisor": self.k_divisor,
            "snr_sweep_db": [
                "noiseless" if is_noiseless(snr) else snr for snr in self.snr_sweep_db
            ],
            "trials": self.trials,
            "seed_base": self.seed_base,
            "prior": str(self.prior),
            "solvers": list(self.solvers),
            "solver_options": dict(self.solver_options),
        }


def _scale_count(value: int, scale: float, minimum: int = 1) -> int:
    return max(int(round(value * scale)), minimum)


def _unique(values) -> tuple:
    return tuple(dict.fromkeys(values))


_MAIN_SOLVERS = ("bmmp", "map-gomp", "map-sp", "map-cosamp", "map-omp", "omp")


def preset(
    name: str,
    scale: float = 1.0,
    trials: int = 100,
    seed_base: int = 0,
    **solver_options,
) -> ExperimentConfig:
    """Experiment grids of the reference study, shrunk by ``scale``.

    Sizes m and n and the sparsity sweep are multiplied by ``scale``; the
    detector comparison recomputes k from the scaled m.
    """
    if not scale > 0:
        raise InvalidInputError(f"The scale has to be positive, got {scale}!")

    m = _scale_count(128, scale, minimum=4)
    n = _scale_count(256, scale, minimum=m + 1)

    def k_values(values) -> tuple[int, ...]:
        return _unique(min(_scale_count(k, scale), m - 1) for k in values)

    common = dict(trials=trials, seed_base=seed_base, solver_options=solver_options)

    if name == "fig2a":
        return ExperimentConfig(
            name=name,
            experiment=ExperimentKind.PHASE_TRANSITION,
            m=(m,),
            n=(n,),
            k_sweep=k_values((20, 30, 40, 45, 50, 55, 60, 65)),
            solvers=_MAIN_SOLVERS,
            prior=SignalPrior.uniform(0, 1),
            **common,
        )
    if name == "fig2c":
        return ExperimentConfig(
            name=name,
            experiment=ExperimentKind.MSE_VS_SNR,
            m=(m,),
            n=(n,),
            k_sweep=k_values((60,)),
            snr_sweep_db=(20.0, 25.0, 30.0, 35.0, 40.0),
            solvers=_MAIN_SOLVERS[:-1],
            prior=SignalPrior.uniform(0.1, 1),
            **common,
        )
    if name == "fig2d":
        return ExperimentConfig(
            name=name,
            experiment=ExperimentKind.ABLATION,
            m=(m,),
            n=(n,),
            k_sweep=k_values((40, 45, 50, 55, 60, 65)),
            solvers=("bmmp", "bmmp-no-u", "bmmp-no-um", "bmmp-no-ume"),
            prior=SignalPrior.uniform(0, 1),
            **common,
        )
    if name == "fig3":
        ms = _unique(
            _scale_count(size, scale, minimum=4) for size in range(32, 257, 32)
        )
        return ExperimentConfig(
            name=name,
            experiment=ExperimentKind.DETECTOR_COMPARE,
            m=ms,
            n=tuple(2 * m for m in ms),
            k_divisor=1.8,
            solvers=("map-gomp", "map-gomp-g"),
            prior=SignalPrior.uniform(0, 1),
            **common,
        )

    raise InvalidInputError(
        f"Unknown preset '{name}', expected one of {', '.join(PRESET_NAMES)}!"
    )


PRESET_NAMES: tuple[str, ...] = ("fig2a", "fig2c", "fig2d", "fig3")


@dataclass(frozen=True)
class TrialRecord:
    experiment: str
    solver: str
    m: int
    n: int
    k: int
    snr_db: float | None
    seed: int
    exact_support_recovery: bool
    squared_error: float
    residual_norm: float
    iterations: int
    wall_time: float = 0.0


@dataclass(frozen=True)
class SkippedPoint:
    experiment: str
    solver: str
    m: int
    n: int
    k: int
    snr_db: float | None
    trials: int
    reason: str


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord] = field(default_factory=list)
    skipped: list[SkippedPoint] = field(default_factory=list)

    @property
    def skipped_trials(self) -> int:
        return sum(point.trials for point in self.skipped)


def _solver_config(
    problem: ProblemInstance, config: ExperimentConfig
) -> SolverConfig:
    return SolverConfig.for_problem(problem, **config.solver_options)


def run_trial(
    config: ExperimentConfig, point: GridPoint, trial: int, solvers: tuple[str, ...]
) -> list[TrialRecord]:
    seed = config.trial_seed(point, trial)
    problem = ProblemInstance.generate(
        m=point.m,
        n=point.n,
        k=point.k,
        prior=config.prior,
        snr_db=point.snr_db,
        seed=seed,
    )
    solver_config = _solver_config(problem, config)

    records = []
    for name in solvers:
        result = SolverType.get(name).solve(problem, solver_config)
        records.append(
            TrialRecord(
                experiment=config.name,
                solver=name,
                m=point.m,
                n=point.n,
                k=point.k,
                snr_db=point.snr_db,
                seed=seed,
                exact_support_recovery=result.exact_support_recovery(
                    problem.support_true
                ),
                squared_error=result.squared_error(problem.x_true),
                residual_norm=result.residual_norm,
                iterations=result.iterations,
                wall_time=result.wall_time,
            )
        )

    return records


def _probe_options(config: ExperimentConfig) -> dict:
    options = dict(config.solver_options)
    options.pop("noiseless_epsilon_factor", None)
    return options


def _run_task(task) -> list[TrialRecord]:
    return run_trial(*task)


def run_experiment(
    config: ExperimentConfig, jobs: int = 1, verbosity_level: int = 1
) -> ExperimentResult:
    result = ExperimentResult(config=config)
    tasks = []

    for point in config.grid():
        feasible = []
        for name in config.solvers:
            solver_type = SolverType.get(name)
            # size rules only depend on k and m, so a bare config is enough
            probe = SolverConfig(k=point.k, **_probe_options(config))
            reason = solver_type.infeasibility(point.m, probe)

            if reason is None and point.k < point.n:
                feasible.append(name)
                continue

            result.skipped.append(
                SkippedPoint(
                    experiment=config.name,
                    solver=name,
                    m=point.m,
                    n=point.n,
                    k=point.k,
                    snr_db=point.snr_db,
                    trials=config.trials,
                    reason=reason or f"k={point.k} is not smaller than n={point.n}",
                )
            )

        if feasible:
            tasks.extend(
                (config, point, trial, tuple(feasible))
                for trial in range(config.trials)
            )

    if verbosity_level > 1:
        print(
            f"Running {len(tasks)} trials over {len(config.grid())} grid points, "
            f"{len(result.skipped)} solver/grid combinations skipped."
        )

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            chunksize = max(len(tasks) // (4 * jobs), 1)
            # map keeps the task order, records come back as in a serial run
            outputs = executor.map(_run_task, tasks, chunksize=chunksize)
            for records in track(
                outputs,
                total=len(tasks),
                description="Running trials...",
                disable=verbosity_level < 1,
            ):
                result.records.extend(records)
    else:
        for task in track(
            tasks, description="Running trials...", disable=verbosity_level < 1
        ):
            result.records.extend(_run_task(task))

    return result
