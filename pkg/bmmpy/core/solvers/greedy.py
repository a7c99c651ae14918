import time

import numpy as np

from bmmpy.core.linalg import OrthoBasis
from bmmpy.core.model import ProblemInstance
from bmmpy.core.solvers.common import (
    extend_by_ranking,
    largest_magnitudes,
    rank_candidates,
    reconstruct_signal,
    support_residual,
)
from bmmpy.core.solvers.config import Selector, SolverConfig
from bmmpy.core.solvers.result import CandidateTrace, RecoveryResult
from bmmpy.core.utils.exceptions import InfeasibleSizeError

_SOLVER_NAMES = {
    ("omp", Selector.RAW): "omp",
    ("omp", Selector.MAP_H): "map-omp",
    ("omp", Selector.MAP_G): "map-omp-g",
    ("gomp", Selector.RAW): "gomp",
    ("gomp", Selector.MAP_H): "map-gomp",
    ("gomp", Selector.MAP_G): "map-gomp-g",
    ("sp", Selector.RAW): "sp",
    ("sp", Selector.MAP_H): "map-sp",
    ("sp", Selector.MAP_G): "map-sp-g",
    ("cosamp", Selector.RAW): "cosamp",
    ("cosamp", Selector.MAP_H): "map-cosamp",
    ("cosamp", Selector.MAP_G): "map-cosamp-g",
}


def _resolve_config(
    problem: ProblemInstance, k: int, config: SolverConfig | None
) -> SolverConfig:
    if config is None:
        return SolverConfig.for_problem(problem, k=k)
    if config.k != k:
        return config.with_overrides(k=k)
    return config


def _finish(
    problem: ProblemInstance,
    support: np.ndarray,
    trace: CandidateTrace,
    iterations: int,
    start: float,
    config: SolverConfig,
    solver: str,
) -> RecoveryResult:
    support = np.sort(np.asarray(support, dtype=np.int64))
    if trace.final_support is None:
        trace.final_support = support

    return RecoveryResult(
        x_hat=reconstruct_signal(problem, support, rank_tol=config.rank_tol),
        support_hat=support,
        residual_norm=support_residual(
            problem.phi, problem.y, support, config.rank_tol
        ),
        chosen_candidate=1,
        traces=(trace,),
        wall_time=time.perf_counter() - start,
        iterations=iterations,
        solver=solver,
    )


def _grow(
    problem: ProblemInstance,
    batch_size: int,
    cap: int,
    selector: Selector,
    config: SolverConfig,
) -> tuple[OrthoBasis, int]:
    phi, y = problem.phi, problem.y
    basis = OrthoBasis.empty(problem.m, rank_tol=config.rank_tol)
    residual, residual_norm = basis.residual(y)
    steps = 0

    while len(basis) < cap and residual_norm > config.epsilon:
        ranking = rank_candidates(phi, residual, residual_norm, basis, selector, config)
        steps += 1
        if not extend_by_ranking(
            basis, phi, ranking, min(batch_size, cap - len(basis))
        ):
            break
        residual, residual_norm = basis.residual(y)

    return basis, steps


def omp(
    problem: ProblemInstance,
    k: int,
    selector: Selector = Selector.RAW,
    config: SolverConfig | None = None,
) -> RecoveryResult:
    start = time.perf_counter()
    config = _resolve_config(problem, k, config)

    if k >= problem.m:
        raise InfeasibleSizeError(f"OMP needs k < m, got k={k} and m={problem.m}!")

    basis, steps = _grow(problem, 1, k, selector, config)

    trace = CandidateTrace(t=1, extended_sets=[basis.get_indices()])
    support = np.sort(basis.get_indices())
    trace.accept(
        support, support_residual(problem.phi, problem.y, support, config.rank_tol)
    )

    return _finish(
        problem, support, trace, steps, start, config, _SOLVER_NAMES["omp", selector]
    )


def gomp_cap(m: int, k: int, t: int) -> int:
    return t * min(k, m // t)


def gomp(
    problem: ProblemInstance,
    k: int,
    t: int = 2,
    selector: Selector = Selector.RAW,
    config: SolverConfig | None = None,
) -> RecoveryResult:
    start = time.perf_counter()
    config = _resolve_config(problem, k, config)

    if t >= k:
        raise InfeasibleSizeError(f"gOMP needs t < k, got t={t} and k={k}!")
    if k >= problem.m:
        raise InfeasibleSizeError(f"gOMP needs k < m, got k={k} and m={problem.m}!")

    cap = min(gomp_cap(problem.m, k, t), problem.m)
    basis, steps = _grow(problem, t, cap, selector, config)
    delta = basis.get_indices()

    trace = CandidateTrace(t=t, extended_sets=[delta])
    support = delta
    if len(delta) > k:
        support, _ = largest_magnitudes(problem, delta, k, config)

    support = np.sort(support)
    trace.accept(
        support, support_residual(problem.phi, problem.y, support, config.rank_tol)
    )

    return _finish(
        problem, support, trace, steps, start, config, _SOLVER_NAMES["gomp", selector]
    )


def _pursuit(
    problem: ProblemInstance,
    k: int,
    new_count: int,
    selector: Selector,
    config: SolverConfig,
    solver: str,
) -> RecoveryResult:
    start = time.perf_counter()
    phi, y = problem.phi, problem.y

    trace = CandidateTrace(t=new_count)
    support = np.zeros(0, dtype=np.int64)
    best_residual = np.inf
    iterations = 0

    for _ in range(config.max_outer_iterations):
        iterations += 1

        basis = OrthoBasis.from_columns(phi, support, rank_tol=config.rank_tol)
        residual, residual_norm = basis.residual(y)
        ranking = rank_candidates(phi, residual, residual_norm, basis, selector, config)
        # merge step: current support plus the best new indices
        extend_by_ranking(basis, phi, ranking, new_count)

        delta = np.sort(basis.get_indices())
        trace.extended_sets.append(delta)
        if len(delta) == 0:
            break

        # prune back to k
        candidate, _ = largest_magnitudes(problem, delta, k, config)
        candidate_residual = support_residual(phi, y, candidate, config.rank_tol)

        if not candidate_residual < best_residual:
            break

        support, best_residual = candidate, candidate_residual
        trace.accept(support, best_residual)

        if best_residual <= config.epsilon:
            break

    return _finish(problem, support, trace, iterations, start, config, solver)


def sp(
    problem: ProblemInstance,
    k: int,
    selector: Selector = Selector.RAW,
    config: SolverConfig | None = None,
) -> RecoveryResult:
    config = _resolve_config(problem, k, config)

    if 2 * k > problem.m:
        raise InfeasibleSizeError(
            f"SP needs 2k <= m, got k={k} and m={problem.m}!"
        )

    return _pursuit(problem, k, k, selector, config, _SOLVER_NAMES["sp", selector])


def cosamp(
    problem: ProblemInstance,
    k: int,
    selector: Selector = Selector.RAW,
    config: SolverConfig | None = None,
) -> RecoveryResult:
    config = _resolve_config(problem, k, config)

    if 3 * k > problem.m:
        raise InfeasibleSizeError(
            f"CoSaMP needs 3k <= m, got k={k} and m={problem.m}!"
        )

    return _pursuit(
        problem, k, 2 * k, selector, config, _SOLVER_NAMES["cosamp", selector]
    )
