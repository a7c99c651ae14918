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

_EMPTY = np.zeros(0, dtype=np.int64)


def grow_extended_support(
    problem: ProblemInstance,
    seed: np.ndarray,
    batch_size: int,
    cap: int,
    config: SolverConfig,
) -> OrthoBasis:
    """Adds batches of the highest scoring indices to ``seed`` until the basis
    holds ``cap`` columns or the residual drops to the threshold."""
    phi, y = problem.phi, problem.y
    selector = Selector.from_correlation(config.correlation)

    basis = OrthoBasis.from_columns(phi, seed, rank_tol=config.rank_tol)
    complements = basis.project_complement(phi)
    residual, residual_norm = basis.residual(y)

    while len(basis) < cap and residual_norm > config.epsilon:
        ranking = rank_candidates(
            phi, residual, residual_norm, basis, selector, config, complements
        )
        count = min(batch_size, cap - len(basis))

        if not extend_by_ranking(basis, phi, ranking, count, complements):
            break

        residual, residual_norm = basis.residual(y)

    return basis


def bmmp(problem: ProblemInstance, config: SolverConfig) -> RecoveryResult:
    start = time.perf_counter()

    phi, y = problem.phi, problem.y
    m = problem.m
    if config.k >= m:
        raise InfeasibleSizeError(
            f"BMMP needs k < m, got k={config.k} and m={m}!"
        )

    cap = config.extended_cap(m)
    replace_count = config.replace_count()

    traces = []
    candidates = []
    iterations = 0

    for t in range(1, config.g + 1):
        trace = CandidateTrace(t=t)
        seed = _EMPTY
        best_support, best_residual = _EMPTY, np.inf

        # candidate t grows its extended support t indices at a time
        for _ in range(config.max_outer_iterations):
            iterations += 1
            basis = grow_extended_support(problem, seed, t, cap, config)
            delta = basis.get_indices()
            trace.extended_sets.append(delta)

            if len(delta) == 0:
                break

            # keep the k largest coefficients on the extended support
            support, ranking = largest_magnitudes(problem, delta, config.k, config)
            residual_norm = support_residual(phi, y, support, config.rank_tol)

            # the first temporary support is always accepted
            if not residual_norm < best_residual:
                break

            best_support, best_residual = support, residual_norm
            trace.accept(support, residual_norm)
            # reseed the next outer iteration with the strongest indices
            seed = np.sort(ranking[:replace_count])

        if trace.final_support is None:
            trace.final_support = best_support
            best_residual = support_residual(phi, y, best_support, config.rank_tol)

        traces.append(trace)
        candidates.append((best_support, best_residual))

        # remaining candidates are skipped once one meets the threshold
        if config.early_exit and best_residual <= config.epsilon:
            break

    # smallest residual wins, ties go to the earlier candidate
    chosen = int(np.argmin([residual for _, residual in candidates]))
    support_hat = candidates[chosen][0]
    x_hat = reconstruct_signal(problem, support_hat, rank_tol=config.rank_tol)

    return RecoveryResult(
        x_hat=x_hat,
        support_hat=support_hat,
        residual_norm=support_residual(phi, y, support_hat, config.rank_tol),
        chosen_candidate=chosen + 1,
        traces=tuple(traces),
        wall_time=time.perf_counter() - start,
        iterations=iterations,
        solver="bmmp",
    )
