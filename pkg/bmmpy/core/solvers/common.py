from __future__ import annotations

import numpy as np

from bmmpy.core.detection import compute_scores, hypothesis_stats, select_top
from bmmpy.core.linalg import DEFAULT_RANK_TOL, OrthoBasis, least_squares
from bmmpy.core.model import ProblemInstance
from bmmpy.core.sbl import estimate_on_support
from bmmpy.core.solvers.config import Selector, SolverConfig


def rank_candidates(
    phi: np.ndarray,
    residual: np.ndarray,
    residual_norm: float,
    basis: OrthoBasis,
    selector: Selector,
    config: SolverConfig,
    complements: np.ndarray | None = None,
) -> np.ndarray:
    """Orders all columns outside the basis from most to least promising."""
    if selector is Selector.RAW:
        mask = np.ones(phi.shape[1], dtype=bool)
        mask[basis.get_indices()] = False
        indices = np.flatnonzero(mask)
        magnitudes = np.abs(residual @ phi[:, indices])
        # ties broken by the smaller index
        return indices[np.lexsort((indices, -magnitudes))]

    stats = hypothesis_stats(
        residual_norm,
        m=phi.shape[0],
        d=len(basis),
        sigma=config.sigma,
        v_x=config.prior.v_x,
        sigma_w=config.sigma_w,
    )
    table = compute_scores(
        phi,
        residual,
        basis,
        selector.correlation,
        stats,
        config.sigma,
        config.prior,
        complements=complements,
    )

    return select_top(table, len(table))


def extend_by_ranking(
    basis: OrthoBasis,
    phi: np.ndarray,
    ranking: np.ndarray,
    count: int,
    complements: np.ndarray | None = None,
) -> list[int]:
    # columns rejected as dependent are passed over in favour of the next ranked one
    added = []
    for index in ranking:
        if len(added) >= count or basis.is_full():
            break
        if basis.extend(index, phi[:, index]):
            added.append(int(index))
            if complements is not None:
                q = basis.get_q()[:, -1]
                complements -= np.outer(q, q @ complements)

    return added


def largest_magnitudes(
    problem: ProblemInstance, delta: np.ndarray, count: int, config: SolverConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Estimates the signal on ``delta`` and returns the ``count`` largest entries.

    The first array holds the selected indices in ascending order, the second the
    full ranking of ``delta`` by descending magnitude.
    """
    estimate = estimate_on_support(
        problem.phi[:, delta],
        problem.y,
        config.mode,
        settings=config.sbl_settings(),
        support_indices=delta,
        rank_tol=config.rank_tol,
    )
    magnitudes = np.abs(estimate.coefficients)
    ranking = delta[np.lexsort((delta, -magnitudes))]

    return np.sort(ranking[:count]), ranking


def support_residual(
    phi: np.ndarray, y: np.ndarray, support: np.ndarray, rank_tol: float
) -> float:
    return OrthoBasis.from_columns(phi, support, rank_tol=rank_tol).residual(y)[1]


def reconstruct_signal(
    problem: ProblemInstance, support, rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    support = np.asarray(support, dtype=np.int64)
    x_hat = np.zeros(problem.n)

    if len(support) > 0:
        x_hat[support] = least_squares(
            problem.phi[:, support], problem.y, rank_tol=rank_tol
        )

    return x_hat
