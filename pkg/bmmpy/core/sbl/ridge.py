from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from bmmpy.core.linalg import DEFAULT_RANK_TOL, least_squares
from bmmpy.core.utils.exceptions import (
    DimensionMismatchError,
    InvalidInputError,
    RankDeficiencyError,
)

GAMMA_FLOOR: float = 1e-12
ETA_FLOOR_FACTOR: float = 1e-12
ETA_INIT_FACTOR: float = 1e-6
DEFAULT_MAX_ITER: int = 200
DEFAULT_TOL: float = 1e-6
DESCENT_SLACK: float = 1e-9


class EstimationMode(Enum):
    NOISELESS = "noiseless"
    NOISY = "noisy"


@dataclass(frozen=True)
class SblSettings:
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    lambda_: float | None = None


@dataclass(frozen=True, eq=False)
class SblState:
    gamma: np.ndarray
    eta: float
    objective: float
    iteration: int = 0
    history: tuple[float, ...] = ()
    converged: bool = False

    def __post_init__(self):
        if not np.all(self.gamma > 0):
            raise InvalidInputError("All gamma hyperparameters have to be positive!")
        if not self.eta > 0:
            raise InvalidInputError("The noise hyperparameter has to be positive!")
        if not np.isfinite(self.objective):
            raise InvalidInputError("The SBL objective has to be finite!")

    @property
    def eta2(self) -> float:
        return self.eta**2


@dataclass(frozen=True, eq=False)
class RidgeEstimate:
    coefficients: np.ndarray
    support_indices: np.ndarray

    def __post_init__(self):
        if len(self.coefficients) != len(self.support_indices):
            raise DimensionMismatchError(
                f"{len(self.coefficients)} coefficients do not match "
                f"{len(self.support_indices)} support indices!"
            )


def _validate(phi_sub, y) -> tuple[np.ndarray, np.ndarray]:
    phi_sub = np.asarray(phi_sub, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)

    if phi_sub.ndim != 2 or y.shape != (phi_sub.shape[0],):
        raise DimensionMismatchError(
            f"A submatrix of shape {phi_sub.shape} does not fit measurements of "
            f"shape {y.shape}!"
        )

    return phi_sub, y


def _check_hyperparameters(gamma: np.ndarray, eta: float) -> None:
    if not (np.all(gamma > 0) and eta > 0):
        raise InvalidInputError("The SBL hyperparameters have to be positive!")


def sbl_objective(phi_sub, y, gamma, eta: float) -> float:
    """Evidence cost ``ln|C| + y^T C^-1 y``.

    ``C = eta^2 I + Phi diag(gamma) Phi^T`` is the covariance of the measurements,
    factorized by Cholesky.
    """
    phi_sub, y = _validate(phi_sub, y)
    gamma = np.asarray(gamma, dtype=np.float64)
    _check_hyperparameters(gamma, eta)

    covariance = eta**2 * np.eye(phi_sub.shape[0]) + (phi_sub * gamma) @ phi_sub.T
    factor = cho_factor(covariance, lower=True)

    log_det = 2 * np.sum(np.log(np.diag(factor[0])))

    return float(log_det + y @ cho_solve(factor, y))


def _posterior(phi_sub, y, gamma, eta2) -> tuple[np.ndarray, np.ndarray]:
    precision = phi_sub.T @ phi_sub / eta2 + np.diag(1 / gamma)
    factor = cho_factor(precision, lower=True)
    covariance = cho_solve(factor, np.eye(len(gamma)))
    mean = covariance @ (phi_sub.T @ y) / eta2

    return mean, covariance


def initial_state(phi_sub, y, lambda_: float | None = None) -> SblState:
    phi_sub, y = _validate(phi_sub, y)
    y_power = y @ y / len(y)

    eta2 = max(lambda_ or 0.0, ETA_INIT_FACTOR * y_power, _eta2_floor(y_power))
    gamma = np.ones(phi_sub.shape[1])

    return SblState(
        gamma=gamma,
        eta=float(np.sqrt(eta2)),
        objective=sbl_objective(phi_sub, y, gamma, np.sqrt(eta2)),
    )


def _eta2_floor(y_power: float) -> float:
    return ETA_FLOOR_FACTOR * y_power if y_power > 0 else ETA_FLOOR_FACTOR


def sbl_fit(
    phi_sub,
    y,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    init: SblState | None = None,
    lambda_: float | None = None,
) -> SblState:
    phi_sub, y = _validate(phi_sub, y)
    m, a = phi_sub.shape
    if a == 0:
        raise InvalidInputError("SBL needs at least one column to fit!")

    state = init if init is not None else initial_state(phi_sub, y, lambda_=lambda_)
    if max_iter <= 0:
        return state

    eta2_floor = _eta2_floor(y @ y / m)
    history = list(state.history) or [state.objective]

    for iteration in range(state.iteration + 1, state.iteration + max_iter + 1):
        # E-step: posterior of the coefficients under the current hyperparameters
        try:
            mean, covariance = _posterior(phi_sub, y, state.gamma, state.eta2)
        except LinAlgError:
            warnings.warn(
                "The SBL posterior became numerically singular, stopping early.",
                RuntimeWarning,
            )
            return replace(state, history=tuple(history))

        # M-step for gamma
        variances = np.diag(covariance)
        gamma = np.maximum(mean**2 + variances, GAMMA_FLOOR)
        squared_residual = float(np.sum((y - phi_sub @ mean) ** 2))
        well_determined = np.sum(1 - variances / state.gamma)

        # MacKay update first, EM update as fallback if it would increase the cost
        candidates = []
        if m - well_determined > 0:
            candidates.append(squared_residual / (m - well_determined))
        candidates.append((squared_residual + state.eta2 * well_determined) / m)

        accepted = None
        for eta2 in candidates:
            eta2 = max(eta2, eta2_floor)
            try:
                objective = sbl_objective(phi_sub, y, gamma, np.sqrt(eta2))
            except LinAlgError:
                continue
            if objective <= state.objective + DESCENT_SLACK * max(
                abs(state.objective), 1.0
            ):
                accepted = (eta2, objective)
                break

        # neither update descends, so this is a stationary point
        if accepted is None:
            return replace(state, history=tuple(history), converged=True)

        eta2, objective = accepted
        change = abs(state.objective - objective)
        history.append(objective)

        state = SblState(
            gamma=gamma,
            eta=float(np.sqrt(eta2)),
            objective=objective,
            iteration=iteration,
            history=tuple(history),
        )

        if change <= tol * max(abs(objective), 1.0):
            return replace(state, converged=True)

    warnings.warn(
        f"SBL did not converge within {max_iter} iterations "
        f"(objective {state.objective:.6g}).",
        RuntimeWarning,
    )

    return state


def ridge_solve(phi_sub, y, state: SblState, support_indices=None) -> RidgeEstimate:
    phi_sub, y = _validate(phi_sub, y)
    _check_hyperparameters(state.gamma, state.eta)

    if support_indices is None:
        support_indices = np.arange(phi_sub.shape[1])

    system = phi_sub.T @ phi_sub + state.eta2 * np.diag(1 / state.gamma)
    try:
        coefficients = cho_solve(cho_factor(system, lower=True), phi_sub.T @ y)
    except LinAlgError as error:
        raise RankDeficiencyError(
            "The regularized ridge system is singular!"
        ) from error

    return RidgeEstimate(
        coefficients=coefficients,
        support_indices=np.asarray(support_indices, dtype=np.int64),
    )


def estimate_on_support(
    phi_sub,
    y,
    mode: EstimationMode,
    settings: SblSettings | None = None,
    support_indices=None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> RidgeEstimate:
    phi_sub, y = _validate(phi_sub, y)
    if phi_sub.shape[1] == 0:
        raise InvalidInputError("Cannot estimate coefficients on an empty support!")

    if support_indices is None:
        support_indices = np.arange(phi_sub.shape[1])

    if mode is EstimationMode.NOISELESS:
        return RidgeEstimate(
            coefficients=least_squares(phi_sub, y, rank_tol=rank_tol),
            support_indices=np.asarray(support_indices, dtype=np.int64),
        )

    settings = settings if settings is not None else SblSettings()
    state = sbl_fit(
        phi_sub,
        y,
        max_iter=settings.max_iter,
        tol=settings.tol,
        lambda_=settings.lambda_,
    )

    return ridge_solve(phi_sub, y, state, support_indices=support_indices)
