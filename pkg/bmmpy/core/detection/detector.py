from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import erf, erfcx, gammaln

from bmmpy.core.linalg import OrthoBasis
from bmmpy.core.model import SignalPrior
from bmmpy.core.utils.exceptions import DimensionMismatchError, InvalidInputError

# relative to sigma^2 * v_x^2
VARIANCE_FLOOR: float = 1e-12


class CorrelationKind(Enum):
    RA_ORMP = "ra-ormp"
    NORMALIZED_OMP = "normalized-omp"

    @classmethod
    def from_name(cls, name: str) -> CorrelationKind:
        for kind in cls:
            if name in (kind.value, kind.name):
                return kind
        raise InvalidInputError(
            f"Unknown correlation '{name}', expected one of "
            f"{[kind.value for kind in cls]}!"
        )


def _check_dof(m: int, d: int) -> int:
    if not 0 <= d < m:
        raise InvalidInputError(
            f"The support size d={d} has to be smaller than m={m}!"
        )
    return m - d


def residual_sparsity(
    residual_norm: float, m: int, d: int, sigma: float, v_x: float, sigma_w: float
) -> float:
    dof = _check_dof(m, d)
    if not (sigma > 0 and v_x > 0):
        raise InvalidInputError("The deviations sigma and v_x have to be positive!")

    return max(residual_norm**2 / dof - sigma_w**2, 0.0) / (sigma**2 * v_x**2)


def chi_mean_tau(m: int, d: int) -> float:
    dof = _check_dof(m, d)
    return float(np.sqrt(2) * np.exp(gammaln((dof + 1) / 2) - gammaln(dof / 2)))


@dataclass(frozen=True)
class HypothesisStats:
    psi: float
    tau: float
    var0: float
    var1: float
    d: int
    m: int

    def __post_init__(self):
        if not self.psi >= 0:
            raise InvalidInputError(f"Psi has to be nonnegative, got {self.psi}!")
        if not (self.tau > 0 and self.var0 > 0 and self.var1 > 0):
            raise InvalidInputError(
                "The hypothesis moments tau, var0 and var1 have to be positive!"
            )
        _check_dof(self.m, self.d)

    @property
    def sigma0(self) -> float:
        return float(np.sqrt(self.var0))

    @property
    def sigma1(self) -> float:
        return float(np.sqrt(self.var1))


def hypothesis_stats(
    residual_norm: float, m: int, d: int, sigma: float, v_x: float, sigma_w: float
) -> HypothesisStats:
    psi = residual_sparsity(residual_norm, m, d, sigma, v_x, sigma_w)
    signal_power = sigma**2 * v_x**2
    floor = VARIANCE_FLOOR * signal_power

    return HypothesisStats(
        psi=psi,
        tau=chi_mean_tau(m, d),
        var0=max(psi * signal_power + sigma_w**2, floor),
        var1=max((psi - 1) * signal_power + sigma_w**2, floor),
        d=d,
        m=m,
    )


@dataclass(frozen=True)
class IndexScore:
    index: int
    z: float
    theta: float
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class ScoreTable:
    indices: np.ndarray
    z: np.ndarray
    theta: np.ndarray
    degenerate: np.ndarray

    def __len__(self) -> int:
        return len(self.indices)

    def to_scores(self) -> list[IndexScore]:
        return [
            IndexScore(index=int(i), z=float(z), theta=float(t), degenerate=bool(d))
            for i, z, t, d in zip(self.indices, self.z, self.theta, self.degenerate)
        ]


def correlation(
    basis: OrthoBasis, phi_col, residual, kind: CorrelationKind
) -> float | None:
    phi_col = np.asarray(phi_col, dtype=np.float64)
    residual = np.asarray(residual, dtype=np.float64)

    if phi_col.shape != residual.shape or phi_col.shape != (basis.get_ambient_dim(),):
        raise DimensionMismatchError(
            f"Column {phi_col.shape} and residual {residual.shape} do not match the "
            f"ambient dimension {basis.get_ambient_dim()}!"
        )

    if kind is CorrelationKind.RA_ORMP:
        direction = basis.normalized_complement(phi_col)
        if direction is None:
            return None
    else:
        norm = np.linalg.norm(phi_col)
        if norm == 0:
            return None
        direction = phi_col / norm

    return float(residual @ direction)


def _log_erfc(x: np.ndarray) -> np.ndarray:
    # valid for x >= 0, where erfcx neither overflows nor underflows
    return np.log(erfcx(x)) - x**2


def _log1mexp(x: np.ndarray) -> np.ndarray:
    # ln(1 - exp(x)) for x <= 0
    x = np.minimum(x, 0.0)
    with np.errstate(divide="ignore"):
        return np.where(
            x > -np.log(2), np.log(-np.expm1(x)), np.log1p(-np.exp(x))
        )


def log_erf_difference(lower, upper) -> np.ndarray:
    """Computes ``ln(erf(upper) - erf(lower))`` for ``lower < upper``.

    Arguments on the same side of zero are mapped to a difference of ``erfc``
    values in log space, so that results stay finite far in the tails.
    """
    lower, upper = np.broadcast_arrays(
        np.asarray(lower, dtype=np.float64), np.asarray(upper, dtype=np.float64)
    )
    result = np.empty(lower.shape)

    # both arguments on one side of zero: use erfc to avoid cancellation
    positive = lower >= 0
    negative = upper <= 0
    mixed = ~(positive | negative)

    with np.errstate(divide="ignore"):
        if np.any(positive):
            lo, up = _log_erfc(lower[positive]), _log_erfc(upper[positive])
            result[positive] = lo + _log1mexp(up - lo)

        if np.any(negative):
            lo, up = _log_erfc(-upper[negative]), _log_erfc(-lower[negative])
            result[negative] = lo + _log1mexp(up - lo)

        # straddling zero, erf(upper) and erf(-lower) are both positive
        if np.any(mixed):
            result[mixed] = np.log(erf(upper[mixed]) + erf(-lower[mixed]))

    return result


def log_likelihood_uniform(
    z,
    stats: HypothesisStats,
    sigma: float,
    a: float,
    b: float,
    normalized: bool = False,
):
    """Log-likelihood ratio of an index being in the support given its correlation.

    Without ``normalized`` the index-independent constants are dropped, which keeps
    the ranking of the indices intact. With ``normalized`` the result is the exact
    log ratio of the Gaussian likelihoods under both hypotheses.
    """
    if not a < b:
        raise InvalidInputError(f"The prior interval needs a < b, got [{a}, {b}]!")

    z_array = np.asarray(z, dtype=np.float64)
    scale = sigma * stats.tau
    denominator = stats.sigma1 * np.sqrt(2)

    theta = z_array**2 / (2 * stats.var0) + log_erf_difference(
        (scale * a - z_array) / denominator, (scale * b - z_array) / denominator
    )

    if normalized:
        theta = theta + np.log(stats.sigma0 * np.sqrt(2 * np.pi))
        theta = theta - np.log(2 * scale * (b - a))

    return float(theta) if np.ndim(z) == 0 else theta


def compute_scores(
    phi: np.ndarray,
    residual: np.ndarray,
    basis: OrthoBasis,
    kind: CorrelationKind,
    stats: HypothesisStats,
    sigma: float,
    prior: SignalPrior,
    complements: np.ndarray | None = None,
) -> ScoreTable:
    n = phi.shape[1]
    mask = np.ones(n, dtype=bool)
    mask[basis.get_indices()] = False
    indices = np.flatnonzero(mask).astype(np.int64)

    columns = phi[:, indices]
    column_norms = np.linalg.norm(columns, axis=0)

    if kind is CorrelationKind.RA_ORMP:
        if complements is None:
            complements = basis.project_complement(columns)
        else:
            complements = complements[:, indices]
        norms = np.linalg.norm(complements, axis=0)
        degenerate = (norms == 0) | (norms <= basis.get_rank_tol() * column_norms)
        numerators = residual @ complements
    else:
        norms = column_norms
        degenerate = norms == 0
        numerators = residual @ columns

    z = np.zeros(len(indices))
    z[~degenerate] = numerators[~degenerate] / norms[~degenerate]

    theta = np.full(len(indices), -np.inf)
    if np.any(~degenerate):
        theta[~degenerate] = log_likelihood_uniform(
            z[~degenerate], stats, sigma, prior.a, prior.b
        )

    return ScoreTable(indices=indices, z=z, theta=theta, degenerate=degenerate)


def score_indices(
    phi: np.ndarray,
    residual: np.ndarray,
    basis: OrthoBasis,
    kind: CorrelationKind,
    stats: HypothesisStats,
    sigma: float,
    prior: SignalPrior,
) -> list[IndexScore]:
    return compute_scores(phi, residual, basis, kind, stats, sigma, prior).to_scores()


def select_top(scores: ScoreTable | list[IndexScore], v: int) -> np.ndarray:
    if not isinstance(scores, ScoreTable):
        scores = ScoreTable(
            indices=np.asarray([s.index for s in scores], dtype=np.int64),
            z=np.asarray([s.z for s in scores], dtype=np.float64),
            theta=np.asarray([s.theta for s in scores], dtype=np.float64),
            degenerate=np.asarray([s.degenerate for s in scores], dtype=bool),
        )

    valid = ~scores.degenerate
    indices, theta = scores.indices[valid], scores.theta[valid]

    # descending theta, ties by ascending index
    order = np.lexsort((indices, -theta))

    return indices[order[: max(int(v), 0)]]
