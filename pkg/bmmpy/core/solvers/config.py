from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from enum import Enum

from bmmpy.core.detection import CorrelationKind
from bmmpy.core.linalg import DEFAULT_RANK_TOL
from bmmpy.core.model import (
    NOISELESS_EPSILON_FACTOR,
    ProblemInstance,
    SignalPrior,
)
from bmmpy.core.sbl import EstimationMode, SblSettings
from bmmpy.core.sbl.ridge import DEFAULT_MAX_ITER, DEFAULT_TOL
from bmmpy.core.utils.exceptions import InvalidInputError

DEFAULT_G: int = 4
DEFAULT_GOMP_T: int = 2
DEFAULT_MAX_OUTER_ITERATIONS: int = 100


class Selector(Enum):
    RAW = "raw"
    MAP_H = "map-h"
    MAP_G = "map-g"

    @property
    def correlation(self) -> CorrelationKind | None:
        return {
            Selector.RAW: None,
            Selector.MAP_H: CorrelationKind.NORMALIZED_OMP,
            Selector.MAP_G: CorrelationKind.RA_ORMP,
        }[self]

    @classmethod
    def from_correlation(cls, kind: CorrelationKind) -> Selector:
        return cls.MAP_G if kind is CorrelationKind.RA_ORMP else cls.MAP_H


@dataclass(frozen=True)
class SolverConfig:
    k: int
    g: int = DEFAULT_G
    epsilon: float = 0.0
    lambda_: float | None = None
    mode: EstimationMode = EstimationMode.NOISELESS
    correlation: CorrelationKind = CorrelationKind.RA_ORMP
    prior: SignalPrior = field(default_factory=SignalPrior.uniform)
    sigma: float = 1.0
    sigma_w: float = 0.0
    max_extended_size: int | None = None
    replace_size: int | None = None
    gomp_t: int = DEFAULT_GOMP_T
    early_exit: bool = True
    max_outer_iterations: int = DEFAULT_MAX_OUTER_ITERATIONS
    sbl_max_iter: int = DEFAULT_MAX_ITER
    sbl_tol: float = DEFAULT_TOL
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if self.k < 0:
            raise InvalidInputError(
                f"The sparsity k has to be nonnegative, got {self.k}!"
            )
        if self.g < 1:
            raise InvalidInputError(
                f"The candidate count g has to be >= 1, got {self.g}!"
            )
        if not self.epsilon >= 0:
            raise InvalidInputError(
                f"The residual threshold has to be nonnegative, got {self.epsilon}!"
            )
        if self.replace_size is not None and not 0 <= self.replace_size <= self.k:
            raise InvalidInputError(
                f"The replace size has to lie in [0, k={self.k}], "
                f"got {self.replace_size}!"
            )
        if self.max_extended_size is not None and self.max_extended_size < 1:
            raise InvalidInputError("The maximal extended support size has to be >= 1!")
        if self.gomp_t < 1:
            raise InvalidInputError(f"gOMP needs t >= 1, got {self.gomp_t}!")
        if self.max_outer_iterations < 1:
            raise InvalidInputError("At least one outer iteration is required!")
        if not (self.sigma > 0 and self.sigma_w >= 0):
            raise InvalidInputError("The model deviations have to be valid!")

    @classmethod
    def for_problem(
        cls,
        problem: ProblemInstance,
        k: int | None = None,
        noiseless_epsilon_factor: float = NOISELESS_EPSILON_FACTOR,
        **overrides,
    ) -> SolverConfig:
        epsilon = problem.default_epsilon(noiseless_factor=noiseless_epsilon_factor)

        defaults = dict(
            k=problem.k if k is None else int(k),
            epsilon=epsilon,
            lambda_=epsilon**2 / problem.m,
            mode=(
                EstimationMode.NOISELESS if problem.noiseless else EstimationMode.NOISY
            ),
            prior=problem.prior,
            sigma=problem.model.sigma,
            sigma_w=problem.model.sigma_w,
        )
        defaults.update(overrides)

        return cls(**defaults)

    def extended_cap(self, m: int) -> int:
        if self.max_extended_size is None:
            return m
        return min(self.max_extended_size, m)

    def replace_count(self) -> int:
        return self.k // 2 if self.replace_size is None else self.replace_size

    def sbl_settings(self) -> SblSettings:
        return SblSettings(
            max_iter=self.sbl_max_iter, tol=self.sbl_tol, lambda_=self.lambda_
        )

    def with_overrides(self, **overrides) -> SolverConfig:
        return replace(self, **overrides)

    def as_dict(self) -> dict:
        content = asdict(self)
        content["mode"] = self.mode.value
        content["correlation"] = self.correlation.value
        content["prior"] = str(self.prior)
        content["replace_size"] = self.replace_count()

        return content
