from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from bmmpy.core.model.rng import STREAM_MATRIX, STREAM_NOISE, STREAM_SIGNAL, make_rng
from bmmpy.core.utils.exceptions import DimensionMismatchError, InvalidInputError
from bmmpy.core.utils.utils import str2interval

NOISELESS_EPSILON_FACTOR: float = 1e-7


def is_noiseless(snr_db: float | None) -> bool:
    return snr_db is None or np.isposinf(snr_db)


@dataclass(frozen=True)
class SignalPrior:
    a: float
    b: float
    family: str = "uniform"

    def __post_init__(self):
        if self.family != "uniform":
            raise InvalidInputError(
                f"Only uniform signal priors are supported, got '{self.family}'!"
            )
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise InvalidInputError(
                f"The prior interval [{self.a}, {self.b}] has to be finite with a < b!"
            )

    @classmethod
    def uniform(cls, a: float = 0.0, b: float = 1.0) -> SignalPrior:
        return cls(a=float(a), b=float(b))

    @classmethod
    def from_string(cls, value: str) -> SignalPrior:
        try:
            a, b = str2interval(value)
        except ValueError as error:
            raise InvalidInputError(str(error)) from error
        return cls.uniform(a, b)

    @property
    def m_x(self) -> float:
        return (self.a + self.b) / 2

    @property
    def sigma_x(self) -> float:
        return (self.b - self.a) / np.sqrt(12)

    @property
    def v_x(self) -> float:
        return float(np.sqrt(self.m_x**2 + self.sigma_x**2))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.a, self.b, size=size)

    def __str__(self) -> str:
        return f"uniform({self.a:g}, {self.b:g})"


@dataclass(frozen=True)
class SensingModel:
    m: int
    n: int
    sigma: float
    sigma_w: float = 0.0

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise InvalidInputError(
                f"The sensing model needs 1 <= m < n, got m={self.m} and n={self.n}!"
            )
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidInputError(
                f"The matrix entry deviation has to be positive, got {self.sigma}!"
            )
        if not (np.isfinite(self.sigma_w) and self.sigma_w >= 0):
            raise InvalidInputError(
                f"The noise deviation has to be nonnegative, got {self.sigma_w}!"
            )

    @classmethod
    def gaussian(cls, m: int, n: int, sigma_w: float = 0.0) -> SensingModel:
        return cls(m=int(m), n=int(n), sigma=1 / np.sqrt(m), sigma_w=float(sigma_w))


def gen_matrix(model: SensingModel, seed: int) -> np.ndarray:
    rng = make_rng(seed, STREAM_MATRIX)
    return rng.normal(0.0, model.sigma, size=(model.m, model.n))


def gen_signal(
    n: int, k: int, prior: SignalPrior, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    if not 0 <= k < n:
        raise InvalidInputError(f"The sparsity has to satisfy 0 <= k < n, got k={k}!")

    rng = make_rng(seed, STREAM_SIGNAL)

    support = np.sort(rng.choice(n, size=k, replace=False)).astype(np.int64)
    x = np.zeros(n)
    x[support] = prior.sample(rng, k)

    return x, support


def synthesize(
    phi: np.ndarray, x_true: np.ndarray, sigma_w: float, seed: int
) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64)
    x_true = np.asarray(x_true, dtype=np.float64)

    if phi.ndim != 2 or x_true.shape != (phi.shape[1],):
        raise DimensionMismatchError(
            f"Cannot multiply a matrix of shape {phi.shape} with a signal of "
            f"shape {x_true.shape}!"
        )

    y = phi @ x_true
    if sigma_w > 0:
        y = y + make_rng(seed, STREAM_NOISE).normal(0.0, sigma_w, size=phi.shape[0])

    return y


def sigma_w_from_snr(phi: np.ndarray, x_true: np.ndarray, snr_db: float) -> float:
    if is_noiseless(snr_db):
        return 0.0

    signal_norm = np.linalg.norm(np.asarray(phi) @ np.asarray(x_true))
    if signal_norm == 0:
        raise InvalidInputError(
            "The noise level of a zero signal cannot be derived from an SNR!"
        )

    return float(signal_norm / (np.sqrt(phi.shape[0]) * 10 ** (snr_db / 20)))


def default_epsilon(
    y: np.ndarray,
    snr_db: float | None,
    noiseless_factor: float = NOISELESS_EPSILON_FACTOR,
) -> float:
    y_norm = float(np.linalg.norm(y))

    if is_noiseless(snr_db):
        return noiseless_factor * y_norm

    return y_norm * 10 ** (-snr_db / 20)


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    phi: np.ndarray
    y: np.ndarray
    x_true: np.ndarray
    support_true: np.ndarray
    model: SensingModel
    prior: SignalPrior
    snr_db: float | None = None
    seed: int = 0

    def __post_init__(self):
        m, n = self.model.m, self.model.n

        if self.phi.shape != (m, n):
            raise DimensionMismatchError(
                f"The matrix has shape {self.phi.shape}, expected {(m, n)}!"
            )
        if self.y.shape != (m,) or self.x_true.shape != (n,):
            raise DimensionMismatchError(
                f"Measurements of shape {self.y.shape} and signal of shape "
                f"{self.x_true.shape} do not fit the model with m={m}, n={n}!"
            )
        if self.k >= m:
            raise InvalidInputError(
                f"The sparsity k={self.k} has to be smaller than m={m}!"
            )

        off_support = np.ones(n, dtype=bool)
        off_support[self.support_true] = False
        if np.any(self.x_true[off_support] != 0):
            raise InvalidInputError("The signal has nonzero entries off its support!")

    @classmethod
    def generate(
        cls,
        m: int,
        n: int,
        k: int,
        prior: SignalPrior | None = None,
        snr_db: float | None = None,
        seed: int = 0,
        sigma: float | None = None,
    ) -> ProblemInstance:
        prior = prior if prior is not None else SignalPrior.uniform(0, 1)

        if not 0 <= k < m:
            raise InvalidInputError(
                f"The sparsity has to satisfy 0 <= k < m, got k={k} and m={m}!"
            )

        x_true, _ = gen_signal(n, k, prior, seed)

        return cls.from_signal(
            x_true, m=m, prior=prior, snr_db=snr_db, seed=seed, sigma=sigma
        )

    @classmethod
    def from_signal(
        cls,
        x_true: np.ndarray,
        m: int,
        prior: SignalPrior,
        snr_db: float | None = None,
        seed: int = 0,
        sigma: float | None = None,
    ) -> ProblemInstance:
        x_true = np.asarray(x_true, dtype=np.float64)
        n = x_true.shape[0]

        model = (
            SensingModel.gaussian(m, n)
            if sigma is None
            else SensingModel(m=m, n=n, sigma=sigma)
        )
        phi = gen_matrix(model, seed)

        snr_db = None if is_noiseless(snr_db) else float(snr_db)
        model = replace(model, sigma_w=sigma_w_from_snr(phi, x_true, snr_db))

        return cls(
            phi=phi,
            y=synthesize(phi, x_true, model.sigma_w, seed),
            x_true=x_true,
            support_true=np.flatnonzero(x_true).astype(np.int64),
            model=model,
            prior=prior,
            snr_db=snr_db,
            seed=int(seed),
        )

    @property
    def m(self) -> int:
        return self.model.m

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def k(self) -> int:
        return int(len(self.support_true))

    @property
    def noiseless(self) -> bool:
        return is_noiseless(self.snr_db)

    def noise(self) -> np.ndarray:
        return self.y - self.phi @ self.x_true

    def default_epsilon(self, noiseless_factor: float = NOISELESS_EPSILON_FACTOR):
        return default_epsilon(self.y, self.snr_db, noiseless_factor=noiseless_factor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProblemInstance):
            return NotImplemented

        return (
            self.model == other.model
            and self.prior == other.prior
            and self.snr_db == other.snr_db
            and self.seed == other.seed
            and np.array_equal(self.phi, other.phi)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.x_true, other.x_true)
            and np.array_equal(self.support_true, other.support_true)
        )
