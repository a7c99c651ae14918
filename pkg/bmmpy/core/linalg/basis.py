from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from bmmpy.core.utils.exceptions import (
    DimensionMismatchError,
    DuplicateIndexError,
    InvalidInputError,
    RankDeficiencyError,
)

DEFAULT_RANK_TOL: float = 1e-10


def _as_vector(v, dim: int, name: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim not in (1, 2) or v.shape[0] != dim:
        raise DimensionMismatchError(
            f"The {name} has shape {v.shape}, but the ambient dimension is {dim}!"
        )
    return v


class OrthoBasis:
    """Orthonormal basis of the span of a growing set of matrix columns.

    Columns are orthogonalized against the stored basis by classical Gram-Schmidt
    with one reorthogonalization pass. The upper triangular factor of the thin QR
    decomposition of the accepted columns is kept so that least squares
    coefficients can be recovered by back substitution.
    """

    def __init__(self, ambient_dim: int, rank_tol: float = DEFAULT_RANK_TOL):
        if int(ambient_dim) < 1:
            raise InvalidInputError(
                f"The ambient dimension has to be positive, got {ambient_dim}!"
            )
        if not rank_tol >= 0:
            raise InvalidInputError(
                f"The rank tolerance has to be nonnegative, got {rank_tol}!"
            )

        self._ambient_dim: int = int(ambient_dim)
        self._rank_tol: float = float(rank_tol)
        self._q: np.ndarray = np.zeros((self._ambient_dim, self._ambient_dim))
        self._r: np.ndarray = np.zeros((self._ambient_dim, self._ambient_dim))
        self._indices: list[int] = []

    @classmethod
    def empty(cls, ambient_dim: int, rank_tol: float = DEFAULT_RANK_TOL) -> OrthoBasis:
        return cls(ambient_dim=ambient_dim, rank_tol=rank_tol)

    @classmethod
    def from_columns(
        cls,
        phi: np.ndarray,
        indices,
        rank_tol: float = DEFAULT_RANK_TOL,
        strict: bool = False,
    ) -> OrthoBasis:
        phi = np.asarray(phi, dtype=np.float64)
        basis = cls(ambient_dim=phi.shape[0], rank_tol=rank_tol)

        for index in indices:
            if not basis.extend(int(index), phi[:, int(index)]) and strict:
                raise RankDeficiencyError(
                    f"The column {int(index)} is linearly dependent on the columns "
                    f"{basis.get_indices().tolist()}!"
                )

        return basis

    def __len__(self) -> int:
        return len(self._indices)

    def __contains__(self, index: int) -> bool:
        return int(index) in self._indices

    def get_ambient_dim(self) -> int:
        return self._ambient_dim

    def get_rank_tol(self) -> float:
        return self._rank_tol

    def get_indices(self) -> np.ndarray:
        return np.asarray(self._indices, dtype=np.int64)

    def get_q(self) -> np.ndarray:
        return self._q[:, : len(self)]

    def get_r(self) -> np.ndarray:
        size = len(self)
        return self._r[:size, :size]

    def is_full(self) -> bool:
        return len(self) >= self._ambient_dim

    def extend(self, index: int, column) -> bool:
        """Appends a column to the basis.

        Returns ``False`` and leaves the basis untouched if the column lies in the
        current span up to ``rank_tol``.
        """
        index = int(index)
        column = _as_vector(column, self._ambient_dim, name="column")
        if column.ndim != 1:
            raise DimensionMismatchError("Only one column can be appended at once!")

        if index in self._indices:
            raise DuplicateIndexError(
                f"The index {index} is already part of the basis!"
            )

        norm = np.linalg.norm(column)
        if self.is_full() or norm == 0:
            return False

        q = self.get_q()
        v = column.copy()
        coefficients = np.zeros(len(self))

        # modified Gram-Schmidt, one column at a time
        for j in range(len(self)):
            coefficients[j] = q[:, j] @ v
            v -= coefficients[j] * q[:, j]

        # single reorthogonalization pass
        c = q.T @ v
        v -= q @ c
        coefficients += c

        complement_norm = np.linalg.norm(v)
        if complement_norm <= self._rank_tol * norm:
            return False

        size = len(self)
        self._q[:, size] = v / complement_norm
        self._r[:size, size] = coefficients
        self._r[size, size] = complement_norm
        self._indices.append(index)

        return True

    def project_complement(self, v) -> np.ndarray:
        v = _as_vector(v, self._ambient_dim)
        if len(self) == 0:
            return v.copy()

        q = self.get_q()
        return v - q @ (q.T @ v)

    def normalized_complement(self, v) -> np.ndarray | None:
        v = _as_vector(v, self._ambient_dim)
        if v.ndim != 1:
            raise DimensionMismatchError("Only a single vector can be normalized!")

        complement = self.project_complement(v)
        complement_norm = np.linalg.norm(complement)

        if complement_norm == 0 or complement_norm <= self._rank_tol * np.linalg.norm(
            v
        ):
            return None

        return complement / complement_norm

    def residual(self, y) -> tuple[np.ndarray, float]:
        r = self.project_complement(y)
        return r, float(np.linalg.norm(r))

    def solve(self, y) -> np.ndarray:
        """Least squares coefficients of ``y`` on the basis columns, in index order."""
        y = _as_vector(y, self._ambient_dim)
        if len(self) == 0:
            return np.zeros(0)

        return solve_triangular(self.get_r(), self.get_q().T @ y, lower=False)

    def __repr__(self) -> str:
        return (
            f"OrthoBasis(ambient_dim={self._ambient_dim}, "
            f"indices={self._indices}, rank_tol={self._rank_tol})"
        )


def least_squares(
    phi_sub: np.ndarray, y, rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    phi_sub = np.asarray(phi_sub, dtype=np.float64)
    if phi_sub.ndim != 2:
        raise DimensionMismatchError(
            f"The submatrix has to be two-dimensional, got shape {phi_sub.shape}!"
        )

    y = _as_vector(y, phi_sub.shape[0], name="measurement vector")

    if not (np.all(np.isfinite(phi_sub)) and np.all(np.isfinite(y))):
        raise InvalidInputError("The least squares input contains non-finite entries!")

    if phi_sub.shape[1] > phi_sub.shape[0]:
        raise RankDeficiencyError(
            f"A {phi_sub.shape[0]}x{phi_sub.shape[1]} matrix cannot have full "
            "column rank!"
        )

    basis = OrthoBasis.from_columns(
        phi_sub, range(phi_sub.shape[1]), rank_tol=rank_tol, strict=True
    )

    return basis.solve(y)
