from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class CandidateTrace:
    t: int
    extended_sets: list[np.ndarray] = field(default_factory=list)
    temp_supports: list[np.ndarray] = field(default_factory=list)
    residual_norms: list[float] = field(default_factory=list)
    final_support: np.ndarray | None = None

    def accept(self, support: np.ndarray, residual_norm: float) -> None:
        self.temp_supports.append(support)
        self.residual_norms.append(float(residual_norm))
        self.final_support = support

    def is_monotone(self) -> bool:
        return all(b < a for a, b in zip(self.residual_norms, self.residual_norms[1:]))

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "extended_sets": [s.tolist() for s in self.extended_sets],
            "temp_supports": [s.tolist() for s in self.temp_supports],
            "residual_norms": list(self.residual_norms),
            "final_support": (
                None if self.final_support is None else self.final_support.tolist()
            ),
        }


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    x_hat: np.ndarray
    support_hat: np.ndarray
    residual_norm: float
    chosen_candidate: int
    traces: tuple[CandidateTrace, ...]
    wall_time: float
    iterations: int
    solver: str = ""

    def exact_support_recovery(self, support_true) -> bool:
        return np.array_equal(np.sort(self.support_hat), np.sort(support_true))

    def squared_error(self, x_true) -> float:
        return float(np.sum((self.x_hat - x_true) ** 2))

    def as_dict(self) -> dict:
        nonzeros = self.support_hat.tolist()
        return {
            "solver": self.solver,
            "support": nonzeros,
            "x_hat": dict(
                zip(map(str, nonzeros), self.x_hat[self.support_hat].tolist())
            ),
            "residual_norm": self.residual_norm,
            "chosen_candidate": self.chosen_candidate,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
            "traces": [trace.as_dict() for trace in self.traces],
        }
