from __future__ import annotations

from pathlib import Path

import numpy as np

from bmmpy.core.bench.records import MetricsSummary
from bmmpy.core.utils.exceptions import InconsistentGridError, InvalidInputError

AXES: tuple[str, ...] = ("k", "m", "n", "snr_db")
METRICS: tuple[str, ...] = (
    "recovery_rate",
    "recovery_rate_ci95",
    "mse",
    "median_squared_error",
    "mean_time",
)


def _x_value(summary: MetricsSummary, axis: str) -> float:
    value = getattr(summary, axis)
    return np.inf if value is None else float(value)


def plot_table(
    summaries: list[MetricsSummary],
    x_axis: str,
    metric: str,
    solvers: list[str] | None = None,
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    if x_axis not in AXES:
        raise InvalidInputError(f"Unknown x axis '{x_axis}', expected one of {AXES}!")
    if metric not in METRICS:
        raise InvalidInputError(
            f"Unknown metric '{metric}', expected one of {METRICS}!"
        )

    if solvers is None:
        solvers = list(dict.fromkeys(summary.solver for summary in summaries))

    cells: dict[tuple[float, str], float] = {}
    for summary in summaries:
        if summary.solver not in solvers:
            continue

        key = (_x_value(summary, x_axis), summary.solver)
        if key in cells:
            raise InconsistentGridError(
                f"Several grid points share {x_axis}={key[0]:g} for solver "
                f"'{summary.solver}'; filter the summaries to a single sweep first!"
            )
        cells[key] = float(getattr(summary, metric))

    xs = np.array(sorted({x for x, _ in cells}), dtype=np.float64)
    missing = [
        f"{x_axis}={x:g} ({solver})"
        for x in xs
        for solver in solvers
        if (x, solver) not in cells
    ]
    if missing:
        raise InconsistentGridError(
            f"The grid is incomplete, missing points: {', '.join(missing)}"
        )

    values = np.array([[cells[x, solver] for solver in solvers] for x in xs])

    return xs, values.reshape(len(xs), len(solvers)), list(solvers)


def emit_plot_data(
    summaries: list[MetricsSummary],
    path: str | Path,
    x_axis: str,
    metric: str,
    solvers: list[str] | None = None,
) -> Path:
    """Writes whitespace separated plot columns, one row per x value.

    The header line names the x axis followed by the solvers; skipped points
    carry NaN.
    """
    path = Path(path)
    xs, values, solvers = plot_table(summaries, x_axis, metric, solvers)

    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(
        path,
        np.column_stack([xs, values]) if len(xs) else np.zeros((0, len(solvers) + 1)),
        fmt="%.17g",
        header=" ".join([x_axis, *solvers]),
        comments="# ",
    )

    return path
