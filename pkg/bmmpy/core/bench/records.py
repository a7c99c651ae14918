from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
import pandas as pd

from bmmpy.core.bench.experiment import SkippedPoint, TrialRecord
from bmmpy.core.utils.exceptions import InvalidInputError, OutputExistsError

WILSON_Z: float = 1.959963984540054

GROUP_COLUMNS: list[str] = ["experiment", "solver", "m", "n", "k", "snr_db"]

RECORD_COLUMNS: list[str] = GROUP_COLUMNS + [
    "seed",
    "exact_support_recovery",
    "squared_error",
    "residual_norm",
    "iterations",
]
RECORD_TIMING_COLUMNS: list[str] = ["wall_time"]

SUMMARY_COLUMNS: list[str] = GROUP_COLUMNS + [
    "trial_count",
    "successes",
    "recovery_rate",
    "recovery_rate_ci95",
    "mse",
    "median_squared_error",
]
SUMMARY_TIMING_COLUMNS: list[str] = ["mean_time"]


@dataclass(frozen=True)
class MetricsSummary:
    experiment: str
    solver: str
    m: int
    n: int
    k: int
    snr_db: float | None
    trial_count: int
    successes: int
    recovery_rate: float
    recovery_rate_ci95: float
    mse: float
    median_squared_error: float
    mean_time: float = float("nan")


def wilson_half_width(successes: int, trials: int, z: float = WILSON_Z) -> float:
    if trials == 0:
        return float("nan")

    rate = successes / trials
    denominator = 1 + z**2 / trials
    spread = np.sqrt(rate * (1 - rate) / trials + z**2 / (4 * trials**2))

    return float(z * spread / denominator)


def _snr(value) -> float | None:
    return None if value is None or pd.isna(value) else float(value)


def _sorted_frame(records: list[TrialRecord]) -> pd.DataFrame:
    frame = pd.DataFrame(
        [asdict(record) for record in records],
        columns=[f.name for f in fields(TrialRecord)],
    )
    frame["snr_db"] = frame["snr_db"].astype(float)

    return frame.sort_values(
        GROUP_COLUMNS + ["seed"], na_position="first", kind="mergesort"
    ).reset_index(drop=True)


def aggregate(
    records: list[TrialRecord], skipped: list[SkippedPoint] = ()
) -> list[MetricsSummary]:
    """Groups records by experiment, solver and grid point.

    Skipped solver/grid combinations become summaries without trials, whose
    metrics are NaN.
    """
    summaries = []

    if records:
        # sorted first so the summaries do not depend on the record order
        frame = _sorted_frame(records)
        groups = frame.groupby(GROUP_COLUMNS, dropna=False, sort=True)

        for key, group in groups:
            experiment, solver, m, n, k, snr_db = key
            trials = len(group)
            successes = int(group["exact_support_recovery"].sum())

            summaries.append(
                MetricsSummary(
                    experiment=experiment,
                    solver=solver,
                    m=int(m),
                    n=int(n),
                    k=int(k),
                    snr_db=_snr(snr_db),
                    trial_count=trials,
                    successes=successes,
                    recovery_rate=successes / trials,
                    recovery_rate_ci95=wilson_half_width(successes, trials),
                    mse=float(group["squared_error"].mean()),
                    median_squared_error=float(group["squared_error"].median()),
                    mean_time=float(group["wall_time"].mean()),
                )
            )

    for point in skipped:
        summaries.append(
            MetricsSummary(
                experiment=point.experiment,
                solver=point.solver,
                m=point.m,
                n=point.n,
                k=point.k,
                snr_db=point.snr_db,
                trial_count=0,
                successes=0,
                recovery_rate=float("nan"),
                recovery_rate_ci95=float("nan"),
                mse=float("nan"),
                median_squared_error=float("nan"),
            )
        )

    # noiseless points first
    def sort_key(summary: MetricsSummary):
        snr = -np.inf if summary.snr_db is None else summary.snr_db
        return (
            summary.experiment,
            summary.solver,
            summary.m,
            summary.n,
            summary.k,
            snr,
        )

    return sorted(summaries, key=sort_key)


def _check_output(path: Path, overwrite: bool) -> None:
    if path.exists() and not overwrite:
        raise OutputExistsError(
            f"The file '{path}' already exists! Use overwrite to replace it."
        )
    path.parent.mkdir(parents=True, exist_ok=True)


def _format(path: Path, fmt: str | None) -> str:
    fmt = fmt if fmt is not None else path.suffix.lstrip(".").lower()
    if fmt not in ("csv", "json"):
        raise InvalidInputError(
            f"Unsupported table format '{fmt}' for '{path}', expected csv or json!"
        )
    return fmt


def _write_rows(
    rows: list[dict], columns: list[str], path: Path, fmt: str, overwrite: bool
) -> Path:
    _check_output(path, overwrite)

    try:
        if fmt == "csv":
            frame = pd.DataFrame(rows, columns=columns)
            frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
        else:
            content = [{column: row[column] for column in columns} for row in rows]
            with open(path, "w") as file:
                json.dump(content, file, indent=2, allow_nan=True)
                file.write("\n")
    except OSError as error:
        raise OSError(f"Could not write '{path}': {error.strerror}") from error

    return path


def write_records(
    records: list[TrialRecord],
    path: str | Path,
    fmt: str | None = None,
    overwrite: bool = False,
    timing: bool = False,
) -> Path:
    path = Path(path)
    columns = RECORD_COLUMNS + (RECORD_TIMING_COLUMNS if timing else [])

    return _write_rows(
        [asdict(record) for record in records],
        columns,
        path,
        _format(path, fmt),
        overwrite,
    )


def write_summaries(
    summaries: list[MetricsSummary],
    path: str | Path,
    fmt: str | None = None,
    overwrite: bool = False,
    timing: bool = False,
) -> Path:
    path = Path(path)
    columns = SUMMARY_COLUMNS + (SUMMARY_TIMING_COLUMNS if timing else [])

    return _write_rows(
        [asdict(summary) for summary in summaries],
        columns,
        path,
        _format(path, fmt),
        overwrite,
    )


def _read_rows(path: Path, fmt: str | None) -> list[dict]:
    fmt = _format(path, fmt)

    try:
        if fmt == "csv":
            frame = pd.read_csv(
                path,
                float_precision="round_trip",
                keep_default_na=False,
                na_values=[""],
            )
            return frame.to_dict(orient="records")

        with open(path) as file:
            return json.load(file)
    except OSError as error:
        raise OSError(f"Could not read '{path}': {error.strerror}") from error


def _normalize(row: dict, cls: type) -> dict:
    names = [f.name for f in fields(cls)]
    optional = ("wall_time", "mean_time")
    missing = [name for name in names if name not in row and name not in optional]
    if missing:
        raise InvalidInputError(f"The table is missing the columns {missing}!")

    content = {name: row[name] for name in names if name in row}
    content["snr_db"] = _snr(content["snr_db"])

    for name in ("m", "n", "k", "seed", "iterations", "trial_count", "successes"):
        if name in content:
            content[name] = int(content[name])
    if "exact_support_recovery" in content:
        content["exact_support_recovery"] = bool(content["exact_support_recovery"])
    content["experiment"] = str(content["experiment"])
    content["solver"] = str(content["solver"])

    return content


def read_records(path: str | Path, fmt: str | None = None) -> list[TrialRecord]:
    return [
        TrialRecord(**_normalize(row, TrialRecord))
        for row in _read_rows(Path(path), fmt)
    ]


def read_summaries(path: str | Path, fmt: str | None = None) -> list[MetricsSummary]:
    summaries = []

    for row in _read_rows(Path(path), fmt):
        content = _normalize(row, MetricsSummary)
        for name in SUMMARY_COLUMNS[8:] + SUMMARY_TIMING_COLUMNS:
            if name in content:
                value = content[name]
                content[name] = float("nan") if value is None else float(value)
        summaries.append(MetricsSummary(**content))

    return summaries
