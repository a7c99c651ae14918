from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from bmmpy.core.bench.pgm import MAXVAL, write_pgm
from bmmpy.core.model import ProblemInstance, SignalPrior
from bmmpy.core.solvers import SolverConfig, SolverType
from bmmpy.core.utils.exceptions import (
    DenseImageError,
    InvalidImageError,
    InvalidInputError,
)


@dataclass(frozen=True, eq=False)
class ImageReconstruction:
    solver: str
    pixels: np.ndarray
    mse: float
    psnr: float
    exact_support_recovery: bool
    wall_time: float

    def display(self) -> np.ndarray:
        return to_display(self.pixels)


@dataclass
class ImageDemoResult:
    original: np.ndarray
    m: int
    k: int
    snr_db: float | None
    seed: int
    reconstructions: list[ImageReconstruction] = field(default_factory=list)
    skipped: dict[str, str] = field(default_factory=dict)


def to_display(pixels: np.ndarray) -> np.ndarray:
    return np.clip(np.round(np.maximum(pixels, 0)), 0, MAXVAL).astype(np.uint8)


def psnr(reference: np.ndarray, estimate: np.ndarray, peak: float = MAXVAL) -> float:
    difference = np.asarray(estimate, float) - np.asarray(reference, float)
    mse = float(np.mean(difference**2))
    if mse == 0:
        return float("inf")
    return float(10 * np.log10(peak**2 / mse))


def image_demo(
    image: np.ndarray,
    m: int,
    snr_db: float | None = 25.0,
    solvers: tuple[str, ...] = ("bmmp",),
    seed: int = 0,
    solver_options: dict | None = None,
    verbosity_level: int = 1,
) -> ImageDemoResult:
    image = np.asarray(image)
    if image.ndim != 2:
        raise InvalidImageError(
            f"The image has to be a 2D grayscale raster, got shape {image.shape}!"
        )

    solver_types = [SolverType.get(name) for name in solvers]
    reference = image.astype(np.float64)
    # row-major pixels scaled to [0, 1]
    x_true = reference.ravel() / MAXVAL
    n = x_true.size
    k = int(np.count_nonzero(x_true))

    if k >= m:
        raise DenseImageError(
            f"The image has {k} nonzero pixels, which is not fewer than m={m} "
            "measurements!"
        )
    if not m < n:
        raise InvalidInputError(
            f"The measurement count m={m} has to be smaller than the {n} pixels!"
        )

    result = ImageDemoResult(original=image, m=m, k=k, snr_db=snr_db, seed=seed)

    # an all-black image needs no measurements
    if k == 0:
        for solver_type in solver_types:
            result.reconstructions.append(
                ImageReconstruction(
                    solver=solver_type.name,
                    pixels=np.zeros(image.shape),
                    mse=0.0,
                    psnr=float("inf"),
                    exact_support_recovery=True,
                    wall_time=0.0,
                )
            )
        return result

    problem = ProblemInstance.from_signal(
        x_true, m=m, prior=SignalPrior.uniform(0, 1), snr_db=snr_db, seed=seed
    )
    config = SolverConfig.for_problem(problem, **(solver_options or {}))

    for solver_type in solver_types:
        reason = solver_type.infeasibility(m, config)
        if reason is not None:
            result.skipped[solver_type.name] = reason
            if verbosity_level > 1:
                print(f"Skipping {solver_type.full_name}: {reason}")
            continue

        recovery = solver_type.solve(problem, config)
        # left unclipped, the PSNR reflects the raw estimate
        pixels = (recovery.x_hat * MAXVAL).reshape(image.shape)

        result.reconstructions.append(
            ImageReconstruction(
                solver=solver_type.name,
                pixels=pixels,
                mse=float(np.mean((pixels - reference) ** 2)),
                psnr=psnr(reference, pixels),
                exact_support_recovery=recovery.exact_support_recovery(
                    problem.support_true
                ),
                wall_time=recovery.wall_time,
            )
        )

    return result


def write_reconstructions(
    result: ImageDemoResult,
    directory: str | Path,
    stem: str = "image",
    overwrite: bool = False,
) -> list[Path]:
    directory = Path(directory)

    return [
        write_pgm(
            directory / f"{stem}_{reconstruction.solver}.pgm",
            reconstruction.display(),
            overwrite=overwrite,
        )
        for reconstruction in result.reconstructions
    ]
