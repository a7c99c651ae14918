from pathlib import Path

import numpy as np
import pandas as pd
import rich_click as click
from rich import box
from rich.console import Console
from rich.table import Table

from bmmpy.cli.colors import RESET, get_default_palette
from bmmpy.cli.elements import (
    SOLVER_LIST,
    check_outputs,
    configured_solver_options,
    debug_option,
    print_error_message,
    print_info,
    print_tree,
    resolve_seed,
    seed_option,
    verbose_option,
)
from bmmpy.core.bench import (
    ImageDemoResult,
    image_demo,
    read_pgm,
    write_reconstructions,
)
from bmmpy.core.utils import seconds2str
from bmmpy.core.utils.exceptions import BmmpyError

palette = get_default_palette()


def _metrics_frame(result: ImageDemoResult) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "solver": reconstruction.solver,
                "m": result.m,
                "k": result.k,
                "snr_db": result.snr_db,
                "seed": result.seed,
                "mse": reconstruction.mse,
                "psnr": reconstruction.psnr,
                "exact_support_recovery": reconstruction.exact_support_recovery,
            }
            for reconstruction in result.reconstructions
        ],
        columns=[
            "solver",
            "m",
            "k",
            "snr_db",
            "seed",
            "mse",
            "psnr",
            "exact_support_recovery",
        ],
    )


def _psnr_table(result: ImageDemoResult) -> Table:
    table = Table(
        title=f"{palette.blue}Reconstructions (k={result.k}, m={result.m}){RESET}",
        show_header=True,
        show_edge=True,
        header_style=palette.overlay1,
        box=box.HORIZONTALS,
        expand=False,
        pad_edge=False,
    )
    for column in ("solver", "PSNR [dB]", "MSE", "exact", "time"):
        table.add_column(column, justify="left" if column == "solver" else "right")

    for reconstruction in result.reconstructions:
        table.add_row(
            f"{palette.sky}{reconstruction.solver}",
            f"{palette.green}{reconstruction.psnr:.2f}",
            f"{palette.base}{reconstruction.mse:.4g}",
            f"{palette.base}{str(reconstruction.exact_support_recovery).lower()}",
            f"{palette.base}{seconds2str(reconstruction.wall_time)}",
        )
    for solver, reason in result.skipped.items():
        table.add_row(
            f"{palette.sky}{solver}",
            f"{palette.yellow}skipped",
            f"{palette.overlay1}{reason}",
            "",
            "",
        )

    return table


@click.command(
    "image",
    help=f"Compressively sample a sparse {palette.sky}PGM{RESET} image and "
    "reconstruct it with one or more solvers.",
)
@click.option(
    "--in",
    "in_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="The binary (P5) PGM image.",
)
@click.option(
    "--m",
    "m",
    type=click.IntRange(min=1),
    default=138,
    show_default=True,
    help="The number of measurements.",
)
@click.option(
    "--snr",
    type=float,
    default=25.0,
    show_default=True,
    help="The measurement SNR in dB.",
)
@click.option(
    "--noiseless",
    is_flag=True,
    help="Use noiseless measurements instead of '--snr'.",
)
@click.option(
    "--solvers",
    type=SOLVER_LIST,
    default="bmmp",
    show_default=True,
    help="Comma separated solvers, e.g. 'bmmp,map-omp'.",
)
@seed_option
@click.option(
    "--output-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("."),
    show_default=True,
    help="The directory of the reconstructed images and the metrics file.",
)
@click.option(
    "--overwrite",
    is_flag=True,
    help="Replace existing output files.",
)
@verbose_option
@debug_option
def image(
    in_path: Path,
    m: int,
    snr: float,
    noiseless: bool,
    solvers: tuple[str, ...],
    seed: int | None,
    output_dir: Path,
    overwrite: bool,
    verbose: int,
    debug: bool,
) -> None:
    verbose += 1

    seed = resolve_seed(seed)
    snr_db = None if noiseless else snr
    stem = in_path.stem
    outputs = [output_dir / f"{stem}_{solver}.pgm" for solver in solvers]
    metrics_path = output_dir / f"{stem}_metrics.csv"
    check_outputs([*outputs, metrics_path], overwrite=overwrite)

    solver_options = configured_solver_options()

    print_tree(
        "Resolved configuration (image)",
        {
            "image": str(in_path),
            "m": m,
            "snr_db": snr_db,
            "solvers": list(solvers),
            "seed": seed,
            "solver_options": solver_options,
            "output_directory": str(output_dir),
        },
    )

    try:
        pixels = read_pgm(in_path)
        result = image_demo(
            pixels,
            m=m,
            snr_db=snr_db,
            solvers=solvers,
            seed=seed,
            solver_options=solver_options,
            verbosity_level=verbose,
        )
        written = write_reconstructions(
            result, output_dir, stem=stem, overwrite=overwrite
        )
        output_dir.mkdir(parents=True, exist_ok=True)
        _metrics_frame(result).to_csv(
            metrics_path, index=False, na_rep="", lineterminator="\n"
        )
    except (BmmpyError, OSError) as error:
        return print_error_message(error=error, debug=debug)

    Console().print(_psnr_table(result))

    print_info(
        f"Wrote {len(written)} reconstruction(s) and "
        f"{palette.sky}{metrics_path}{palette.base}.",
        verbosity_level=verbose,
    )
    print_info(
        f"Original sparsity: {result.k} of {np.asarray(pixels).size} pixels.",
        verbosity_level=verbose,
        level=2,
    )

    return None
