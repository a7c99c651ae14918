from pathlib import Path

import rich_click as click

from bmmpy.cli.colors import RESET, get_default_palette
from bmmpy.cli.elements import (
    SOLVER_LIST,
    check_outputs,
    debug_option,
    print_error_message,
    print_info,
    print_tree,
    verbose_option,
)
from bmmpy.core.bench import emit_plot_data, read_summaries
from bmmpy.core.bench.plotdata import AXES, METRICS
from bmmpy.core.utils.exceptions import BmmpyError

palette = get_default_palette()


@click.command(
    "plot-data",
    help=f"Convert an existing {palette.sky}summary{RESET} file into "
    "whitespace separated plot columns.",
)
@click.option(
    "--summary",
    "summary_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="The summary file written by 'bmmpy bench'.",
)
@click.option(
    "--x",
    "x_axis",
    type=click.Choice(AXES),
    required=True,
    help="The grid parameter on the x axis.",
)
@click.option(
    "--metric",
    type=click.Choice(METRICS),
    default="recovery_rate",
    show_default=True,
    help="The metric plotted per solver.",
)
@click.option(
    "--solvers",
    type=SOLVER_LIST,
    default=None,
    help="Comma separated solvers and their column order. Defaults to all solvers.",
)
@click.option(
    "--experiment",
    type=str,
    default=None,
    help="Only use summaries of the given experiment name.",
)
@click.option(
    "--out",
    "out",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="The path of the plot data file.",
)
@click.option(
    "--overwrite",
    is_flag=True,
    help="Replace an existing output file.",
)
@verbose_option
@debug_option
def plot_data(
    summary_path: Path,
    x_axis: str,
    metric: str,
    solvers: tuple[str, ...] | None,
    experiment: str | None,
    out: Path,
    overwrite: bool,
    verbose: int,
    debug: bool,
) -> None:
    verbose += 1

    check_outputs([out], overwrite=overwrite)

    print_tree(
        "Resolved configuration (plot-data)",
        {
            "summary": str(summary_path),
            "x": x_axis,
            "metric": metric,
            "solvers": "all" if solvers is None else list(solvers),
            "experiment": "all" if experiment is None else experiment,
            "out": str(out),
        },
    )

    try:
        summaries = read_summaries(summary_path)
        if experiment is not None:
            summaries = [s for s in summaries if s.experiment == experiment]
        path = emit_plot_data(
            summaries,
            out,
            x_axis=x_axis,
            metric=metric,
            solvers=None if solvers is None else list(solvers),
        )
    except (BmmpyError, OSError) as error:
        return print_error_message(error=error, debug=debug)

    print_info(
        f"Wrote the plot data to {palette.sky}{path}{palette.base}.",
        verbosity_level=verbose,
    )

    return None
