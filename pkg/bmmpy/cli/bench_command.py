from pathlib import Path

import numpy as np
import rich_click as click
from rich import box
from rich.console import Console
from rich.table import Table

from bmmpy import VariableLibrary
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
    PRESET_NAMES,
    MetricsSummary,
    aggregate,
    emit_plot_data,
    preset,
    run_experiment,
    write_records,
    write_summaries,
)
from bmmpy.core.utils.exceptions import BmmpyError

palette = get_default_palette()


def _format_metric(value: float) -> str:
    return "–" if np.isnan(value) else f"{value:.4g}"


def _summary_table(summaries: list[MetricsSummary], metric: str) -> Table:
    table = Table(
        title=f"{palette.blue}Summary{RESET}",
        show_header=True,
        show_edge=True,
        header_style=palette.overlay1,
        box=box.HORIZONTALS,
        expand=False,
        pad_edge=False,
    )

    for column in ("solver", "m", "n", "k", "snr_db", "trials", metric):
        table.add_column(column, justify="left" if column == "solver" else "right")

    for summary in summaries:
        table.add_row(
            f"{palette.sky}{summary.solver}",
            f"{palette.base}{summary.m}",
            f"{palette.base}{summary.n}",
            f"{palette.base}{summary.k}",
            f"{palette.base}{'–' if summary.snr_db is None else summary.snr_db}",
            f"{palette.base}{summary.trial_count}",
            f"{palette.green}{_format_metric(getattr(summary, metric))}",
        )

    return table


@click.command(
    "bench",
    help=f"Run a Monte Carlo benchmark {palette.sky}'PRESET'{RESET} and write "
    "the trial records, the aggregated summary and plot-ready data.",
)
@click.option(
    "--preset",
    "preset_name",
    type=click.Choice(PRESET_NAMES),
    required=True,
    help="The experiment grid to run.",
)
@click.option(
    "--scale",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="Shrinks the problem sizes of the preset. Defaults to 'bench.scale'.",
)
@click.option(
    "--trials",
    type=click.IntRange(min=1),
    default=None,
    help="The number of trials per grid point. Defaults to 'bench.trials'.",
)
@seed_option
@click.option(
    "--jobs",
    "-j",
    type=click.IntRange(min=1),
    default=None,
    help="The number of worker processes. Defaults to 'bench.jobs'.",
)
@click.option(
    "--solvers",
    type=SOLVER_LIST,
    default=None,
    help="Comma separated solvers replacing the solvers of the preset.",
)
@click.option(
    "--g",
    "g",
    type=click.IntRange(min=1),
    default=None,
    help="The number of BMMP support candidates. Defaults to 'solver.g'.",
)
@click.option(
    "--output-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="The directory of the output files. Defaults to 'bench.output_directory'.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
    help="The format of the record and summary files.",
)
@click.option(
    "--timing",
    is_flag=True,
    help="Include wall-clock timings. Timed outputs differ between reruns.",
)
@click.option(
    "--overwrite",
    is_flag=True,
    help="Replace existing output files.",
)
@verbose_option
@debug_option
def bench(
    preset_name: str,
    scale: float | None,
    trials: int | None,
    seed: int | None,
    jobs: int | None,
    solvers: tuple[str, ...] | None,
    g: int | None,
    output_dir: Path | None,
    fmt: str,
    timing: bool,
    overwrite: bool,
    verbose: int,
    debug: bool,
) -> None:
    verbose += 1

    get = VariableLibrary.get_variable
    scale = float(get("bench.scale")) if scale is None else scale
    trials = int(get("bench.trials")) if trials is None else trials
    jobs = int(get("bench.jobs")) if jobs is None else jobs
    seed = resolve_seed(seed)
    output_dir = (
        Path(get("bench.output_directory")) if output_dir is None else output_dir
    )

    records_path = output_dir / f"{preset_name}_records.{fmt}"
    summary_path = output_dir / f"{preset_name}_summary.{fmt}"
    plot_path = output_dir / f"{preset_name}_plot.dat"
    check_outputs([records_path, summary_path, plot_path], overwrite=overwrite)

    solver_options = configured_solver_options()
    if g is not None:
        solver_options["g"] = g

    try:
        config = preset(
            preset_name, scale=scale, trials=trials, seed_base=seed, **solver_options
        )
        if solvers is not None:
            config = config.with_overrides(solvers=solvers)

        print_tree(
            f"Resolved configuration ({preset_name})",
            {
                **config.as_dict(),
                "scale": scale,
                "jobs": jobs,
                "outputs": {
                    "records": str(records_path),
                    "summary": str(summary_path),
                    "plot_data": str(plot_path),
                },
            },
        )

        result = run_experiment(config, jobs=jobs, verbosity_level=verbose)
        summaries = aggregate(result.records, result.skipped)

        write_records(
            result.records, records_path, fmt=fmt, overwrite=overwrite, timing=timing
        )
        write_summaries(
            summaries, summary_path, fmt=fmt, overwrite=overwrite, timing=timing
        )
        emit_plot_data(
            summaries,
            plot_path,
            x_axis=config.experiment.x_axis,
            metric=config.experiment.metric,
            solvers=list(config.solvers),
        )
    except (BmmpyError, OSError) as error:
        return print_error_message(error=error, debug=debug)

    for point in result.skipped:
        print_info(
            f"{palette.yellow}Skipped {point.solver} at m={point.m}, k={point.k}: "
            f"{point.reason}",
            verbosity_level=verbose,
            level=2,
        )

    Console().print(_summary_table(summaries, config.experiment.metric))

    print_info(
        f"Ran {len(result.records)} solver trials "
        f"({result.skipped_trials} skipped) and wrote "
        f"{palette.sky}{records_path}{palette.base}, "
        f"{palette.sky}{summary_path}{palette.base} and "
        f"{palette.sky}{plot_path}{palette.base}.",
        verbosity_level=verbose,
    )

    return None
