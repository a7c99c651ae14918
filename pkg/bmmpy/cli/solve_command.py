import json
from pathlib import Path

import rich_click as click
from rich.console import Console

from bmmpy import CorrelationKind, SolverConfig, SolverType, load_instance
from bmmpy.cli.colors import RESET, get_default_palette
from bmmpy.cli.elements import (
    check_outputs,
    configured_solver_options,
    debug_option,
    key_value_table,
    print_error_message,
    print_info,
    print_tree,
    verbose_option,
)
from bmmpy.core.solvers import get_solver_names
from bmmpy.core.utils import seconds2str
from bmmpy.core.utils.exceptions import BmmpyError

palette = get_default_palette()


@click.command(
    "solve",
    help=f"Recover the sparse signal of an instance file with a single "
    f"{palette.sky}'SOLVER'{RESET} and report the estimated support.",
)
@click.option(
    "--in",
    "in_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="The instance file created by 'bmmpy gen'.",
)
@click.option(
    "--solver",
    type=click.Choice(get_solver_names()),
    default="bmmp",
    show_default=True,
    help="The recovery algorithm.",
)
@click.option(
    "--k",
    "k",
    type=click.IntRange(min=0),
    default=None,
    help="The assumed sparsity. Defaults to the sparsity of the instance.",
)
@click.option(
    "--g",
    "g",
    type=click.IntRange(min=1),
    default=None,
    help="The number of BMMP support candidates. Defaults to 'solver.g'.",
)
@click.option(
    "--epsilon",
    type=click.FloatRange(min=0),
    default=None,
    help="The residual threshold. Defaults to ‖y‖·10^(-SNR/20) for noisy "
    "instances and a tiny multiple of ‖y‖ for noiseless ones.",
)
@click.option(
    "--lambda",
    "lambda_",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="The SBL ridge parameter. Defaults to ε²/m.",
)
@click.option(
    "--gomp-t",
    type=click.IntRange(min=1),
    default=None,
    help="The number of indices gOMP selects per step. Defaults to 'solver.gomp_t'.",
)
@click.option(
    "--correlation",
    type=click.Choice([kind.value for kind in CorrelationKind]),
    default=CorrelationKind.RA_ORMP.value,
    show_default=True,
    help="The correlation BMMP scores its candidate indices with.",
)
@click.option(
    "--max-outer-iterations",
    type=click.IntRange(min=1),
    default=None,
    help="The cap on support updates per candidate. "
    "Defaults to 'solver.max_outer_iterations'.",
)
@click.option(
    "--no-early-exit",
    is_flag=True,
    help="Compute all g candidates even if one already meets the threshold.",
)
@click.option(
    "--out",
    "out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="The path of the JSON result file.",
)
@click.option(
    "--overwrite",
    is_flag=True,
    help="Replace an existing result file.",
)
@verbose_option
@debug_option
def solve(
    in_path: Path,
    solver: str,
    k: int | None,
    g: int | None,
    epsilon: float | None,
    lambda_: float | None,
    gomp_t: int | None,
    correlation: str,
    max_outer_iterations: int | None,
    no_early_exit: bool,
    out: Path | None,
    overwrite: bool,
    verbose: int,
    debug: bool,
) -> None:
    verbose += 1

    if out is not None:
        check_outputs([out], overwrite=overwrite)

    try:
        problem = load_instance(in_path)
    except (BmmpyError, OSError) as error:
        return print_error_message(error=error, debug=debug)

    if k is not None and k >= problem.m:
        raise click.UsageError(
            f"The sparsity k={k} has to be smaller than m={problem.m}!"
        )

    options = configured_solver_options()
    overrides = dict(
        g=g,
        epsilon=epsilon,
        lambda_=lambda_,
        gomp_t=gomp_t,
        max_outer_iterations=max_outer_iterations,
    )
    options.update({key: val for key, val in overrides.items() if val is not None})
    options["correlation"] = CorrelationKind(correlation)
    if no_early_exit:
        options["early_exit"] = False

    try:
        solver_type = SolverType.get(solver)
        config = SolverConfig.for_problem(problem, k=k, **options)
        if epsilon is not None and lambda_ is None:
            config = config.with_overrides(lambda_=epsilon**2 / problem.m)

        resolved = solver_type.resolve_config(config).as_dict()
        print_tree(
            f"Resolved configuration ({solver_type.full_name})",
            {
                "instance": {
                    "path": str(in_path),
                    "m": problem.m,
                    "n": problem.n,
                    "snr_db": problem.snr_db,
                },
                "solver": resolved,
            },
        )

        result = solver_type.solve(problem, config)
    except BmmpyError as error:
        return print_error_message(error=error, debug=debug)

    exact = result.exact_support_recovery(problem.support_true)

    Console().print(
        key_value_table(
            title=f"{solver_type.full_name} result",
            rows=[
                ("support", result.support_hat.tolist()),
                ("residual", f"{result.residual_norm:.6g}"),
                ("candidate", result.chosen_candidate),
                ("iterations", result.iterations),
                ("time", seconds2str(result.wall_time)),
                ("squared_error", f"{result.squared_error(problem.x_true):.6g}"),
            ],
        )
    )
    print(f"exact_recovery: {str(exact).lower()}")

    if out is not None:
        content = result.as_dict()
        content["config"] = resolved
        content["instance"] = str(in_path)
        content["exact_support_recovery"] = bool(exact)

        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            with open(out, "w") as file:
                json.dump(content, file, indent=2)
        except OSError as error:
            return print_error_message(error=error, debug=debug)

        print_info(
            f"Wrote the result to {palette.sky}{out}{palette.base}.",
            verbosity_level=verbose,
        )

    return None
