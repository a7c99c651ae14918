from pathlib import Path

import rich_click as click
from fuzzyfinder import fuzzyfinder
from rich import box
from rich.console import Console
from rich.table import Table
from rich.tree import Tree

from bmmpy import VariableLibrary
from bmmpy.cli.colors import EFFECTS, RESET, get_default_palette
from bmmpy.core.solvers import get_solver_names
from bmmpy.core.utils import str2interval

palette = get_default_palette()

USAGE_ERROR: int = 1
DATA_ERROR: int = 2

SEED_ENVIRONMENT_VARIABLE: str = "BMMP_SEED"


def print_error_message(
    error: Exception, debug: bool, exit_code: int = DATA_ERROR
) -> None:
    if debug:
        raise error

    message = error.args[0] if error.args and isinstance(error.args[0], str) else error
    print(f"{palette.red}ERROR: {palette.maroon}{message}{RESET}")
    raise click.exceptions.Exit(exit_code)


def unknown_key_error(key: str, non_dict_only: bool = True) -> KeyError:
    matched = list(
        fuzzyfinder(
            key,
            VariableLibrary.get_config().get_keys(non_dict_only=non_dict_only),
            highlight=True,
        )
    )
    suggestions = "\n  ".join(matched)

    return KeyError(
        f"The variable '{key}' could not be found!\n"
        f"Did you mean one of the following?{RESET}\n\n  {suggestions}"
    )


def print_info(message: str, verbosity_level: int, level: int = 1) -> None:
    if verbosity_level >= level:
        print(f"{palette.base}{message}{RESET}")


def render_tree(content: dict, tree: Tree) -> None:
    for key, value in content.items():
        if isinstance(value, dict):
            branch = tree.add(f"{EFFECTS.bold.on}{palette.blue}{key}{RESET}")
            render_tree(value, branch)
        else:
            tree.add(
                f"{palette.sky}{key}{RESET}{palette.overlay1} = "
                f"{palette.maroon}{_format_value(value)}{RESET}"
            )


def print_tree(title: str, content: dict) -> None:
    root = Tree(f"{palette.mauve}{title}{RESET}")
    render_tree(content, root)
    Console().print(root)


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, (list, tuple)):
        return ", ".join(_format_value(entry) for entry in value)
    return str(value)


def key_value_table(title: str, rows: list[tuple[str, object]]) -> Table:
    table = Table(
        title=f"{palette.blue}{title}{RESET}",
        show_header=False,
        show_edge=True,
        header_style=palette.overlay1,
        box=box.HORIZONTALS,
        expand=False,
        pad_edge=False,
    )
    table.add_column(justify="right", no_wrap=True)
    table.add_column(justify="left", no_wrap=False)

    for label, value in rows:
        table.add_row(f"{palette.sky}{label}", f"{palette.base}{_format_value(value)}")

    return table


def check_outputs(paths: list[Path], overwrite: bool) -> None:
    if overwrite:
        return

    existing = [str(path) for path in paths if path.exists()]
    if existing:
        raise click.UsageError(
            f"The output file(s) {', '.join(existing)} already exist! "
            "Use '--overwrite' to replace them."
        )


def resolve_seed(seed: int | None) -> int:
    if seed is None:
        return int(VariableLibrary.get_variable("bench.seed"))
    return seed


def configured_solver_options() -> dict:
    get = VariableLibrary.get_variable
    return {
        "g": int(get("solver.g")),
        "gomp_t": int(get("solver.gomp_t")),
        "rank_tol": float(get("solver.rank_tol")),
        "noiseless_epsilon_factor": float(get("solver.noiseless_epsilon_factor")),
        "max_outer_iterations": int(get("solver.max_outer_iterations")),
        "early_exit": bool(get("solver.early_exit")),
        "sbl_max_iter": int(get("sbl.max_iter")),
        "sbl_tol": float(get("sbl.tol")),
    }


def seed_option(func):
    return click.option(
        "--seed",
        type=click.IntRange(min=0),
        default=None,
        envvar=SEED_ENVIRONMENT_VARIABLE,
        help=f"The master seed. Falls back to {SEED_ENVIRONMENT_VARIABLE} and then "
        "to the configured 'bench.seed'.",
    )(func)


def verbose_option(func):
    return click.option(
        "--verbose",
        "-v",
        count=True,
        help=f"Sets the verbosity level of the output. "
        f"{palette.red}Repeat to print more details.{RESET}",
    )(func)


def debug_option(func):
    return click.option(
        "--debug",
        "-d",
        is_flag=True,
        help="Activate the debug log for the command "
        "to print full error traces in case of a problem.",
    )(func)


class IntervalParamType(click.ParamType):
    name = "interval"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return str2interval(value)
        except ValueError as error:
            self.fail(str(error), param, ctx)


class SolverListParamType(click.ParamType):
    name = "solvers"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value

        names = tuple(name.strip() for name in value.split(",") if name.strip())
        if not names:
            self.fail("At least one solver has to be given!", param, ctx)

        available = get_solver_names()
        unknown = [name for name in names if name not in available]
        if unknown:
            self.fail(
                f"Unknown solver(s) {', '.join(unknown)}! "
                f"Available solvers: {', '.join(available)}",
                param,
                ctx,
            )

        if len(set(names)) != len(names):
            self.fail("Each solver may only be given once!", param, ctx)

        return names


INTERVAL = IntervalParamType()
SOLVER_LIST = SolverListParamType()
