import rich_click as click

from bmmpy import VariableLibrary
from bmmpy.cli.colors import RESET, get_default_palette

palette = get_default_palette()


@click.command(
    "reset",
    help="Reset the variable configuration of bmmpy to its default state.",
)
@click.option(
    "--force",
    "-f",
    is_flag=True,
    help="Confirm the reset. Without it the command refuses to run.",
)
def reset(force: bool) -> None:
    if not force:
        raise click.UsageError(
            "Resetting the configuration cannot be undone, pass '--force' to confirm!"
        )

    VariableLibrary().generate(regenerate=True)

    print(
        f"{palette.base}Regenerated the variable configuration at "
        f"{palette.sky}{VariableLibrary.get_path()}{palette.base}.{RESET}"
    )

    return None
