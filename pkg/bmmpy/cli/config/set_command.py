import rich_click as click

from bmmpy import VariableLibrary
from bmmpy.cli.colors import EFFECTS, RESET, get_default_palette
from bmmpy.cli.elements import debug_option, print_error_message, unknown_key_error
from bmmpy.core.utils.exceptions import InvalidTOMLConfigurationError

palette = get_default_palette()


@click.command(
    "set",
    help=f"Set the {palette.sky}'VALUE'{RESET} of a configuration variable "
    f"by its {palette.sky}'KEY'{RESET}. The value keeps the type of the default.",
)
@click.argument("key", type=str, required=True)
@click.argument("value", type=str, required=True)
@debug_option
def set_value(key: str, value: str, debug: bool) -> None:
    try:
        previous = VariableLibrary.get_variable(key=key)
    except InvalidTOMLConfigurationError as error:
        return print_error_message(error=error, debug=debug)
    except KeyError:
        return print_error_message(error=unknown_key_error(key), debug=debug)

    if isinstance(previous, dict):
        raise click.UsageError(
            f"The key '{key}' names a section, only single variables can be set!"
        )

    try:
        VariableLibrary.set_variable(key=key, value=value)
    except ValueError as error:
        raise click.BadParameter(str(error), param_hint="'VALUE'") from error

    print(
        f"{palette.base}Set {EFFECTS.bold.on}{palette.sky}{key}{RESET}"
        f"{palette.overlay1} = {palette.lavender}{previous} {palette.base}-> "
        f"{palette.green}{VariableLibrary.get_variable(key=key)}{RESET}"
    )

    return None
