import rich_click as click

from bmmpy import VariableLibrary
from bmmpy.cli.colors import EFFECTS, RESET, get_default_palette
from bmmpy.cli.elements import (
    debug_option,
    print_error_message,
    print_tree,
    unknown_key_error,
)
from bmmpy.core.utils.exceptions import InvalidTOMLConfigurationError

palette = get_default_palette()


@click.command(
    "get",
    help=f"Get the value of a configuration variable by its {palette.sky}'KEY'{RESET}.",
)
@click.argument("key", type=str, required=True)
@debug_option
def get_value(key: str, debug: bool) -> None:
    try:
        value = VariableLibrary.get_variable(key=key)
    except InvalidTOMLConfigurationError as error:
        return print_error_message(error=error, debug=debug)
    except KeyError:
        return print_error_message(error=unknown_key_error(key), debug=debug)

    if isinstance(value, dict):
        print_tree(key, value)
    else:
        print(
            f"{EFFECTS.bold.on}{palette.sky}{key}{RESET}{palette.overlay1} = "
            f"{palette.maroon}{value}{RESET}"
        )

    return None
