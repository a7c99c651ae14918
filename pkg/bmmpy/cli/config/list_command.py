import rich_click as click

from bmmpy import VariableLibrary
from bmmpy.cli.colors import RESET, get_default_palette
from bmmpy.cli.elements import (
    debug_option,
    print_error_message,
    print_tree,
    unknown_key_error,
)
from bmmpy.core.utils.exceptions import InvalidTOMLConfigurationError

palette = get_default_palette()


@click.command(
    "list",
    help="List the variable configuration. "
    f"Given a {palette.sky}'KEY'{RESET}, only that subtree is shown.",
)
@click.argument("key", type=str, default=None, required=False)
@debug_option
def list_variables(key: str | None, debug: bool) -> None:
    try:
        if key is None:
            value = VariableLibrary.get_config().as_dict()
        else:
            value = VariableLibrary.get_variable(key=key)
    except InvalidTOMLConfigurationError as error:
        return print_error_message(error=error, debug=debug)
    except KeyError:
        return print_error_message(
            error=unknown_key_error(key, non_dict_only=False), debug=debug
        )

    if not isinstance(value, dict):
        value = {key.split(".")[-1]: value}

    print_tree("Variable Configuration" if key is None else key, value)

    return None
