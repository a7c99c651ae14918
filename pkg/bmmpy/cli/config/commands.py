import rich_click as click

from bmmpy.cli.config.get_command import get_value
from bmmpy.cli.config.list_command import list_variables
from bmmpy.cli.config.reset_command import reset
from bmmpy.cli.config.set_command import set_value


@click.group("config", help="Inspect and edit the default variables of bmmpy.")
def command():
    pass


command.add_command(get_value)
command.add_command(set_value)
command.add_command(list_variables)
command.add_command(reset)
