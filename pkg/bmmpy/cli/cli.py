import sys
from importlib import metadata

import rich_click as click

import bmmpy.version
from bmmpy import VariableLibrary
from bmmpy.cli.colors import EFFECTS, RESET, get_default_palette
from bmmpy.cli.elements import USAGE_ERROR

from .bench_command import bench
from .config import commands as config
from .gen_command import gen
from .image_command import image
from .plot_data_command import plot_data
from .solve_command import solve

palette = get_default_palette()

click.rich_click.THEME = (
    f"{VariableLibrary.get_variable('cli.rich.palette')}-"
    f"{VariableLibrary.get_variable('cli.rich.style')}"
)


class ExitCodeGroup(click.RichGroup):
    # usage errors of this group and every subcommand exit with USAGE_ERROR
    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as error:
            error.exit_code = USAGE_ERROR
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as error:
            error.exit_code = USAGE_ERROR
            raise


def _print_version(ctx, param, value):

    if not value or ctx.resilient_parsing:
        return

    version = bmmpy.version.version

    content = f"🐍 bmmpy ◆ v{version}"
    frame_width = len(content) + 2

    print(f"{palette.sky}{'─' * frame_width}{RESET}")
    print(
        f" {EFFECTS.bold.on}{palette.maroon}🐍 bmmpy{RESET} {palette.yellow}◆{RESET} "
        f"{EFFECTS.bold.on}{palette.green}v{version}{RESET} "
    )
    print(f"{palette.sky}{'─' * frame_width}{RESET}")

    ctx.exit()


def _print_info(ctx, param, value):

    if not value or ctx.resilient_parsing:
        return

    print(_create_epilog(short=False))

    ctx.exit()


def _package_metadata() -> dict[str, str]:
    try:
        content = metadata.metadata("bmmpy")
    except metadata.PackageNotFoundError:
        return {}

    info = {"license": content.get("License-Expression") or content.get("License")}
    for entry in content.get_all("Project-URL") or []:
        label, _, url = entry.partition(",")
        info[label.strip().lower()] = url.strip()

    return {key: value for key, value in info.items() if value}


def _create_epilog(short):
    info = _package_metadata()
    version = bmmpy.version.version
    docu_url = info.get("documentation", "the package documentation")

    if short:
        return (
            f"{palette.base}For more information on this package visit "
            f"{EFFECTS.bold.on}{EFFECTS.underline.on}{palette.blue}{docu_url}{RESET}!\n\n"
            f"Version {palette.green}{version}{RESET}"
        )

    lines = [
        f"🐍 {palette.base}bmmpy version {EFFECTS.bold.on}{palette.green}"
        f"v{version}{RESET}",
        f"🧮 {palette.base}Sparse signal recovery with the Bayesian multiple "
        f"matching pursuit and its greedy baselines.{RESET}",
    ]
    if "repository" in info:
        lines.append(
            f"📦 {palette.base}The code repository is available under "
            f"{EFFECTS.bold.on}{EFFECTS.underline.on}{palette.sky}"
            f"{info['repository']}{RESET}."
        )
    lines.append(
        f"📚 {palette.base}For more information on this package visit "
        f"{EFFECTS.bold.on}{EFFECTS.underline.on}{palette.blue}{docu_url}{RESET}!"
    )
    if "license" in info:
        lines.append(
            f"⚖️ {palette.base}This package is licensed under the "
            f"{EFFECTS.bold.on}{palette.green}{info['license']}{RESET} "
            f"{palette.base}license.{RESET}"
        )

    return "\n\n".join(lines)


@click.group(cls=ExitCodeGroup, epilog=_create_epilog(short=True))
@click.option(
    "--version",
    "-v",
    is_flag=True,
    is_eager=True,
    callback=_print_version,
    help="Displays the current version of bmmpy.",
)
@click.option(
    "--info",
    is_flag=True,
    is_eager=False,
    callback=_print_info,
    help="Displays some information about bmmpy.",
)
def entry_point(**kwargs):
    pass


entry_point.add_command(gen)
entry_point.add_command(solve)
entry_point.add_command(bench)
entry_point.add_command(image)
entry_point.add_command(plot_data)
entry_point.add_command(config.command)

if __name__ == "__main__":
    if len(sys.argv) == 1:
        entry_point.main(["--help"])
    entry_point()
