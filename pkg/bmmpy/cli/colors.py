from enum import Enum

from catppuccin.palette import PALETTE as _CATPPUCCIN

from bmmpy import VariableLibrary

RESET = "\x1b[0m"


def rgb_to_ansi(r: int, g: int, b: int, foreground: bool = True) -> str:
    return f"\x1b[{'38' if foreground else '48'};2;{r};{g};{b}m"


def _flavor_enum(flavor) -> type[Enum]:
    return Enum(
        flavor.identifier,
        {
            name: rgb_to_ansi(color.rgb.r, color.rgb.g, color.rgb.b)
            for name, color in flavor.colors.__dict__.items()
        },
    )


PALETTE: dict[str, type[Enum]] = {
    flavor.identifier: _flavor_enum(flavor) for flavor in _CATPPUCCIN
}


class Palette:
    def __init__(self, flavor: type[Enum]):
        self._flavor = flavor

    def __getattr__(self, name: str) -> str:
        try:
            return self._flavor[name].value
        except KeyError:
            raise AttributeError(name) from None


class _Switch:
    def __init__(self, on: str, off: str):
        self.on = on
        self.off = off


class _Effects:
    bold = _Switch("\x1b[1m", "\x1b[21m")
    dim = _Switch("\x1b[2m", "\x1b[22m")
    underline = _Switch("\x1b[4m", "\x1b[24m")
    reverse = _Switch("\x1b[7m", "\x1b[27m")


EFFECTS = _Effects()


def get_palette(name: str) -> Palette:
    if name not in PALETTE:
        raise KeyError(
            f"Unknown color palette '{name}', expected one of {list(PALETTE)}!"
        )
    return Palette(PALETTE[name])


def get_default_palette() -> Palette:
    return get_palette(VariableLibrary.get_variable("cli.color_palette"))
