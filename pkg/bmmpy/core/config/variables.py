import os
from pathlib import Path

from mergedeep import merge

from bmmpy.core.config.configuration import TOMLConfiguration

HOME_ENVIRONMENT_VARIABLE = "BMMPY_HOME"


def get_home_directory() -> Path:
    home = os.environ.get(HOME_ENVIRONMENT_VARIABLE)
    return Path(home).expanduser() if home else Path.home() / ".bmmpy"


def _default_content() -> dict:
    return {
        "solver": {
            "g": 4,
            "gomp_t": 2,
            "rank_tol": 1e-10,
            "noiseless_epsilon_factor": 1e-7,
            "max_outer_iterations": 100,
            "early_exit": True,
        },
        "sbl": {
            "max_iter": 200,
            "tol": 1e-6,
        },
        "model": {
            "prior": "0,1",
            "noisy_prior": "0.1,1",
        },
        "bench": {
            "trials": 100,
            "seed": 0,
            "jobs": 1,
            "scale": 1.0,
            "output_directory": "bench-output",
        },
        "cli": {
            "color_palette": "mocha",
            "rich": {"palette": "solarized", "style": "box"},
        },
    }


class VariableLibrary:

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if hasattr(self, "_initialized"):
            return
        self._initialized = True

        self._path: Path = get_home_directory() / "config" / "variables.toml"
        self._config = TOMLConfiguration(self._path, create_if_not_exists=True)

        self.generate(regenerate=False)

    def generate(self, regenerate: bool = False) -> None:
        self._path.parent.mkdir(exist_ok=True, parents=True)

        if regenerate:
            self._path.unlink(missing_ok=True)

        if not self._config.is_valid():
            self._path.touch()

        current_content = self._config.as_dict()
        content = _default_content()

        self._config.dump_dict(
            content if regenerate else dict(merge({}, content, current_content))
        )
        self._config.prepend_no_edit_warning()

    @classmethod
    def get_config(cls) -> TOMLConfiguration:
        return cls()._config

    @classmethod
    def get_path(cls) -> Path:
        return cls()._path

    @classmethod
    def get_variable(cls, key: str):
        return cls()._config[key]

    @classmethod
    def set_variable(cls, key: str, value: object) -> None:
        instance = cls()
        previous = instance._config[key]

        # keep the stored TOML type of the default value
        if isinstance(value, str) and not isinstance(previous, str):
            value = _coerce(value, type(previous))

        instance._config[key] = value


def _coerce(value: str, target: type) -> object:
    if target is bool:
        if value.lower() in ("true", "1", "yes"):
            return True
        if value.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"The value '{value}' is not a valid boolean!")
    if target in (int, float):
        return target(value)
    return value
