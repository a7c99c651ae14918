from pathlib import Path

import toml

from bmmpy.core.utils.exceptions import InvalidTOMLConfigurationError


def _split_key(key: str) -> list[str]:
    return key.split(".")


class TOMLConfiguration:
    def __init__(
        self,
        path: str | Path,
        create_if_not_exists: bool = False,
        none_if_unknown_key: bool = False,
    ):
        self._path: Path = Path(path)
        self._none_if_unknown_key: bool = none_if_unknown_key

        if self._path.suffix != ".toml":
            raise InvalidTOMLConfigurationError(
                f"The configuration file '{self._path}' has to be a TOML file!"
            )

        if create_if_not_exists:
            self.create()

    def is_valid(self) -> bool:
        return self._path.is_file()

    def _load(self) -> dict:
        if not self.is_valid():
            raise InvalidTOMLConfigurationError(
                f"The configuration could not be found at location '{self._path}'!"
            )
        try:
            return toml.load(self._path)
        except toml.TomlDecodeError as error:
            raise InvalidTOMLConfigurationError(
                f"The configuration at '{self._path}' is not valid TOML: {error}"
            ) from error

    def __getitem__(self, item: str):
        content = self._load()

        for key in _split_key(item):
            if not isinstance(content, dict):
                raise KeyError(
                    f"The key component '{key}' is set to a non-dict value and "
                    "therefore there cannot be a child value!"
                )
            if key not in content:
                if self._none_if_unknown_key:
                    return None
                raise KeyError(item)
            content = content[key]

        return content

    def __setitem__(self, key: str, value: object):
        content_dict = self._load()

        *parents, leaf = _split_key(key)
        content = content_dict
        for parent in parents:
            child = content.setdefault(parent, dict())
            if not isinstance(child, dict):
                raise KeyError(
                    f"The key component '{parent}' is already set to a non-dict value!"
                )
            content = child

        content[leaf] = value
        self.dump_dict(content_dict)

    def __contains__(self, item: str):
        try:
            return self[item] is not None
        except KeyError:
            return False

    def create(self, create_parents: bool = True) -> None:
        if create_parents:
            self._path.parent.mkdir(exist_ok=True, parents=True)

        self._path.touch(exist_ok=True)

    def dump_dict(self, content: dict) -> None:
        with open(self._path, "w") as file:
            toml.dump(o=content, f=file)

    def as_dict(self) -> dict:
        return self._load()

    def prepend_comments(self, comments: list[str] | str) -> None:
        if isinstance(comments, str):
            comments = [comments]

        content = self._path.read_text()
        header = "\n".join("# " + comment for comment in comments)
        self._path.write_text(header + "\n\n" + content)

    def get_keys(self, non_dict_only: bool = False) -> list[str]:
        def recursive_keys(dictionary: dict, parent: str | None = None) -> list[str]:
            keys = []
            for key, value in dictionary.items():
                full_key = f"{parent}.{key}" if parent is not None else key
                if isinstance(value, dict):
                    if not non_dict_only:
                        keys.append(full_key)
                    keys.extend(recursive_keys(dictionary=value, parent=full_key))
                else:
                    keys.append(full_key)
            return keys

        return recursive_keys(dictionary=self.as_dict())

    def prepend_no_edit_warning(self) -> None:
        line = "=" * 76
        self.prepend_comments(
            [
                line,
                "   WARNING! Edit this file with 'bmmpy config set' only.",
                "   Run 'bmmpy config reset --force' to restore the defaults.",
                line,
            ]
        )

    def get_path(self) -> Path:
        return self._path
