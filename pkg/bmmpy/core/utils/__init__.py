from bmmpy.core.utils import exceptions
from bmmpy.core.utils.utils import (
    array_sha256sum,
    derive_seed,
    seconds2str,
    str2interval,
)

__all__ = [
    "exceptions",
    "array_sha256sum",
    "derive_seed",
    "seconds2str",
    "str2interval",
]
