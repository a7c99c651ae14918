from hashlib import sha256

import numpy as np

_time_prefix = {"n": -9, "µ": -6, "m": -3, "": 0}


def seconds2str(seconds: float) -> str:
    if seconds == 0:
        return "0 s"
    if not np.isfinite(seconds):
        return "∞"
    closest_base = np.floor(np.log10(abs(seconds)))
    exponent = int(np.clip(closest_base - closest_base % 3, -9, 0))
    prefix = {v: k for k, v in _time_prefix.items()}[exponent]
    return f"{np.round(seconds * 10 ** (-exponent), 2)} {prefix}s"


def str2interval(string: str) -> tuple[float, float]:
    components = string.split(",")
    if len(components) != 2:
        raise ValueError(
            "The given string is not a valid interval (e.g. '0,1' or '0.1,1')!"
        )

    lower, upper = float(components[0]), float(components[1])

    if not lower < upper:
        raise ValueError(
            f"The lower bound {lower} of the interval has to be smaller than "
            f"the upper bound {upper}!"
        )

    return lower, upper


def array_sha256sum(array: np.ndarray) -> str:
    data = np.ascontiguousarray(array, dtype="<f8").tobytes()
    return sha256(data).hexdigest()


def derive_seed(*components: object) -> int:
    # 63 bits so seeds survive int64 columns in CSV files
    key = "|".join(str(component) for component in components).encode("utf-8")
    return int.from_bytes(sha256(key).digest()[:8], "little") & (2**63 - 1)
