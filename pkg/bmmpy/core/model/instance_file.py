import base64
import binascii
from pathlib import Path

import numpy as np
import toml

from bmmpy.core.model.problem import (
    ProblemInstance,
    SensingModel,
    SignalPrior,
    synthesize,
)
from bmmpy.core.utils.exceptions import (
    BmmpyError,
    InvalidChecksumError,
    InvalidInstanceFileError,
    OutputExistsError,
    SchemaVersionError,
)
from bmmpy.core.utils.utils import array_sha256sum

SCHEMA_VERSION: int = 1


def encode_array(array: np.ndarray) -> dict:
    array = np.ascontiguousarray(array, dtype="<f8")
    return {
        "shape": list(array.shape),
        "data": base64.b64encode(array.tobytes()).decode("ascii"),
    }


def decode_array(content: dict) -> np.ndarray:
    shape = tuple(int(size) for size in content["shape"])
    raw = base64.b64decode(content["data"], validate=True)

    expected = int(np.prod(shape)) * 8
    if len(raw) != expected:
        raise InvalidInstanceFileError(
            f"The array data holds {len(raw)} bytes, but the shape {shape} "
            f"requires {expected} bytes!"
        )

    return np.frombuffer(raw, dtype="<f8").reshape(shape).astype(np.float64)


def instance_to_dict(instance: ProblemInstance) -> dict:
    content = {
        "schema_version": SCHEMA_VERSION,
        "seed": instance.seed,
        "model": {
            "m": instance.m,
            "n": instance.n,
            "sigma": instance.model.sigma,
            "sigma_w": instance.model.sigma_w,
        },
        "prior": {
            "family": instance.prior.family,
            "a": instance.prior.a,
            "b": instance.prior.b,
        },
        "signal": {
            "k": instance.k,
            "support": instance.support_true.tolist(),
            "y_sha256": array_sha256sum(instance.y),
            "phi": encode_array(instance.phi),
            "x_true": encode_array(instance.x_true),
        },
    }

    if instance.snr_db is not None:
        content["snr_db"] = instance.snr_db

    return content


def instance_from_dict(content: dict) -> ProblemInstance:
    version = content.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"Unsupported instance schema version '{version}', "
            f"expected {SCHEMA_VERSION}!"
        )

    try:
        model = SensingModel(
            m=int(content["model"]["m"]),
            n=int(content["model"]["n"]),
            sigma=float(content["model"]["sigma"]),
            sigma_w=float(content["model"]["sigma_w"]),
        )
        prior = SignalPrior(
            a=float(content["prior"]["a"]),
            b=float(content["prior"]["b"]),
            family=content["prior"]["family"],
        )
        seed = int(content["seed"])
        signal = content["signal"]
        phi = decode_array(signal["phi"])
        x_true = decode_array(signal["x_true"])
        support = np.asarray(signal["support"], dtype=np.int64)
        checksum = signal["y_sha256"]
    except (KeyError, TypeError, ValueError, binascii.Error) as error:
        raise InvalidInstanceFileError(
            f"The instance content is incomplete or malformed: {error!r}"
        ) from error

    # the noise is not stored, it is drawn again from the seed
    y = synthesize(phi, x_true, model.sigma_w, seed)
    if array_sha256sum(y) != checksum:
        raise InvalidChecksumError(
            "The regenerated measurements do not match the stored checksum!"
        )

    # noiseless instances carry no snr_db key
    snr_db = content.get("snr_db")

    return ProblemInstance(
        phi=phi,
        y=y,
        x_true=x_true,
        support_true=support,
        model=model,
        prior=prior,
        snr_db=None if snr_db is None else float(snr_db),
        seed=seed,
    )


def save_instance(
    instance: ProblemInstance, path: str | Path, overwrite: bool = False
) -> Path:
    path = Path(path)

    if path.exists() and not overwrite:
        raise OutputExistsError(f"The file '{path}' already exists!")

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as file:
        toml.dump(instance_to_dict(instance), file)

    return path


def load_instance(path: str | Path) -> ProblemInstance:
    path = Path(path)

    try:
        content = toml.load(path)
    except toml.TomlDecodeError as error:
        raise InvalidInstanceFileError(
            f"The instance file '{path}' could not be parsed: {error}"
        ) from error
    except UnicodeDecodeError as error:
        raise InvalidInstanceFileError(
            f"The instance file '{path}' is not a text file!"
        ) from error

    try:
        return instance_from_dict(content)
    except BmmpyError as error:
        raise type(error)(f"{error.args[0]} (file '{path}')") from error
