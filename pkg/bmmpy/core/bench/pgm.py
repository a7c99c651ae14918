from pathlib import Path

import numpy as np

from bmmpy.core.utils.exceptions import InvalidImageError, OutputExistsError

MAGIC: bytes = b"P5"
MAXVAL: int = 255
_WHITESPACE: bytes = b" \t\n\r\v\f"


def _read_token(data: bytes, position: int) -> tuple[bytes, int]:
    while position < len(data):
        # comments run to the end of the line
        if data[position : position + 1] == b"#":
            end = data.find(b"\n", position)
            position = len(data) if end < 0 else end + 1
        elif data[position] in _WHITESPACE:
            position += 1
        else:
            break

    start = position
    while position < len(data) and data[position] not in _WHITESPACE + b"#":
        position += 1

    if start == position:
        raise InvalidImageError("The PGM header ended unexpectedly!")

    return data[start:position], position


def parse_pgm(data: bytes) -> np.ndarray:
    magic, position = _read_token(data, 0)
    if magic != MAGIC:
        raise InvalidImageError(
            f"Only binary PGM (P5) images are supported, got magic {magic!r}!"
        )

    try:
        width, position = _read_token(data, position)
        height, position = _read_token(data, position)
        maxval, position = _read_token(data, position)
        width, height, maxval = int(width), int(height), int(maxval)
    except ValueError as error:
        raise InvalidImageError(f"The PGM header is malformed: {error}") from error

    if width < 1 or height < 1:
        raise InvalidImageError(f"Invalid PGM size {width}x{height}!")
    if maxval != MAXVAL:
        raise InvalidImageError(f"Only maxval {MAXVAL} is supported, got {maxval}!")

    # exactly one whitespace byte separates the header from the raster
    if position >= len(data) or data[position] not in _WHITESPACE:
        raise InvalidImageError("The PGM header is not terminated by whitespace!")
    raster = data[position + 1 :]

    if len(raster) < width * height:
        raise InvalidImageError(
            f"The PGM raster holds {len(raster)} bytes, expected {width * height}!"
        )

    return (
        np.frombuffer(raster[: width * height], dtype=np.uint8)
        .reshape(height, width)
        .copy()
    )


def read_pgm(path: str | Path) -> np.ndarray:
    return parse_pgm(Path(path).read_bytes())


def encode_pgm(pixels: np.ndarray) -> bytes:
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise InvalidImageError(
            f"Only two-dimensional grayscale images can be written, got {pixels.shape}!"
        )
    if pixels.dtype != np.uint8:
        raise InvalidImageError(f"PGM pixels have to be uint8, got {pixels.dtype}!")

    height, width = pixels.shape
    header = f"P5\n{width} {height}\n{MAXVAL}\n".encode("ascii")

    return header + np.ascontiguousarray(pixels).tobytes()


def write_pgm(path: str | Path, pixels: np.ndarray, overwrite: bool = False) -> Path:
    path = Path(path)
    if path.exists() and not overwrite:
        raise OutputExistsError(f"The file '{path}' already exists!")

    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_pgm(pixels))

    return path
