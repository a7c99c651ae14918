import numpy as np

from bmmpy.core.utils.exceptions import InvalidInputError

# independent Philox streams derived from one seed
STREAM_MATRIX: int = 0
STREAM_SIGNAL: int = 1
STREAM_NOISE: int = 2


def make_rng(seed: int, stream: int) -> np.random.Generator:
    seed = int(seed)
    if seed < 0:
        raise InvalidInputError(f"Seeds have to be nonnegative integers, got {seed}!")

    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(int(stream),)))
    )
