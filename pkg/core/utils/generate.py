import hashlib

import numpy as np


def make_rng(seed: int, *stream: int | str) -> np.random.Generator:
    """
    Seeded generator for one named stream of a scenario.

    The same (seed, stream) always yields the same sequence, independently of
    how many other streams were drawn before, which keeps concurrent suite
    runs reproducible.
    """
    key = ':'.join([str(seed), *[str(s) for s in stream]])
    digest = hashlib.sha256(key.encode('utf-8')).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], 'little'))


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    angle = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([np.cos(angle), np.sin(angle)])
