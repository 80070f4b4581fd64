"""Deterministic random number streams.

Every stochastic stage derives its generator from the scenario seed plus a
stable path of tags (stage name, tile index, ...). Identical seeds give
identical streams on every run, platform and worker layout; distinct paths
give statistically independent streams.
"""

import hashlib

import numpy as np


def seeded_rng(seed):
    """Root generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def _path_key(path):
    key = []
    for part in path:
        if isinstance(part, (int, np.integer)):
            key.append(int(part) & 0xFFFFFFFF)
        else:
            digest = hashlib.sha256(str(part).encode("utf-8")).digest()
            key.append(int.from_bytes(digest[:4], "little"))
    return tuple(key)


def derive_rng(seed, *path):
    """Generator for sub-stream ``path`` (ints and/or strings) of ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=_path_key(path))
    return np.random.Generator(np.random.PCG64(ss))
