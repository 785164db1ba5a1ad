"""Seed splitting.

Every random draw in the package comes from a generator whose seed is a pure
function of ``(master_seed, trial_index, component)``. Scheduling order never
enters, so concurrent trials reproduce serial runs exactly.
"""
from __future__ import annotations

import hashlib
import struct
from typing import NamedTuple

import numpy as np

_U64 = (1 << 64) - 1

SWITCH, JAMMING, NOISE = 1, 2, 3


def hash64(*values: int) -> int:
    """BLAKE2b-64 over the little-endian u64 encoding of ``values``."""
    payload = b"".join(struct.pack("<Q", int(v) & _U64) for v in values)
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class TrialStreams(NamedTuple):
    switch: np.random.Generator
    jamming: np.random.Generator
    noise: np.random.Generator


def trial_streams(master_seed: int, trial_index: int) -> TrialStreams:
    """Independent per-component generators for one Monte Carlo trial.

    Components get separate streams so that, e.g., a RASS run with ``p = 1``
    sees exactly the same jamming waveform and noise as a traditional run.
    """
    stream_seed = hash64(master_seed, trial_index)
    return TrialStreams(
        switch=make_rng(hash64(stream_seed, SWITCH)),
        jamming=make_rng(hash64(stream_seed, JAMMING)),
        noise=make_rng(hash64(stream_seed, NOISE)),
    )
