"""Deterministic stream splitting on top of numpy's Philox generator.

Philox is a named, counter-based 64-bit PRNG, so every stochastic routine in
the package can derive an independent, reproducible stream from a user seed
plus a documented substream id.  The convention is:

* ``philox(seed)`` — the root stream of a run.
* ``philox(seed, FOURIER_STREAM)`` — random test-function generation.
* ``philox(seed + t, MC_STREAM)`` — Monte Carlo trial ``t`` (trials shift the
  seed itself, so a run report can name the exact seed of any trial).
* ``philox(seed, QSUM_STREAM, k)`` — amplitude-estimation sampling for
  substream ``k`` (the pipeline uses ``k = 2 * coefficient_index + part``).

Substream ids are folded into the upper 64 bits of the 128-bit Philox key
with a fixed multiplicative mix, so distinct id tuples give distinct keys.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15

FOURIER_STREAM = 1
MC_STREAM = 2
QSUM_STREAM = 3


def philox(seed: int, *substream: int) -> np.random.Generator:
    """Generator for ``(seed, substream)``; identical arguments, identical stream."""
    acc = 0
    for s in substream:
        acc = (acc * _MIX + int(s) + 1) & _MASK
    key = (int(seed) & _MASK) | (acc << 64)
    return np.random.Generator(np.random.Philox(key=key))
