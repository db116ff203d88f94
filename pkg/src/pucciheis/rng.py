"""Seeded, portable pseudo-random numbers (splitmix64).

All sampling in this package flows from a single 64-bit seed through this
counter-based splitmix64 stream, so artifacts are reproducible across
machines and languages from the algorithm alone:

    state_i = seed + (i + 1) * 0x9E3779B97F4A7C15   (mod 2^64)
    z = state_i
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9        (mod 2^64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB        (mod 2^64)
    out_i = z ^ (z >> 31)

Uniform doubles take the top 53 bits: u = (out >> 11) * 2^-53.
Gaussians use Box-Muller: z = sqrt(-2 ln u1) * cos(2 pi u2).
"""

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(state):
    z = state
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based splitmix64 stream."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def next_uint64(self, count: int = 1) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + count + 1, dtype=np.uint64)
        self._counter += count
        with np.errstate(over="ignore"):
            states = self._seed + idx * _GAMMA
            return _mix(states)

    def uniform(self, count=None, low=0.0, high=1.0):
        scalar = count is None
        m = 1 if scalar else int(np.prod(count)) if np.iterable(count) else count
        u = (self.next_uint64(m) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        out = low + (high - low) * u
        if scalar:
            return float(out[0])
        if np.iterable(count):
            return out.reshape(count)
        return out

    def normal(self, count=None):
        scalar = count is None
        m = 1 if scalar else int(np.prod(count)) if np.iterable(count) else count
        u1 = self.uniform(m)
        u2 = self.uniform(m)
        u1 = np.maximum(u1, 2.0**-53)  # avoid log(0)
        z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
        if scalar:
            return float(z[0])
        if np.iterable(count):
            return z.reshape(count)
        return z

    def spawn(self, key: int) -> "SplitMix64":
        """Derive an independent substream from this stream's seed and a key."""
        tag = _mix(np.uint64(self._seed) + np.uint64(key + 1) * _M2)
        return SplitMix64(int(tag))
