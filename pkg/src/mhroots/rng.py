"""Deterministic counter-keyed random streams.

Each draw is addressed by a global counter g = sample_index * draws_per_sample
+ draw_index and hashed through a keyed splitmix64-style finalizer, so any
partition of the sample range over workers reproduces the identical stream.
Normal variates use Box-Muller on consecutive counter pairs (no rejection
steps), keeping the per-sample draw count fixed.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * _MIX1
    x = x ^ (x >> np.uint64(27))
    x = x * _MIX2
    x = x ^ (x >> np.uint64(31))
    return x


def _hash_counters(seed: int, counters: np.ndarray) -> np.ndarray:
    key = np.uint64(int(seed) & _MASK64)
    state = _mix((counters + np.uint64(1)) * _GOLDEN) ^ key
    return _mix(state)


def uniforms(seed: int, first_sample: int, n_samples: int, draws: int) -> np.ndarray:
    """(n_samples, draws) doubles in (0, 1], a pure function of (seed, indices)."""
    idx = np.uint64(first_sample) + np.arange(n_samples, dtype=np.uint64)
    g = idx[:, None] * np.uint64(draws) + np.arange(draws, dtype=np.uint64)[None, :]
    bits = _hash_counters(seed, g)
    return ((bits >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def normals(seed: int, first_sample: int, n_samples: int, count: int) -> np.ndarray:
    """(n_samples, count) standard normals via Box-Muller on the counter stream.

    Every sample consumes exactly 2 * ceil(count / 2) uniforms regardless of
    content, so streams never shift.
    """
    if count == 0:
        return np.zeros((n_samples, 0), dtype=np.float64)
    pairs = (count + 1) // 2
    u = uniforms(seed, first_sample, n_samples, 2 * pairs)
    u1 = u[:, 0::2]
    u2 = u[:, 1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    theta = (2.0 * np.pi) * u2
    out = np.empty((n_samples, 2 * pairs), dtype=np.float64)
    out[:, 0::2] = r * np.cos(theta)
    out[:, 1::2] = r * np.sin(theta)
    return out[:, :count]


def integers(seed: int, first_sample: int, n_samples: int, draws: int, bound: int) -> np.ndarray:
    """(n_samples, draws) ints uniform on [0, bound); for corpus generation."""
    if bound <= 0:
        raise ValueError(f"bound must be positive, got {bound}")
    u = uniforms(seed, first_sample, n_samples, draws)
    return np.minimum((u * bound).astype(np.int64), bound - 1)
