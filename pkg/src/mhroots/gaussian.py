"""Structured Gaussian random matrices and the mean absolute determinant.

The random matrix attached to a shape has independent mean-zero normal
entries whose variance in column group j is the degree of the row's equation
in block j.  The Monte Carlo mean of |det| over such draws is the kernel of
the expected-root-count formula; it is estimated here with counter-keyed
streams so that the result is a pure function of (seed, samples), bitwise
independent of the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .permanent import permanent_float
from .shape import ShapeSpec, expand_delta
from .specialfn import SQRT_PI, gamma_half

BATCH = 1 << 16
LOGDET_DIM = 40


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo mean with its standard error and replay coordinates."""

    mean: float
    stderr: float
    samples: int
    seed: int
    elapsed: float = 0.0


def variance_profile(spec: ShapeSpec) -> np.ndarray:
    """Entry variances of the shape's random matrix (column-expanded degrees)."""
    return expand_delta(spec, sqrt=False).astype(np.float64)


def _check_profile(variances) -> np.ndarray:
    arr = np.asarray(variances, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"variance profile must be square, got shape {arr.shape}")
    if arr.size and arr.min() < 0:
        raise ValueError("variances must be nonnegative")
    return arr


def sample_matrix(variances, seed: int, index: int = 0) -> np.ndarray:
    """One draw of the structured matrix for stream position ``index``.

    Zero-variance entries are exact structural zeros.
    """
    arr = _check_profile(variances)
    n = arr.shape[0]
    z = rng.normals(seed, index, 1, n * n).reshape(n, n)
    return z * np.sqrt(arr)


def _batch_indices(samples: int):
    return range((samples + BATCH - 1) // BATCH)


def _batch_absdet_moments(sigma_flat: np.ndarray, n: int, seed: int, b: int, samples: int):
    start = b * BATCH
    count = min(BATCH, samples - start)
    z = rng.normals(seed, start, count, n * n)
    mats = (z * sigma_flat[None, :]).reshape(count, n, n)
    if n <= LOGDET_DIM:
        a = np.abs(np.linalg.det(mats))
        return count, float(a.sum()), float((a * a).sum()), None
    sign, logabs = np.linalg.slogdet(mats)
    logabs = np.where(sign == 0, -np.inf, logabs)
    return count, None, None, logabs


def mc_abs_det(variances, samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Monte Carlo mean of |det| of the structured Gaussian matrix.

    The estimate depends only on (seed, samples): the sample range is cut
    into fixed-size batches whose partial sums are folded in batch order, so
    any worker count gives bitwise identical results.  Determinants use
    pivoted triangular factorization; above dimension 40 the batch moments
    are accumulated in the log domain.
    """
    arr = _check_profile(variances)
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    n = arr.shape[0]
    t0 = time.perf_counter()
    if n == 0:
        return MCEstimate(1.0, 0.0, samples, seed, time.perf_counter() - t0)
    sigma_flat = np.sqrt(arr).ravel()
    batches = list(_batch_indices(samples))
    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda b: _batch_absdet_moments(sigma_flat, n, seed, b, samples),
                    batches,
                )
            )
    else:
        results = [_batch_absdet_moments(sigma_flat, n, seed, b, samples) for b in batches]

    if n <= LOGDET_DIM:
        total = 0
        s1 = 0.0
        s2 = 0.0
        for count, b1, b2, _ in results:
            total += count
            s1 += b1
            s2 += b2
        mean = s1 / total
        var = max(0.0, (s2 - total * mean * mean) / (total - 1))
    else:
        # streaming log-sum-exp over batches, folded in batch order
        total = 0
        shift = -np.inf
        e1 = 0.0
        e2 = 0.0
        for count, _, _, logabs in results:
            total += count
            m = float(np.max(logabs, initial=-np.inf))
            if m > shift:
                if shift > -np.inf:
                    scale = math.exp(shift - m)
                    e1 *= scale
                    e2 *= scale * scale
                shift = m
            if shift > -np.inf:
                w = np.exp(logabs - shift)
                e1 += float(w.sum())
                e2 += float((w * w).sum())
        if shift == -np.inf:
            mean, var = 0.0, 0.0
        else:
            mean = math.exp(shift) * e1 / total
            second = math.exp(2 * shift) * e2
            var = max(0.0, (second - total * mean * mean) / (total - 1))
    stderr = math.sqrt(var / total)
    return MCEstimate(mean, stderr, samples, seed, time.perf_counter() - t0)


def abs_det_closed_standard(n: int) -> float:
    """Exact mean |det| of an n x n standard Gaussian matrix:
    2**(n/2) * Gamma((n+1)/2) / Gamma(1/2)."""
    if n < 0:
        raise ValueError(f"dimension must be nonnegative, got {n}")
    if n == 0:
        return 1.0
    g = gamma_half(n + 1)
    return 2.0 ** (n / 2.0) * float(g.rational) * SQRT_PI ** (g.sqrt_pi - 1)


def minor_expansion_bounds(variances, row: int, minor_means) -> tuple[float, float]:
    """Two-sided bounds on E|det| from expanding along ``row`` (1-based).

    Given the mean absolute minor determinants m_b for deleting ``row`` and
    column b, returns

        upper = sqrt(2/pi) * sum_b sigma_rb * m_b
        lower = sqrt(2/pi) * sqrt(sum_b sigma_rb^2 * m_b^2)
    """
    arr = _check_profile(variances)
    n = arr.shape[0]
    if not 1 <= row <= n:
        raise ValueError(f"row index {row} outside 1..{n}")
    m = np.asarray(minor_means, dtype=np.float64)
    if m.shape != (n,):
        raise ValueError(f"need {n} minor means, got shape {m.shape}")
    sig = np.sqrt(arr[row - 1])
    c = math.sqrt(2.0 / math.pi)
    upper = c * float(np.dot(sig, m))
    lower = c * math.sqrt(float(np.dot(arr[row - 1], m * m)))
    return upper, lower


def permanent_sandwich(variances) -> tuple[float, float]:
    """Full-induction permanent bounds on E|det|:

        (2/pi)**(n/2) * per(sigma) >= E|det| >= (2/pi)**(n/2) * sqrt(per(sigma^2)).
    """
    arr = _check_profile(variances)
    n = arr.shape[0]
    factor = (2.0 / math.pi) ** (n / 2.0)
    upper = factor * permanent_float(np.sqrt(arr))
    lower = factor * math.sqrt(permanent_float(arr))
    return upper, lower
