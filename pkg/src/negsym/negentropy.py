"""Two-function negentropy approximation for standardized samples.

    J(y) = k1 * E[y exp(-y^2/2)]^2 + k2 * (E[exp(-y^2/2)] - sqrt(1/2))^2

with ``k1 = 36 / (8 sqrt(3) - 9)`` and ``k2 = 24 / (16 sqrt(3) - 27)``.
``sqrt(1/2)`` is the expectation of ``exp(-z^2/2)`` for a standard normal ``z``,
so both terms vanish for Gaussian data.  Expectations are plain sample means;
no density is ever estimated.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import TooFewSamples, ZeroVarianceCurve
from .image import StandardizedSamples, VARIANCE_FLOOR, standardize_values

K1 = 36.0 / (8.0 * math.sqrt(3.0) - 9.0)
K2 = 24.0 / (16.0 * math.sqrt(3.0) - 27.0)
GAUSS_EXP_MEAN = math.sqrt(0.5)
GAUSSIAN_ENTROPY = (1.0 + math.log(2.0 * math.pi)) / 2.0

MIN_CURVE_LENGTH = 8


def _values(samples) -> np.ndarray:
    y = samples.values if isinstance(samples, StandardizedSamples) else np.asarray(samples, dtype=np.float64)
    if y.ndim != 1:
        y = y.ravel()
    if y.shape[0] < 2:
        raise TooFewSamples(f"need at least 2 samples, got {y.shape[0]}")
    return y


def negentropy(samples) -> float:
    """Negentropy (nats) of zero-mean, unit-variance samples.

    The result is a sum of two squares and therefore never negative.  Sample
    means use numpy's pairwise summation over a contiguous array, so the
    value depends only on the input bytes.
    """
    y = _values(samples)
    g = np.exp(-0.5 * (y * y))
    odd = np.mean(y * g)
    even = np.mean(g) - GAUSS_EXP_MEAN
    return float(K1 * odd * odd + K2 * even * even)


def entropy_approx(samples) -> float:
    """Differential entropy estimate: Gaussian entropy minus negentropy."""
    return GAUSSIAN_ENTROPY - negentropy(samples)


def curve_negentropy(curve) -> float:
    """Negentropy of the value distribution of a 1-D curve.

    Raises
    ------
    ZeroVarianceCurve
        If the curve is flat.
    """
    # sorted so that sample order cannot perturb the sums, even by an ulp
    c = np.sort(np.asarray(curve, dtype=np.float64).ravel())
    if c.shape[0] < MIN_CURVE_LENGTH:
        raise TooFewSamples(f"curve needs at least {MIN_CURVE_LENGTH} points, got {c.shape[0]}")
    # relative floor: curves carry negentropy values of arbitrary scale
    scale = max(float(np.max(np.abs(c))), 1.0)
    return negentropy(standardize_values(c, floor=VARIANCE_FLOOR * scale * scale, error=ZeroVarianceCurve))
