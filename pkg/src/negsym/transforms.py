"""Rotation and reflection about the image centre, and pairwise averaging.

Angles are in degrees, measured counter-clockwise from the x-axis with the
y-axis pointing up (towards row 0).  Output pixels are filled by inverse
mapping with bilinear interpolation; rotations by multiples of 90 degrees and
reflections about axes at 0/45/90/135 degrees are exact index permutations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import SizeMismatch
from .image import GreyImage, bilinear_sample, disk_mask


@dataclass(frozen=True)
class PlanarTransform:
    kind: str  # "rotation" | "reflection"
    angle: float

    def __post_init__(self):
        if self.kind not in ("rotation", "reflection"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        period = 360.0 if self.kind == "rotation" else 180.0
        object.__setattr__(self, "angle", float(self.angle) % period)

    def apply(self, img: GreyImage) -> GreyImage:
        if self.kind == "rotation":
            return rotate(img, self.angle)
        return reflect(img, self.angle)

    def matrix(self) -> np.ndarray:
        t = math.radians(self.angle)
        if self.kind == "rotation":
            return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        return np.array([[math.cos(2 * t), math.sin(2 * t)], [math.sin(2 * t), -math.cos(2 * t)]])


@lru_cache(maxsize=8)
def _frame(n: int):
    c = (n - 1) / 2.0
    idx = np.arange(n, dtype=np.float64)
    x = np.ascontiguousarray(np.broadcast_to(idx[None, :] - c, (n, n)))
    y = np.ascontiguousarray(np.broadcast_to(c - idx[:, None], (n, n)))
    x.setflags(write=False)
    y.setflags(write=False)
    return c, x, y


def _remap(img: GreyImage, m: np.ndarray) -> GreyImage:
    """Output pixel at frame point p takes the input value at ``m @ p``."""
    n = img.size
    c, x, y = _frame(n)
    xs = m[0, 0] * x + m[0, 1] * y
    ys = m[1, 0] * x + m[1, 1] * y
    out = bilinear_sample(img.pixels, c - ys, c + xs)
    np.clip(out, 0.0, 1.0, out=out)
    return GreyImage(out)


def _rotation_permutation(a: np.ndarray, theta: float):
    if theta % 90.0 == 0.0:
        return np.rot90(a, int(theta // 90.0))
    return None


def _reflection_permutation(a: np.ndarray, theta: float):
    if theta == 0.0:
        return a[::-1, :]
    if theta == 90.0:
        return a[:, ::-1]
    if theta == 45.0:
        return a[::-1, ::-1].T
    if theta == 135.0:
        return a.T
    return None


def _inverse_map(kind: str, theta: float) -> np.ndarray:
    if kind == "rotation":
        t = math.radians(theta)
        cos_t, sin_t = math.cos(t), math.sin(t)
        return np.array([[cos_t, sin_t], [-sin_t, cos_t]])
    # a reflection is its own inverse
    t = math.radians(2.0 * theta)
    cos_t, sin_t = math.cos(t), math.sin(t)
    return np.array([[cos_t, sin_t], [sin_t, -cos_t]])


def rotate(img: GreyImage, theta: float) -> GreyImage:
    """Rotate ``img`` counter-clockwise by ``theta`` degrees about its centre.

    Pixels whose preimage falls outside the grid are set to 0; none of them
    belongs to the inscribed disk.
    """
    theta = float(theta) % 360.0
    if theta == 0.0:
        return img
    exact = _rotation_permutation(img.pixels, theta)
    if exact is not None:
        return GreyImage(exact)
    return _remap(img, _inverse_map("rotation", theta))


def reflect(img: GreyImage, theta: float) -> GreyImage:
    """Mirror ``img`` across the line through the centre tilted ``theta`` degrees."""
    theta = float(theta) % 180.0
    exact = _reflection_permutation(img.pixels, theta)
    if exact is not None:
        return GreyImage(exact)
    return _remap(img, _inverse_map("reflection", theta))


@lru_cache(maxsize=8)
def _disk_frame(n: int):
    m = disk_mask(n)
    c, x, y = _frame(n)
    return m, x[m], y[m]


def disk_samples(img: GreyImage, kind: str, theta: float) -> np.ndarray:
    """Disk pixels of the rotated or reflected image, without building the full grid.

    Bit-identical to ``rotate(img, theta).disk_values()`` (or ``reflect``).
    """
    period = 360.0 if kind == "rotation" else 180.0
    theta = float(theta) % period
    permute = _rotation_permutation if kind == "rotation" else _reflection_permutation
    m, x, y = _disk_frame(img.size)
    exact = permute(img.pixels, theta)
    if exact is not None:
        return exact[m]
    inv = _inverse_map(kind, theta)
    c = (img.size - 1) / 2.0
    xs = inv[0, 0] * x + inv[0, 1] * y
    ys = inv[1, 0] * x + inv[1, 1] * y
    out = bilinear_sample(img.pixels, c - ys, c + xs)
    np.clip(out, 0.0, 1.0, out=out)
    return out


def average(img_a: GreyImage, img_b: GreyImage) -> GreyImage:
    """Pixelwise mean of two equally sized images."""
    if img_a.size != img_b.size:
        raise SizeMismatch(f"cannot average {img_a.size}x{img_a.size} with {img_b.size}x{img_b.size}")
    return GreyImage((img_a.pixels + img_b.pixels) * 0.5)
