"""Greyscale image container, raster I/O, resampling and standardization.

All statistics in the package are taken over the inscribed disk of the
square grid (pixels whose centre lies within ``(n - 1) / 2`` of the image
centre).  Rotations and reflections about the centre map that disk onto
itself, so averaging an image with a transformed copy never pulls in
content from outside the grid.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DegenerateImage, UnsupportedFormat, ZeroVarianceImage

MIN_SIZE = 8
VARIANCE_FLOOR = 1e-12
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True, eq=False)
class GreyImage:
    """Square intensity grid with values in ``[0, 1]``.

    The pixel array is stored read-only; every operation returns a new image.
    Row index grows downwards, column index to the right, and the geometric
    frame used by the transforms has its origin at ``((n-1)/2, (n-1)/2)``
    with the y-axis pointing up.
    """

    pixels: np.ndarray

    def __post_init__(self):
        a = np.array(self.pixels, dtype=np.float64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DegenerateImage(f"image must be a square 2-D grid, got shape {a.shape}")
        if a.shape[0] < MIN_SIZE:
            raise DegenerateImage(f"image side {a.shape[0]} is below the minimum of {MIN_SIZE}")
        if not np.all(np.isfinite(a)) or a.min() < 0.0 or a.max() > 1.0:
            raise ValueError("intensities must lie in [0, 1]")
        a.setflags(write=False)
        object.__setattr__(self, "pixels", a)

    @property
    def size(self) -> int:
        return self.pixels.shape[0]

    @property
    def mask(self) -> np.ndarray:
        return disk_mask(self.size)

    def disk_values(self) -> np.ndarray:
        """Intensities inside the inscribed disk, in row-major order."""
        return self.pixels[self.mask]

    def to_uint8(self) -> np.ndarray:
        return np.rint(self.pixels * 255.0).astype(np.uint8)


@lru_cache(maxsize=16)
def disk_mask(n: int) -> np.ndarray:
    """Boolean mask of pixels within ``(n-1)/2`` of the grid centre.

    The comparison is done on squared distances scaled by 4 so it stays in
    exact integer arithmetic for both odd and even ``n``.
    """
    if n < MIN_SIZE:
        raise DegenerateImage(f"mask side {n} is below the minimum of {MIN_SIZE}")
    d = 2 * np.arange(n, dtype=np.int64) - (n - 1)
    m = (d[:, None] ** 2 + d[None, :] ** 2) <= (n - 1) ** 2
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class StandardizedSamples:
    """Zero-mean, unit-variance 1-D sample vector."""

    values: np.ndarray

    @property
    def count(self) -> int:
        return self.values.shape[0]


def standardize_values(values, floor: float = VARIANCE_FLOOR, error=ZeroVarianceImage) -> StandardizedSamples:
    x = np.asarray(values, dtype=np.float64).ravel()
    mean = x.mean()
    centred = x - mean
    var = np.mean(centred * centred)
    if not var > floor:
        raise error(f"sample variance {var:.3g} is not above the floor {floor:g}")
    return StandardizedSamples(centred / np.sqrt(var))


def standardize(img: GreyImage, mask: np.ndarray | None = None) -> StandardizedSamples:
    """Disk pixels of ``img`` shifted to zero mean and scaled to unit variance.

    Raises
    ------
    ZeroVarianceImage
        If the masked intensities are (numerically) constant.
    """
    if mask is None:
        mask = img.mask
    return standardize_values(img.pixels[mask])


def load_image(path) -> GreyImage:
    """Read an 8-bit greyscale or RGB raster (PGM or PNG) as a :class:`GreyImage`.

    RGB input is converted with BT.601 luma weights and non-square input is
    centre-cropped to its largest inscribed square.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image: {path}")
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            if mode in ("L", "LA"):
                a = np.asarray(im.getchannel("L"), dtype=np.float64) / 255.0
            elif mode in ("RGB", "RGBA"):
                rgb = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
                a = rgb @ np.array(LUMA_WEIGHTS)
            elif mode == "1":
                a = np.asarray(im.convert("L"), dtype=np.float64) / 255.0
            else:
                raise UnsupportedFormat(f"{path}: unsupported pixel mode {mode!r}")
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path}: not a readable PGM/PNG raster") from exc

    h, w = a.shape
    n = min(h, w)
    if n < MIN_SIZE:
        raise DegenerateImage(f"{path}: {w}x{h} is too small")
    top, left = (h - n) // 2, (w - n) // 2
    return GreyImage(np.clip(a[top:top + n, left:left + n], 0.0, 1.0))


def write_pgm(img: GreyImage, path) -> None:
    """Write ``img`` as an 8-bit binary (P5) PGM."""
    Image.fromarray(img.to_uint8(), mode="L").save(Path(path), format="PPM")


def bilinear_sample(a: np.ndarray, rows: np.ndarray, cols: np.ndarray, fill: float = 0.0) -> np.ndarray:
    """Bilinear interpolation of ``a`` at fractional ``(rows, cols)``.

    Points further than 1e-9 pixels outside the grid take ``fill``.  Points
    landing exactly on a pixel centre return that pixel's value bit-for-bit.
    """
    n_r, n_c = a.shape
    tol = 1e-9
    inside = (rows >= -tol) & (rows <= n_r - 1 + tol) & (cols >= -tol) & (cols <= n_c - 1 + tol)
    r = np.clip(rows, 0.0, n_r - 1)
    c = np.clip(cols, 0.0, n_c - 1)
    r0 = np.minimum(r.astype(np.intp), n_r - 2)
    c0 = np.minimum(c.astype(np.intp), n_c - 2)
    fr = r - r0
    fc = c - c0
    flat = a.ravel()
    i00 = r0 * n_c + c0
    top = flat.take(i00) * (1.0 - fc) + flat.take(i00 + 1) * fc
    i00 += n_c
    bottom = flat.take(i00) * (1.0 - fc) + flat.take(i00 + 1) * fc
    out = top * (1.0 - fr) + bottom * fr
    if not inside.all():
        out = np.where(inside, out, fill)
    return out


def resize(img: GreyImage, target: int) -> GreyImage:
    """Bilinear resampling to a ``target x target`` grid (pixel-centre aligned)."""
    if target < MIN_SIZE:
        raise DegenerateImage(f"target size {target} is below the minimum of {MIN_SIZE}")
    n = img.size
    if target == n:
        return img
    scale = n / target
    src = (np.arange(target) + 0.5) * scale - 0.5
    src = np.clip(src, 0.0, n - 1)
    rows = np.broadcast_to(src[:, None], (target, target))
    cols = np.broadcast_to(src[None, :], (target, target))
    out = bilinear_sample(img.pixels, rows, cols)
    return GreyImage(np.clip(out, 0.0, 1.0))
