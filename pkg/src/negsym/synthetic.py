"""Synthetic images with exactly known planar symmetry.

Images are sums of polar harmonics ``g_m(r) * cos(q (phi - tilt))`` (plus
sine terms for chiral images) evaluated at pixel centres and passed through
a tanh contrast map.  Cosine-only images are mirror symmetric about
``tilt``; restricting the angular frequencies ``q`` to multiples of the
order makes the symmetry group exact at every real coordinate, so any
residual asymmetry seen by the detector comes from its own interpolation.

Coefficients are drawn from a SplitMix64 stream so that a ``(spec, seed)``
pair yields the same image on every platform.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace
import math
from pathlib import Path

import numpy as np

from .errors import InvalidSpec
from .image import GreyImage, MIN_SIZE, write_pgm

MASK64 = (1 << 64) - 1

REFLECTION = "reflection"
ROTATION = "rotation"
NONE = "none"
TYPES = (REFLECTION, ROTATION, NONE)

MANIFEST_FIELDS = ("filename", "type", "order", "tilt_deg")

# shortest angular wavelength (pixels along the bump's circle) a harmonic may have;
# finer terms are dropped so that bilinear resampling stays accurate
MIN_WAVELENGTH_PX = 16.0

# gain of the tanh contrast map applied to the standardized field; a plain
# harmonic sum has a nearly Gaussian intensity histogram (tiny negentropy)
CONTRAST_GAIN = 2.0


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood), 64-bit state.

    ``next_u64`` follows the reference constants; ``uniform`` takes the top
    53 bits as a double in ``[0, 1)``.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * ((self.next_u64() >> 11) * 2.0 ** -53)

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]`` (inclusive)."""
        return lo + self.next_u64() % (hi - lo + 1)


@dataclass(frozen=True)
class SymmetrySpec:
    symmetry_type: str = REFLECTION
    order: int = 1
    tilt_deg: float = 0.0
    seed: int = 0
    harmonic_count: int = 8
    radial_count: int = 6
    size: int = 256

    def validate(self) -> None:
        if self.symmetry_type not in TYPES:
            raise InvalidSpec(f"unknown symmetry type {self.symmetry_type!r}")
        if self.symmetry_type == ROTATION and not 2 <= self.order <= 9:
            raise InvalidSpec("rotational specs need an order in 2..9")
        if self.symmetry_type == REFLECTION and not 1 <= self.order <= 9:
            raise InvalidSpec("reflectional specs need an order in 1..9")
        if self.symmetry_type == REFLECTION and not 0.0 <= self.tilt_deg < 180.0:
            raise InvalidSpec("tilt must lie in [0, 180)")
        if self.harmonic_count < 1 or self.radial_count < 1:
            raise InvalidSpec("harmonic_count and radial_count must be positive")
        if self.size < MIN_SIZE:
            raise InvalidSpec(f"size must be at least {MIN_SIZE}")


def _polar(n: int):
    c = (n - 1) / 2.0
    idx = np.arange(n, dtype=np.float64)
    x = idx[None, :] - c
    y = c - idx[:, None]
    r = np.hypot(x, y) / c
    phi = np.arctan2(y, x)
    return r, phi


def _radial_profiles(rho: np.ndarray, rng: SplitMix64, count: int):
    """Gaussian bumps at staggered radii, tapered to zero at the disk edge."""
    taper = np.clip(1.0 - rho * rho, 0.0, None)
    width = 0.35 / count
    profiles = []
    for m in range(count):
        centre = 0.2 + 0.7 * (m + rng.uniform(0.25, 0.75)) / count
        profiles.append((centre, np.exp(-0.5 * ((rho - centre) / width) ** 2) * taper))
    return profiles


def _field(spec: SymmetrySpec) -> np.ndarray:
    rng = SplitMix64(spec.seed)
    n = spec.size
    rho, phi = _polar(n)
    radius = (n - 1) / 2.0
    profiles = _radial_profiles(rho, rng, spec.radial_count)
    tilt = math.radians(spec.tilt_deg) if spec.symmetry_type == REFLECTION else 0.0
    if spec.symmetry_type == NONE:
        freqs = list(range(1, 3 * spec.harmonic_count + 1))
    else:
        freqs = [spec.order * k for k in range(1, spec.harmonic_count + 1)]
    chiral = spec.symmetry_type != REFLECTION

    f = np.zeros((n, n))
    for centre, g in profiles:
        f += rng.uniform(-0.5, 0.5) * g
        for k, q in enumerate(freqs, start=1):
            a = rng.uniform(-1.0, 1.0)
            b = rng.uniform(-1.0, 1.0) if chiral else 0.0
            if q > 2.0 * math.pi * centre * radius / MIN_WAVELENGTH_PX:
                continue
            ang = q * (phi - tilt)
            term = a * np.cos(ang)
            if chiral:
                term += b * np.sin(ang)
            f += (g / k) * term
    # strictly monotone and pointwise, so every symmetry of f survives
    return np.tanh(CONTRAST_GAIN * f / f.std())


def _grid_symmetries(spec: SymmetrySpec) -> list:
    """Lattice permutations (from the square's dihedral group) that ``spec`` is invariant under."""
    ops = []
    if spec.symmetry_type == NONE:
        return ops
    if spec.order % 2 == 0:
        ops.append(lambda a: np.rot90(a, 2))
    if spec.order % 4 == 0:
        ops += [lambda a: np.rot90(a, 1), lambda a: np.rot90(a, 3)]
    if spec.symmetry_type == REFLECTION:
        flips = {
            0.0: lambda a: a[::-1, :],
            45.0: lambda a: a[::-1, ::-1].T,
            90.0: lambda a: a[:, ::-1],
            135.0: lambda a: a.T,
        }
        step = 180.0 / spec.order
        for axis, op in flips.items():
            k = (axis - spec.tilt_deg) / step
            if abs(k - round(k)) < 1e-9:
                ops.append(op)
    return ops


def _snap_to_orbits(f: np.ndarray, ops) -> np.ndarray:
    """Copy one value to every pixel of each orbit so lattice symmetries hold bit-for-bit."""
    if not ops:
        return f
    n = f.shape[0]
    idx = np.arange(n * n).reshape(n, n)
    rep = idx.copy()
    for op in ops:
        np.minimum(rep, op(idx), out=rep)
    return f.ravel()[rep]


def generate(spec: SymmetrySpec) -> GreyImage:
    """Render ``spec`` as a min-max scaled :class:`GreyImage`."""
    spec.validate()
    f = _snap_to_orbits(_field(spec), _grid_symmetries(spec))
    lo, hi = f.min(), f.max()
    if not hi > lo:
        raise InvalidSpec("spec produced a constant image")
    out = (f - lo) / (hi - lo)
    return GreyImage(np.clip(out, 0.0, 1.0))


def dataset_specs(count_per_class: int, seed: int, size: int = 256) -> list[tuple[str, SymmetrySpec]]:
    """Filenames and specs for reflectional orders 1-9 and rotational orders 2-9."""
    rng = SplitMix64(seed)
    items = []
    classes = [(REFLECTION, k) for k in range(1, 10)] + [(ROTATION, k) for k in range(2, 10)]
    for kind, order in classes:
        for i in range(count_per_class):
            img_seed = rng.next_u64()
            tilt = 0.0
            if kind == REFLECTION:
                # integer-degree tilt, canonical axis in [0, 180/order)
                tilt = float(rng.randint(0, int(math.ceil(180.0 / order)) - 1))
            spec = SymmetrySpec(kind, order, tilt, img_seed, size=size)
            prefix = "refl" if kind == REFLECTION else "rot"
            items.append((f"{prefix}_o{order}_{i:03d}.pgm", spec))
    return items


def manifest_row(filename: str, spec: SymmetrySpec) -> dict:
    return {
        "filename": filename,
        "type": spec.symmetry_type,
        "order": spec.order if spec.symmetry_type != NONE else 1,
        "tilt_deg": f"{spec.tilt_deg:.3f}" if spec.symmetry_type == REFLECTION else "",
    }


def write_manifest(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=MANIFEST_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def write_images(items, out_dir, manifest_name: str = "manifest.csv") -> list[dict]:
    """Render and write ``(filename, spec)`` pairs plus their manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for filename, spec in items:
        write_pgm(generate(spec), out / filename)
        rows.append(manifest_row(filename, spec))
    write_manifest(rows, out / manifest_name)
    return rows


def generate_dataset(count_per_class: int, seed: int, out_dir, size: int = 256) -> list[dict]:
    """Write a full benchmark dataset; returns the manifest rows."""
    if count_per_class < 1:
        raise InvalidSpec("count_per_class must be positive")
    return write_images(dataset_specs(count_per_class, seed, size), out_dir)


def with_size(spec: SymmetrySpec, size: int) -> SymmetrySpec:
    return replace(spec, size=size)
