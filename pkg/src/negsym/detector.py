"""Negentropic symmetry detection.

The detector compares the baseline negentropy of an image with the
negentropy of the image averaged with rotated copies (one per candidate
order) and with reflected copies (one per sampled axis angle).  Orders whose
rotational average keeps the baseline within a relative tolerance are
candidates; the largest candidate under which the reflectional curve is
periodic is the symmetry order, and an extremum of that curve about which
the curve is mirror symmetric gives the tilt of a reflection axis.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
import math
from typing import Optional

import numpy as np

from .errors import NearGaussianImage, ZeroVarianceCurve
from .image import GreyImage, resize, standardize, standardize_values
from .negentropy import curve_negentropy, negentropy
from .synthetic import NONE, REFLECTION, ROTATION
from .transforms import disk_samples


@dataclass(frozen=True)
class DetectorConfig:
    k_max: int = 9
    delta: float = 0.05
    angle_step: float = 1.0
    working_size: int = 256
    baseline_floor: float = 1e-6
    # per-test overrides of ``delta``; None means use ``delta``
    order_delta: Optional[float] = None
    extremum_delta: Optional[float] = None
    mirror_delta: Optional[float] = None
    workers: int = field(default=1, compare=False)

    def __post_init__(self):
        if not 2 <= self.k_max <= 36:
            raise ValueError(f"k_max must lie in 2..36, got {self.k_max}")
        for name in ("delta", "order_delta", "extremum_delta", "mirror_delta"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {v}")
        if not self.angle_step > 0 or not _divides_180(self.angle_step):
            raise ValueError(f"angle_step must divide 180 exactly, got {self.angle_step}")
        if self.working_size < 8:
            raise ValueError("working_size must be at least 8")

    @property
    def n_angles(self) -> int:
        return int(round(180.0 / self.angle_step))

    def tol(self, which: str) -> float:
        v = getattr(self, f"{which}_delta")
        return self.delta if v is None else v

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        return d


def _divides_180(step: float) -> bool:
    m = 180.0 / step
    return abs(m - round(m)) < 1e-9 and round(m) >= 8


@dataclass(frozen=True, eq=False)
class RotationalCurve:
    """Negentropy of the image averaged with its ``360/K`` rotation, ``K = 1..k_max``.

    ``values[0]`` belongs to ``K = 1`` and is the baseline.
    """

    values: np.ndarray

    @property
    def baseline(self) -> float:
        return float(self.values[0])

    def at(self, order: int) -> float:
        return float(self.values[order - 1])

    @property
    def k_max(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class ReflectionalCurve:
    """Negentropy of the image averaged with its reflection about axes ``i * step``."""

    values: np.ndarray
    angle_step: float
    baseline: float

    def __len__(self):
        return len(self.values)

    @property
    def angles(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.angle_step


@dataclass(frozen=True, eq=False)
class SymmetryResult:
    order: int
    symmetry_type: str
    tilt_deg: Optional[float]
    rotational: RotationalCurve
    reflectional: ReflectionalCurve
    config: DetectorConfig

    @property
    def baseline(self) -> float:
        return self.rotational.baseline

    @property
    def tilt_axes(self) -> list[float]:
        if self.tilt_deg is None:
            return []
        return axes_from_tilt(self.tilt_deg, self.order)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "type": self.symmetry_type,
            "tilt_deg": self.tilt_deg,
            "tilt_axes": self.tilt_axes,
            "baseline_j": self.baseline,
            "rotational_curve": [float(v) for v in self.rotational.values],
            "reflectional_curve": [float(v) for v in self.reflectional.values],
            "config": self.config.as_dict(),
        }


def axes_from_tilt(tilt: float, order: int) -> list[float]:
    """The ``order`` reflection axes through ``tilt`` spaced ``180/order`` apart, sorted in [0, 180)."""
    return sorted(round((tilt + k * 180.0 / order) % 180.0, 9) for k in range(order))


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    # map() yields in submission order, so the assembled curve is independent of scheduling
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _prepare(img: GreyImage, cfg: DetectorConfig) -> GreyImage:
    return img if img.size == cfg.working_size else resize(img, cfg.working_size)


def _averaged_negentropy(img: GreyImage, kind: str, theta: float) -> float:
    # same numbers as negentropy(standardize(average(img, rotate/reflect(img, theta))))
    mixed = (img.disk_values() + disk_samples(img, kind, theta)) * 0.5
    return negentropy(standardize_values(mixed))


def rotational_negentropy(img: GreyImage, cfg: DetectorConfig = DetectorConfig()) -> RotationalCurve:
    base = negentropy(standardize(img))
    rest = _map(lambda k: _averaged_negentropy(img, "rotation", 360.0 / k), range(2, cfg.k_max + 1), cfg.workers)
    return RotationalCurve(np.array([base] + rest))


def candidate_orders(curve: RotationalCurve, cfg: DetectorConfig = DetectorConfig()) -> list[int]:
    """Orders whose rotational negentropy lies within the relative tolerance of the baseline.

    Raises
    ------
    NearGaussianImage
        If the baseline is below ``cfg.baseline_floor``.
    """
    base = curve.baseline
    if base < cfg.baseline_floor:
        raise NearGaussianImage(f"baseline negentropy {base:.3g} is below the floor {cfg.baseline_floor:g}")
    tol = cfg.tol("order")
    return [1] + [k for k in range(2, curve.k_max + 1) if abs(curve.at(k) - base) / base <= tol]


def reflectional_negentropy(img: GreyImage, cfg: DetectorConfig = DetectorConfig(),
                            baseline: Optional[float] = None) -> ReflectionalCurve:
    if baseline is None:
        baseline = negentropy(standardize(img))
    angles = [i * cfg.angle_step for i in range(cfg.n_angles)]
    values = _map(lambda t: _averaged_negentropy(img, "reflection", t), angles, cfg.workers)
    return ReflectionalCurve(np.array(values), cfg.angle_step, baseline)


def circular_shift(values: np.ndarray, lag: float) -> np.ndarray:
    """``out[i] = values[i + lag]`` on a circular domain, linear between samples."""
    m = len(values)
    pos = (np.arange(m) + lag) % m
    lo = np.floor(pos).astype(np.intp)
    frac = pos - lo
    hi = (lo + 1) % m
    return values[lo] * (1.0 - frac) + values[hi] * frac


def is_periodic(curve: ReflectionalCurve, order: int, cfg: DetectorConfig = DetectorConfig(),
                baseline: Optional[float] = None) -> bool:
    """Whether the reflectional curve repeats with period ``180/order`` degrees.

    The deviation between the curve and its copy shifted by one period is
    averaged over the domain and compared, relative to the baseline, with
    the tolerance.  Order 1 is trivially periodic.
    """
    if order <= 1:
        return True
    if baseline is None:
        baseline = curve.baseline
    lag = 180.0 / (order * curve.angle_step)
    dev = np.mean(np.abs(curve.values - circular_shift(curve.values, lag)))
    return bool(dev / baseline <= cfg.tol("order"))


def find_extrema(curve: ReflectionalCurve, baseline: Optional[float] = None,
                 cfg: DetectorConfig = DetectorConfig()) -> list[int]:
    """Circular local extrema of the curve lying within tolerance of the baseline.

    A run of equal samples counts as one extremum located at its centre
    (lower index on ties).  A completely flat curve is treated as a single
    plateau centred at index 0.
    """
    if baseline is None:
        baseline = curve.baseline
    v = np.asarray(curve.values)
    m = len(v)
    tol = cfg.tol("extremum")

    def eligible(i):
        return abs(v[i] - baseline) / baseline <= tol

    if np.all(v == v[0]):
        return [0] if eligible(0) else []

    # rotate so that index 0 starts a run, then walk runs of equal values
    start = next(i for i in range(m) if v[i] != v[i - 1])
    runs = []
    i = 0
    while i < m:
        j = i
        while j + 1 < m and v[(start + j + 1) % m] == v[(start + i) % m]:
            j += 1
        runs.append((i, j - i + 1))
        i = j + 1

    out = []
    for r, (s, length) in enumerate(runs):
        here = v[(start + s) % m]
        prev = v[(start + runs[r - 1][0]) % m]
        nxt = v[(start + runs[(r + 1) % len(runs)][0]) % m]
        if (here > prev and here > nxt) or (here < prev and here < nxt):
            idx = (start + s + (length - 1) // 2) % m
            if eligible(idx):
                out.append(idx)
    return sorted(out)


def mirror_error(values: np.ndarray, centre: int, reference: Optional[float]) -> float:
    """Relative change of the curve's negentropy when it is symmetrized about ``centre``.

    ``reference`` is the negentropy of the unsymmetrized curve, or None if that
    curve is flat.
    """
    if reference is None:
        return 0.0
    m = len(values)
    mirrored = values[(2 * centre - np.arange(m)) % m]
    try:
        jp = curve_negentropy(0.5 * (values + mirrored))
    except ZeroVarianceCurve:
        return 0.0
    return abs(reference - jp) / reference if reference > 0 else math.inf


def neg_tilt_angle(curve: ReflectionalCurve, extrema: list[int],
                   cfg: DetectorConfig = DetectorConfig()) -> Optional[float]:
    """Tilt (degrees) of the extremum about which the curve is most nearly mirror symmetric.

    Returns None when there is no extremum or the best mirror error exceeds
    the tolerance.
    """
    if not extrema:
        return None
    values = np.asarray(curve.values, dtype=np.float64)
    try:
        reference = curve_negentropy(values)
    except ZeroVarianceCurve:
        reference = None
    errors = [mirror_error(values, e, reference) for e in extrema]
    best = int(np.argmin(errors))
    if errors[best] <= cfg.tol("mirror"):
        return float(extrema[best] * curve.angle_step)
    return None


def detect(img: GreyImage, cfg: DetectorConfig = DetectorConfig()) -> SymmetryResult:
    """Order, type and tilt of the global symmetry of ``img`` about its centre.

    Raises
    ------
    ZeroVarianceImage
        If the image is constant over the inscribed disk.
    NearGaussianImage
        If the baseline negentropy is too small for relative comparisons.
    """
    img = _prepare(img, cfg)
    rot = rotational_negentropy(img, cfg)
    orders = candidate_orders(rot, cfg)
    ref = reflectional_negentropy(img, cfg, baseline=rot.baseline)

    order, tilt = 1, None
    for k in reversed(orders):
        if is_periodic(ref, k, cfg):
            order = k
            tilt = neg_tilt_angle(ref, find_extrema(ref, rot.baseline, cfg), cfg)
            break

    if tilt is not None:
        kind = REFLECTION
    elif order >= 2:
        kind = ROTATION
    else:
        kind = NONE
    return SymmetryResult(order, kind, tilt, rot, ref, cfg)
