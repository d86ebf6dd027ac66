"""Dataset evaluation against a ground-truth manifest."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass
import os
from pathlib import Path
from typing import Optional

from .detector import DetectorConfig, detect
from .errors import MalformedManifest, MissingImage, NegsymError
from .image import load_image
from .synthetic import MANIFEST_FIELDS, NONE, REFLECTION, TYPES

STRICT_DEG = 2.0
LENIENT_DEG = 10.0


@dataclass(frozen=True)
class GroundTruthRecord:
    filename: str
    symmetry_type: str
    order: int
    tilt_deg: Optional[float] = None


def read_manifest(path) -> list[GroundTruthRecord]:
    """Parse a ``filename,type,order,tilt_deg`` CSV into records."""
    path = Path(path)
    if not path.is_file():
        raise MalformedManifest(f"no such manifest: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != MANIFEST_FIELDS:
            raise MalformedManifest(f"{path}: header must be {','.join(MANIFEST_FIELDS)}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            try:
                kind = row["type"]
                if kind not in TYPES:
                    raise ValueError(f"unknown type {kind!r}")
                order = int(row["order"])
                tilt = row["tilt_deg"].strip()
                tilt = float(tilt) if tilt else None
                if kind == REFLECTION and tilt is None:
                    raise ValueError("reflectional rows need a tilt")
                if not row["filename"]:
                    raise ValueError("empty filename")
            except (ValueError, TypeError, AttributeError) as exc:
                raise MalformedManifest(f"{path}:{lineno}: {exc}") from exc
            records.append(GroundTruthRecord(row["filename"], kind, order, tilt if kind == REFLECTION else None))
    return records


def angular_distance(a: float, b: float, period: float = 180.0) -> float:
    """Circular distance between two angles on a domain of the given period."""
    d = (a - b) % period
    return min(d, period - d)


def tilt_error(predicted: float, truth: GroundTruthRecord) -> float:
    """Distance from ``predicted`` to the nearest true reflection axis."""
    return angular_distance(predicted, truth.tilt_deg, 180.0 / max(truth.order, 1))


def _detect_one(args):
    path, cfg = args
    try:
        r = detect(load_image(path), cfg)
    except NegsymError as exc:
        return {"error": type(exc).__name__}
    return {"order": r.order, "type": r.symmetry_type, "tilt_deg": r.tilt_deg}


def verdict(truth: GroundTruthRecord, pred: dict, cfg: DetectorConfig) -> dict:
    v = {
        "filename": truth.filename,
        "truth": {"type": truth.symmetry_type, "order": truth.order, "tilt_deg": truth.tilt_deg},
        "predicted": pred,
        "order_ok": pred.get("order") == truth.order,
        "type_ok": pred.get("type") == truth.symmetry_type,
    }
    if truth.symmetry_type == REFLECTION:
        tilt = pred.get("tilt_deg")
        err = None if tilt is None else tilt_error(tilt, truth)
        v["tilt_error_deg"] = err
        v["exact"] = err is not None and err < cfg.angle_step / 2.0
        v["strict"] = err is not None and err <= STRICT_DEG
        v["lenient"] = err is not None and err <= LENIENT_DEG
    return v


def aggregate(verdicts: list[dict]) -> dict:
    n = len(verdicts)
    refl = [v for v in verdicts if "exact" in v]
    m = len(refl)

    def rate(hits, total):
        return hits / total if total else 0.0

    return {
        "images": n,
        "reflectional_images": m,
        "order_rate": rate(sum(v["order_ok"] for v in verdicts), n),
        "type_rate": rate(sum(v["type_ok"] for v in verdicts), n),
        "exact_rate": rate(sum(v["exact"] for v in refl), m),
        "strict_rate": rate(sum(v["strict"] for v in refl), m),
        "lenient_rate": rate(sum(v["lenient"] for v in refl), m),
    }


def worker_count(default: int = 1) -> int:
    raw = os.environ.get("NEGSYM_THREADS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def evaluate(images_dir, records: list[GroundTruthRecord], cfg: DetectorConfig = DetectorConfig(),
             workers: Optional[int] = None) -> dict:
    """Run the detector over every manifest entry and score it.

    Verdicts are ordered by filename; the report does not depend on the
    number of workers.
    """
    images_dir = Path(images_dir)
    records = sorted(records, key=lambda r: r.filename)
    paths = []
    for rec in records:
        p = images_dir / rec.filename
        if not p.is_file():
            raise MissingImage(f"manifest entry {rec.filename} not found in {images_dir}")
        paths.append(p)
    if workers is None:
        workers = worker_count()
    jobs = [(p, cfg) for p in paths]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            preds = list(pool.map(_detect_one, jobs, chunksize=4))
    else:
        preds = [_detect_one(j) for j in jobs]
    verdicts = [verdict(rec, pred, cfg) for rec, pred in zip(records, preds)]
    return {"config": cfg.as_dict(), "summary": aggregate(verdicts), "verdicts": verdicts}
