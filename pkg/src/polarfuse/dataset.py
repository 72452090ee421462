"""Paired visual/thermal dataset manifests and a synthetic dataset
generator for desk-scale experiments.

Manifest format (UTF-8 text):
    #polarfuse-manifest v1
    subject_id<TAB>sample_id<TAB>visual_path<TAB>thermal_path
Lines starting with '#' are comments; paths are relative to the manifest's
directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateSample,
    IoFailure,
    MissingFile,
    PairDimensionMismatch,
    ParseError,
)
from .imagecore import GrayImage, load_pgm, read_pgm_dims, save_pgm

MANIFEST_HEADER = "#polarfuse-manifest v1"


@dataclass(frozen=True)
class ManifestRecord:
    subject_id: str
    sample_id: str
    visual_path: str
    thermal_path: str


@dataclass(frozen=True)
class DatasetManifest:
    records: tuple[ManifestRecord, ...]

    def subjects(self) -> list[str]:
        """Distinct subject ids, sorted."""
        return sorted({r.subject_id for r in self.records})

    def by_subject(self) -> dict[str, list[ManifestRecord]]:
        """Records grouped by subject, sample order preserved."""
        groups: dict[str, list[ManifestRecord]] = {}
        for rec in self.records:
            groups.setdefault(rec.subject_id, []).append(rec)
        return groups

    def load_pair(self, rec: ManifestRecord) -> tuple[GrayImage, GrayImage]:
        return load_pgm(rec.visual_path), load_pgm(rec.thermal_path)


def load_manifest(path) -> DatasetManifest:
    """Parse and validate a manifest file.

    Every referenced file must exist and each record's visual/thermal
    headers must agree in dimensions.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    if not lines or lines[0].strip() != MANIFEST_HEADER:
        raise ParseError(f"{path}:1: missing header line '{MANIFEST_HEADER}'")

    base = os.path.dirname(os.path.abspath(path))
    records = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(f"{path}:{lineno}: expected 4 tab-separated fields")
        subject, sample, vis, thr = (f.strip() for f in fields)
        if not subject or not sample or not vis or not thr:
            raise ParseError(f"{path}:{lineno}: empty field")
        if (subject, sample) in seen:
            raise DuplicateSample(f"{path}:{lineno}: duplicate ({subject}, {sample})")
        seen.add((subject, sample))
        vis_path = os.path.join(base, vis)
        thr_path = os.path.join(base, thr)
        for p in (vis_path, thr_path):
            if not os.path.isfile(p):
                raise MissingFile(f"{path}:{lineno}: no such file {p}")
        vdims = read_pgm_dims(vis_path)
        tdims = read_pgm_dims(thr_path)
        if vdims != tdims:
            raise PairDimensionMismatch(
                f"{path}:{lineno}: visual {vdims[0]}x{vdims[1]} vs "
                f"thermal {tdims[0]}x{tdims[1]}"
            )
        records.append(ManifestRecord(subject, sample, vis_path, thr_path))
    return DatasetManifest(tuple(records))


# --- synthetic data ---------------------------------------------------------

_NOISE_SIGMA = 0.02
_MAX_ROTATION_DEG = 10.0


def _render_blobs(h, w, blobs):
    """Sum of Gaussian blobs on a background; blobs are
    (row, col, sigma, amplitude) tuples."""
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    img = np.full((h, w), 0.12)
    for by, bx, sigma, amp in blobs:
        img += amp * np.exp(-((yy - by) ** 2 + (xx - bx) ** 2) / (2 * sigma**2))
    return img


def _class_blobs(cls: int, h: int, w: int, rotation_rad: float):
    """Blob layout for one class, rotated about the image center.

    Classes differ in blob radii (rotation-invariant under log-polar) and
    base angles; blobs are wide so small rotations move pixels gently.
    """
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    rmax = min(cy, cx)
    golden = 2.399963229728653
    base = cls * golden
    layout = [
        (0.28 + 0.55 * ((cls * 5) % 9) / 9.0, base, 0.22 * rmax, 0.55),
        (0.82 - 0.55 * ((cls * 3) % 7) / 7.0, base + 2.2, 0.28 * rmax, 0.45),
        (0.55, base + 4.4 + 0.3 * cls, 0.18 * rmax, 0.35),
    ]
    blobs = []
    for rfrac, ang, sigma, amp in layout:
        a = ang + rotation_rad
        blobs.append(
            (cy + rfrac * rmax * np.sin(a), cx + rfrac * rmax * np.cos(a), sigma, amp)
        )
    return blobs


def synth_dataset(
    classes: int,
    per_class: int,
    dims: tuple[int, int],
    seed: int,
    out_dir,
) -> DatasetManifest:
    """Generate a deterministic paired dataset under out_dir.

    Each class is a distinct Gaussian-blob layout; the thermal channel is
    the inverted, blurred counterpart of the visual one. Samples get
    per-sample noise (sigma 0.02) and a random rotation within +/-10 deg
    about the center. Writes PGM pairs plus 'manifest.txt' and returns the
    loaded manifest.
    """
    if classes < 2:
        raise ValueError(f"classes must be >= 2, got {classes}")
    if per_class < 2:
        raise ValueError(f"per_class must be >= 2, got {per_class}")
    w, h = dims
    rng = np.random.default_rng(np.uint64(seed))
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create {out_dir}: {exc}") from exc

    lines = [MANIFEST_HEADER]
    for cls in range(classes):
        subject = f"s{cls:02d}"
        for smp in range(per_class):
            sample = f"a{smp:02d}"
            rot = np.deg2rad(rng.uniform(-_MAX_ROTATION_DEG, _MAX_ROTATION_DEG))
            blobs = _class_blobs(cls, h, w, rot)
            visual = _render_blobs(h, w, blobs)
            # thermal: wider blobs (blur), inverted
            thermal = 1.0 - _render_blobs(
                h, w, [(by, bx, 1.8 * s, a) for by, bx, s, a in blobs]
            )
            visual += rng.normal(0.0, _NOISE_SIGMA, size=(h, w))
            thermal += rng.normal(0.0, _NOISE_SIGMA, size=(h, w))
            vis_name = f"{subject}_{sample}_vis.pgm"
            thr_name = f"{subject}_{sample}_thr.pgm"
            save_pgm(GrayImage(np.clip(visual, 0.0, 1.0)), os.path.join(out_dir, vis_name))
            save_pgm(GrayImage(np.clip(thermal, 0.0, 1.0)), os.path.join(out_dir, thr_name))
            lines.append(f"{subject}\t{sample}\t{vis_name}\t{thr_name}")

    manifest_path = os.path.join(out_dir, "manifest.txt")
    try:
        with open(manifest_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {manifest_path}: {exc}") from exc
    return load_manifest(manifest_path)
