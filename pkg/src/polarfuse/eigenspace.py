"""Eigenface PCA: fit an orthonormal basis from training images via the
snapshot method, project images into the reduced feature space.

The snapshot method diagonalizes the N x N Gram matrix of the mean-centered
training set (covariance normalized by N) and lifts its eigenvectors to
pixel space, avoiding the D x D covariance for D = width*height >> N.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, IoFailure, LengthMismatch, TooFewImages
from .imagecore import GrayImage

MAGIC = b"PFEIG1"

# Eigenvalues at or below trace * _RANK_RTOL are treated as rank noise.
_RANK_RTOL = 1e-12


@dataclass(frozen=True)
class KPolicy:
    """How many components to keep: a fixed count, or the smallest k whose
    eigenvalues capture at least `variance_fraction` of the total."""

    fixed_k: int | None = None
    variance_fraction: float | None = 0.95

    def __post_init__(self):
        if (self.fixed_k is None) == (self.variance_fraction is None):
            raise ValueError("set exactly one of fixed_k / variance_fraction")
        if self.fixed_k is not None and self.fixed_k < 1:
            raise ValueError(f"fixed_k must be >= 1, got {self.fixed_k}")
        if self.variance_fraction is not None and not (0 < self.variance_fraction <= 1):
            raise ValueError(
                f"variance_fraction must be in (0, 1], got {self.variance_fraction}"
            )


@dataclass(frozen=True)
class EigenspaceModel:
    """Mean vector, orthonormal eigenface basis and eigenvalues."""

    mean: np.ndarray = field(repr=False)      # (D,)
    basis: np.ndarray = field(repr=False)     # (k, D), rows orthonormal
    eigenvalues: np.ndarray = field(repr=False)  # (k,), non-increasing, >= 0

    def __post_init__(self):
        for name in ("mean", "basis", "eigenvalues"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[0]


def jacobi_eigh(sym: np.ndarray, rtol: float = 1e-12, max_sweeps: int = 100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below
    rtol * max(1, ||sym||_F). Returns (eigenvalues, eigenvectors) sorted in
    non-increasing order, eigenvectors as columns.
    """
    a = np.array(sym, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")
    v = np.eye(n)
    threshold = rtol * max(1.0, float(np.linalg.norm(a)))

    def off_norm():
        return np.sqrt(max(0.0, np.sum(a * a) - np.sum(np.diag(a) ** 2)))

    for _ in range(max_sweeps):
        if off_norm() < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(tau, 1.0)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q

    eigvals = np.diag(a).copy()
    order = np.argsort(-eigvals, kind="stable")
    return eigvals[order], v[:, order]


def _stack(images: list[GrayImage]) -> np.ndarray:
    if len(images) < 2:
        raise TooFewImages(f"need >= 2 images, got {len(images)}")
    w, h = images[0].width, images[0].height
    for im in images[1:]:
        if im.width != w or im.height != h:
            raise DimensionMismatch(
                f"mixed image sizes: {w}x{h} vs {im.width}x{im.height}"
            )
    return np.stack([im.flatten() for im in images])


def fit(images: list[GrayImage], policy: KPolicy = KPolicy()) -> EigenspaceModel:
    """Fit an eigenface model on same-size training images.

    A zero-variance training set (all images identical) yields a k=0 model.
    With a fixed-k policy, k is capped at the number of nonzero components
    (at most N-1).
    """
    x = _stack(images)
    n, d = x.shape
    mean = x.mean(axis=0)
    centered = x - mean

    gram = centered @ centered.T / n
    eigvals, eigvecs = jacobi_eigh(gram)
    eigvals = np.maximum(eigvals, 0.0)

    total = float(eigvals.sum())  # == trace of the sample covariance
    rank_tol = total * _RANK_RTOL
    avail = min(n - 1, d)
    nonzero = int(np.sum(eigvals[:avail] > rank_tol))

    if policy.fixed_k is not None:
        k = min(policy.fixed_k, nonzero)
    elif nonzero == 0:
        k = 0
    else:
        cum = np.cumsum(eigvals[:nonzero])
        target = policy.variance_fraction * total * (1.0 - 1e-12)
        k = min(int(np.searchsorted(cum, target)) + 1, nonzero)

    basis = np.empty((k, d))
    for i in range(k):
        vec = centered.T @ eigvecs[:, i]
        vec /= np.linalg.norm(vec)
        # deterministic sign: largest-magnitude entry positive
        if vec[np.argmax(np.abs(vec))] < 0:
            vec = -vec
        basis[i] = vec
    return EigenspaceModel(mean=mean, basis=basis, eigenvalues=eigvals[:k])


def project(model: EigenspaceModel, img: GrayImage) -> np.ndarray:
    """Feature vector of an image: basis . (flatten(img) - mean)."""
    x = img.flatten()
    if x.shape[0] != model.dim:
        raise DimensionMismatch(
            f"image flattens to {x.shape[0]}, model expects {model.dim}"
        )
    return model.basis @ (x - model.mean)


def reconstruct(model: EigenspaceModel, features: np.ndarray) -> np.ndarray:
    """Pixel-space reconstruction: mean + sum_i f_i * basis_i."""
    f = np.asarray(features, dtype=np.float64)
    if f.shape != (model.k,):
        raise LengthMismatch(f"expected {model.k} features, got shape {f.shape}")
    return model.mean + model.basis.T @ f


def model_to_bytes(model: EigenspaceModel) -> bytes:
    """Flat binary container: magic, D and k as u64 LE, then mean,
    eigenvalues, basis as f64 LE (basis row-major)."""
    parts = [
        MAGIC,
        struct.pack("<QQ", model.dim, model.k),
        model.mean.astype("<f8").tobytes(),
        model.eigenvalues.astype("<f8").tobytes(),
        np.ascontiguousarray(model.basis, dtype="<f8").tobytes(),
    ]
    return b"".join(parts)


def save_model(model: EigenspaceModel, path) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(model_to_bytes(model))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def model_from_bytes(blob: bytes, path="<bytes>") -> EigenspaceModel:
    if blob[:6] != MAGIC:
        raise IoFailure(f"{path}: bad magic, not an eigenspace model")
    d, k = struct.unpack_from("<QQ", blob, 6)
    off = 6 + 16
    need = off + 8 * (d + k + k * d)
    if len(blob) < need:
        raise IoFailure(f"{path}: truncated model file")
    mean = np.frombuffer(blob, dtype="<f8", count=d, offset=off)
    off += 8 * d
    eigvals = np.frombuffer(blob, dtype="<f8", count=k, offset=off)
    off += 8 * k
    basis = np.frombuffer(blob, dtype="<f8", count=k * d, offset=off).reshape(k, d)
    return EigenspaceModel(mean=mean, basis=basis, eigenvalues=eigvals)


def load_model(path) -> EigenspaceModel:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return model_from_bytes(blob, path)
