"""Log-polar transform: rotation about the image center becomes a circular
column shift, scaling an approximate row shift.

Sampling geometry:
  * center (cy, cx) = ((h-1)/2, (w-1)/2), radius R = min(h-1, w-1)/2
    (largest circle inscribed about the geometric center), unless
    overridden;
  * radius row i samples r = R**(i/(radial_samples-1)), so r runs
    logarithmically from 1 to R and the exact center pixel is never hit;
  * angle column j samples theta = 2*pi*j/angular_samples, measured from
    the +x (column) axis, counter-clockwise with row = y downward;
  * each sample reads the nearest pixel (floor(y+0.5), floor(x+0.5));
  * the radial_samples x angular_samples grid is then nearest-neighbor
    resized to the final out_size x out_size square.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImageTooSmall
from .imagecore import GrayImage, resize_nearest


@dataclass(frozen=True)
class LogPolarParams:
    """Sampling geometry for the log-polar transform."""

    angular_samples: int = 360
    radial_samples: int = 128
    out_size: int = 128
    center: tuple[float, float] | None = None  # (row, col) override
    radius: float | None = None

    def __post_init__(self):
        if self.angular_samples < 4 or self.angular_samples % 2 != 0:
            raise ValueError(
                f"angular_samples must be even and >= 4, got {self.angular_samples}"
            )
        if self.radial_samples < 2:
            raise ValueError(f"radial_samples must be >= 2, got {self.radial_samples}")
        if self.out_size < 2:
            raise ValueError(f"out_size must be >= 2, got {self.out_size}")
        if self.radius is not None and self.radius <= 1:
            raise ValueError(f"radius override must be > 1, got {self.radius}")


def center_and_radius(img: GrayImage) -> tuple[tuple[float, float], float]:
    """Geometric center and inscribed-circle radius of an image."""
    if img.width < 3 or img.height < 3:
        raise ImageTooSmall(
            f"log-polar needs at least 3x3, got {img.width}x{img.height}"
        )
    center = ((img.height - 1) / 2.0, (img.width - 1) / 2.0)
    radius = min(img.height - 1, img.width - 1) / 2.0
    return center, radius


def log_polar(img: GrayImage, p: LogPolarParams = LogPolarParams()) -> GrayImage:
    """Transform an image to log-polar coordinates, then square-resize.

    Output is always p.out_size x p.out_size regardless of input size.
    """
    center, radius = center_and_radius(img)
    cy, cx = p.center if p.center is not None else center
    R = p.radius if p.radius is not None else radius

    i = np.arange(p.radial_samples, dtype=np.float64)
    r = R ** (i / (p.radial_samples - 1))  # r in [1, R], log spacing
    theta = 2.0 * np.pi * np.arange(p.angular_samples) / p.angular_samples

    ys = cy + np.outer(r, np.sin(theta))
    xs = cx + np.outer(r, np.cos(theta))
    iy = np.floor(ys + 0.5).astype(np.intp)
    ix = np.floor(xs + 0.5).astype(np.intp)
    # In-bounds by construction for the inscribed radius; a larger radius
    # override clamps to the border.
    np.clip(iy, 0, img.height - 1, out=iy)
    np.clip(ix, 0, img.width - 1, out=ix)

    grid = GrayImage(img.pixels[iy, ix])
    return resize_nearest(grid, p.out_size, p.out_size)
