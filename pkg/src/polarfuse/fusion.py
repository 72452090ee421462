"""Pixel-level weighted fusion of two registered grayscale images.

Fused pixel: F(x,y) = a*V(x,y) + b*T(x,y), computed exactly, no
quantization. The weight invariant a + b <= 1 keeps the result in [0, 1]
without clipping.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch
from .imagecore import GrayImage

# Default split: 70% visual, 30% thermal.
DEFAULT_VISUAL_WEIGHT = 0.70
DEFAULT_THERMAL_WEIGHT = 0.30

_SUM_EPS = 1e-12


@dataclass(frozen=True)
class FusionWeights:
    """Scalar weights for the (visual, thermal) pair."""

    a: float = DEFAULT_VISUAL_WEIGHT
    b: float = DEFAULT_THERMAL_WEIGHT

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError(f"weights must be nonnegative, got ({self.a}, {self.b})")
        if self.a + self.b > 1.0 + _SUM_EPS:
            raise ValueError(
                f"weights must satisfy a + b <= 1, got {self.a} + {self.b}"
            )


def fuse(v: GrayImage, t: GrayImage, w: FusionWeights = FusionWeights()) -> GrayImage:
    """Weighted per-pixel sum of two same-size images."""
    if v.width != t.width or v.height != t.height:
        raise DimensionMismatch(
            f"cannot fuse {v.width}x{v.height} with {t.width}x{t.height}"
        )
    return GrayImage(w.a * v.pixels + w.b * t.pixels)
