import numpy as np
import pytest

from polarfuse.imagecore import GrayImage


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_image(rng, h, w) -> GrayImage:
    return GrayImage(rng.uniform(size=(h, w)))


def smooth_image(h, w, phase=0.7) -> GrayImage:
    """Smooth wave pattern; irrational-looking values, no flat regions."""
    rows = np.linspace(0.0, 3.0, h)
    cols = np.linspace(0.0, 2.3, w)
    return GrayImage(0.5 + 0.45 * np.sin(np.outer(rows, cols) + phase))


def rotate180(img: GrayImage) -> GrayImage:
    return GrayImage(img.pixels[::-1, ::-1])


def column_shift(img: GrayImage, shift: int) -> GrayImage:
    return GrayImage(np.roll(img.pixels, shift, axis=1))


def rotate_nearest(img: GrayImage, degrees: float) -> GrayImage:
    """Reference nearest-neighbor rotation about the image center, using
    the same floor(v + 0.5) convention as the log-polar sampler."""
    h, w = img.pixels.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    a = np.deg2rad(degrees)
    sy = cy + (yy - cy) * np.cos(a) - (xx - cx) * np.sin(a)
    sx = cx + (yy - cy) * np.sin(a) + (xx - cx) * np.cos(a)
    iy = np.clip(np.floor(sy + 0.5).astype(np.intp), 0, h - 1)
    ix = np.clip(np.floor(sx + 0.5).astype(np.intp), 0, w - 1)
    return GrayImage(img.pixels[iy, ix])
