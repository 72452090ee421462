"""Grayscale image type, portable-graymap I/O and nearest-neighbor resizing.

Pixels live in the real interval [0, 1]; quantization happens only at the
file boundary (PGM read scales by 1/maxval, PGM write rounds to 8 bits).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    IoFailure,
    MalformedHeader,
    TruncatedData,
    UnsupportedMaxval,
)

# Slack for float round-off when images are built from weighted sums.
_RANGE_EPS = 1e-12


@dataclass(frozen=True)
class GrayImage:
    """Immutable single-channel raster with pixel values in [0, 1].

    ``pixels`` is a read-only float64 array of shape (height, width).
    """

    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.pixels, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(
                f"pixels must be a 2-D array with positive dims, got shape {arr.shape}"
            )
        lo, hi = float(arr.min()), float(arr.max())
        if lo < -_RANGE_EPS or hi > 1.0 + _RANGE_EPS:
            raise ValueError(f"pixel values outside [0, 1]: min={lo}, max={hi}")
        # Snap round-off overshoot back onto the closed interval.
        if lo < 0.0 or hi > 1.0:
            arr = np.clip(arr, 0.0, 1.0)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def flatten(self) -> np.ndarray:
        """Row-major 1-D view of the pixels."""
        return self.pixels.reshape(-1)


_TOKEN_RE = re.compile(rb"\S+")


def _read_header_tokens(data: bytes, count: int):
    """Pull `count` whitespace-separated tokens off a PGM header, skipping
    '#' comments. Returns (tokens, offset just past the single whitespace
    byte that terminates the last token)."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        # skip whitespace and comment lines
        while pos < n:
            c = data[pos:pos + 1]
            if c in b" \t\r\n\f\v":
                pos += 1
            elif c == b"#":
                nl = data.find(b"\n", pos)
                pos = n if nl < 0 else nl + 1
            else:
                break
        m = _TOKEN_RE.match(data, pos)
        if m is None or m.start() != pos:
            raise MalformedHeader("unexpected end of header")
        tokens.append(m.group(0))
        pos = m.end()
    # exactly one whitespace byte separates the header from binary data
    if pos < n and data[pos:pos + 1] in b" \t\r\n\f\v":
        pos += 1
    return tokens, pos


def load_pgm(path) -> GrayImage:
    """Load a P2 (ASCII) or P5 (binary) portable graymap.

    Samples are scaled by 1/maxval so the result lies in [0, 1].
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    if len(data) < 2 or data[:2] not in (b"P2", b"P5"):
        raise MalformedHeader(f"{path}: not a P2/P5 graymap")
    magic = data[:2]

    tokens, offset = _read_header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError as exc:
        raise MalformedHeader(f"{path}: non-numeric header field") from exc
    if width <= 0 or height <= 0:
        raise MalformedHeader(f"{path}: nonpositive dimensions {width}x{height}")
    if maxval <= 0 or maxval > 65535:
        raise UnsupportedMaxval(f"{path}: maxval {maxval} outside (0, 65535]")

    n_samples = width * height
    if magic == b"P5":
        wide = maxval > 255
        body = data[offset:]
        need = n_samples * (2 if wide else 1)
        if len(body) < need:
            raise TruncatedData(
                f"{path}: expected {need} data bytes, found {len(body)}"
            )
        dtype = ">u2" if wide else np.uint8
        samples = np.frombuffer(body[:need], dtype=dtype).astype(np.float64)
    else:
        fields = data[offset:].split()
        if len(fields) < n_samples:
            raise TruncatedData(
                f"{path}: expected {n_samples} samples, found {len(fields)}"
            )
        try:
            samples = np.array(
                [int(f) for f in fields[:n_samples]], dtype=np.float64
            )
        except ValueError as exc:
            raise TruncatedData(f"{path}: non-numeric sample") from exc

    if samples.min() < 0 or samples.max() > maxval:
        raise TruncatedData(f"{path}: sample outside [0, maxval]")
    return GrayImage(samples.reshape(height, width) / maxval)


def save_pgm(img: GrayImage, path) -> None:
    """Write a binary P5 graymap with maxval 255.

    Each pixel p becomes round(p*255), rounding halves away from zero.
    """
    samples = np.floor(img.pixels * 255.0 + 0.5).astype(np.uint8)
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(samples.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_pgm_dims(path) -> tuple[int, int]:
    """Read just (width, height) from a PGM header."""
    try:
        with open(path, "rb") as fh:
            data = fh.read(4096)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if len(data) < 2 or data[:2] not in (b"P2", b"P5"):
        raise MalformedHeader(f"{path}: not a P2/P5 graymap")
    tokens, _ = _read_header_tokens(data, 3)
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise MalformedHeader(f"{path}: non-numeric header field") from exc
    if width <= 0 or height <= 0:
        raise MalformedHeader(f"{path}: nonpositive dimensions {width}x{height}")
    return width, height


def resize_nearest(img: GrayImage, out_w: int, out_h: int) -> GrayImage:
    """Nearest-neighbor resize with pixel-center sampling.

    Output pixel (i, j) copies input pixel
    (floor((i+0.5)*in_h/out_h), floor((j+0.5)*in_w/out_w)).
    """
    if out_w < 1 or out_h < 1:
        raise DimensionMismatch(f"output dims must be >= 1, got {out_w}x{out_h}")
    in_h, in_w = img.height, img.width
    rows = np.floor((np.arange(out_h) + 0.5) * in_h / out_h).astype(np.intp)
    cols = np.floor((np.arange(out_w) + 0.5) * in_w / out_w).astype(np.intp)
    np.clip(rows, 0, in_h - 1, out=rows)
    np.clip(cols, 0, in_w - 1, out=cols)
    return GrayImage(img.pixels[np.ix_(rows, cols)])
