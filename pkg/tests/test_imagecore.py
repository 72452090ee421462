import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarfuse.errors import (
    DimensionMismatch,
    IoFailure,
    MalformedHeader,
    TruncatedData,
    UnsupportedMaxval,
)
from polarfuse.imagecore import GrayImage, load_pgm, resize_nearest, save_pgm

from conftest import random_image


def write(path, data: bytes):
    path.write_bytes(data)
    return path


class TestGrayImage:
    def test_shape_and_accessors(self):
        img = GrayImage(np.zeros((3, 5)))
        assert img.height == 3 and img.width == 5
        assert img.flatten().shape == (15,)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            GrayImage(np.array([[0.0, 1.5]]))
        with pytest.raises(ValueError):
            GrayImage(np.array([[-0.2, 0.5]]))

    def test_rejects_bad_shapes(self):
        with pytest.raises(DimensionMismatch):
            GrayImage(np.zeros(4))
        with pytest.raises(DimensionMismatch):
            GrayImage(np.zeros((0, 3)))

    def test_immutable(self):
        img = GrayImage(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            img.pixels[0, 0] = 1.0


class TestLoadPgm:
    def test_p5_basic_scaling(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
        img = load_pgm(p)
        assert (img.height, img.width) == (2, 2)
        assert img.flatten().tolist() == [0.0, 1.0, 128 / 255, 64 / 255]

    def test_p2_maxval_maps_to_one(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P2\n1 1\n100\n100\n")
        assert load_pgm(p).pixels[0, 0] == 1.0

    def test_p5_truncated(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P5\n4 4\n255\n" + bytes(10))
        with pytest.raises(TruncatedData):
            load_pgm(p)

    def test_p2_truncated(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P2\n2 2\n255\n1 2 3\n")
        with pytest.raises(TruncatedData):
            load_pgm(p)

    def test_bad_magic(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P6\n1 1\n255\n\x00\x00\x00")
        with pytest.raises(MalformedHeader):
            load_pgm(p)

    def test_nonpositive_dims(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P5\n0 2\n255\n")
        with pytest.raises(MalformedHeader):
            load_pgm(p)

    @pytest.mark.parametrize("maxval", [0, -3, 65536])
    def test_unsupported_maxval(self, tmp_path, maxval):
        p = write(tmp_path / "a.pgm", f"P2\n1 1\n{maxval}\n0\n".encode())
        with pytest.raises(UnsupportedMaxval):
            load_pgm(p)

    def test_header_comments(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P5\n# a comment\n1 1\n# another\n255\n\x80")
        assert load_pgm(p).pixels[0, 0] == 128 / 255

    def test_16bit_samples(self, tmp_path):
        data = (1000).to_bytes(2, "big") + (65535).to_bytes(2, "big")
        p = write(tmp_path / "a.pgm", b"P5\n2 1\n65535\n" + data)
        img = load_pgm(p)
        assert img.flatten().tolist() == [1000 / 65535, 1.0]

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            load_pgm(tmp_path / "nope.pgm")


class TestSavePgm:
    def test_half_away_from_zero(self, tmp_path):
        p = tmp_path / "a.pgm"
        save_pgm(GrayImage(np.array([[0.5]])), p)
        assert p.read_bytes().endswith(bytes([128]))  # round(127.5) -> 128

    def test_endpoints(self, tmp_path):
        p = tmp_path / "a.pgm"
        save_pgm(GrayImage(np.array([[0.0, 1.0]])), p)
        assert p.read_bytes().endswith(bytes([0, 255]))

    def test_roundtrip_all_256_values(self, tmp_path):
        values = np.arange(256, dtype=np.float64).reshape(16, 16) / 255.0
        p = tmp_path / "a.pgm"
        save_pgm(GrayImage(values), p)
        first = p.read_bytes()
        save_pgm(load_pgm(p), p)
        assert p.read_bytes() == first
        assert np.array_equal(load_pgm(p).pixels, values)

    def test_roundtrip_quantization_bound(self, tmp_path, rng):
        img = random_image(rng, 9, 7)
        p = tmp_path / "a.pgm"
        save_pgm(img, p)
        assert np.abs(load_pgm(p).pixels - img.pixels).max() <= 1 / 510 + 1e-12

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(IoFailure):
            save_pgm(GrayImage(np.zeros((1, 1))), tmp_path / "no" / "dir" / "a.pgm")


class TestResizeNearest:
    def test_identity(self, rng):
        img = random_image(rng, 2, 2)
        assert np.array_equal(resize_nearest(img, 2, 2).pixels, img.pixels)

    def test_constant_replication(self):
        img = GrayImage(np.array([[0.375]]))
        out = resize_nearest(img, 3, 3)
        assert out.pixels.shape == (3, 3)
        assert np.all(out.pixels == 0.375)

    def test_checkerboard_center_sampling(self):
        # source index for 4 -> 2: floor((i+0.5)*4/2) = 2i+1, rows/cols {1,3}
        src = (np.indices((4, 4)).sum(axis=0) % 2).astype(np.float64)
        out = resize_nearest(GrayImage(src), 2, 2)
        expected = src[np.ix_([1, 3], [1, 3])]
        assert np.array_equal(out.pixels, expected)

    def test_rejects_bad_dims(self, rng):
        with pytest.raises(DimensionMismatch):
            resize_nearest(random_image(rng, 2, 2), 0, 2)

    @given(
        h=st.integers(1, 12),
        w=st.integers(1, 12),
        oh=st.integers(1, 20),
        ow=st.integers(1, 20),
        seed=st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_value_preserving_and_dims(self, h, w, oh, ow, seed):
        img = random_image(np.random.default_rng(seed), h, w)
        out = resize_nearest(img, ow, oh)
        assert out.pixels.shape == (oh, ow)
        assert np.isin(out.pixels, img.pixels).all()

    @given(h=st.integers(1, 10), w=st.integers(1, 10), seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_same_dims_identity(self, h, w, seed):
        img = random_image(np.random.default_rng(seed), h, w)
        assert np.array_equal(resize_nearest(img, w, h).pixels, img.pixels)
