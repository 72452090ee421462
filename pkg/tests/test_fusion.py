import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarfuse.errors import DimensionMismatch
from polarfuse.fusion import FusionWeights, fuse
from polarfuse.imagecore import GrayImage

from conftest import random_image


class TestFusionWeights:
    def test_defaults(self):
        w = FusionWeights()
        assert (w.a, w.b) == (0.70, 0.30)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            FusionWeights(-0.1, 0.5)

    def test_rejects_sum_above_one(self):
        with pytest.raises(ValueError):
            FusionWeights(0.8, 0.3)

    def test_allows_sum_below_one(self):
        FusionWeights(0.2, 0.3)


class TestFuse:
    def test_identity_weights(self, rng):
        v, t = random_image(rng, 5, 4), random_image(rng, 5, 4)
        assert np.array_equal(fuse(v, t, FusionWeights(1.0, 0.0)).pixels, v.pixels)

    def test_hand_computed_pixel(self):
        v = GrayImage(np.array([[100 / 255]]))
        t = GrayImage(np.array([[200 / 255]]))
        out = fuse(v, t, FusionWeights(0.70, 0.30))
        assert out.pixels[0, 0] == pytest.approx(130 / 255, abs=1e-12)

    def test_equal_inputs_convex(self, rng):
        v = random_image(rng, 3, 3)
        out = fuse(v, v, FusionWeights(0.5, 0.5))
        assert np.allclose(out.pixels, v.pixels, atol=1e-12)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            fuse(random_image(rng, 3, 3), random_image(rng, 3, 4))

    def test_output_dims(self, rng):
        out = fuse(random_image(rng, 6, 2), random_image(rng, 6, 2))
        assert (out.height, out.width) == (6, 2)


class TestFuseProperties:
    @given(
        seed=st.integers(0, 2**32 - 1),
        h=st.integers(1, 16),
        w=st.integers(1, 16),
        a=st.floats(0.0, 1.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_range_containment(self, seed, h, w, a):
        gen = np.random.default_rng(seed)
        v, t = random_image(gen, h, w), random_image(gen, h, w)
        out = fuse(v, t, FusionWeights(a, 1.0 - a))
        lo = np.minimum(v.pixels, t.pixels)
        hi = np.maximum(v.pixels, t.pixels)
        assert np.all(out.pixels >= lo - 1e-12)
        assert np.all(out.pixels <= hi + 1e-12)

    @given(
        seed=st.integers(0, 2**32 - 1),
        a=st.floats(0.0, 0.7),
        b=st.floats(0.0, 0.3),
    )
    @settings(max_examples=60, deadline=None)
    def test_bilinearity(self, seed, a, b):
        gen = np.random.default_rng(seed)
        v, t = random_image(gen, 4, 4), random_image(gen, 4, 4)
        zero = GrayImage(np.zeros((4, 4)))
        combined = fuse(v, t, FusionWeights(a, b))
        v_only = fuse(v, zero, FusionWeights(1.0, 0.0))
        t_only = fuse(zero, t, FusionWeights(0.0, 1.0))
        assert np.allclose(
            combined.pixels, a * v_only.pixels + b * t_only.pixels, atol=1e-12
        )

    @given(seed=st.integers(0, 2**32 - 1), a=st.floats(0.0, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_symmetry(self, seed, a):
        gen = np.random.default_rng(seed)
        v, t = random_image(gen, 3, 5), random_image(gen, 3, 5)
        lhs = fuse(v, t, FusionWeights(a, 1.0 - a))
        rhs = fuse(t, v, FusionWeights(1.0 - a, a))
        assert np.array_equal(lhs.pixels, rhs.pixels)
