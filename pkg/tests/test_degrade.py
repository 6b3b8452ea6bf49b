import numpy as np
import pytest

from pairaug import DegradeSpec, Image, Rng, add_gaussian_noise, jpeg_roundtrip, make_sr_pair, psnr
from pairaug.core import ChannelError
from pairaug.testcards import card_set, texture_card


class TestDegradeSpec:
    def test_valid_specs(self):
        DegradeSpec("sr", scale=2)
        DegradeSpec("gaussian", sigma=30.0)
        DegradeSpec("jpeg", quality=10)

    @pytest.mark.parametrize("kwargs", [
        dict(task="sr", scale=5),
        dict(task="gaussian", sigma=0.0),
        dict(task="gaussian", sigma=300.0),
        dict(task="jpeg", quality=0),
        dict(task="jpeg", quality=101),
        dict(task="mystery"),
    ])
    def test_invalid_specs(self, kwargs):
        with pytest.raises(ValueError):
            DegradeSpec(**kwargs)


class TestGaussianNoise:
    def test_sigma_30_std_on_mid_gray(self):
        img = Image(np.full((1000, 1000, 1), 0.5, np.float32))
        out = add_gaussian_noise(img, 30.0, Rng(0))
        std = float((out.data.astype(np.float64) - 0.5).std())
        assert abs(std - 30.0 / 255.0) / (30.0 / 255.0) < 0.02

    def test_clamped_at_zero(self):
        img = Image(np.zeros((64, 64, 3), np.float32))
        out = add_gaussian_noise(img, 70.0, Rng(1))
        assert out.data.min() >= 0.0 and out.data.max() <= 1.0

    def test_small_sigma_barely_changes(self):
        img = Image(np.full((32, 32, 3), 0.5, np.float32))
        out = add_gaussian_noise(img, 0.01, Rng(2))
        assert np.max(np.abs(out.data - img.data)) < 1e-3

    def test_deterministic_noise_field(self):
        img = Image(np.full((32, 32, 3), 0.5, np.float32))
        a = add_gaussian_noise(img, 30.0, Rng(7))
        b = add_gaussian_noise(img, 30.0, Rng(7))
        assert np.array_equal(a.data, b.data)

    def test_sigma_validation(self):
        with pytest.raises(ValueError):
            add_gaussian_noise(Image(np.zeros((4, 4, 3), np.float32)), 0.0, Rng(0))


class TestJpeg:
    def test_high_quality_high_psnr(self):
        card = texture_card(160, 128, seed=3)
        out = jpeg_roundtrip(card, 100)
        assert psnr(out, card) > 38.0

    def test_lower_quality_stronger_artifact(self):
        card = texture_card(160, 128, seed=4)
        assert psnr(jpeg_roundtrip(card, 10), card) < psnr(jpeg_roundtrip(card, 30), card)

    def test_dims_preserved(self):
        card = texture_card(96, 64, seed=5)
        out = jpeg_roundtrip(card, 50)
        assert out.data.shape == card.data.shape

    def test_monotonic_over_card_set(self):
        for card in card_set(4, 96, 64):
            p10 = psnr(jpeg_roundtrip(card, 10), card)
            p30 = psnr(jpeg_roundtrip(card, 30), card)
            p80 = psnr(jpeg_roundtrip(card, 80), card)
            assert p10 <= p30 <= p80

    def test_quality_and_channel_validation(self):
        card = texture_card(32, 32, seed=6)
        with pytest.raises(ValueError):
            jpeg_roundtrip(card, 0)
        gray = Image(np.zeros((32, 32, 1), np.float32))
        with pytest.raises(ChannelError):
            jpeg_roundtrip(gray, 50)

    def test_raw_bytes_are_jfif(self):
        _, raw = jpeg_roundtrip(texture_card(32, 32, seed=8), 30, return_bytes=True)
        assert raw[:2] == b"\xff\xd8"  # SOI marker


class TestMakeSrPair:
    def test_s1_identity(self):
        hr = texture_card(32, 32, seed=0)
        lr, hr2 = make_sr_pair(hr, 1)
        assert lr is hr and hr2 is hr

    def test_constant_preserved(self):
        hr = Image(np.full((16, 16, 3), 0.25, np.float32))
        lr, _ = make_sr_pair(hr, 4)
        assert np.array_equal(lr.data, np.full((4, 4, 3), np.float32(0.25)))

    def test_shape_contract(self):
        hr = texture_card(48, 48, seed=1)
        lr, _ = make_sr_pair(hr, 4)
        assert lr.data.shape == (12, 12, 3)
