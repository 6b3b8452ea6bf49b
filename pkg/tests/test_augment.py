import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pairaug as pa
from pairaug import AugRecord, Image, Rng
from pairaug.augment import apply_dihedral_pair, passthrough, replay, sample_cutmix_rect
from pairaug.core import ChannelError, DimensionError


def rec(method, params, seed=0):
    return AugRecord(method, params, seed)


class TestRectSampling:
    def test_mean_lambda(self):
        r = Rng(0)
        lams = [sample_cutmix_rect(48, 48, 0.7, r).lam for _ in range(100_000)]
        assert abs(np.mean(lams) - 0.7) < 0.005

    def test_rects_in_bounds(self):
        r = Rng(1)
        for _ in range(10_000):
            m = sample_cutmix_rect(37, 23, 0.7, r)
            assert 0 <= m.x and m.x + m.w <= 37
            assert 0 <= m.y and m.y + m.h <= 23

    def test_deterministic(self):
        assert sample_cutmix_rect(48, 48, 0.7, Rng(9)) == sample_cutmix_rect(48, 48, 0.7, Rng(9))

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            sample_cutmix_rect(8, 8, 0.0, Rng(0))


class TestCutblur:
    def test_full_rect_gives_pure_target(self, random_pair):
        p = random_pair(0)
        full = rec("cutblur", {"x": 0, "y": 0, "w": 24, "h": 24, "lambda": 1.0,
                               "direction": 0})
        out = replay(full, p)
        assert np.array_equal(out.input.data, p.target.data)

    def test_empty_rect_gives_input(self, random_pair):
        p = random_pair(1)
        empty = rec("cutblur", {"x": 5, "y": 5, "w": 0, "h": 0, "lambda": 0.0,
                                "direction": 0})
        out = replay(empty, p)
        assert np.array_equal(out.input.data, p.input.data)

    def test_pixel_provenance(self, random_pair):
        p = random_pair(2)
        s = pa.cutblur(p, 0.7, Rng(5))
        r = s.record.params
        inside = np.zeros((24, 24), bool)
        inside[r["y"]:r["y"] + r["h"], r["x"]:r["x"] + r["w"]] = True
        if r["direction"] == 0:
            want = np.where(inside[:, :, None], p.target.data, p.input.data)
        else:
            want = np.where(inside[:, :, None], p.input.data, p.target.data)
        assert np.array_equal(s.input.data, want)

    def test_target_purity(self, random_pair):
        p = random_pair(3)
        s = pa.cutblur(p, 0.7, Rng(6))
        assert np.array_equal(s.target.data, p.target.data)

    def test_mask_all_valid(self, random_pair):
        assert pa.cutblur(random_pair(4), 0.7, Rng(7)).loss_mask.valid.all()


class TestCutout:
    def test_ratio_zero(self, random_pair):
        p = random_pair(0)
        s = pa.cutout(p, 0.0, Rng(1))
        assert np.array_equal(s.input.data, p.input.data)
        assert s.loss_mask.valid.all()

    def test_ratio_one(self, random_pair):
        p = random_pair(1)
        s = pa.cutout(p, 1.0, Rng(1))
        assert not s.input.data.any()
        assert not s.loss_mask.valid.any()

    def test_mask_marks_exactly_zeroed_pixels(self, random_pair):
        p = random_pair(2)
        s = pa.cutout(p, 0.3, Rng(4))
        dropped = ~s.loss_mask.valid
        assert not s.input.data[dropped].any()
        assert np.array_equal(s.input.data[~dropped], p.input.data[~dropped])

    def test_mean_drop_count_48x48(self):
        r = np.random.default_rng(0)
        target = Image(r.random((48, 48, 3)).astype(np.float32))
        inp = Image(r.random((48, 48, 3)).astype(np.float32))
        p = pa.AlignedPair(input=inp, target=target)
        rng = Rng(123)
        drops = [
            int((~pa.cutout(p, 0.001, rng).loss_mask.valid).sum())
            for _ in range(10_000)
        ]
        assert abs(np.mean(drops) - 2.304) < 0.1


class TestCutmix:
    def test_full_rect_equals_b(self, random_pair):
        a, b = random_pair(0), random_pair(1)
        out = replay(rec("cutmix", {"x": 0, "y": 0, "w": 24, "h": 24, "lambda": 1.0}),
                     a, b)
        assert np.array_equal(out.input.data, b.input.data)
        assert np.array_equal(out.target.data, b.target.data)

    def test_empty_rect_equals_a(self, random_pair):
        a, b = random_pair(0), random_pair(1)
        out = replay(rec("cutmix", {"x": 3, "y": 3, "w": 0, "h": 0, "lambda": 0.0}),
                     a, b)
        assert np.array_equal(out.input.data, a.input.data)

    def test_provenance(self, random_pair):
        a, b = random_pair(2), random_pair(3)
        s = pa.cutmix(a, b, 0.7, Rng(8))
        r = s.record.params
        inside = np.zeros((24, 24), bool)
        inside[r["y"]:r["y"] + r["h"], r["x"]:r["x"] + r["w"]] = True
        assert np.array_equal(
            s.input.data, np.where(inside[:, :, None], b.input.data, a.input.data)
        )
        assert np.array_equal(
            s.target.data, np.where(inside[:, :, None], b.target.data, a.target.data)
        )

    def test_dimension_mismatch(self, random_pair):
        with pytest.raises(DimensionError):
            pa.cutmix(random_pair(0, size=24), random_pair(1, size=16), 0.7, Rng(0))


class TestMixup:
    def test_forced_lambda_one(self, random_pair):
        a, b = random_pair(0), random_pair(1)
        s = pa.mixup(a, b, lam=1.0, rng=Rng(0))
        assert np.array_equal(s.input.data, a.input.data)

    def test_forced_lambda_zero(self, random_pair):
        a, b = random_pair(0), random_pair(1)
        s = pa.mixup(a, b, lam=0.0, rng=Rng(0))
        assert np.array_equal(s.input.data, b.input.data)

    def test_beta_symmetric_mean(self):
        r = Rng(2)
        lams = [r.beta(1.2, 1.2) for _ in range(100_000)]
        assert abs(np.mean(lams) - 0.5) < 0.005


class TestCutmixup:
    def test_empty_rect_equals_a(self, random_pair):
        a, b = random_pair(0), random_pair(1)
        out = replay(
            rec("cutmixup", {"x": 2, "y": 2, "w": 0, "h": 0, "lambda": 0.0,
                             "mix_lambda": 0.3}), a, b)
        assert np.array_equal(out.input.data, a.input.data)

    def test_full_rect_lambda_one_equals_a(self, random_pair):
        a, b = random_pair(0), random_pair(1)
        out = replay(
            rec("cutmixup", {"x": 0, "y": 0, "w": 24, "h": 24, "lambda": 1.0,
                             "mix_lambda": 1.0}), a, b)
        assert np.array_equal(out.input.data, a.input.data)

    def test_inside_outside_recomputed_from_record(self, random_pair):
        a, b = random_pair(4), random_pair(5)
        s = pa.cutmixup(a, b, rng=Rng(10))
        r = s.record.params
        lam = r["mix_lambda"]
        inside = np.zeros((24, 24), bool)
        inside[r["y"]:r["y"] + r["h"], r["x"]:r["x"] + r["w"]] = True
        mixed = np.float32(np.clip(
            lam * a.input.data.astype(np.float64) + (1 - lam) * b.input.data, 0, 1))
        assert np.array_equal(s.input.data[inside], mixed[inside])
        assert np.array_equal(s.input.data[~inside], a.input.data[~inside])


class TestRgbPermute:
    def test_identity(self, random_pair):
        p = random_pair(0)
        out = replay(rec("rgb_permute", {"perm": [0, 1, 2]}), p)
        assert np.array_equal(out.input.data, p.input.data)

    def test_reversal(self, random_pair):
        p = random_pair(1)
        out = replay(rec("rgb_permute", {"perm": [2, 1, 0]}), p)
        assert np.array_equal(out.input.data[:, :, 0], p.input.data[:, :, 2])

    def test_inverse_restores(self, random_pair):
        p = random_pair(2)
        s = pa.rgb_permute(p, Rng(5))
        perm = s.record.params["perm"]
        inv = [0, 0, 0]
        for i, j in enumerate(perm):
            inv[j] = i
        back = replay(rec("rgb_permute", {"perm": inv}),
                      pa.AlignedPair(input=s.input, target=s.target))
        assert np.array_equal(back.input.data, p.input.data)

    def test_channel_error(self, random_pair):
        with pytest.raises(ChannelError):
            pa.rgb_permute(random_pair(0, channels=1), Rng(0))


class TestBlend:
    def test_forced_v_one(self, random_pair):
        p = random_pair(0)
        out = replay(rec("blend", {"color": [0.2, 0.4, 0.9], "v": 1.0}), p)
        assert np.allclose(out.input.data, p.input.data, atol=1e-7)

    def test_black_input_toward_white(self):
        black = Image(np.zeros((8, 8, 3), np.float32))
        p = pa.AlignedPair(input=black, target=black)
        out = replay(rec("blend", {"color": [1.0, 1.0, 1.0], "v": 0.6}), p)
        assert np.allclose(out.input.data, 0.4, atol=1e-7)

    def test_residual_constancy(self, random_pair):
        p = random_pair(3)
        s = pa.blend(p, 0.6, Rng(4))
        v = s.record.params["v"]
        resid = s.input.data.astype(np.float64) - v * p.input.data.astype(np.float64)
        for c in range(3):
            channel = resid[:, :, c]
            assert channel.max() - channel.min() < 1e-6


class TestFlipRotate:
    def test_identity_element(self, random_pair):
        p = random_pair(0)
        out = replay(rec("flip_rotate", {"k": 0}), p)
        assert np.array_equal(out.input.data, p.input.data)

    def test_rot90_four_times(self, random_pair):
        p = random_pair(1)
        for _ in range(4):
            p = apply_dihedral_pair(p, 1)
        assert np.array_equal(p.input.data, random_pair(1).input.data)

    def test_hflip_twice(self, random_pair):
        p = random_pair(2)
        q = apply_dihedral_pair(apply_dihedral_pair(p, 4), 4)
        assert np.array_equal(q.input.data, p.input.data)

    @settings(max_examples=20, deadline=None)
    @given(k=st.integers(0, 7), seed=st.integers(0, 100))
    def test_input_target_consistency(self, k, seed):
        r = np.random.default_rng(seed)
        inp = Image(r.random((6, 8, 3)).astype(np.float32))
        tgt = Image(r.random((6, 8, 3)).astype(np.float32))
        q = apply_dihedral_pair(pa.AlignedPair(input=inp, target=tgt), k)
        # the same spatial map applied to both planes
        from pairaug.augment import _dihedral
        assert np.array_equal(q.input.data, _dihedral(inp.data, k))
        assert np.array_equal(q.target.data, _dihedral(tgt.data, k))


class TestGeneralProperties:
    @pytest.mark.parametrize("method", ["cutblur", "cutout", "rgb_permute", "blend",
                                        "flip_rotate"])
    def test_determinism_single_sample(self, method, random_pair):
        p = random_pair(0)
        fn = getattr(pa, method)
        a = fn(p, rng=Rng(77)) if method in ("rgb_permute", "flip_rotate") \
            else fn(p, rng=Rng(77))
        b = fn(p, rng=Rng(77))
        assert np.array_equal(a.input.data, b.input.data)
        assert np.array_equal(a.target.data, b.target.data)
        assert a.record == b.record

    @pytest.mark.parametrize("method", ["cutmix", "mixup", "cutmixup"])
    def test_determinism_two_sample(self, method, random_pair):
        a, b = random_pair(1), random_pair(2)
        fn = getattr(pa, method)
        s1 = fn(a, b, rng=Rng(88))
        s2 = fn(a, b, rng=Rng(88))
        assert np.array_equal(s1.input.data, s2.input.data)

    def test_outputs_stay_in_range(self, random_pair):
        a, b = random_pair(3), random_pair(4)
        rng = Rng(5)
        for s in (pa.cutblur(a, 0.7, rng), pa.mixup(a, b, 1.2, rng),
                  pa.blend(a, 0.6, rng), pa.cutmixup(a, b, rng=rng)):
            assert s.input.data.min() >= 0.0 and s.input.data.max() <= 1.0

    def test_replay_matches_bit_exact(self, random_pair):
        a, b = random_pair(6), random_pair(7)
        cases = [
            (pa.cutblur(a, 0.7, Rng(1)), None),
            (pa.cutout(a, 0.1, Rng(2)), None),
            (pa.cutmix(a, b, 0.7, Rng(3)), b),
            (pa.mixup(a, b, 1.2, Rng(4)), b),
            (pa.cutmixup(a, b, rng=Rng(5)), b),
            (pa.rgb_permute(a, Rng(6)), None),
            (pa.blend(a, 0.6, Rng(7)), None),
            (pa.flip_rotate(a, Rng(8)), None),
            (passthrough(a), None),
        ]
        for sample, partner in cases:
            again = replay(sample.record, a, partner)
            assert np.array_equal(again.input.data, sample.input.data), sample.record.method
            assert np.array_equal(again.target.data, sample.target.data)
            assert np.array_equal(again.loss_mask.valid, sample.loss_mask.valid)
