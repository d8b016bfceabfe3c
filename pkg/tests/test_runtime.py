import threading

import numpy as np
import pytest

from spectilt import (
    AlphaMailbox,
    BandSpec,
    DigitalFilter,
    GaussianSource,
    OutOfRangeError,
    Section,
    StreamingFilter,
    colored_noise,
    design_tilt,
    digitize_design,
    pink_noise,
)


class TestGaussianSource:
    def test_deterministic_per_seed(self):
        a = GaussianSource(1234).block(4096)
        b = GaussianSource(1234).block(4096)
        assert np.array_equal(a, b)
        c = GaussianSource(1235).block(4096)
        assert not np.array_equal(a, c)

    def test_consecutive_blocks_continue_the_stream(self):
        src = GaussianSource(7)
        joined = np.concatenate([src.block(100), src.block(156)])
        assert np.array_equal(joined, GaussianSource(7).block(256))

    def test_unit_variance_and_zero_mean(self):
        x = GaussianSource(42).block(1 << 18)
        assert abs(x.mean()) < 0.01
        assert abs(x.std() - 1.0) < 0.01
        assert np.all(np.isfinite(x))


def _single_section_filter(b0, b1, a1, gain=1.0, fs=48000.0):
    return StreamingFilter(DigitalFilter(sections=(Section(b0, b1, a1),),
                                         gain=gain, sample_rate_hz=fs))


class TestProcess:
    def test_identity_at_zero_slope(self):
        filt = StreamingFilter.for_design(design_tilt(0.0), 48000.0)
        x = np.random.default_rng(3).standard_normal(4096)
        y = filt.process(x)
        assert np.max(np.abs(y - x)) < 1e-12

    def test_impulse_matches_unrolled_recursion(self):
        b0, b1, a1 = 0.7, -0.2, -0.5
        filt = _single_section_filter(b0, b1, a1)
        x = np.zeros(6)
        x[0] = 1.0
        y = filt.process(x)
        expected = [b0, b1 - a1 * b0]
        for _ in range(4):
            expected.append(-a1 * expected[-1])
        assert y == pytest.approx(expected, rel=1e-15)

    def test_gain_applied_once(self):
        filt = _single_section_filter(1.0, 0.0, 0.0, gain=2.5)
        y = filt.process(np.ones(4))
        assert y == pytest.approx([2.5] * 4)

    def test_linearity(self, default_design):
        x = np.random.default_rng(11).standard_normal(2048)
        y = np.random.default_rng(12).standard_normal(2048)
        f1 = StreamingFilter.for_design(default_design, 48000.0)
        f2 = StreamingFilter.for_design(default_design, 48000.0)
        f3 = StreamingFilter.for_design(default_design, 48000.0)
        lhs = f1.process(x + y)
        rhs = f2.process(x) + f3.process(y)
        scale = np.max(np.abs(lhs))
        assert np.max(np.abs(lhs - rhs)) / scale < 1e-9

    def test_chunk_invariance_bitwise(self, default_design):
        x = GaussianSource(5).block(10000)
        one = StreamingFilter.for_design(default_design, 48000.0).process(x)
        filt = StreamingFilter.for_design(default_design, 48000.0)
        pieces = [filt.process(x[a:b]) for a, b in [(0, 1), (1, 64), (64, 5000), (5000, 10000)]]
        assert np.array_equal(one, np.concatenate(pieces))

    def test_rejects_nan(self, default_design):
        filt = StreamingFilter.for_design(default_design, 48000.0)
        bad = np.ones(16)
        bad[7] = np.nan
        with pytest.raises(ValueError):
            filt.process(bad)

    def test_empty_block(self, default_design):
        filt = StreamingFilter.for_design(default_design, 48000.0)
        assert filt.process(np.array([])).size == 0


class TestSetAlpha:
    def test_requires_design_context(self, default_design):
        dfilt, _ = digitize_design(default_design, 48000.0)
        bare = StreamingFilter(dfilt)
        with pytest.raises(OutOfRangeError):
            bare.set_alpha(0.0)

    def test_out_of_range(self, default_design):
        filt = StreamingFilter.for_design(default_design, 48000.0)
        with pytest.raises(OutOfRangeError):
            filt.set_alpha(1.5)

    def test_same_alpha_is_bit_exact_noop(self, default_design):
        filt = StreamingFilter.for_design(default_design, 48000.0)
        b0 = filt._b0.copy()
        b1 = filt._b1.copy()
        gain = filt.gain
        filt.set_alpha(default_design.spec.alpha)
        assert np.array_equal(filt._b0, b0)
        assert np.array_equal(filt._b1, b1)
        assert filt.gain == gain

    def test_states_preserved_across_update(self, default_design):
        x = GaussianSource(9).block(256)
        a = StreamingFilter.for_design(default_design, 48000.0)
        b = StreamingFilter.for_design(default_design, 48000.0)
        ya = [a.process(x[:128])]
        b.process(x[:128])
        b.set_alpha(default_design.spec.alpha)  # bit-exact no-op keeps states
        ya.append(a.process(x[128:]))
        yb = b.process(x[128:])
        assert np.array_equal(ya[1], yb)

    def test_denominators_constant_under_schedule(self, default_design):
        filt = StreamingFilter.for_design(default_design, 48000.0)
        a1 = filt.denominators
        x = GaussianSource(13).block(64)
        for alpha in np.linspace(-1.0, 1.0, 65):
            filt.set_alpha(float(alpha))
            filt.process(x)
        assert np.array_equal(filt.denominators, a1)

    def test_max_in_band_gain_bounded(self, default_design):
        # Edge-anchored leveling: no in-band frequency ever exceeds unity gain.
        from spectilt import digital_response

        dfilt, ctx = digitize_design(default_design, 48000.0)
        f = np.linspace(20.0, 20000.0, 400)
        for alpha in (-1.0, -0.5, 0.0, 0.5, 1.0):
            b0, b1, gain = ctx.rebuild(alpha)
            probe = DigitalFilter(
                sections=tuple(
                    Section(float(b0[i]), float(b1[i]), s.a1)
                    for i, s in enumerate(dfilt.sections)
                ),
                gain=gain,
                sample_rate_hz=48000.0,
            )
            mags = np.abs(digital_response(probe, f))
            assert np.max(mags) < 1.05


class TestAlphaMailbox:
    def test_at_most_one_pending(self):
        box = AlphaMailbox()
        assert box.take() is None
        box.post(0.25)
        box.post(-0.5)
        assert box.take() == -0.5
        assert box.take() is None

    def test_threaded_handoff(self):
        box = AlphaMailbox()
        values = np.linspace(-1.0, 1.0, 100)

        def producer():
            for v in values:
                box.post(float(v))

        t = threading.Thread(target=producer)
        t.start()
        t.join()
        assert box.take() == 1.0

    def test_drain_between_blocks(self, default_design):
        # Control-thread updates land between blocks on the owning context;
        # the stream stays finite and the denominators never move.
        box = AlphaMailbox()
        filt = StreamingFilter.for_design(default_design, 48000.0)
        a1 = filt.denominators
        x = GaussianSource(31).block(64 * 64)

        def controller():
            for v in np.linspace(-1.0, 1.0, 200):
                box.post(float(v))

        t = threading.Thread(target=controller)
        t.start()
        out = []
        for b in range(64):
            pending = box.take()
            if pending is not None:
                filt.set_alpha(pending)
            out.append(filt.process(x[b * 64 : (b + 1) * 64]))
        t.join()
        y = np.concatenate(out)
        assert np.all(np.isfinite(y))
        assert np.array_equal(filt.denominators, a1)


class TestNoise:
    def test_pink_deterministic(self):
        a = pink_noise(seed=77, n_samples=4096, fs_hz=48000.0)
        b = pink_noise(seed=77, n_samples=4096, fs_hz=48000.0)
        assert np.array_equal(a, b)

    def test_color_zero_is_white(self):
        x = colored_noise(0.0, seed=3, n_samples=4096, fs_hz=48000.0)
        w = GaussianSource(3).block(4096)
        assert np.max(np.abs(x - w)) < 1e-12

    def test_band_argument(self):
        x = pink_noise(seed=1, n_samples=1024, fs_hz=8000.0, band=BandSpec(10.0, 3000.0))
        assert np.all(np.isfinite(x))

    def test_needs_samples(self):
        with pytest.raises(OutOfRangeError):
            colored_noise(-0.5, seed=0, n_samples=0, fs_hz=48000.0)
