"""Tests for brightness folding, duty cycling, per-symbol SNR, and waveform assembly."""

import csv

import numpy as np
import pytest
from numpy.testing import assert_array_equal

import vlcsim as v
from vlcsim.errors import CurrentRangeError, DutyCycleError

LED = v.LedModel()


def make_symbols(count, n=64, oversample=4, seed=1):
    return [v.to_time_domain(
                v.generate_freq_symbol(n, v.Constellation.QPSK, v.symbol_rng(seed, i)),
                oversample)
            for i in range(count)]


class TestEffectiveBrightness:
    def test_low_target_passes_through(self):
        assert v.effective_brightness(0.25) == (0.25, False)

    def test_high_target_mirrors(self):
        lam_eff, mirrored = v.effective_brightness(0.7)
        assert mirrored
        assert lam_eff == pytest.approx(0.3)

    def test_midpoint_not_mirrored(self):
        assert v.effective_brightness(0.5) == (0.5, False)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.3])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            v.effective_brightness(bad)


class TestDutyCycle:
    def test_example_operating_point(self):
        assert v.duty_cycle(0.25, 0.4) == pytest.approx(0.625)

    def test_equal_ratio_means_always_on(self):
        assert v.duty_cycle(0.3, 0.3) == 1.0

    def test_half(self):
        assert v.duty_cycle(0.1, 0.2) == pytest.approx(0.5)

    def test_ratio_below_brightness_is_infeasible(self):
        with pytest.raises(DutyCycleError):
            v.duty_cycle(0.3, 0.2)

    def test_ratio_must_stay_below_one(self):
        with pytest.raises(ValueError):
            v.duty_cycle(0.3, 1.0)


class TestDimmingSpec:
    def test_pwm_requires_forward_ratio(self):
        with pytest.raises(ValueError):
            v.DimmingSpec(brightness=0.2, scheme=v.Scheme.PWM, dnr=1.0)

    def test_biasing_rejects_forward_ratio(self):
        with pytest.raises(ValueError):
            v.DimmingSpec(brightness=0.2, scheme=v.Scheme.BIASING_ADJUSTMENT, dnr=1.0,
                          forward_ratio=0.4)

    def test_pwm_ratio_checked_against_effective_brightness(self):
        # brightness 0.7 mirrors to 0.3, so 0.4 is feasible
        v.DimmingSpec(brightness=0.7, scheme=v.Scheme.PWM, dnr=1.0, forward_ratio=0.4)
        with pytest.raises(DutyCycleError):
            v.DimmingSpec(brightness=0.45, scheme=v.Scheme.PWM, dnr=1.0, forward_ratio=0.4)

    def test_rejects_negative_dnr(self):
        with pytest.raises(ValueError):
            v.DimmingSpec(brightness=0.2, scheme=v.Scheme.BIASING_ADJUSTMENT, dnr=-1.0)


class TestPwmFrame:
    def test_frame_timing_and_level(self):
        frame = v.pwm_frame(0.25, 0.4, LED, on_duration=2.0)
        assert frame.on_duration == 2.0
        assert frame.period == pytest.approx(3.2)
        assert frame.on_level == pytest.approx(0.4)

    def test_on_level_dominates_average_current(self):
        lam_eff, gamma = 0.2, 0.35
        frame = v.pwm_frame(lam_eff, gamma, LED)
        i_avg = LED.i_low + lam_eff * LED.dynamic_range
        assert LED.i_low < frame.on_level < LED.i_high
        assert frame.on_level >= i_avg


class TestSnrSample:
    def test_symmetric_papr(self):
        assert v.snr_sample(0.5, v.PaprSample(4.0, 4.0), 16.0) == pytest.approx(1.0)

    def test_zero_budget(self):
        assert v.snr_sample(0.3, v.PaprSample(9.0, 2.0), 0.0) == 0.0

    def test_asymmetric_papr(self):
        assert v.snr_sample(0.2, v.PaprSample(9.0, 4.0), 100.0) == pytest.approx(1.0, rel=1e-12)

    def test_inherits_both_symmetries(self):
        papr = v.PaprSample(8.5, 3.5)
        for zeta in (0.13, 0.42):
            assert v.snr_sample(zeta, papr, 7.0) == v.snr_sample(1.0 - zeta, papr, 7.0)
            assert (v.snr_sample(zeta, papr, 7.0)
                    == v.snr_sample(zeta, v.PaprSample(3.5, 8.5), 7.0))

    def test_argmax_over_gamma_matches_variance(self):
        """DNR scaling cannot move the best forward ratio."""
        papr = v.PaprSample(6.7, 3.1)
        gammas = np.arange(0.1, 0.51, 0.01)
        snrs = [v.snr_sample(g, papr, 250.0) for g in gammas]
        variances = [v.variance_closed_form(g, papr, LED) for g in gammas]
        assert np.argmax(snrs) == np.argmax(variances)


class TestAssembleWaveform:
    def test_five_symbol_demo_layout(self):
        """Five N=256 symbols at brightness 0.25, ratio 0.4: biased blocks and gaps."""
        symbols = make_symbols(5, n=256)
        spec = v.DimmingSpec(brightness=0.25, scheme=v.Scheme.PWM, dnr=1.0, forward_ratio=0.4)
        wave = v.assemble_waveform(symbols, spec, LED)
        on_len = 256 * 4
        off_len = round(on_len * (1 - 0.625) / 0.625)
        assert len(wave) == 5 * (on_len + off_len)
        frame = on_len + off_len
        for k in range(5):
            block = wave[k * frame: k * frame + on_len]
            gap = wave[k * frame + on_len: (k + 1) * frame]
            assert abs(float(np.mean(block)) - 0.4) < 1e-9
            assert np.all(block >= LED.i_low - 1e-9) and np.all(block <= LED.i_high + 1e-9)
            assert_array_equal(gap, np.zeros(off_len))
        optical = v.optical_output(wave, LED)
        assert float(np.mean(optical)) == pytest.approx(0.25 * LED.o_high, rel=0.02)

    def test_biasing_waveform_mean_is_the_bias(self):
        symbols = make_symbols(1)
        spec = v.DimmingSpec(brightness=0.5, scheme=v.Scheme.BIASING_ADJUSTMENT, dnr=1.0)
        wave = v.assemble_waveform(symbols, spec, LED)
        assert abs(float(np.mean(wave)) - 0.5) < 1e-9

    def test_pwm_at_gamma_equal_brightness_is_biasing(self):
        symbols = make_symbols(4)
        biasing = v.assemble_waveform(
            symbols, v.DimmingSpec(brightness=0.25, scheme=v.Scheme.BIASING_ADJUSTMENT, dnr=1.0),
            LED)
        pwm = v.assemble_waveform(
            symbols, v.DimmingSpec(brightness=0.25, scheme=v.Scheme.PWM, dnr=1.0,
                                   forward_ratio=0.25), LED)
        assert_array_equal(biasing, pwm)

    @pytest.mark.parametrize("scheme,gamma", [(v.Scheme.BIASING_ADJUSTMENT, None),
                                              (v.Scheme.PWM, 0.4)])
    def test_mirrored_target_meets_requested_brightness(self, scheme, gamma):
        """Brightness 0.7 waveforms average 0.7 of peak output."""
        symbols = make_symbols(300, seed=4)
        spec = v.DimmingSpec(brightness=0.7, scheme=scheme, dnr=1.0, forward_ratio=gamma)
        wave = v.assemble_waveform(symbols, spec, LED)
        optical = v.optical_output(wave, LED)
        assert float(np.mean(optical)) == pytest.approx(0.7 * LED.o_high, rel=0.01)

    def test_mirrored_pwm_needs_grounded_range(self):
        symbols = make_symbols(2)
        led = v.LedModel(0.1, 1.0, 1.0)
        spec = v.DimmingSpec(brightness=0.7, scheme=v.Scheme.PWM, dnr=1.0, forward_ratio=0.4)
        with pytest.raises(CurrentRangeError):
            v.assemble_waveform(symbols, spec, led)
        # biasing has no off state, so mirroring works on any range
        v.assemble_waveform(
            symbols, v.DimmingSpec(brightness=0.7, scheme=v.Scheme.BIASING_ADJUSTMENT, dnr=1.0),
            led)

    def test_on_samples_in_range_off_samples_zero(self):
        symbols = make_symbols(10, seed=9)
        spec = v.DimmingSpec(brightness=0.1, scheme=v.Scheme.PWM, dnr=1.0, forward_ratio=0.3)
        wave = v.assemble_waveform(symbols, spec, LED)
        d = 0.1 / 0.3
        on_len = 256
        off_len = round(on_len * (1 - d) / d)
        assert len(wave) == 10 * (on_len + off_len)
        for k in range(10):
            start = k * (on_len + off_len)
            block = wave[start: start + on_len]
            gap = wave[start + on_len: start + on_len + off_len]
            assert np.all(block >= LED.i_low - 1e-9) and np.all(block <= LED.i_high + 1e-9)
            assert_array_equal(gap, np.zeros(off_len))


class TestWaveformCsv:
    def test_writes_current_and_optical_columns(self, tmp_path):
        symbols = make_symbols(2)
        spec = v.DimmingSpec(brightness=0.25, scheme=v.Scheme.BIASING_ADJUSTMENT, dnr=1.0)
        wave = v.assemble_waveform(symbols, spec, LED)
        path = tmp_path / "wave.csv"
        v.write_waveform_csv(path, wave, LED)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["sample_index", "current", "optical"]
        assert len(rows) == len(wave) + 1
        assert float(rows[1][1]) == wave[0]
        assert float(rows[1][2]) == v.optical_output(wave[0], LED)
