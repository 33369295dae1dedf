import numpy as np
import pytest

from vowelspace.audio import AudioBuffer
from vowelspace.errors import NoVoicedSegment, TooShort
from vowelspace.segment import first_segment, frame_energy_db

RATE = 16000
HOP = 160  # 10 ms at 16 kHz


def sine(duration_s, freq=220.0, amplitude=1.0, rate=RATE):
    t = np.arange(int(round(duration_s * rate))) / rate
    return amplitude * np.sin(2 * np.pi * freq * t)


def gap_signal(voiced_s=1.0, gap_s=0.5, tail_s=1.0, amplitude=0.9):
    return AudioBuffer(np.concatenate([
        sine(voiced_s, amplitude=amplitude),
        np.zeros(int(round(gap_s * RATE))),
        sine(tail_s, amplitude=amplitude),
    ]), RATE)


class TestFrameEnergy:
    def test_silence_hits_floor(self):
        buf = AudioBuffer(np.zeros(RATE), RATE)
        energies = frame_energy_db(buf)
        assert np.all(energies == -160.0)

    def test_full_scale_sine_is_minus_3db(self):
        buf = AudioBuffer(sine(0.5, freq=640.0), RATE)  # whole periods per frame
        energies = frame_energy_db(buf)
        assert np.median(energies) == pytest.approx(-3.0103, abs=0.05)

    def test_dc_half_amplitude(self):
        buf = AudioBuffer(np.full(RATE // 2, 0.5), RATE)
        energies = frame_energy_db(buf)
        assert energies[0] == pytest.approx(20 * np.log10(0.5), abs=1e-9)

    def test_too_short(self):
        with pytest.raises(TooShort):
            frame_energy_db(AudioBuffer(np.zeros(100), RATE))


class TestFirstSegment:
    def test_constructed_layout_within_one_hop(self):
        seg = first_segment(gap_signal())
        assert abs(seg.start_sample - 0) <= HOP
        assert abs(seg.end_sample - RATE) <= HOP

    def test_with_noise_60db_down(self):
        buf = gap_signal()
        rng = np.random.default_rng(7)
        noisy = buf.samples + 1e-3 * 0.9 * rng.standard_normal(len(buf))
        seg = first_segment(AudioBuffer(np.clip(noisy, -1, 1), RATE))
        assert abs(seg.start_sample - 0) <= HOP
        assert abs(seg.end_sample - RATE) <= HOP

    def test_unbroken_sine_returns_whole_buffer(self):
        buf = AudioBuffer(sine(1.0), RATE)
        seg = first_segment(buf)
        assert (seg.start_sample, seg.end_sample) == (0, len(buf))

    def test_all_silence_raises(self):
        with pytest.raises(NoVoicedSegment):
            first_segment(AudioBuffer(np.zeros(RATE), RATE))

    def test_near_silent_noise_raises(self):
        rng = np.random.default_rng(3)
        x = 1e-7 * rng.standard_normal(RATE)
        with pytest.raises(NoVoicedSegment):
            first_segment(AudioBuffer(x, RATE))

    def test_leading_silence_is_skipped(self):
        buf = AudioBuffer(np.concatenate([
            np.zeros(RATE // 2), sine(1.0, amplitude=0.9),
            np.zeros(RATE // 2)]), RATE)
        seg = first_segment(buf)
        assert abs(seg.start_sample - RATE // 2) <= HOP
        assert abs(seg.end_sample - (RATE // 2 + RATE)) <= HOP

    def test_short_blip_is_not_a_segment(self):
        # a 30 ms click precedes the real 1 s vowel
        buf = AudioBuffer(np.concatenate([
            sine(0.03, amplitude=0.9), np.zeros(RATE // 2),
            sine(1.0, amplitude=0.9)]), RATE)
        seg = first_segment(buf, min_voiced_ms=60.0)
        start_truth = int(0.03 * RATE) + RATE // 2
        assert abs(seg.start_sample - start_truth) <= HOP

    def test_short_dips_are_bridged(self):
        # 20 ms dip splits the vowel; below min_silence it must not end it
        buf = AudioBuffer(np.concatenate([
            sine(0.5, amplitude=0.9), np.zeros(int(0.02 * RATE)),
            sine(0.5, amplitude=0.9), np.zeros(RATE // 2),
            sine(0.5, amplitude=0.9)]), RATE)
        seg = first_segment(buf)
        truth_end = int(RATE * (0.5 + 0.02 + 0.5))
        assert abs(seg.end_sample - truth_end) <= HOP

    def test_raising_threshold_never_lengthens_the_run(self):
        buf = gap_signal()
        lengths = []
        for thr in (5.0, 10.0, 20.0, 40.0, 60.0):
            try:
                seg = first_segment(buf, threshold_db=thr)
                lengths.append(seg.end_sample - seg.start_sample)
            except NoVoicedSegment:
                lengths.append(0)
        assert all(a >= b for a, b in zip(lengths, lengths[1:]))

    def test_bounds_always_inside_buffer(self):
        for gap in (0.0, 0.08, 0.3, 0.7):
            for tail in (0.0, 0.4):
                buf = gap_signal(voiced_s=0.4, gap_s=gap, tail_s=tail)
                seg = first_segment(buf)
                assert 0 <= seg.start_sample < seg.end_sample <= len(buf)

    def test_too_short_for_frames(self):
        with pytest.raises(TooShort):
            first_segment(AudioBuffer(np.zeros(50), RATE))
