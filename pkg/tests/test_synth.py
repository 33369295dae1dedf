import numpy as np
import pytest

from vowelspace.errors import NoVoicedSegment
from vowelspace.formant import measure_vowel
from vowelspace.segment import first_segment
from vowelspace.synth import VowelSpec, synth_utterance_with_gap, synth_vowel

STANDARD = dict(duration_s=0.4, sample_rate=16000)


def spec_for(f1, f2, **overrides):
    kwargs = dict(f0=120.0, formants=((f1, 110.0), (f2, 110.0), (2900.0, 170.0)),
                  **STANDARD)
    kwargs.update(overrides)
    return VowelSpec(**kwargs)


def envelope_peaks(x, rate, f0):
    """Spectral-envelope maxima from parabolic fits over harmonic peaks."""
    spectrum = np.abs(np.fft.rfft(x * np.hanning(len(x))))
    freqs = np.fft.rfftfreq(len(x), 1.0 / rate)
    harmonics = np.arange(f0, rate / 2 - f0, f0)
    amps = np.log([spectrum[np.argmin(np.abs(freqs - h))] for h in harmonics])
    peaks = []
    for i in range(1, len(harmonics) - 1):
        if amps[i] > amps[i - 1] and amps[i] >= amps[i + 1]:
            denom = amps[i - 1] - 2 * amps[i] + amps[i + 1]
            shift = (amps[i - 1] - amps[i + 1]) / (2 * denom)
            peaks.append(harmonics[i] + shift * f0)
    return peaks


class TestSynthVowel:
    def test_length_and_peak_contract(self):
        buf = synth_vowel(VowelSpec(120.0, ((500, 80), (1500, 100)), 1.0, 16000))
        assert len(buf) == 16000
        assert np.max(np.abs(buf.samples)) == pytest.approx(0.9)

    def test_envelope_maxima_near_formants(self):
        spec = VowelSpec(120.0, ((500, 80), (1500, 100)), 1.0, 16000,
                         glottal_bw=0.0)  # untilted: resonances only
        buf = synth_vowel(spec)
        peaks = envelope_peaks(buf.samples, 16000, 120.0)
        assert min(abs(p - 500) for p in peaks) <= 40
        assert min(abs(p - 1500) for p in peaks) <= 40

    def test_f0_does_not_move_the_estimates(self):
        noisy = dict(noise_level=0.15, noise_seed=0)
        low = measure_vowel(synth_vowel(spec_for(500, 1500, **noisy)))
        high = measure_vowel(synth_vowel(spec_for(500, 1500, f0=180.0, **noisy)))
        assert abs(low.f1 - high.f1) < 30
        assert abs(low.f2 - high.f2) < 30

    def test_deterministic(self):
        a = synth_vowel(spec_for(700, 1200))
        b = synth_vowel(spec_for(700, 1200))
        assert np.array_equal(a.samples, b.samples)

    def test_noise_excitation_deterministic_per_seed(self):
        a = synth_vowel(spec_for(700, 1200, noise_level=0.2, noise_seed=5))
        b = synth_vowel(spec_for(700, 1200, noise_level=0.2, noise_seed=5))
        c = synth_vowel(spec_for(700, 1200, noise_level=0.2, noise_seed=6))
        assert np.array_equal(a.samples, b.samples)
        assert not np.array_equal(a.samples, c.samples)

    def test_output_in_range(self):
        buf = synth_vowel(spec_for(300, 2200, noise_level=0.3))
        assert np.max(np.abs(buf.samples)) <= 1.0

    @pytest.mark.parametrize("bad", [
        dict(f0=30.0), dict(f0=500.0), dict(duration_s=0.0),
        dict(formants=((500, 80),)),
        dict(formants=((500, 80), (400, 90), (2900, 170))),
        dict(formants=((500, 80), (1500, 90), (9000, 170))),
    ])
    def test_invalid_specs_rejected(self, bad):
        kwargs = dict(f0=120.0, formants=((500, 80), (1500, 100)), **STANDARD)
        kwargs.update(bad)
        with pytest.raises(ValueError):
            VowelSpec(**kwargs)


class TestUtteranceWithGap:
    def test_gap_is_exactly_silent(self):
        spec = spec_for(700, 1200, duration_s=1.0)
        buf = synth_utterance_with_gap(spec, gap_s=0.5, tail_s=1.0)
        n_vowel = 16000
        n_gap = round(0.5 * 16000)
        assert len(buf) == n_vowel + n_gap + 16000
        assert np.all(buf.samples[n_vowel:n_vowel + n_gap] == 0.0)

    def test_first_segment_recovers_the_layout(self):
        spec = spec_for(700, 1200, duration_s=1.0)
        buf = synth_utterance_with_gap(spec, gap_s=0.5, tail_s=1.0)
        seg = first_segment(buf)
        hop = round(16000 * 0.010)
        assert abs(seg.start_sample - 0) <= hop
        assert abs(seg.end_sample - 16000) <= hop

    def test_zero_gap_is_one_run(self):
        spec = spec_for(700, 1200, duration_s=0.5)
        buf = synth_utterance_with_gap(spec, gap_s=0.0, tail_s=0.5)
        seg = first_segment(buf)
        assert (seg.start_sample, seg.end_sample) == (0, len(buf))

    def test_pure_silence_has_no_segment(self):
        buf = synth_utterance_with_gap(spec_for(700, 1200), 1.0, 0.0)
        silent = buf.samples[len(buf) - 8000:]
        from vowelspace.audio import AudioBuffer
        with pytest.raises(NoVoicedSegment):
            first_segment(AudioBuffer(silent, 16000))
