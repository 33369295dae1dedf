import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vowelspace.audio import (AudioBuffer, frames, load_audio, resample,
                              save_audio)
from vowelspace.errors import EmptyAudio, MissingFile, UnsupportedFormat

from .conftest import wav_bytes


def _dominant_peak(x, rate):
    spectrum = np.abs(np.fft.rfft(x))
    freqs = np.fft.rfftfreq(len(x), 1.0 / rate)
    k = int(np.argmax(spectrum))
    return freqs[k], 2.0 * spectrum[k] / len(x)


class TestLoad:
    def test_mono_pcm16_header_arithmetic(self, write_wav):
        data = struct.pack("<16000h", *([1000] * 16000))
        buf = load_audio(write_wav("mono.wav", data=data, rate=16000))
        assert len(buf) == 16000
        assert buf.sample_rate == 16000
        assert buf.samples[0] == pytest.approx(1000 / 32768)

    def test_symmetric_stereo_downmixes_to_zero(self, write_wav):
        halves = [16384, -16384] * 500  # +0.5 / -0.5 per channel
        data = struct.pack(f"<{len(halves)}h", *halves)
        buf = load_audio(write_wav("stereo.wav", data=data, channels=2))
        assert np.all(buf.samples == 0.0)

    def test_mulaw_rejected(self, write_wav):
        path = write_wav("mulaw.wav", data=b"\x00" * 64, audio_format=7, bits=8)
        with pytest.raises(UnsupportedFormat):
            load_audio(path)

    def test_pcm8_rejected(self, write_wav):
        with pytest.raises(UnsupportedFormat):
            load_audio(write_wav("pcm8.wav", data=b"\x00" * 64, bits=8))

    def test_three_channels_rejected(self, write_wav):
        with pytest.raises(UnsupportedFormat):
            load_audio(write_wav("c3.wav", data=b"\x00" * 12, channels=3))

    def test_float32_supported(self, write_wav):
        values = np.array([0.25, -0.5, 1.0, -1.0], dtype="<f4")
        buf = load_audio(write_wav("f32.wav", data=values.tobytes(),
                                   audio_format=3, bits=32))
        assert np.allclose(buf.samples, [0.25, -0.5, 1.0, -1.0])

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingFile):
            load_audio(tmp_path / "nope.wav")

    def test_empty_data_chunk(self, write_wav):
        with pytest.raises(EmptyAudio):
            load_audio(write_wav("empty.wav", data=b""))

    def test_not_riff(self, tmp_path):
        path = tmp_path / "bad.wav"
        path.write_bytes(b"OggS" + b"\x00" * 40)
        with pytest.raises(UnsupportedFormat):
            load_audio(path)

    def test_unknown_chunks_are_skipped(self, write_wav):
        data = struct.pack("<4h", 100, 200, 300, 400)
        path = write_wav("listed.wav", data=data,
                         extra_chunks=((b"LIST", b"INFOxyz"),))
        assert len(load_audio(path)) == 4


class TestSaveRoundTrip:
    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0, width=32),
                    min_size=1, max_size=300))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_within_half_lsb(self, values, tmp_path_factory):
        path = tmp_path_factory.mktemp("wav") / "rt.wav"
        buf = AudioBuffer(np.array(values), 8000)
        save_audio(buf, path)
        back = load_audio(path)
        assert back.sample_rate == 8000
        assert np.max(np.abs(back.samples - buf.samples)) <= 1.0 / 32768


class TestResample:
    def test_identity_returns_same_buffer(self):
        buf = AudioBuffer(np.zeros(100), 16000)
        assert resample(buf, 16000) is buf

    def test_length_formula(self):
        buf = AudioBuffer(np.zeros(44100), 44100)
        assert len(resample(buf, 10000)) == 10000

    def test_sine_survives_downsampling(self):
        rate = 44100
        t = np.arange(rate) / rate
        buf = AudioBuffer(0.5 * np.sin(2 * np.pi * 440.0 * t), rate)
        out = resample(buf, 10000)
        freq, amp = _dominant_peak(out.samples, 10000)
        assert abs(freq - 440.0) <= 5.0
        assert abs(amp - 0.5) <= 0.025

    def test_band_limited_round_trip_keeps_peaks(self):
        rate = 16000
        t = np.arange(rate) / rate
        x = 0.4 * np.sin(2 * np.pi * 500 * t) + 0.3 * np.sin(2 * np.pi * 1900 * t)
        buf = AudioBuffer(x, rate)
        back = resample(resample(buf, 10000), rate)
        f_orig, _ = _dominant_peak(buf.samples, rate)
        f_back, _ = _dominant_peak(back.samples, rate)
        assert abs(f_orig - f_back) <= 5.0

    def test_output_clamped(self):
        x = np.zeros(64)
        x[20:40] = 1.0  # step edges ring above 1.0 after interpolation
        out = resample(AudioBuffer(x, 8000), 12000)
        assert np.max(np.abs(out.samples)) <= 1.0


class TestFrames:
    def test_exact_fit_single_frame(self):
        buf = AudioBuffer(np.arange(400) / 400.0, 16000)
        got = frames(buf, 25.0, 10.0)
        assert got.shape == (1, 400)

    def test_three_frames_by_formula(self):
        buf = AudioBuffer(np.arange(720) / 720.0, 16000)
        got = frames(buf, 25.0, 10.0)
        assert got.shape == (3, 400)
        for k in range(3):
            assert np.array_equal(got[k], buf.samples[k * 160:k * 160 + 400])

    def test_too_short_yields_zero_frames(self):
        buf = AudioBuffer(np.zeros(399), 16000)
        assert frames(buf, 25.0, 10.0).shape[0] == 0

    @given(n=st.integers(min_value=1, max_value=4000),
           flen=st.integers(min_value=1, max_value=600),
           hop=st.integers(min_value=1, max_value=400))
    @settings(max_examples=80, deadline=None)
    def test_index_arithmetic(self, n, flen, hop):
        rate = 1000  # 1 ms == 1 sample keeps the arithmetic transparent
        buf = AudioBuffer(np.arange(n, dtype=float) / n, rate)
        got = frames(buf, float(flen), float(hop))
        expected = (n - flen) // hop + 1 if n >= flen else 0
        assert got.shape[0] == expected
        for k in range(got.shape[0]):
            assert got[k][0] == buf.samples[k * hop]
            assert got[k][-1] == buf.samples[k * hop + flen - 1]


class TestBufferInvariants:
    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            AudioBuffer(np.array([0.0, np.nan]), 8000)

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            AudioBuffer(np.zeros(4), 0)

    def test_rejects_stereo_array(self):
        with pytest.raises(ValueError):
            AudioBuffer(np.zeros((4, 2)), 8000)
