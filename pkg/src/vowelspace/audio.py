"""WAV loading, resampling, and framing of mono audio signals."""

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyAudio, MissingFile, UnsupportedFormat

_PCM = 1
_IEEE_FLOAT = 3


@dataclass(frozen=True)
class AudioBuffer:
    """Mono audio signal: float64 samples in [-1, 1] at a fixed sample rate."""

    samples: np.ndarray = field(repr=False)
    sample_rate: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("samples must be one-dimensional (mono)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


def load_audio(path) -> AudioBuffer:
    """Load a RIFF/WAVE file as a mono AudioBuffer.

    Accepts PCM 16-bit and IEEE float 32-bit, 1 or 2 channels.  Stereo is
    downmixed by per-sample channel mean; integer samples are scaled to
    [-1, 1] by dividing by 32768.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    blob = path.read_bytes()
    if len(blob) < 12 or blob[0:4] != b"RIFF" or blob[8:12] != b"WAVE":
        raise UnsupportedFormat(f"not a RIFF/WAVE file: {path}")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(blob):
        cid = blob[pos:pos + 4]
        (size,) = struct.unpack_from("<I", blob, pos + 4)
        body = blob[pos + 8:pos + 8 + size]
        if cid == b"fmt ":
            if len(body) < 16:
                raise UnsupportedFormat(f"truncated fmt chunk: {path}")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif cid == b"data":
            data = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise UnsupportedFormat(f"missing fmt chunk: {path}")
    audio_format, channels, rate, _byte_rate, _block_align, bits = fmt
    if audio_format == _PCM:
        if bits != 16:
            raise UnsupportedFormat(f"PCM must be 16-bit, got {bits}-bit: {path}")
        dtype = "<i2"
    elif audio_format == _IEEE_FLOAT:
        if bits != 32:
            raise UnsupportedFormat(f"float must be 32-bit, got {bits}-bit: {path}")
        dtype = "<f4"
    else:
        raise UnsupportedFormat(f"unsupported compression code {audio_format}: {path}")
    if channels not in (1, 2):
        raise UnsupportedFormat(f"expected 1 or 2 channels, got {channels}: {path}")

    if data is None or len(data) == 0:
        raise EmptyAudio(f"no audio samples: {path}")
    width = bits // 8
    usable = len(data) - len(data) % (width * channels)
    raw = np.frombuffer(data[:usable], dtype=dtype)
    if raw.size == 0:
        raise EmptyAudio(f"no audio samples: {path}")

    x = raw.astype(np.float64)
    if audio_format == _PCM:
        x /= 32768.0
    if channels == 2:
        x = x.reshape(-1, 2).mean(axis=1)
    return AudioBuffer(np.clip(x, -1.0, 1.0), int(rate))


def save_audio(buffer: AudioBuffer, path) -> None:
    """Write an AudioBuffer as a mono 16-bit PCM WAV file."""
    x = np.clip(buffer.samples, -1.0, 1.0)
    ints = np.clip(np.rint(x * 32768.0), -32768, 32767).astype("<i2")
    data = ints.tobytes()
    rate = buffer.sample_rate
    header = b"".join([
        b"RIFF", struct.pack("<I", 36 + len(data)), b"WAVE",
        b"fmt ", struct.pack("<IHHIIHH", 16, _PCM, 1, rate, rate * 2, 2, 16),
        b"data", struct.pack("<I", len(data)),
    ])
    Path(path).write_bytes(header + data)


def resample(buffer: AudioBuffer, target_rate: int) -> AudioBuffer:
    """Resample by band-limited windowed-sinc interpolation.

    Uses a Hann-windowed sinc kernel with a 16-tap half-width at the output
    rate; when downsampling, the cutoff scales down and the kernel widens
    accordingly, so the anti-aliasing band stays below the new Nyquist.
    Output length is round(n_in * target_rate / rate_in); samples are
    clamped to [-1, 1].
    """
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if target_rate == buffer.sample_rate:
        return buffer
    x = buffer.samples
    n_in = len(x)
    n_out = int(round(n_in * target_rate / buffer.sample_rate))
    if n_in == 0 or n_out == 0:
        return AudioBuffer(np.zeros(n_out), target_rate)

    cutoff = min(1.0, target_rate / buffer.sample_rate)
    half_width = 16.0 / cutoff  # input samples per side
    t = np.arange(n_out) * (buffer.sample_rate / target_rate)
    base = np.floor(t).astype(np.int64)
    frac = t - base

    y = np.zeros(n_out)
    taps = int(np.ceil(half_width))
    for k in range(-taps, taps + 2):
        u = k - frac  # tap position relative to the ideal sample time
        v = cutoff * u / 16.0
        w = cutoff * np.sinc(cutoff * u) * (0.5 + 0.5 * np.cos(np.pi * np.clip(v, -1.0, 1.0)))
        w[np.abs(v) >= 1.0] = 0.0
        idx = base + k
        ok = (idx >= 0) & (idx < n_in)
        y[ok] += w[ok] * x[idx[ok]]
    return AudioBuffer(np.clip(y, -1.0, 1.0), int(target_rate))


def frame_length(rate: int, frame_ms: float) -> int:
    return int(round(rate * frame_ms / 1000.0))


def frames(buffer: AudioBuffer, frame_ms: float, hop_ms: float) -> np.ndarray:
    """Slice into overlapping frames; frame k covers [k*hop, k*hop + frame_len).

    The trailing partial frame is discarded.  Returns an array of shape
    (n_frames, frame_len); n_frames = floor((n - frame_len) / hop) + 1 when
    the signal holds at least one full frame, else 0.
    """
    if frame_ms <= 0 or hop_ms <= 0:
        raise ValueError("frame_ms and hop_ms must be positive")
    flen = frame_length(buffer.sample_rate, frame_ms)
    hop = frame_length(buffer.sample_rate, hop_ms)
    if flen < 1 or hop < 1:
        raise ValueError("frame and hop must be at least one sample long")
    x = buffer.samples
    if len(x) < flen:
        return np.empty((0, flen))
    return np.lib.stride_tricks.sliding_window_view(x, flen)[::hop]
