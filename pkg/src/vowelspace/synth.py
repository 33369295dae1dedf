"""Source-filter vowel synthesizer with exactly known formants.

Serves as ground truth for the analysis pipeline: an impulse train at f0,
optionally mixed with seeded white noise, is shaped by a glottal lowpass and
fed through a cascade of two-pole resonators, one per formant.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .audio import AudioBuffer

# Corner bandwidth of the default double-pole source lowpass.  The tilt it
# adds mimics a glottal pulse spectrum; without it, low first formants bias
# the downstream LPC estimates toward the nearest harmonic.
DEFAULT_GLOTTAL_BW = 225.0


@dataclass(frozen=True)
class VowelSpec:
    """Synthesis recipe for one steady vowel."""

    f0: float
    formants: Tuple[Tuple[float, float], ...]  # (frequency Hz, bandwidth Hz)
    duration_s: float
    sample_rate: int
    glottal_bw: float = DEFAULT_GLOTTAL_BW  # 0 disables source shaping
    noise_level: float = 0.0  # white-noise excitation mixed with the pulses
    noise_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "formants", tuple((float(f), float(b))
                                                   for f, b in self.formants))
        if not 60.0 <= self.f0 <= 400.0:
            raise ValueError("f0 must be in [60, 400] Hz")
        if self.duration_s <= 0:
            raise ValueError("duration must be positive")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if not 2 <= len(self.formants) <= 4:
            raise ValueError("between 2 and 4 formants required")
        freqs = [f for f, _ in self.formants]
        if any(b <= 0 for _, b in self.formants) or any(f <= 0 for f in freqs):
            raise ValueError("formant frequencies and bandwidths must be positive")
        if any(b >= a for a, b in zip(freqs[1:], freqs)):
            raise ValueError("formant frequencies must be strictly increasing")
        if freqs[-1] >= self.sample_rate / 2:
            raise ValueError("formants must lie below the Nyquist frequency")
        if self.noise_level < 0 or self.glottal_bw < 0:
            raise ValueError("noise_level and glottal_bw must be non-negative")


def _impulse_train(f0: float, n: int, rate: int) -> np.ndarray:
    x = np.zeros(n)
    period = rate / f0
    pulses = np.rint(np.arange(0, n / period + 1) * period).astype(np.int64)
    x[pulses[pulses < n]] = 1.0
    return x


def _resonate(x: np.ndarray, freq: float, bw: float, rate: int) -> np.ndarray:
    """Two-pole resonator: poles at radius exp(-pi*bw/rate), angle 2*pi*freq/rate."""
    r = np.exp(-np.pi * bw / rate)
    theta = 2.0 * np.pi * freq / rate
    b1 = 2.0 * r * np.cos(theta)
    b2 = -r * r
    a0 = 1.0 - b1 - b2  # unity gain at DC
    y = np.zeros(len(x))
    y1 = y2 = 0.0
    for i in range(len(x)):
        y0 = a0 * x[i] + b1 * y1 + b2 * y2
        y[i] = y0
        y2 = y1
        y1 = y0
    return y


def _glottal_lowpass(x: np.ndarray, bw: float, rate: int) -> np.ndarray:
    """Double real-pole lowpass approximating glottal pulse shaping."""
    r = np.exp(-np.pi * bw / rate)
    for _ in range(2):
        y = np.zeros(len(x))
        prev = 0.0
        for i in range(len(x)):
            prev = (1.0 - r) * x[i] + r * prev
            y[i] = prev
        x = y
    return x


def synth_vowel(spec: VowelSpec) -> AudioBuffer:
    """Synthesize one vowel; output is peak-normalized to 0.9."""
    n = int(round(spec.duration_s * spec.sample_rate))
    x = _impulse_train(spec.f0, n, spec.sample_rate)
    if spec.noise_level > 0:
        rng = np.random.default_rng(spec.noise_seed)
        x = x + spec.noise_level * rng.standard_normal(n)
    if spec.glottal_bw > 0:
        x = _glottal_lowpass(x, spec.glottal_bw, spec.sample_rate)
    for freq, bw in spec.formants:
        x = _resonate(x, freq, bw, spec.sample_rate)
    peak = np.max(np.abs(x))
    if peak > 0:
        x = 0.9 * x / peak
    return AudioBuffer(x, spec.sample_rate)


def synth_utterance_with_gap(spec: VowelSpec, gap_s: float,
                             tail_s: float) -> AudioBuffer:
    """Vowel, then gap_s of digital silence, then tail_s of a second vowel.

    Reproduces the vowel / silence / continuation layout used to exercise
    boundary detection.
    """
    if gap_s < 0 or tail_s < 0:
        raise ValueError("gap_s and tail_s must be non-negative")
    rate = spec.sample_rate
    head = synth_vowel(spec).samples
    gap = np.zeros(int(round(gap_s * rate)))
    parts = [head, gap]
    if tail_s > 0:
        tail_spec = VowelSpec(spec.f0, spec.formants, tail_s, rate,
                              spec.glottal_bw, spec.noise_level, spec.noise_seed)
        parts.append(synth_vowel(tail_spec).samples)
    return AudioBuffer(np.concatenate(parts), rate)
