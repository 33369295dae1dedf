"""LPC-based F1/F2 estimation at the midpoint of the leading vowel segment."""

from dataclasses import dataclass, fields
from typing import List, Mapping, Sequence

import numpy as np

from .audio import AudioBuffer, frame_length, resample
from .errors import (DegenerateFrame, EmptyList, GateViolation,
                     InsufficientFormants)
from .segment import first_segment


@dataclass(frozen=True)
class AnalysisParams:
    """Knobs for segmentation and formant estimation.

    The defaults follow standard speech-analysis practice: a 10 kHz analysis
    rate captures F1..F4 while keeping the LPC root count small, and order
    12 matches the rate-in-kHz-plus-2 rule.
    """

    analysis_rate: int = 10000
    lpc_order: int = 12
    preemphasis: float = 0.97
    frame_ms: float = 25.0
    hop_ms: float = 10.0
    threshold_db: float = 10.0
    min_silence_ms: float = 50.0
    min_voiced_ms: float = 60.0
    f1_min: float = 150.0
    f1_max: float = 1200.0
    f2_min: float = 500.0
    f2_max: float = 3500.0
    cand_min_hz: float = 90.0
    cand_margin_hz: float = 50.0
    max_bandwidth_hz: float = 400.0

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")
        if self.f1_min >= self.f1_max or self.f2_min >= self.f2_max:
            raise ValueError("formant gates must satisfy min < max")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "AnalysisParams":
        int_fields = {"analysis_rate", "lpc_order"}
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in mapping.items():
            if key not in known:
                raise KeyError(key)
            kwargs[key] = int(value) if key in int_fields else float(value)
        return cls(**kwargs)


@dataclass(frozen=True)
class FormantPair:
    """Raw (F1, F2) in Hz for one vowel realization."""

    f1: float
    f2: float

    def __post_init__(self) -> None:
        if not 0 < self.f1 < self.f2:
            raise ValueError("need 0 < f1 < f2")
        if not (150.0 <= self.f1 <= 1200.0 and 500.0 <= self.f2 <= 3500.0):
            raise ValueError(f"({self.f1}, {self.f2}) outside plausible vowel ranges")


@dataclass(frozen=True)
class FormantCandidate:
    frequency: float
    bandwidth: float


def lpc_coefficients(frame: np.ndarray, order: int) -> np.ndarray:
    """Autocorrelation-method LPC via Levinson-Durbin recursion.

    Returns order+1 prediction-error coefficients a0..a_order with a0 = 1;
    the resulting polynomial is minimum-phase (all roots strictly inside the
    unit circle).
    """
    x = np.asarray(frame, dtype=np.float64)
    if order < 2:
        raise ValueError("order must be at least 2")
    if len(x) <= order:
        raise ValueError("frame must be longer than the LPC order")
    r = np.correlate(x, x, mode="full")[len(x) - 1:len(x) + order]
    if r[0] <= 0 or not np.isfinite(r[0]):
        raise DegenerateFrame("zero or invalid autocorrelation at lag 0")

    a = np.zeros(order + 1)
    a[0] = 1.0
    err = r[0]
    for i in range(1, order + 1):
        acc = r[i] + np.dot(a[1:i], r[i - 1:0:-1])
        if err <= r[0] * 1e-12:
            raise DegenerateFrame("singular autocorrelation sequence")
        k = -acc / err
        a[1:i + 1] += k * a[i - 1::-1][:i]
        err *= 1.0 - k * k
    return a


def formant_candidates(coeffs: Sequence[float], sample_rate: int,
                       min_hz: float = 90.0, margin_hz: float = 50.0,
                       max_bandwidth_hz: float = 400.0) -> List[FormantCandidate]:
    """Resonance candidates from the roots of the prediction-error polynomial.

    Each complex root r with positive imaginary part maps to
    frequency = (rate / 2*pi) * arg(r) and bandwidth = -(rate / pi) * ln|r|.
    Candidates outside [min_hz, rate/2 - margin_hz] or wider than
    max_bandwidth_hz are dropped; the rest come back sorted by frequency.
    """
    roots = np.roots(np.asarray(coeffs, dtype=np.float64))
    roots = roots[np.imag(roots) > 0]
    out = []
    for root in roots:
        freq = float(np.angle(root) * sample_rate / (2.0 * np.pi))
        bw = float(-sample_rate / np.pi * np.log(np.abs(root)))
        if min_hz <= freq <= sample_rate / 2.0 - margin_hz and 0 < bw < max_bandwidth_hz:
            out.append(FormantCandidate(freq, bw))
    out.sort(key=lambda c: c.frequency)
    return out


def _midpoint_frame(samples: np.ndarray, center: int, flen: int) -> np.ndarray:
    start = center - flen // 2
    start = max(0, min(start, len(samples) - flen))
    return samples[start:start + flen]


def measure_vowel(buffer: AudioBuffer,
                  params: AnalysisParams = AnalysisParams()) -> FormantPair:
    """Estimate (F1, F2) at the middle of the leading voiced segment.

    Pipeline: resample to the analysis rate, find the first voiced segment,
    take the analysis frame centered on the segment midpoint, pre-emphasize,
    apply a Hamming window, fit LPC, and pick F1 as the lowest root
    candidate inside the F1 gate and F2 as the next candidate above it
    inside the F2 gate.
    """
    work = resample(buffer, params.analysis_rate)
    seg = first_segment(work, params.threshold_db, params.frame_ms,
                        params.hop_ms, params.min_silence_ms,
                        params.min_voiced_ms)
    flen = frame_length(work.sample_rate, params.frame_ms)
    center = (seg.start_sample + seg.end_sample) // 2
    frame = _midpoint_frame(work.samples, center, flen)

    emphasized = np.append(frame[0], frame[1:] - params.preemphasis * frame[:-1])
    windowed = emphasized * np.hamming(len(emphasized))
    coeffs = lpc_coefficients(windowed, params.lpc_order)
    cands = formant_candidates(coeffs, work.sample_rate, params.cand_min_hz,
                               params.cand_margin_hz, params.max_bandwidth_hz)
    if len(cands) < 2:
        raise InsufficientFormants(
            f"only {len(cands)} root candidate(s) passed the gates")

    f1 = next((c.frequency for c in cands
               if params.f1_min <= c.frequency <= params.f1_max), None)
    if f1 is None:
        raise GateViolation("no candidate inside the F1 range")
    f2 = next((c.frequency for c in cands
               if c.frequency > f1 and params.f2_min <= c.frequency <= params.f2_max),
              None)
    if f2 is None:
        raise GateViolation("no candidate above F1 inside the F2 range")
    return FormantPair(f1, f2)


def representative(realizations: Sequence[FormantPair]) -> FormantPair:
    """Component-wise median; even-length inputs average the middle pair."""
    if len(realizations) == 0:
        raise EmptyList("cannot take the median of zero realizations")
    f1 = float(np.median([p.f1 for p in realizations]))
    f2 = float(np.median([p.f2 for p in realizations]))
    return FormantPair(f1, f2)
