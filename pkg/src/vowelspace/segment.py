"""Energy-based slicing: locate the leading voiced segment of an utterance."""

from dataclasses import dataclass

import numpy as np

from .audio import AudioBuffer, frame_length, frames
from .errors import NoVoicedSegment, TooShort

RMS_FLOOR = 1e-8  # about -160 dB; keeps log() defined on digital silence

# Below this level a buffer with no energy contrast is treated as silence
# rather than as an unbroken voiced signal (quieter than a 16-bit LSB).
_QUIET_DB = -100.0


@dataclass(frozen=True)
class Segment:
    """Half-open sample range [start_sample, end_sample) within a buffer."""

    start_sample: int
    end_sample: int

    def __post_init__(self) -> None:
        if not 0 <= self.start_sample < self.end_sample:
            raise ValueError("segment bounds must satisfy 0 <= start < end")


def frame_energy_db(buffer: AudioBuffer, frame_ms: float = 25.0,
                    hop_ms: float = 10.0) -> np.ndarray:
    """Per-frame energy as 20*log10(RMS), with RMS floored at 1e-8."""
    wins = frames(buffer, frame_ms, hop_ms)
    if wins.shape[0] == 0:
        raise TooShort(
            f"buffer of {len(buffer)} samples holds no full {frame_ms} ms frame")
    rms = np.sqrt(np.mean(wins * wins, axis=1))
    return 20.0 * np.log10(np.maximum(rms, RMS_FLOOR))


def first_segment(buffer: AudioBuffer, threshold_db: float = 10.0,
                  frame_ms: float = 25.0, hop_ms: float = 10.0,
                  min_silence_ms: float = 50.0,
                  min_voiced_ms: float = 60.0) -> Segment:
    """Return the first voiced segment, sliced at the first silence boundary.

    A frame is active when its energy exceeds the noise floor (the 5th
    percentile of frame energies) by threshold_db.  The segment starts at the
    first run of active frames lasting at least min_voiced_ms and ends where
    the first silence run of at least min_silence_ms begins (or at the buffer
    end).  Shorter dips are bridged.

    When the buffer has no energy contrast at all (quieter range than
    threshold_db), the percentile floor is meaningless: a uniformly loud
    buffer is returned whole and a uniformly quiet one raises
    NoVoicedSegment.
    """
    energies = frame_energy_db(buffer, frame_ms, hop_ms)
    hop = frame_length(buffer.sample_rate, hop_ms)
    n_frames = len(energies)
    min_voiced_frames = max(1, int(np.ceil(min_voiced_ms / hop_ms)))
    min_silence_frames = max(1, int(np.ceil(min_silence_ms / hop_ms)))

    floor = np.percentile(energies, 5)
    if np.percentile(energies, 95) - floor <= threshold_db:
        if np.median(energies) <= _QUIET_DB:
            raise NoVoicedSegment("buffer is uniformly quiet")
        if n_frames < min_voiced_frames:
            raise TooShort("buffer shorter than the minimum voiced duration")
        return Segment(0, len(buffer))

    active = energies > floor + threshold_db

    start_frame = None
    i = 0
    while i < n_frames:
        if not active[i]:
            i += 1
            continue
        j = i
        while j < n_frames and active[j]:
            j += 1
        if j - i >= min_voiced_frames:
            start_frame = i
            i = j
            break
        i = j
    if start_frame is None:
        raise NoVoicedSegment(
            f"no active run of at least {min_voiced_ms} ms found")

    # Extend past sub-threshold dips until a full silence run (or the end).
    end_frame = n_frames  # exclusive; sentinel for "ran to the end"
    while i < n_frames:
        if active[i]:
            i += 1
            continue
        j = i
        while j < n_frames and not active[j]:
            j += 1
        if j - i >= min_silence_frames:
            end_frame = i
            break
        i = j

    start_sample = start_frame * hop
    end_sample = len(buffer) if end_frame == n_frames else end_frame * hop
    return Segment(start_sample, end_sample)
