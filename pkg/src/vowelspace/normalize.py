"""Per-speaker z-normalization of formant values (Lobanov method)."""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientData, ZeroVariance
from .formant import FormantPair


@dataclass(frozen=True)
class SpeakerNormStats:
    """Per-speaker mean and population SD of F1 and F2 over all vowel tokens."""

    speaker_id: str
    mean_f1: float
    mean_f2: float
    sd_f1: float
    sd_f2: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("stats require at least two realizations")
        if self.sd_f1 <= 0 or self.sd_f2 <= 0:
            raise ValueError("standard deviations must be positive")


@dataclass(frozen=True)
class NormalizedPoint:
    """Dimensionless vowel-space coordinates (z-scored F1, F2)."""

    z1: float
    z2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.z1) and math.isfinite(self.z2)):
            raise ValueError("normalized coordinates must be finite")


def speaker_stats(realizations: Sequence[FormantPair],
                  speaker_id: str = "") -> SpeakerNormStats:
    """Mean and population SD per component over one speaker's tokens."""
    if len(realizations) < 2:
        raise InsufficientData(
            f"speaker {speaker_id or '<unnamed>'} has {len(realizations)} "
            "realization(s); need at least 2")
    f1 = np.array([p.f1 for p in realizations])
    f2 = np.array([p.f2 for p in realizations])
    sd_f1 = float(np.sqrt(np.var(f1)))
    sd_f2 = float(np.sqrt(np.var(f2)))
    if sd_f1 == 0 or sd_f2 == 0:
        which = "F1" if sd_f1 == 0 else "F2"
        raise ZeroVariance(
            f"speaker {speaker_id or '<unnamed>'}: {which} is constant")
    return SpeakerNormStats(speaker_id, float(np.mean(f1)), float(np.mean(f2)),
                            sd_f1, sd_f2, len(realizations))


def lobanov(point: FormantPair, stats: SpeakerNormStats) -> NormalizedPoint:
    """z = (F - speaker mean) / speaker SD, per formant."""
    return NormalizedPoint((point.f1 - stats.mean_f1) / stats.sd_f1,
                           (point.f2 - stats.mean_f2) / stats.sd_f2)
