"""Cross-lingual vowel-space analysis of synthesized speech.

From vowel audio to F1/F2 formant estimates, Lobanov-normalized vowel
spaces, and accent metrics (vowel distance and compactness) aggregated over
shared vs. non-shared vowels per language pair.
"""

from .audio import AudioBuffer, frames, load_audio, resample, save_audio
from .formant import (AnalysisParams, FormantCandidate, FormantPair,
                      formant_candidates, lpc_coefficients, measure_vowel,
                      representative)
from .inventory import (InventoryRegistry, default_registry, load_inventories,
                        parse_inventories)
from .metrics import (MetricRow, PairMatrix, VowelObservationSet,
                      build_metric_rows, median_point, pair_matrix,
                      shared_summary, vowel_compactness, vowel_distance)
from .normalize import NormalizedPoint, SpeakerNormStats, lobanov, speaker_stats
from .segment import Segment, first_segment, frame_energy_db
from .synth import VowelSpec, synth_utterance_with_gap, synth_vowel

__version__ = "0.1.0"

__all__ = [
    "AnalysisParams", "AudioBuffer", "FormantCandidate", "FormantPair",
    "InventoryRegistry", "MetricRow", "NormalizedPoint", "PairMatrix",
    "Segment", "SpeakerNormStats", "VowelObservationSet", "VowelSpec",
    "build_metric_rows", "default_registry", "first_segment",
    "formant_candidates", "frame_energy_db", "frames", "load_audio",
    "load_inventories", "lobanov", "lpc_coefficients", "measure_vowel",
    "median_point", "pair_matrix", "parse_inventories", "representative",
    "resample", "save_audio", "shared_summary", "speaker_stats",
    "synth_utterance_with_gap", "synth_vowel", "vowel_compactness",
    "vowel_distance",
]
