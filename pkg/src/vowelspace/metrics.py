"""Vowel accuracy (distance to the native anchor) and compactness (spread).

Observations arrive as sets of normalized points per (system, speaker,
language pair, vowel).  Test sets are compared against anchor sets: native
realizations from the non-accented single-speaker condition.  Rows then
aggregate into shared/non-shared summaries and source-by-target matrices.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientData, MissingAnchor
from .inventory import InventoryRegistry
from .normalize import NormalizedPoint

ROLE_ANCHOR = "anchor"
ROLE_TEST = "test"


@dataclass(frozen=True)
class VowelObservationSet:
    """All normalized points for one (system, speaker, pair, vowel, role)."""

    system_id: str
    speaker_id: str
    source_language: str
    target_language: str
    vowel: str
    points: Tuple[NormalizedPoint, ...]
    role: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("observation set has no points")
        if self.role not in (ROLE_ANCHOR, ROLE_TEST):
            raise ValueError(f"role must be anchor or test, got {self.role!r}")
        if self.role == ROLE_ANCHOR and self.source_language != self.target_language:
            raise ValueError("anchor sets must be native (source == target)")


@dataclass(frozen=True)
class MetricRow:
    system_id: str
    source_language: str
    target_language: str
    vowel: str
    shared: bool
    distance: float
    compactness_sd: float
    n_points: int

    def __post_init__(self) -> None:
        if self.distance < 0 or self.compactness_sd < 0:
            raise ValueError("distance and compactness must be non-negative")


def vowel_distance(test_representative: NormalizedPoint,
                   anchor_representative: NormalizedPoint) -> float:
    """Euclidean distance between two vowel-space positions."""
    return math.hypot(test_representative.z1 - anchor_representative.z1,
                      test_representative.z2 - anchor_representative.z2)


def vowel_compactness(points: Sequence[NormalizedPoint]) -> float:
    """Radial SD of a point cloud: sqrt(var(z1) + var(z2)), population variances.

    Rotation-invariant about the centroid; reduces to the one-dimensional SD
    when a component is constant.
    """
    if len(points) < 2:
        raise InsufficientData(f"compactness needs >= 2 points, got {len(points)}")
    z1 = np.array([p.z1 for p in points])
    z2 = np.array([p.z2 for p in points])
    return float(np.sqrt(np.var(z1) + np.var(z2)))


def median_point(points: Sequence[NormalizedPoint]) -> NormalizedPoint:
    """Component-wise median position of a point cloud."""
    if len(points) == 0:
        raise InsufficientData("no points to take the median of")
    return NormalizedPoint(float(np.median([p.z1 for p in points])),
                           float(np.median([p.z2 for p in points])))


def build_metric_rows(observations: Sequence[VowelObservationSet],
                      inventories: InventoryRegistry) -> List[MetricRow]:
    """One MetricRow per test set, measured against its anchor.

    Anchor lookup prefers anchor sets from the same system; failing that,
    anchor points for the (target language, vowel) are pooled across
    systems.  Raises MissingAnchor listing every (language, vowel) that has
    no anchor at all.
    """
    by_system: Dict[tuple, List[NormalizedPoint]] = {}
    pooled: Dict[tuple, List[NormalizedPoint]] = {}
    for obs in observations:
        if obs.role != ROLE_ANCHOR:
            continue
        key = (obs.target_language, obs.vowel)
        by_system.setdefault((obs.system_id,) + key, []).extend(obs.points)
        pooled.setdefault(key, []).extend(obs.points)

    missing = []
    rows: List[MetricRow] = []
    for obs in observations:
        if obs.role != ROLE_TEST:
            continue
        key = (obs.target_language, obs.vowel)
        anchor_points = by_system.get((obs.system_id,) + key) or pooled.get(key)
        if not anchor_points:
            if key not in missing:
                missing.append(key)
            continue
        shared = inventories.is_shared(obs.vowel, obs.source_language,
                                       obs.target_language)
        rows.append(MetricRow(
            system_id=obs.system_id,
            source_language=obs.source_language,
            target_language=obs.target_language,
            vowel=obs.vowel,
            shared=shared,
            distance=vowel_distance(median_point(obs.points),
                                    median_point(anchor_points)),
            compactness_sd=vowel_compactness(obs.points),
            n_points=len(obs.points),
        ))
    if missing:
        raise MissingAnchor(missing)
    return rows


def shared_summary(rows: Sequence[MetricRow]) -> Dict[str, dict]:
    """Per-system means of distance and compactness, split by sharedness.

    Returns {system: {"shared" | "non_shared": {"distance": .., "sd": ..}}};
    a cell with no rows is absent.  Means are unweighted across rows.
    """
    grouped: Dict[str, Dict[str, dict]] = {}
    for system in sorted({r.system_id for r in rows}):
        cells = {}
        for label, want in (("shared", True), ("non_shared", False)):
            sel = [r for r in rows if r.system_id == system and r.shared == want]
            if sel:
                cells[label] = {
                    "distance": float(np.mean([r.distance for r in sel])),
                    "sd": float(np.mean([r.compactness_sd for r in sel])),
                }
        grouped[system] = cells
    return grouped


@dataclass(frozen=True)
class PairMatrix:
    """Mean vowel distance per (source, target) language pair."""

    sources: Tuple[str, ...]
    targets: Tuple[str, ...]
    cells: Dict[Tuple[str, str], float]  # absent pairs simply have no cell

    def to_jsonable(self) -> dict:
        nested: Dict[str, Dict[str, float]] = {}
        for (src, tgt), value in sorted(self.cells.items()):
            nested.setdefault(src, {})[tgt] = value
        return {"sources": list(self.sources), "targets": list(self.targets),
                "cells": nested}

    @classmethod
    def from_jsonable(cls, obj: dict) -> "PairMatrix":
        cells = {(src, tgt): float(v)
                 for src, row in obj["cells"].items() for tgt, v in row.items()}
        return cls(tuple(obj["sources"]), tuple(obj["targets"]), cells)


def pair_matrix(rows: Sequence[MetricRow],
                shared: Optional[bool] = None) -> PairMatrix:
    """Source-by-target matrix of mean distance; cells with no rows are absent.

    Pass shared=True/False to restrict to shared or non-shared vowels.
    """
    if shared is not None:
        rows = [r for r in rows if r.shared == shared]
    per_cell: Dict[Tuple[str, str], List[float]] = {}
    for r in rows:
        per_cell.setdefault((r.source_language, r.target_language), []) \
            .append(r.distance)
    cells = {key: float(np.mean(vals)) for key, vals in per_cell.items()}
    sources = tuple(sorted({src for src, _ in cells}))
    targets = tuple(sorted({tgt for _, tgt in cells}))
    return PairMatrix(sources, targets, cells)
