#!/usr/bin/env python3
"""Build the hand-constructed metrics fixture and its expected outputs.

Everything here is flat, spreadsheet-style arithmetic over literal tables;
it deliberately imports nothing from the package so the expected files are
an independent route to the same numbers.  Formant values are integers built
as center + jitter with symmetric jitter lists, so per-speaker means are
exact integers and the variance numerators are exactly representable; the
closed-form values asserted below can be checked by hand.

Layout: 2 systems x 2 language pairs (EN->KO, JA->KO) x 3 vowels (i, u, w-bar)
x 10 realizations, plus a 7-vowel native Korean anchor speaker per system.

Writes, under tests/fixtures/golden/:
  formants.csv, formants.params.json     pipeline input
  expected/metrics.csv                   expected pipeline outputs
  expected/summary.json
  expected/pair_matrix.json
"""

import argparse
import csv
import json
import math
from pathlib import Path

import numpy as np

SYSTEMS = ["tts_a", "tts_b"]

# (vowel, F1 center, F2 center); F1 centers sum to 3290 = 7*470 and F2
# centers to 9450 = 7*1350, so the anchor speaker means are exact.
ANCHOR_CENTERS = [
    ("i", 300, 2200),
    ("e", 450, 2000),
    ("a", 790, 1300),
    ("ʌ", 600, 1100),   # turned v
    ("o", 450, 800),
    ("u", 350, 700),
    ("ɯ", 350, 1350),   # turned m
]

# speaker -> (source lang, {vowel: (F1 center, F2 center)}); per system.
# Per-speaker F1/F2 center sums are divisible by 3 (exact means again), and
# the non-shared turned-m sits farther from its anchor than i or u do.
TEST_CENTERS = {
    "tts_a": {
        "en_f": ("EN", {"i": (340, 2080), "u": (400, 840), "ɯ": (430, 1640)}),
        "ja_f": ("JA", {"i": (320, 2150), "u": (380, 760), "ɯ": (440, 1530)}),
    },
    "tts_b": {
        "en_f": ("EN", {"i": (310, 2170), "u": (365, 745), "ɯ": (405, 1480)}),
        "ja_f": ("JA", {"i": (305, 2180), "u": (360, 720), "ɯ": (400, 1450)}),
    },
}

# Symmetric half-lists; each full jitter list is the mirror, so it sums to
# zero.  Test vowels scale them (integers throughout): the non-shared vowel
# scatters widest, and system B is tighter than system A across the board.
JITTER_HALF = {"anchor": [10, 20, 30, 40, 50],
               "tts_a": [10, 20, 30, 40, 50],
               "tts_b": [8, 12, 16, 20, 24]}
VOWEL_SPREAD = {"i": 1.0, "u": 2.0, "ɯ": 2.5}


def jitter_list(half, scale=1.0):
    deltas = [int(d * scale) for d in half]
    if any(d != e * scale for d, e in zip(deltas, half)):
        raise AssertionError("jitter scaling must stay integral")
    return [-d for d in reversed(deltas)] + deltas

# Default analysis parameters, restated literally for the provenance block.
PARAMS = {
    "analysis_rate": 10000, "lpc_order": 12, "preemphasis": 0.97,
    "frame_ms": 25.0, "hop_ms": 10.0, "threshold_db": 10.0,
    "min_silence_ms": 50.0, "min_voiced_ms": 60.0,
    "f1_min": 150.0, "f1_max": 1200.0, "f2_min": 500.0, "f2_max": 3500.0,
    "cand_min_hz": 90.0, "cand_margin_hz": 50.0, "max_bandwidth_hz": 400.0,
}


def g6(x):
    """6 significant digits, the declared table precision."""
    return format(float(x), ".6g")


def rows_for_fixture():
    """Emit (system, speaker, src, tgt, vowel, role, idx, f1, f2) rows."""
    rows = []
    for system in SYSTEMS:
        for vowel, c1, c2 in ANCHOR_CENTERS:
            for idx, d in enumerate(jitter_list(JITTER_HALF["anchor"])):
                rows.append((system, "ko_male", "KO", "KO", vowel, "anchor",
                             idx, c1 + d, c2 + d))
        for speaker, (src, centers) in TEST_CENTERS[system].items():
            for vowel in ["i", "u", "ɯ"]:
                c1, c2 = centers[vowel]
                deltas = jitter_list(JITTER_HALF[system], VOWEL_SPREAD[vowel])
                for idx, d in enumerate(deltas):
                    rows.append((system, speaker, src, "KO", vowel, "test",
                                 idx, c1 + d, c2 + d))
    return rows


def spreadsheet_expected(rows):
    """Recompute every output number directly from the fixture rows."""
    # per-speaker pools in row order
    pools = {}
    for r in rows:
        pools.setdefault((r[0], r[1]), []).append(r)

    stats = {}
    for key, members in pools.items():
        f1 = np.array([m[7] for m in members], dtype=float)
        f2 = np.array([m[8] for m in members], dtype=float)
        stats[key] = (float(np.mean(f1)), float(np.mean(f2)),
                      float(np.sqrt(np.var(f1))), float(np.sqrt(np.var(f2))))

    # sanity: the constructed tables hit their closed-form pool statistics
    assert stats[("tts_a", "ko_male")][:2] == (470.0, 1350.0)
    assert np.var([m[7] for m in pools[("tts_a", "ko_male")]]) == 26500.0
    assert stats[("tts_a", "en_f")][:2] == (390.0, 1520.0)
    assert np.var([m[7] for m in pools[("tts_a", "en_f")]]) == 5525.0
    assert stats[("tts_a", "ja_f")][:2] == (380.0, 1480.0)
    assert np.var([m[7] for m in pools[("tts_a", "ja_f")]]) == 6525.0
    assert stats[("tts_b", "en_f")][:2] == (360.0, 1465.0)
    assert stats[("tts_b", "ja_f")][:2] == (355.0, 1450.0)

    # z-scores as they survive the 6-significant-digit table round trip
    z = {}
    for r in rows:
        m1, m2, s1, s2 = stats[(r[0], r[1])]
        z1 = float(g6((r[7] - m1) / s1))
        z2 = float(g6((r[8] - m2) / s2))
        z.setdefault((r[0], r[1], r[2], r[3], r[4], r[5]), []).append((z1, z2))

    anchor_rep = {}
    for key, pts in z.items():
        system, _speaker, _src, tgt, vowel, role = key
        if role == "anchor":
            anchor_rep[(system, tgt, vowel)] = (
                float(np.median([p[0] for p in pts])),
                float(np.median([p[1] for p in pts])))

    shared_flags = {"i": True, "u": True, "ɯ": False}
    metric_rows = []
    for key, pts in z.items():
        system, _speaker, src, tgt, vowel, role = key
        if role != "test":
            continue
        rep = (float(np.median([p[0] for p in pts])),
               float(np.median([p[1] for p in pts])))
        anc = anchor_rep[(system, tgt, vowel)]
        distance = math.hypot(rep[0] - anc[0], rep[1] - anc[1])
        compact = float(np.sqrt(np.var([p[0] for p in pts])
                                + np.var([p[1] for p in pts])))
        metric_rows.append({
            "system": system, "src": src, "tgt": tgt, "vowel": vowel,
            "shared": shared_flags[vowel], "distance": distance,
            "compactness": compact, "n": len(pts),
        })
    metric_rows.sort(key=lambda r: (r["system"], r["src"], r["tgt"], r["vowel"]))

    summary = {}
    for system in SYSTEMS:
        cells = {}
        for label, want in (("shared", True), ("non_shared", False)):
            sel = [r for r in metric_rows
                   if r["system"] == system and r["shared"] == want]
            if sel:
                cells[label] = {
                    "distance": float(np.mean([r["distance"] for r in sel])),
                    "sd": float(np.mean([r["compactness"] for r in sel])),
                }
        summary[system] = cells

    matrices = {}
    for system in SYSTEMS:
        per_cell = {}
        for r in metric_rows:
            if r["system"] == system:
                per_cell.setdefault((r["src"], r["tgt"]), []).append(r["distance"])
        cells = {}
        for (src, tgt), vals in sorted(per_cell.items()):
            cells.setdefault(src, {})[tgt] = float(np.mean(vals))
        matrices[system] = {
            "sources": sorted({s for s, _ in per_cell}),
            "targets": sorted({t for _, t in per_cell}),
            "cells": cells,
        }
    return metric_rows, summary, matrices


def dump_json(obj, path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True,
                               ensure_ascii=False) + "\n", encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=None,
                        help="fixture directory (default: tests/fixtures/golden)")
    args = parser.parse_args()
    root = Path(args.out) if args.out else \
        Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "golden"
    (root / "expected").mkdir(parents=True, exist_ok=True)

    rows = rows_for_fixture()
    with open(root / "formants.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["system", "speaker", "src_lang", "tgt_lang", "vowel",
                         "role", "idx", "f1_hz", "f2_hz"])
        for r in rows:
            writer.writerow([r[0], r[1], r[2], r[3], r[4], r[5], str(r[6]),
                             g6(r[7]), g6(r[8])])
    dump_json(PARAMS, root / "formants.params.json")

    metric_rows, summary, matrices = spreadsheet_expected(rows)
    with open(root / "expected" / "metrics.csv", "w", encoding="utf-8",
              newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["system", "src_lang", "tgt_lang", "vowel", "shared",
                         "distance", "compactness", "n"])
        for r in metric_rows:
            writer.writerow([r["system"], r["src"], r["tgt"], r["vowel"],
                             "true" if r["shared"] else "false",
                             g6(r["distance"]), g6(r["compactness"]),
                             str(r["n"])])
    dump_json({"systems": summary, "params": PARAMS},
              root / "expected" / "summary.json")
    dump_json({"systems": matrices, "params": PARAMS},
              root / "expected" / "pair_matrix.json")
    print(f"wrote fixture under {root} ({len(rows)} formant rows, "
          f"{len(metric_rows)} metric rows)")


if __name__ == "__main__":
    main()
