"""Manifest-driven command line: extract, normalize, metrics, plot, synth, inventory.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 when no
usable data remains (empty manifest, every file failed, nothing to plot).
"""

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import report
from .audio import load_audio, save_audio
from .errors import (ConfigError, EmptyPlot, ManifestParseError,
                     UnknownSelector, VowelSpaceError)
from .formant import AnalysisParams, FormantPair, measure_vowel
from .inventory import InventoryRegistry, default_registry, load_inventories
from .metrics import (ROLE_ANCHOR, ROLE_TEST, PairMatrix, VowelObservationSet,
                      build_metric_rows, median_point, pair_matrix,
                      shared_summary)
from .normalize import NormalizedPoint, lobanov, speaker_stats
from .synth import VowelSpec, synth_utterance_with_gap, synth_vowel

MANIFEST_HEADER = ["wav_path", "system", "speaker", "native_lang",
                   "target_lang", "vowel", "role"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_DATA = 2

_INT_KEYS = {"analysis_rate", "lpc_order"}


@dataclass(frozen=True)
class Config:
    params: AnalysisParams
    inventory_path: Optional[str] = None
    out_dir: str = "."


def parse_config(path) -> Config:
    """Parse the line-oriented `key = value` config file; unknown keys fail."""
    param_keys = set(AnalysisParams().to_dict())
    values: Dict[str, str] = {}
    inventory_path = None
    out_dir = "."
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(),
                                 start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "inventory":
            inventory_path = value
        elif key == "out":
            out_dir = value
        elif key in param_keys:
            values[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    try:
        params = AnalysisParams.from_mapping(values)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return Config(params, inventory_path, out_dir)


@dataclass(frozen=True)
class ManifestEntry:
    wav_path: str
    system: str
    speaker: str
    native_lang: str
    target_lang: str
    vowel: str
    role: str


def parse_manifest(path, registry: InventoryRegistry) -> List[ManifestEntry]:
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ManifestParseError(f"cannot read manifest: {exc}") from None
    if not rows or rows[0] != MANIFEST_HEADER:
        raise ManifestParseError(
            f"{path}:1: expected header {','.join(MANIFEST_HEADER)!r}")
    problems = []
    entries = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(MANIFEST_HEADER):
            problems.append(f"{path}:{lineno}: expected {len(MANIFEST_HEADER)} fields")
            continue
        entry = ManifestEntry(*row)
        if not entry.wav_path:
            problems.append(f"{path}:{lineno}: empty wav_path")
        if entry.role not in (ROLE_ANCHOR, ROLE_TEST):
            problems.append(f"{path}:{lineno}: role must be anchor or test")
        for lang in (entry.native_lang, entry.target_lang):
            if lang not in registry.languages():
                problems.append(f"{path}:{lineno}: unknown language {lang!r}")
        if entry.native_lang in registry.languages() \
                and entry.target_lang in registry.languages():
            if entry.vowel not in registry.vowels(entry.target_lang):
                problems.append(
                    f"{path}:{lineno}: /{entry.vowel}/ not in the {entry.target_lang} "
                    "inventory")
            if entry.role == ROLE_ANCHOR and entry.native_lang != entry.target_lang:
                problems.append(
                    f"{path}:{lineno}: anchor entries must be native "
                    "(native_lang == target_lang)")
        entries.append(entry)
    if problems:
        raise ManifestParseError("\n".join(problems))
    return entries


def _registry_for(config: Config) -> InventoryRegistry:
    if config.inventory_path:
        return load_inventories(config.inventory_path)
    return default_registry()


def cmd_extract(manifest_path, config: Config, jobs: int = 1) -> int:
    """Measure (F1, F2) for every manifest entry; failures go to a sidecar."""
    registry = _registry_for(config)
    entries = parse_manifest(manifest_path, registry)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not entries:
        print("no entries", file=sys.stderr)
        return EXIT_NO_DATA

    def work(entry: ManifestEntry):
        try:
            pair = measure_vowel(load_audio(entry.wav_path), config.params)
            return pair, None
        except VowelSpaceError as exc:
            return None, type(exc).__name__

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, entries))
    else:
        results = [work(e) for e in entries]

    counters: Dict[tuple, int] = {}
    rows = []
    failures = []
    for entry, (pair, error) in zip(entries, results):
        if error is not None:
            failures.append([entry.wav_path, error])
            continue
        key = (entry.system, entry.speaker, entry.native_lang,
               entry.target_lang, entry.vowel, entry.role)
        idx = counters.get(key, 0)
        counters[key] = idx + 1
        rows.append(report.FormantRow(entry.system, entry.speaker,
                                      entry.native_lang, entry.target_lang,
                                      entry.vowel, entry.role, idx,
                                      pair.f1, pair.f2))

    formants_csv = out_dir / "formants.csv"
    report.write_formants(rows, formants_csv)
    report.write_json(config.params.to_dict(), report.params_sidecar(formants_csv))
    with open(out_dir / "formants.errors.csv", "w", encoding="utf-8",
              newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["wav_path", "error"])
        writer.writerows(failures)

    print(f"extracted {len(rows)} of {len(entries)} entries "
          f"({len(failures)} failed)")
    return EXIT_OK if rows else EXIT_NO_DATA


def cmd_normalize(formants_csv, out_dir) -> int:
    """Lobanov-normalize formant rows; stats are pooled per (system, speaker)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = report.read_formants(formants_csv)
    groups: Dict[Tuple[str, str], List[report.FormantRow]] = {}
    for row in rows:
        groups.setdefault((row.system, row.speaker), []).append(row)

    stats_records = []
    out_rows = []
    for (system, speaker), members in groups.items():
        pairs = [FormantPair(m.f1_hz, m.f2_hz) for m in members]
        stats = speaker_stats(pairs, f"{system}/{speaker}")
        stats_records.append({
            "system": system, "speaker": speaker, "n": stats.n,
            "mean_f1": stats.mean_f1, "mean_f2": stats.mean_f2,
            "sd_f1": stats.sd_f1, "sd_f2": stats.sd_f2,
        })
        for m, pair in zip(members, pairs):
            z = lobanov(pair, stats)
            out_rows.append(report.NormalizedRow(m.system, m.speaker,
                                                 m.src_lang, m.tgt_lang,
                                                 m.vowel, m.role, m.idx,
                                                 z.z1, z.z2))

    # restore the input row order after the per-speaker regrouping
    position = {(r.system, r.speaker, r.src_lang, r.tgt_lang, r.vowel, r.role,
                 r.idx): i for i, r in enumerate(rows)}
    out_rows.sort(key=lambda r: position[(r.system, r.speaker, r.src_lang,
                                          r.tgt_lang, r.vowel, r.role, r.idx)])

    normalized_csv = out_dir / "normalized.csv"
    report.write_normalized(out_rows, normalized_csv)
    stats_records.sort(key=lambda s: (s["system"], s["speaker"]))
    report.write_json({"speakers": stats_records}, out_dir / "speaker_stats.json")

    sidecar = report.params_sidecar(Path(formants_csv))
    params = report.read_json(sidecar) if sidecar.is_file() else {}
    report.write_json(params, report.params_sidecar(normalized_csv))
    print(f"normalized {len(out_rows)} rows for {len(groups)} speaker pool(s)")
    return EXIT_OK


def _observation_sets(rows: List[report.NormalizedRow]) -> List[VowelObservationSet]:
    grouped: Dict[tuple, List[NormalizedPoint]] = {}
    for row in rows:
        key = (row.system, row.speaker, row.src_lang, row.tgt_lang,
               row.vowel, row.role)
        grouped.setdefault(key, []).append(NormalizedPoint(row.z1, row.z2))
    return [VowelObservationSet(system_id=k[0], speaker_id=k[1],
                                source_language=k[2], target_language=k[3],
                                vowel=k[4], points=tuple(pts), role=k[5])
            for k, pts in grouped.items()]


def cmd_metrics(normalized_csv, inventory_path, out_dir) -> int:
    """Distance and compactness per test set, plus summary and pair matrix."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    registry = load_inventories(inventory_path) if inventory_path \
        else default_registry()
    rows = report.read_normalized(normalized_csv)
    observations = _observation_sets(rows)
    metric_rows = build_metric_rows(observations, registry)
    metric_rows.sort(key=lambda r: (r.system_id, r.source_language,
                                    r.target_language, r.vowel))

    sidecar = report.params_sidecar(Path(normalized_csv))
    params = report.read_json(sidecar) if sidecar.is_file() else {}

    report.write_metrics(metric_rows, out_dir / "metrics.csv")
    report.write_json(params, report.params_sidecar(out_dir / "metrics.csv"))
    report.write_json({"systems": shared_summary(metric_rows), "params": params},
                      out_dir / "summary.json")
    systems = sorted({r.system_id for r in metric_rows})
    matrices = {system: pair_matrix([r for r in metric_rows
                                     if r.system_id == system]).to_jsonable()
                for system in systems}
    report.write_json({"systems": matrices, "params": params},
                      out_dir / "pair_matrix.json")
    print(f"wrote {len(metric_rows)} metric rows for {len(systems)} system(s)")
    return EXIT_OK


_ROLES = (ROLE_ANCHOR, ROLE_TEST)


def cmd_plot(input_path, out_dir, system=None, speaker=None, vowel=None,
             source=None, target=None, role=None) -> int:
    """Render vowel-space charts from normalized.csv or heatmaps from JSON."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    input_path = Path(input_path)

    if input_path.suffix == ".json":
        obj = report.read_json(input_path)
        if "systems" not in obj:
            raise UnknownSelector(f"{input_path} is not a pair-matrix file")
        systems = obj["systems"]
        if system is not None:
            if system not in systems:
                raise EmptyPlot(f"no matrix for system {system!r}")
            systems = {system: systems[system]}
        for name, jsonable in sorted(systems.items()):
            matrix = PairMatrix.from_jsonable(jsonable)
            out = out_dir / f"pair_matrix_{name}.svg"
            report.render_heatmap(matrix, out, title=f"mean vowel distance: {name}")
            print(f"wrote {out}")
        return EXIT_OK

    if role is not None and role not in _ROLES:
        raise UnknownSelector(f"role must be one of {_ROLES}, got {role!r}")
    rows = report.read_normalized(input_path)
    for attr, value in (("system", system), ("speaker", speaker),
                        ("vowel", vowel), ("src_lang", source),
                        ("tgt_lang", target), ("role", role)):
        if value is not None:
            rows = [r for r in rows if getattr(r, attr) == value]
    if not rows:
        raise EmptyPlot("selectors matched no rows")

    grouped: Dict[Tuple[str, str], List[NormalizedPoint]] = {}
    for r in rows:
        grouped.setdefault((r.vowel, r.src_lang), []) \
            .append(NormalizedPoint(r.z1, r.z2))
    points = []
    for (v, src), pts in sorted(grouped.items()):
        rep = median_point(pts)
        points.append(report.PlotPoint(label=v, series=src, z1=rep.z1, z2=rep.z2))
    bits = [b for b in (system, speaker, vowel and f"/{vowel}/", target) if b]
    plot = report.VowelSpacePlot(points=tuple(points),
                                 title=" ".join(bits) or "vowel space")
    out = out_dir / "vowel_space.svg"
    report.render_vowel_space(plot, out)
    print(f"wrote {out} ({len(points)} points)")
    return EXIT_OK


def cmd_synth(spec_path, out_dir) -> int:
    """Write deterministic WAV files from a JSON synthesis spec."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        obj = json.loads(Path(spec_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read synth spec: {exc}") from None
    vowels = obj.get("vowels")
    if not isinstance(vowels, list) or not vowels:
        raise ConfigError("synth spec needs a non-empty 'vowels' list")
    default_rate = obj.get("sample_rate", 16000)
    count = 0
    for i, item in enumerate(vowels):
        try:
            name = item["name"]
            spec = VowelSpec(
                f0=float(item["f0"]),
                formants=tuple((float(f), float(b)) for f, b in item["formants"]),
                duration_s=float(item["duration_s"]),
                sample_rate=int(item.get("sample_rate", default_rate)),
                glottal_bw=float(item.get("glottal_bw", VowelSpec.glottal_bw)),
                noise_level=float(item.get("noise_level", 0.0)),
                noise_seed=int(item.get("noise_seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"synth spec entry {i}: {exc}") from None
        gap_s = float(item.get("gap_s", 0.0))
        tail_s = float(item.get("tail_s", 0.0))
        if gap_s > 0 or tail_s > 0:
            buffer = synth_utterance_with_gap(spec, gap_s, tail_s)
        else:
            buffer = synth_vowel(spec)
        save_audio(buffer, out_dir / f"{name}.wav")
        count += 1
    print(f"wrote {count} WAV file(s) to {out_dir}")
    return EXIT_OK


def cmd_inventory(lang_a: str, lang_b: str, inventory_path=None) -> int:
    """Print the shared and non-shared vowels of a language pair."""
    registry = load_inventories(inventory_path) if inventory_path \
        else default_registry()
    shared = registry.shared_vowels(lang_a, lang_b)
    only_a = registry.vowels(lang_a) - shared
    only_b = registry.vowels(lang_b) - shared
    print(f"shared ({len(shared)}): {' '.join(sorted(shared))}")
    non_shared = [f"{lang_a}:{v}" for v in sorted(only_a)]
    non_shared += [f"{lang_b}:{v}" for v in sorted(only_b)]
    print(f"non-shared ({len(only_a) + len(only_b)}): {' '.join(non_shared)}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value analysis config file")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for batch extraction")

    parser = argparse.ArgumentParser(
        prog="vowelspace",
        description="Vowel-space analysis of synthesized speech: formants, "
                    "speaker normalization, accent metrics, and plots.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common],
                       help="manifest of WAVs -> formants.csv")
    p.add_argument("manifest")

    p = sub.add_parser("normalize", parents=[common],
                       help="formants.csv -> normalized.csv + speaker_stats.json")
    p.add_argument("formants_csv")

    p = sub.add_parser("metrics", parents=[common],
                       help="normalized.csv -> metrics.csv + summary.json + "
                            "pair_matrix.json")
    p.add_argument("normalized_csv")
    p.add_argument("--inventory", help="override the bundled inventory file")

    p = sub.add_parser("plot", parents=[common],
                       help="normalized.csv -> vowel-space SVG; "
                            "pair_matrix.json -> heatmap SVG")
    p.add_argument("input")
    p.add_argument("--system")
    p.add_argument("--speaker")
    p.add_argument("--vowel")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--role")

    p = sub.add_parser("synth", parents=[common],
                       help="JSON spec -> deterministic oracle WAV files")
    p.add_argument("spec")

    p = sub.add_parser("inventory", parents=[common],
                       help="print shared / non-shared vowels of a pair")
    p.add_argument("lang_a")
    p.add_argument("lang_b")
    p.add_argument("--inventory", dest="inventory_file",
                   help="override the bundled inventory file")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = parse_config(args.config) if args.config \
            else Config(AnalysisParams())
        if args.out is not None:  # the flag overrides the config file
            config = Config(config.params, config.inventory_path, args.out)

        if args.command == "extract":
            return cmd_extract(args.manifest, config, jobs=args.jobs)
        if args.command == "normalize":
            return cmd_normalize(args.formants_csv, config.out_dir)
        if args.command == "metrics":
            inventory = args.inventory or config.inventory_path
            return cmd_metrics(args.normalized_csv, inventory, config.out_dir)
        if args.command == "plot":
            return cmd_plot(args.input, config.out_dir, system=args.system,
                            speaker=args.speaker, vowel=args.vowel,
                            source=args.source, target=args.target,
                            role=args.role)
        if args.command == "synth":
            return cmd_synth(args.spec, config.out_dir)
        if args.command == "inventory":
            return cmd_inventory(args.lang_a, args.lang_b,
                                 args.inventory_file or config.inventory_path)
        parser.error(f"unknown command {args.command!r}")
    except (EmptyPlot,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_DATA
    except VowelSpaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
