"""Table serialization and SVG rendering of vowel spaces and pair matrices.

Tables are plain UTF-8 CSV with fixed headers; floats carry 6 significant
digits.  Plots are hand-built SVG so output is deterministic and diffable.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .errors import EmptyPlot, SchemaMismatch
from .metrics import MetricRow, PairMatrix

FORMANTS_HEADER = ["system", "speaker", "src_lang", "tgt_lang", "vowel",
                   "role", "idx", "f1_hz", "f2_hz"]
NORMALIZED_HEADER = ["system", "speaker", "src_lang", "tgt_lang", "vowel",
                     "role", "idx", "z1", "z2"]
METRICS_HEADER = ["system", "src_lang", "tgt_lang", "vowel", "shared",
                  "distance", "compactness", "n"]


@dataclass(frozen=True)
class FormantRow:
    system: str
    speaker: str
    src_lang: str
    tgt_lang: str
    vowel: str
    role: str
    idx: int
    f1_hz: float
    f2_hz: float


@dataclass(frozen=True)
class NormalizedRow:
    system: str
    speaker: str
    src_lang: str
    tgt_lang: str
    vowel: str
    role: str
    idx: int
    z1: float
    z2: float


def fmt_float(x: float) -> str:
    return format(float(x), ".6g")


def _write_csv(path, header: List[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_csv(path, header: List[str]):
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows or rows[0] != header:
        got = rows[0] if rows else []
        raise SchemaMismatch(
            f"{path}:1: expected header {','.join(header)!r}, got {','.join(got)!r}")
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaMismatch(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        yield lineno, row


def _parse(value: str, kind, path, lineno: int, column: str):
    try:
        return kind(value)
    except ValueError:
        raise SchemaMismatch(
            f"{path}:{lineno}: cannot parse {column}={value!r}") from None


def write_formants(rows: Sequence[FormantRow], path) -> None:
    _write_csv(path, FORMANTS_HEADER,
               ([r.system, r.speaker, r.src_lang, r.tgt_lang, r.vowel, r.role,
                 str(r.idx), fmt_float(r.f1_hz), fmt_float(r.f2_hz)]
                for r in rows))


def read_formants(path) -> List[FormantRow]:
    out = []
    for lineno, row in _read_csv(path, FORMANTS_HEADER):
        out.append(FormantRow(*row[:6],
                              _parse(row[6], int, path, lineno, "idx"),
                              _parse(row[7], float, path, lineno, "f1_hz"),
                              _parse(row[8], float, path, lineno, "f2_hz")))
    return out


def write_normalized(rows: Sequence[NormalizedRow], path) -> None:
    _write_csv(path, NORMALIZED_HEADER,
               ([r.system, r.speaker, r.src_lang, r.tgt_lang, r.vowel, r.role,
                 str(r.idx), fmt_float(r.z1), fmt_float(r.z2)]
                for r in rows))


def read_normalized(path) -> List[NormalizedRow]:
    out = []
    for lineno, row in _read_csv(path, NORMALIZED_HEADER):
        out.append(NormalizedRow(*row[:6],
                                 _parse(row[6], int, path, lineno, "idx"),
                                 _parse(row[7], float, path, lineno, "z1"),
                                 _parse(row[8], float, path, lineno, "z2")))
    return out


def write_metrics(rows: Sequence[MetricRow], path) -> None:
    _write_csv(path, METRICS_HEADER,
               ([r.system_id, r.source_language, r.target_language, r.vowel,
                 "true" if r.shared else "false", fmt_float(r.distance),
                 fmt_float(r.compactness_sd), str(r.n_points)]
                for r in rows))


def _parse_bool(value: str, path, lineno: int) -> bool:
    if value in ("true", "false"):
        return value == "true"
    raise SchemaMismatch(f"{path}:{lineno}: cannot parse shared={value!r}")


def read_metrics(path) -> List[MetricRow]:
    out = []
    for lineno, row in _read_csv(path, METRICS_HEADER):
        out.append(MetricRow(*row[:4],
                             _parse_bool(row[4], path, lineno),
                             _parse(row[5], float, path, lineno, "distance"),
                             _parse(row[6], float, path, lineno, "compactness"),
                             _parse(row[7], int, path, lineno, "n")))
    return out


def write_json(obj, path) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def params_sidecar(path) -> Path:
    """Path of the parameter block accompanying a table file."""
    path = Path(path)
    return path.with_name(path.stem + ".params.json")


# --- SVG rendering -------------------------------------------------------

@dataclass(frozen=True)
class PlotPoint:
    label: str  # IPA symbol drawn next to the marker
    series: str  # grouping for marker shape and legend
    z1: float
    z2: float


@dataclass(frozen=True)
class VowelSpacePlot:
    points: Tuple[PlotPoint, ...]
    title: str = ""
    z1_range: Optional[Tuple[float, float]] = None
    z2_range: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))


_MARKERS = ("circle", "square", "diamond", "triangle", "cross")
_SERIES_COLORS = ("#1f4e8c", "#b2522d", "#3c7a3c", "#7a3c7a", "#555555")


def _spread(lo: float, hi: float, pad: float = 0.1) -> Tuple[float, float]:
    if hi <= lo:
        return lo - 1.0, hi + 1.0
    margin = (hi - lo) * pad
    return lo - margin, hi + margin


def _marker_svg(shape: str, x: float, y: float, color: str, extra: str) -> str:
    s = 5.0
    if shape == "circle":
        return (f'<circle class="point" cx="{x:.2f}" cy="{y:.2f}" r="{s:.2f}" '
                f'fill="{color}"{extra}/>')
    if shape == "square":
        return (f'<rect class="point" x="{x - s:.2f}" y="{y - s:.2f}" '
                f'width="{2 * s:.2f}" height="{2 * s:.2f}" fill="{color}"{extra}/>')
    if shape == "diamond":
        pts = f"{x:.2f},{y - s:.2f} {x + s:.2f},{y:.2f} {x:.2f},{y + s:.2f} {x - s:.2f},{y:.2f}"
        return f'<polygon class="point" points="{pts}" fill="{color}"{extra}/>'
    if shape == "triangle":
        pts = f"{x:.2f},{y - s:.2f} {x + s:.2f},{y + s:.2f} {x - s:.2f},{y + s:.2f}"
        return f'<polygon class="point" points="{pts}" fill="{color}"{extra}/>'
    return (f'<path class="point" d="M {x - s:.2f} {y:.2f} H {x + s:.2f} '
            f'M {x:.2f} {y - s:.2f} V {y + s:.2f}" '
            f'stroke="{color}" stroke-width="2"{extra}/>')


def render_vowel_space(plot: VowelSpacePlot, path) -> None:
    """Draw labeled points on the reversed-axis vowel chart.

    Higher z2 (fronter vowels) renders further left; higher z1 (more open
    vowels) renders lower on the page.  Each series gets its own marker and
    a legend entry when more than one series is present.
    """
    if not plot.points:
        raise EmptyPlot("no points to draw")
    z1s = [p.z1 for p in plot.points]
    z2s = [p.z2 for p in plot.points]
    z1_lo, z1_hi = plot.z1_range or _spread(min(z1s), max(z1s))
    z2_lo, z2_hi = plot.z2_range or _spread(min(z2s), max(z2s))

    ml, mt, w, h = 70.0, 50.0, 460.0, 420.0
    series_names = sorted({p.series for p in plot.points})
    mr = 150.0 if len(series_names) > 1 else 40.0
    width, height = ml + w + mr, mt + h + 60.0

    def x_px(z2: float) -> float:
        return ml + (z2_hi - z2) / (z2_hi - z2_lo) * w

    def y_px(z1: float) -> float:
        return mt + (z1 - z1_lo) / (z1_hi - z1_lo) * h

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
           f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
           f'<rect x="{ml:.2f}" y="{mt:.2f}" width="{w:.2f}" height="{h:.2f}" '
           'fill="white" stroke="#888"/>']
    if plot.title:
        out.append(f'<text x="{ml + w / 2:.2f}" y="28" text-anchor="middle" '
                   f'font-size="16">{escape(plot.title)}</text>')

    for i in range(5):
        t = i / 4.0
        z2 = z2_lo + t * (z2_hi - z2_lo)
        z1 = z1_lo + t * (z1_hi - z1_lo)
        gx, gy = x_px(z2), y_px(z1)
        out.append(f'<line x1="{gx:.2f}" y1="{mt + h:.2f}" x2="{gx:.2f}" '
                   f'y2="{mt + h + 5:.2f}" stroke="#888"/>')
        out.append(f'<text x="{gx:.2f}" y="{mt + h + 18:.2f}" text-anchor="middle" '
                   f'font-size="11">{z2:.2f}</text>')
        out.append(f'<line x1="{ml - 5:.2f}" y1="{gy:.2f}" x2="{ml:.2f}" '
                   f'y2="{gy:.2f}" stroke="#888"/>')
        out.append(f'<text x="{ml - 8:.2f}" y="{gy + 4:.2f}" text-anchor="end" '
                   f'font-size="11">{z1:.2f}</text>')
    out.append(f'<text x="{ml + w / 2:.2f}" y="{mt + h + 40:.2f}" '
               'text-anchor="middle" font-size="13">F2 (z-score, reversed)</text>')
    out.append(f'<text x="18" y="{mt + h / 2:.2f}" text-anchor="middle" '
               f'font-size="13" transform="rotate(-90 18 {mt + h / 2:.2f})">'
               'F1 (z-score, reversed)</text>')

    for p in plot.points:
        idx = series_names.index(p.series)
        shape = _MARKERS[idx % len(_MARKERS)]
        color = _SERIES_COLORS[idx % len(_SERIES_COLORS)]
        px, py = x_px(p.z2), y_px(p.z1)
        extra = (f' data-label="{escape(p.label, {chr(34): "&quot;"})}"'
                 f' data-series="{escape(p.series, {chr(34): "&quot;"})}"'
                 f' data-z1="{p.z1:.6g}" data-z2="{p.z2:.6g}"')
        out.append(_marker_svg(shape, px, py, color, extra))
        out.append(f'<text class="point-label" x="{px + 7:.2f}" y="{py - 7:.2f}" '
                   f'font-size="14">{escape(p.label)}</text>')

    if len(series_names) > 1:
        lx, ly = ml + w + 18.0, mt + 10.0
        out.append(f'<text x="{lx:.2f}" y="{ly:.2f}" font-size="12" '
                   'font-weight="bold">series</text>')
        for i, name in enumerate(series_names):
            yy = ly + 20.0 + i * 20.0
            shape = _MARKERS[i % len(_MARKERS)]
            color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
            out.append(_marker_svg(shape, lx + 6.0, yy - 4.0, color, ""))
            out.append(f'<text x="{lx + 18:.2f}" y="{yy:.2f}" font-size="12">'
                       f'{escape(name)}</text>')

    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


_LIGHT = (222, 235, 247)
_DARK = (8, 48, 107)


def heat_color(value: float, vmin: float, vmax: float) -> str:
    """Light-to-dark blue, linear between the observed extremes.

    Larger values map to darker fills; a constant matrix maps to the dark
    end.  Every RGB channel decreases monotonically, so luminance strictly
    decreases as the value grows.
    """
    t = 1.0 if vmax <= vmin else (value - vmin) / (vmax - vmin)
    rgb = tuple(round(lo + t * (hi - lo)) for lo, hi in zip(_LIGHT, _DARK))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _luminance(rgb: Tuple[int, int, int]) -> float:
    r, g, b = rgb
    return 0.2126 * r + 0.7152 * g + 0.0722 * b


def render_heatmap(matrix: PairMatrix, path, title: str = "") -> None:
    """Grid of per-pair mean distances; darker cells mean larger values.

    Populated cells print their value (2 decimals) and carry it in a
    data-value attribute; absent cells are hatched and unlabeled.
    """
    if not matrix.cells:
        raise EmptyPlot("no populated cells")
    vmin = min(matrix.cells.values())
    vmax = max(matrix.cells.values())
    cell = 74.0
    ml, mt = 90.0, 70.0
    width = ml + cell * len(matrix.targets) + 30.0
    height = mt + cell * len(matrix.sources) + 30.0

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
           f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
           '<defs><pattern id="hatch" width="6" height="6" '
           'patternUnits="userSpaceOnUse">'
           '<path d="M 0 6 L 6 0" stroke="#bbb" stroke-width="1"/>'
           "</pattern></defs>"]
    if title:
        out.append(f'<text x="{ml + cell * len(matrix.targets) / 2:.2f}" y="24" '
                   f'text-anchor="middle" font-size="15">{escape(title)}</text>')
    out.append(f'<text x="{ml + cell * len(matrix.targets) / 2:.2f}" y="44" '
               'text-anchor="middle" font-size="12">target language</text>')
    out.append(f'<text x="20" y="{mt + cell * len(matrix.sources) / 2:.2f}" '
               'text-anchor="middle" font-size="12" transform="rotate(-90 20 '
               f'{mt + cell * len(matrix.sources) / 2:.2f})">source language</text>')

    for j, tgt in enumerate(matrix.targets):
        out.append(f'<text x="{ml + (j + 0.5) * cell:.2f}" y="{mt - 8:.2f}" '
                   f'text-anchor="middle" font-size="13">{escape(tgt)}</text>')
    for i, src in enumerate(matrix.sources):
        out.append(f'<text x="{ml - 8:.2f}" y="{mt + (i + 0.5) * cell + 4:.2f}" '
                   f'text-anchor="end" font-size="13">{escape(src)}</text>')

    for i, src in enumerate(matrix.sources):
        for j, tgt in enumerate(matrix.targets):
            x, y = ml + j * cell, mt + i * cell
            value = matrix.cells.get((src, tgt))
            if value is None:
                out.append(f'<rect class="cell absent" x="{x:.2f}" y="{y:.2f}" '
                           f'width="{cell:.2f}" height="{cell:.2f}" '
                           f'data-src="{escape(src)}" data-tgt="{escape(tgt)}" '
                           'fill="url(#hatch)" stroke="#888"/>')
                continue
            fill = heat_color(value, vmin, vmax)
            rgb = tuple(int(fill[k:k + 2], 16) for k in (1, 3, 5))
            text_color = "#ffffff" if _luminance(rgb) < 128 else "#000000"
            out.append(f'<rect class="cell" x="{x:.2f}" y="{y:.2f}" '
                       f'width="{cell:.2f}" height="{cell:.2f}" '
                       f'data-src="{escape(src)}" data-tgt="{escape(tgt)}" '
                       f'data-value="{value:.6g}" fill="{fill}" stroke="#888"/>')
            out.append(f'<text x="{x + cell / 2:.2f}" y="{y + cell / 2 + 5:.2f}" '
                       f'text-anchor="middle" font-size="14" fill="{text_color}">'
                       f'{value:.2f}</text>')

    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
