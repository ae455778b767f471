"""Aggregate per-clip estimates into per-method statistics and reports.

The distribution plot is written as hand-built SVG rather than through a
plotting library so repeated runs produce byte-identical files.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import RppgError
from .spectral import HrEstimate


@dataclass(frozen=True)
class RunSet:
    """All estimates produced with one method across a set of clips."""

    method: str
    estimates: tuple[HrEstimate, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.estimates) < 1:
            raise RppgError("run set needs at least one estimate")
        if len(self.labels) != len(self.estimates):
            raise RppgError("labels and estimates must have the same length")
        if len(set(self.labels)) != len(self.labels):
            raise RppgError("clip labels must be unique")
        off = [e.method for e in self.estimates if e.method not in (None, self.method)]
        if off:
            raise RppgError(f"estimate method {off[0]!r} does not match run set {self.method!r}")

    @property
    def bpms(self) -> list[float]:
        return [e.bpm for e in self.estimates]


@dataclass(frozen=True)
class RunStats:
    n: int
    mean_bpm: float
    stdev_bpm: float
    min_bpm: float
    max_bpm: float


def summarize(run_set: RunSet) -> RunStats:
    """Mean, sample standard deviation (n-1; 0 when n=1), and extremes.

    Sums use math.fsum, so the result is independent of estimate order.
    """
    values = run_set.bpms
    n = len(values)
    mean = math.fsum(values) / n
    if n > 1:
        stdev = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    else:
        stdev = 0.0
    return RunStats(
        n=n, mean_bpm=mean, stdev_bpm=stdev, min_bpm=min(values), max_bpm=max(values)
    )


_ROWS = ("n", "mean", "stdev", "min", "max")


def _stat_strings(stats: RunStats) -> dict[str, str]:
    return {
        "n": str(stats.n),
        "mean": f"{stats.mean_bpm:.3f}",
        "stdev": f"{stats.stdev_bpm:.3f}",
        "min": f"{stats.min_bpm:.3f}",
        "max": f"{stats.max_bpm:.3f}",
    }


def render_comparison(
    a: RunStats,
    b: RunStats | None = None,
    label_a: str = "bbox",
    label_b: str = "landmark",
) -> tuple[str, str]:
    """Side-by-side statistics table as (plain text, CSV).

    Values print with 3 decimals. ``b`` may be omitted for single-method runs.
    """
    columns = [(label_a, _stat_strings(a))]
    if b is not None:
        columns.append((label_b, _stat_strings(b)))

    width = max(12, *(len(label) + 2 for label, _ in columns))
    head = "statistic".ljust(10) + "".join(label.rjust(width) for label, _ in columns)
    text_lines = [head]
    csv_lines = ["statistic," + ",".join(label for label, _ in columns)]
    for row in _ROWS:
        text_lines.append(row.ljust(10) + "".join(col[row].rjust(width) for _, col in columns))
        csv_lines.append(row + "," + ",".join(col[row] for _, col in columns))
    text_lines.append("")
    text_lines.append("stdev is the sample standard deviation (n-1 denominator).")
    return "\n".join(text_lines) + "\n", "\n".join(csv_lines) + "\n"


def _median(sorted_values: list[float]) -> float:
    m = len(sorted_values)
    mid = m // 2
    if m % 2:
        return sorted_values[mid]
    return 0.5 * (sorted_values[mid - 1] + sorted_values[mid])


def quartiles(values) -> tuple[float, float, float]:
    """(q1, median, q3) by the inclusive median-of-halves rule: for odd n the
    median belongs to both halves. A single value collapses all three."""
    xs = sorted(values)
    n = len(xs)
    if n == 1:
        return xs[0], xs[0], xs[0]
    half = (n + 1) // 2
    return _median(xs[:half]), _median(xs), _median(xs[n - half :])


_SVG_W, _SVG_H = 480, 360
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 20, 28, 56


def _svg_distribution(sets: list[RunSet]) -> str:
    all_values = [v for s in sets for v in s.bpms]
    lo, hi = min(all_values), max(all_values)
    if hi - lo < 1e-9:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.06 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B

    def sy(v: float) -> float:
        return _MARGIN_T + plot_h * (hi - v) / (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        '<desc>Per-clip heart-rate estimates by method. Boxes span quartiles '
        "(inclusive median-of-halves) with a median line; one mark per clip.</desc>",
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#888" stroke-width="1"/>',
    ]
    for tick in (lo + pad, (lo + hi) / 2.0, hi - pad):
        y = sy(tick)
        parts.append(
            f'<line x1="{_MARGIN_L - 4}" y1="{y:.2f}" x2="{_MARGIN_L}" y2="{y:.2f}" '
            'stroke="#444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{y + 4:.2f}" font-size="11" '
            f'text-anchor="end" fill="#222">{tick:.3f}</text>'
        )
    parts.append(
        f'<text x="14" y="{_MARGIN_T + plot_h / 2:.2f}" font-size="12" fill="#222" '
        f'transform="rotate(-90 14 {_MARGIN_T + plot_h / 2:.2f})" '
        'text-anchor="middle">beats per minute</text>'
    )

    box_w = 40
    for i, run_set in enumerate(sets):
        cx = _MARGIN_L + plot_w * (i + 0.5) / len(sets)
        values = run_set.bpms
        q1, med, q3 = quartiles(values)
        y_min, y_max = sy(min(values)), sy(max(values))
        parts.append(
            f'<line class="whisker" x1="{cx:.2f}" y1="{y_max:.2f}" x2="{cx:.2f}" '
            f'y2="{y_min:.2f}" stroke="#999" stroke-width="1"/>'
        )
        parts.append(
            f'<rect class="box" x="{cx - box_w / 2:.2f}" y="{sy(q3):.2f}" '
            f'width="{box_w}" height="{max(sy(q1) - sy(q3), 0.0):.2f}" '
            'fill="#cfe8cf" stroke="#2a6f2a" stroke-width="1.5"/>'
        )
        parts.append(
            f'<line class="median" x1="{cx - box_w / 2:.2f}" y1="{sy(med):.2f}" '
            f'x2="{cx + box_w / 2:.2f}" y2="{sy(med):.2f}" stroke="#2a6f2a" '
            'stroke-width="2"/>'
        )
        for j, v in enumerate(values):
            off = ((j % 5) - 2) * 6.0
            parts.append(
                f'<circle class="mark" cx="{cx + off:.2f}" cy="{sy(v):.2f}" r="3" '
                'fill="#1f4f8f" fill-opacity="0.75"/>'
            )
        parts.append(
            f'<text x="{cx:.2f}" y="{_SVG_H - _MARGIN_B + 18}" font-size="12" '
            f'text-anchor="middle" fill="#222">{run_set.method} (n={len(values)})</text>'
        )
    parts.append(
        f'<text x="{_MARGIN_L}" y="{_SVG_H - 12}" font-size="10" fill="#555">'
        "box: quartiles by inclusive median-of-halves; line: median; marks: clips</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def points_csv(sets: list[RunSet]) -> str:
    """Underlying plot points as ``method,clip,bpm`` (bpm to 3 decimals)."""
    lines = ["method,clip,bpm"]
    for run_set in sets:
        for label, est in zip(run_set.labels, run_set.estimates):
            lines.append(f"{run_set.method},{label},{est.bpm:.3f}")
    return "\n".join(lines) + "\n"


def render_distribution(sets: list[RunSet], svg_path: str, csv_path: str | None = None) -> None:
    """Write the strip/box distribution SVG plus the points CSV beside it."""
    if not sets:
        raise RppgError("render_distribution needs at least one run set")
    if csv_path is None:
        csv_path = os.path.splitext(svg_path)[0] + "_points.csv"
    try:
        with open(svg_path, "w", encoding="utf-8") as fh:
            fh.write(_svg_distribution(sets))
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(points_csv(sets))
    except OSError as exc:
        raise RppgError(f"cannot write distribution plot: {exc}") from exc
