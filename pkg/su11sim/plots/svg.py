"""SVG figures rendered from jinja2 templates; no plotting library needed."""

import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / "templates"

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    autoescape=select_autoescape(["svg", "j2"]),
    trim_blocks=True,
    lstrip_blocks=True,
)

# width, height, left, right, top, bottom
FRAME = (720, 480, 80, 150, 40, 60)

# sequential palette anchors (dark to bright)
_PALETTE = np.array(
    [
        [0x0d, 0x08, 0x87],
        [0x6a, 0x00, 0xa8],
        [0xb1, 0x2a, 0x90],
        [0xe1, 0x64, 0x62],
        [0xfc, 0xa6, 0x36],
        [0xf0, 0xf9, 0x21],
    ],
    dtype=float,
)

_SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def _color(value: float) -> str:
    value = min(max(value, 0.0), 1.0) * (len(_PALETTE) - 1)
    low = int(math.floor(value))
    high = min(low + 1, len(_PALETTE) - 1)
    rgb = _PALETTE[low] + (value - low) * (_PALETTE[high] - _PALETTE[low])
    return "#{:02x}{:02x}{:02x}".format(*(int(round(c)) for c in rgb))


def _pool(values: np.ndarray, max_cells: int) -> np.ndarray:
    """Block-max pooling so narrow features (CW antidiagonals) stay visible."""
    rows = np.array_split(np.arange(values.shape[0]), min(max_cells, values.shape[0]))
    cols = np.array_split(np.arange(values.shape[1]), min(max_cells, values.shape[1]))
    pooled = np.empty((len(rows), len(cols)))
    for a, r in enumerate(rows):
        block = values[r[0] : r[-1] + 1]
        for b, c in enumerate(cols):
            pooled[a, b] = block[:, c[0] : c[-1] + 1].max()
    return pooled


def _ticks(low: float, high: float, count: int = 5) -> List[float]:
    if not (math.isfinite(low) and math.isfinite(high)) or high <= low:
        return [low]
    return list(np.linspace(low, high, count))


def render_heatmap(
    values: np.ndarray,
    x_axis: Sequence[float],
    y_axis: Sequence[float],
    title: str,
    x_label: str,
    y_label: str,
    max_cells: int = 128,
) -> str:
    """Heat map of ``values[y, x]``, colour-scaled to its maximum."""
    width, height, left, right, top, bottom = FRAME
    plot_w, plot_h = width - left - right, height - top - bottom
    pooled = _pool(np.asarray(values, dtype=float), max_cells)
    peak = float(pooled.max()) if pooled.size and pooled.max() > 0 else 1.0
    n_rows, n_cols = pooled.shape
    cell_w, cell_h = plot_w / n_cols, plot_h / n_rows

    cells = []
    for a in range(n_rows):
        # first row of values is the lowest y
        y = top + plot_h - (a + 1) * cell_h
        for b in range(n_cols):
            level = pooled[a, b] / peak
            if level <= 1e-4:
                continue
            cells.append(
                {"x": left + b * cell_w, "y": y, "w": cell_w + 0.05, "h": cell_h + 0.05, "color": _color(level)}
            )

    x_lo, x_hi = float(x_axis[0]), float(x_axis[-1])
    y_lo, y_hi = float(y_axis[0]), float(y_axis[-1])
    x_ticks = [{"pos": left + (t - x_lo) / (x_hi - x_lo) * plot_w, "label": f"{t:.2f}"} for t in _ticks(x_lo, x_hi)]
    y_ticks = [{"pos": top + plot_h - (t - y_lo) / (y_hi - y_lo) * plot_h, "label": f"{t:.2f}"} for t in _ticks(y_lo, y_hi)]
    legend = [{"y": top + plot_h * (1 - i / 10) - plot_h / 10, "color": _color(i / 9), "label": f"{i / 9:.2f}"} for i in range(10)]

    return _env.get_template("heatmap.svg.j2").render(
        width=width,
        height=height,
        left=left,
        top=top,
        plot_w=plot_w,
        plot_h=plot_h,
        cells=cells,
        title=title,
        x_label=x_label,
        y_label=y_label,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        legend=legend,
        legend_x=left + plot_w + 20,
        cell_legend_h=plot_h / 10,
    )


def _segments(points: List[Tuple[float, float]]) -> List[str]:
    """Split a polyline at non-finite samples."""
    segments, current = [], []
    for x, y in points:
        if math.isfinite(x) and math.isfinite(y):
            current.append(f"{x:.2f},{y:.2f}")
        elif current:
            segments.append(" ".join(current))
            current = []
    if current:
        segments.append(" ".join(current))
    return segments


def render_lines(
    series: Sequence[Tuple[str, Sequence[float], Sequence[float]]],
    title: str,
    x_label: str,
    y_label: str,
    reference_y: Optional[float] = None,
    log_y: bool = False,
    log_x: bool = False,
    y_cap: Optional[float] = None,
) -> str:
    """Line plot of labelled (x, y) series; infinite samples leave gaps.

    Args:
        series: (label, x, y) triples
        title: Figure title
        x_label: X axis label
        y_label: Y axis label
        reference_y: Dashed horizontal reference (e.g. the shot-noise level 1)
        log_y: Logarithmic y axis
        log_x: Logarithmic x axis
        y_cap: Upper clip for the y range (peaks at stationary phases)
    """
    width, height, left, right, top, bottom = FRAME
    plot_w, plot_h = width - left - right, height - top - bottom

    def tx(v):
        return math.log10(v) if log_x else v

    def ty(v):
        return math.log10(v) if log_y else v

    xs, ys = [], []
    for _, x, y in series:
        for a, b in zip(x, y):
            if math.isfinite(a) and math.isfinite(b) and (not log_y or b > 0) and (not log_x or a > 0):
                if y_cap is None or b <= y_cap:
                    xs.append(tx(a))
                    ys.append(ty(b))
    if reference_y is not None and (not log_y or reference_y > 0):
        ys.append(ty(reference_y))
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(v):
        return left + (tx(v) - x_lo) / (x_hi - x_lo) * plot_w

    def py(v):
        value = ty(v)
        value = min(max(value, y_lo), y_hi)
        return top + plot_h - (value - y_lo) / (y_hi - y_lo) * plot_h

    lines = []
    for index, (label, x, y) in enumerate(series):
        points = []
        for a, b in zip(x, y):
            usable = math.isfinite(a) and math.isfinite(b) and (not log_y or b > 0) and (not log_x or a > 0)
            if usable and y_cap is not None and b > y_cap:
                usable = False
            points.append((px(a), py(b)) if usable else (math.nan, math.nan))
        lines.append(
            {
                "label": label,
                "color": _SERIES_COLORS[index % len(_SERIES_COLORS)],
                "segments": _segments(points),
                "legend_y": top + 16 * index + 10,
            }
        )

    def fmt(v, log):
        return f"{10 ** v:.3g}" if log else f"{v:.3g}"

    x_ticks = [{"pos": left + (t - x_lo) / (x_hi - x_lo) * plot_w, "label": fmt(t, log_x)} for t in _ticks(x_lo, x_hi)]
    y_ticks = [{"pos": top + plot_h - (t - y_lo) / (y_hi - y_lo) * plot_h, "label": fmt(t, log_y)} for t in _ticks(y_lo, y_hi)]
    reference = None
    if reference_y is not None and (not log_y or reference_y > 0):
        reference = py(reference_y)

    return _env.get_template("lines.svg.j2").render(
        width=width,
        height=height,
        left=left,
        top=top,
        plot_w=plot_w,
        plot_h=plot_h,
        lines=lines,
        title=title,
        x_label=x_label,
        y_label=y_label,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        reference=reference,
        legend_x=left + plot_w + 15,
    )


def write_svg(path, content: str) -> str:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(content)
    logger.debug(f"SVG written to {path}")
    return str(path)
