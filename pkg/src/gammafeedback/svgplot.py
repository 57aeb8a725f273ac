"""
Self-contained SVG rendering for grids, contours, and trajectories.

No external renderer: documents are plain SVG 1.1 text with axes, tick
labels, and a legend, deterministic for identical input (fixed float
formatting, fixed palette). Heatmaps use a monotone color ramp: value v is
mapped to t = (v - vmin) / (vmax - vmin) and linearly interpolated in RGB
from deep blue (20, 42, 108) at t = 0 to light yellow (249, 240, 85) at
t = 1; singular cells render gray.
"""

from __future__ import annotations

import numpy as np

from .analysis import ContourSet, GridScan
from .dynamics import Trajectory

WIDTH = 720
HEIGHT = 520
MARGIN = {"left": 72, "right": 36, "top": 44, "bottom": 56}
RIGHT_AXIS_MARGIN = 72

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
RAMP_LOW = (20, 42, 108)
RAMP_HIGH = (249, 240, 85)
SINGULAR_COLOR = "#9e9e9e"


def _f(v: float) -> str:
    return f"{v:.2f}"


def _ramp_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    rgb = [round(lo + t * (hi - lo)) for lo, hi in zip(RAMP_LOW, RAMP_HIGH)]
    return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"


class _Frame:
    """Maps data coordinates to pixel coordinates inside the plot box."""

    def __init__(self, xlim, ylim, right_margin=MARGIN["right"]):
        self.x0, self.x1 = _pad_span(*xlim)
        self.y0, self.y1 = _pad_span(*ylim)
        self.px0 = MARGIN["left"]
        self.px1 = WIDTH - right_margin
        self.py0 = HEIGHT - MARGIN["bottom"]
        self.py1 = MARGIN["top"]

    def x(self, v: float) -> float:
        return self.px0 + (v - self.x0) / (self.x1 - self.x0) * (self.px1 - self.px0)

    def y(self, v: float) -> float:
        return self.py0 + (v - self.y0) / (self.y1 - self.y0) * (self.py1 - self.py0)


def _pad_span(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        return lo, hi
    pad = abs(lo) * 0.1 or 1.0
    return lo - pad, hi + pad


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    return list(np.linspace(lo, hi, n))


def _tick_text(v: float) -> str:
    return f"{v:.6g}"


def _axes(frame: _Frame, xlabel: str, ylabel: str, title: str) -> list[str]:
    parts = [
        f'<rect x="{_f(frame.px0)}" y="{_f(frame.py1)}" '
        f'width="{_f(frame.px1 - frame.px0)}" height="{_f(frame.py0 - frame.py1)}" '
        'fill="none" stroke="#444444" stroke-width="1"/>'
    ]
    for xv in _ticks(frame.x0, frame.x1):
        px = frame.x(xv)
        parts.append(
            f'<line x1="{_f(px)}" y1="{_f(frame.py0)}" x2="{_f(px)}" '
            f'y2="{_f(frame.py0 + 5)}" stroke="#444444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_f(px)}" y="{_f(frame.py0 + 18)}" font-size="11" '
            f'text-anchor="middle" font-family="sans-serif">{_tick_text(xv)}</text>'
        )
    for yv in _ticks(frame.y0, frame.y1):
        py = frame.y(yv)
        parts.append(
            f'<line x1="{_f(frame.px0 - 5)}" y1="{_f(py)}" x2="{_f(frame.px0)}" '
            f'y2="{_f(py)}" stroke="#444444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_f(frame.px0 - 8)}" y="{_f(py + 4)}" font-size="11" '
            f'text-anchor="end" font-family="sans-serif">{_tick_text(yv)}</text>'
        )
    cx = (frame.px0 + frame.px1) / 2
    parts.append(
        f'<text x="{_f(cx)}" y="{_f(HEIGHT - 14)}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">{xlabel}</text>'
    )
    cy = (frame.py0 + frame.py1) / 2
    parts.append(
        f'<text x="18" y="{_f(cy)}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 18 {_f(cy)})">{ylabel}</text>'
    )
    if title:
        parts.append(
            f'<text x="{_f(cx)}" y="26" font-size="15" text-anchor="middle" '
            f'font-family="sans-serif">{title}</text>'
        )
    return parts


def _legend(entries: list[tuple[str, str]], frame: _Frame) -> list[str]:
    if not entries:
        return []
    x = frame.px0 + 12
    y = frame.py1 + 12
    height = 18 * len(entries) + 10
    width = 16 + 10 * max(len(label) for label, _ in entries) + 40
    parts = [
        f'<rect x="{_f(x - 6)}" y="{_f(y - 6)}" width="{_f(width)}" height="{_f(height)}" '
        'fill="#ffffff" fill-opacity="0.85" stroke="#888888" stroke-width="0.5"/>'
    ]
    for i, (label, color) in enumerate(entries):
        ly = y + 6 + 18 * i
        parts.append(
            f'<line x1="{_f(x)}" y1="{_f(ly)}" x2="{_f(x + 26)}" y2="{_f(ly)}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_f(x + 32)}" y="{_f(ly + 4)}" font-size="11" '
            f'font-family="sans-serif">{label}</text>'
        )
    return parts


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _polyline(points: list[tuple[float, float]], color: str, width: float = 1.5,
              dasharray: str | None = None) -> str:
    coords = " ".join(f"{_f(px)},{_f(py)}" for px, py in points)
    dash = f' stroke-dasharray="{dasharray}"' if dasharray else ""
    return (
        f'<polyline points="{coords}" fill="none" stroke="{color}" '
        f'stroke-width="{width}"{dash}/>'
    )


def heatmap_svg(
    scan: GridScan,
    contours: list[tuple[ContourSet, str, str | None]] = (),
    title: str = "",
    xlabel: str = "beta",
    ylabel: str = "G",
) -> str:
    """Grid heatmap with optional (ContourSet, color, dasharray) overlays."""
    spec = scan.spec
    betas, gs = spec.betas(), spec.gs()
    frame = _Frame((spec.beta_min, spec.beta_max), (spec.g_min, spec.g_max))
    finite = scan.values[~scan.singular]
    vmin = float(finite.min()) if finite.size else 0.0
    vmax = float(finite.max()) if finite.size else 1.0
    span = (vmax - vmin) or 1.0

    body = []
    half_b = (betas[1] - betas[0]) / 2 if spec.n_beta > 1 and betas[1] > betas[0] else 0.5
    half_g = (gs[1] - gs[0]) / 2 if spec.n_g > 1 and gs[1] > gs[0] else 0.5
    for i in range(spec.n_beta):
        px = frame.x(max(betas[i] - half_b, frame.x0))
        px1 = frame.x(min(betas[i] + half_b, frame.x1))
        for j in range(spec.n_g):
            py1 = frame.y(min(gs[j] + half_g, frame.y1))
            py = frame.y(max(gs[j] - half_g, frame.y0))
            if scan.singular[i, j]:
                color = SINGULAR_COLOR
            else:
                color = _ramp_color((scan.values[i, j] - vmin) / span)
            body.append(
                f'<rect x="{_f(px)}" y="{_f(py1)}" width="{_f(px1 - px)}" '
                f'height="{_f(py - py1)}" fill="{color}"/>'
            )
    for contour, color, dasharray in contours:
        for line in contour.polylines:
            pts = [(frame.x(b), frame.y(g)) for b, g in line]
            body.append(_polyline(pts, color, width=1.8, dasharray=dasharray))
    body.extend(_axes(frame, xlabel, ylabel, title))
    return _document(body)


def timeseries_svg(
    trajectories: list[Trajectory],
    labels: list[str] | None = None,
    title: str = "",
    xlabel: str = "t",
    ylabel: str = "S",
) -> str:
    """Multi-line price chart; legend entries follow the input order."""
    if not trajectories:
        raise ValueError("no trajectories to plot")
    ys = [traj.prices for traj in trajectories]
    xmax = max(len(y) - 1 for y in ys)
    ymin = min(min(y) for y in ys)
    ymax = max(max(y) for y in ys)
    frame = _Frame((0.0, float(xmax)), (ymin, ymax))
    body = []
    entries = []
    for idx, y in enumerate(ys):
        color = PALETTE[idx % len(PALETTE)]
        pts = [(frame.x(t), frame.y(v)) for t, v in enumerate(y)]
        body.append(_polyline(pts, color))
        if labels:
            entries.append((labels[idx], color))
    body.extend(_axes(frame, xlabel, ylabel, title))
    body.extend(_legend(entries, frame))
    return _document(body)


def contour_svg(
    contours: ContourSet,
    title: str = "",
    xlabel: str = "beta",
    ylabel: str = "G",
) -> str:
    """Standalone polyline plot of a contour set."""
    if not contours.polylines:
        raise ValueError("contour set is empty")
    all_pts = np.vstack(contours.polylines)
    frame = _Frame(
        (all_pts[:, 0].min(), all_pts[:, 0].max()),
        (all_pts[:, 1].min(), all_pts[:, 1].max()),
    )
    body = []
    for line in contours.polylines:
        pts = [(frame.x(b), frame.y(g)) for b, g in line]
        body.append(_polyline(pts, PALETTE[0]))
    body.extend(_axes(frame, xlabel, ylabel, title))
    return _document(body)


def event_series_svg(traj: Trajectory, title: str = "") -> str:
    """Price line on the left axis, exposure spikes as stems on the right."""
    prices = traj.prices
    nus = traj.column("nu_t")
    frame = _Frame((0.0, float(len(prices) - 1)), (min(prices), max(prices)),
                   right_margin=RIGHT_AXIS_MARGIN)
    nu_max = max(max(nus), 1e-12)
    nu_frame = _Frame((0.0, float(len(prices) - 1)), (0.0, nu_max),
                      right_margin=RIGHT_AXIS_MARGIN)
    body = []
    base = nu_frame.y(0.0)
    stem_color = PALETTE[0]
    for t, nu in enumerate(nus):
        if nu > 0:
            px = frame.x(t)
            body.append(
                f'<line x1="{_f(px)}" y1="{_f(base)}" x2="{_f(px)}" '
                f'y2="{_f(nu_frame.y(nu))}" stroke="{stem_color}" stroke-width="1.2"/>'
            )
    pts = [(frame.x(t), frame.y(v)) for t, v in enumerate(prices)]
    body.append(_polyline(pts, PALETTE[3]))
    body.extend(_axes(frame, "t", "S", title))
    for nv in _ticks(0.0, nu_frame.y1):
        py = nu_frame.y(nv)
        body.append(
            f'<line x1="{_f(frame.px1)}" y1="{_f(py)}" x2="{_f(frame.px1 + 5)}" '
            f'y2="{_f(py)}" stroke="#444444" stroke-width="1"/>'
        )
        body.append(
            f'<text x="{_f(frame.px1 + 8)}" y="{_f(py + 4)}" font-size="11" '
            f'text-anchor="start" font-family="sans-serif">{_tick_text(nv)}</text>'
        )
    body.append(
        f'<text x="{_f(WIDTH - 14)}" y="{_f((frame.py0 + frame.py1) / 2)}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif" '
        f'transform="rotate(90 {_f(WIDTH - 14)} {_f((frame.py0 + frame.py1) / 2)})">nu</text>'
    )
    body.extend(_legend([("S", PALETTE[3]), ("nu", stem_color)], frame))
    return _document(body)


def line_chart_svg(xs, ys, title: str = "", xlabel: str = "x", ylabel: str = "y") -> str:
    """Single-series line chart for scalar curves (e.g. root-exposure scans)."""
    frame = _Frame((min(xs), max(xs)), (min(ys), max(ys)))
    pts = [(frame.x(x), frame.y(y)) for x, y in zip(xs, ys)]
    body = [_polyline(pts, PALETTE[0])]
    body.extend(_axes(frame, xlabel, ylabel, title))
    return _document(body)


def emit_svg(artifact, **kwargs) -> str:
    """Render a GridScan, ContourSet, Trajectory, or trajectory list.

    Event-driven trajectories get the stem-plus-line dual-axis layout;
    keyword arguments pass through to the matching renderer.
    """
    if isinstance(artifact, GridScan):
        return heatmap_svg(artifact, **kwargs)
    if isinstance(artifact, ContourSet):
        return contour_svg(artifact, **kwargs)
    if isinstance(artifact, Trajectory):
        if artifact.mode == "event_driven":
            return event_series_svg(artifact, **kwargs)
        return timeseries_svg([artifact], **kwargs)
    if isinstance(artifact, (list, tuple)) and artifact:
        return timeseries_svg(list(artifact), **kwargs)
    raise TypeError(f"cannot render artifact of type {type(artifact).__name__}")
