"""Minimal deterministic SVG rendering: heatmaps, line charts, histograms.

No plotting library; every file is assembled from fixed-format strings so
identical inputs give byte-identical output. Decision-score heatmaps share
one diverging colour scale over [-1, 1] (blue, white, red) and draw the
p = 0.5 decision boundary (f = 0) as a dashed contour via marching squares.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .bench import DecisionGrid

MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60.0, 20.0, 34.0, 46.0
PLOT_W, PLOT_H = 460.0, 400.0

SERIES_COLORS = ["#1b6ca8", "#c23b22", "#2e8540", "#8a5bc7", "#c98a00", "#5a5a5a"]


def _f(v: float) -> str:
    return format(float(v), ".3f")


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def diverging_color(f: float) -> str:
    """Blue (-1) -> white (0) -> red (+1)."""
    f = min(max(float(f), -1.0), 1.0)
    lo = (33, 102, 172)
    mid = (247, 247, 247)
    hi = (178, 24, 43)
    if f < 0:
        t = f + 1.0
        rgb = tuple(round(lo[i] + t * (mid[i] - lo[i])) for i in range(3))
    else:
        rgb = tuple(round(mid[i] + f * (hi[i] - mid[i])) for i in range(3))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def sequential_color(v: float) -> str:
    """White (0) -> dark indigo (1)."""
    v = min(max(float(v), 0.0), 1.0)
    hi = (54, 14, 102)
    rgb = tuple(round(255 + v * (hi[i] - 255)) for i in range(3))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


class SvgDoc:
    def __init__(self, width: float, height: float) -> None:
        self.width, self.height = width, height
        self.parts: List[str] = [
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
            f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">\n'
            f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>\n'
        ]

    def rect(self, x, y, w, h, fill, stroke: str = "none") -> None:
        self.parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{fill}" stroke="{stroke}"/>\n'
        )

    def line(self, x1, y1, x2, y2, stroke="#000000", width=1.0, dashed=False) -> None:
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        self.parts.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"{dash}/>\n'
        )

    def polyline(self, pts, stroke, width=1.5, dashed=False, fill="none", opacity=None) -> None:
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        op = f' fill-opacity="{_f(opacity)}"' if opacity is not None else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="{fill}"{op} stroke="{stroke}" '
            f'stroke-width="{_f(width)}"{dash}/>\n'
        )

    def polygon(self, pts, fill, opacity=0.25) -> None:
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{_f(opacity)}" stroke="none"/>\n'
        )

    def circle(self, x, y, r, fill, stroke="none") -> None:
        self.parts.append(
            f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{fill}" stroke="{stroke}"/>\n'
        )

    def text(self, x, y, content, size=12, anchor="start", color="#222222") -> None:
        self.parts.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-family="monospace" font-size="{_f(size)}" '
            f'text-anchor="{anchor}" fill="{color}">{_esc(str(content))}</text>\n'
        )

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write("".join(self.parts))
            fh.write("</svg>\n")


def _axes(doc: SvgDoc, x_range, y_range, title, xlabel, ylabel) -> None:
    x0, y0 = MARGIN_L, MARGIN_T
    doc.rect(x0, y0, PLOT_W, PLOT_H, fill="none", stroke="#222222")
    doc.text(MARGIN_L + PLOT_W / 2, MARGIN_T - 12, title, size=13, anchor="middle")
    doc.text(MARGIN_L + PLOT_W / 2, MARGIN_T + PLOT_H + 36, xlabel, anchor="middle")
    doc.text(14, MARGIN_T + PLOT_H / 2, ylabel, anchor="middle")
    for i in range(5):
        fx = i / 4
        vx = x_range[0] + fx * (x_range[1] - x_range[0])
        vy = y_range[0] + fx * (y_range[1] - y_range[0])
        px = MARGIN_L + fx * PLOT_W
        py = MARGIN_T + PLOT_H - fx * PLOT_H
        doc.line(px, MARGIN_T + PLOT_H, px, MARGIN_T + PLOT_H + 4)
        doc.text(px, MARGIN_T + PLOT_H + 18, f"{vx:.2f}", size=10, anchor="middle")
        doc.line(MARGIN_L - 4, py, MARGIN_L, py)
        doc.text(MARGIN_L - 7, py + 3, f"{vy:.2f}", size=10, anchor="end")


def marching_squares(
    xs: np.ndarray, ys: np.ndarray, z: np.ndarray, level: float
) -> List[Tuple[Tuple[float, float], Tuple[float, float]]]:
    """Line segments of the ``z == level`` contour on the (xs, ys) lattice.

    z is indexed [iy, ix]. Ambiguous saddle cells are split by the cell
    average (standard marching-squares disambiguation).
    """
    segs = []

    def interp(va, vb, pa, pb):
        t = (level - va) / (vb - va)
        return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))

    for iy in range(len(ys) - 1):
        for ix in range(len(xs) - 1):
            v00, v10 = z[iy, ix], z[iy, ix + 1]
            v01, v11 = z[iy + 1, ix], z[iy + 1, ix + 1]
            p00, p10 = (xs[ix], ys[iy]), (xs[ix + 1], ys[iy])
            p01, p11 = (xs[ix], ys[iy + 1]), (xs[ix + 1], ys[iy + 1])
            case = (
                (v00 > level) | ((v10 > level) << 1)
                | ((v11 > level) << 2) | ((v01 > level) << 3)
            )
            if case in (0, 15):
                continue
            bottom = interp(v00, v10, p00, p10) if (v00 > level) != (v10 > level) else None
            right = interp(v10, v11, p10, p11) if (v10 > level) != (v11 > level) else None
            top = interp(v01, v11, p01, p11) if (v01 > level) != (v11 > level) else None
            left = interp(v00, v01, p00, p01) if (v00 > level) != (v01 > level) else None
            if case in (1, 14):
                segs.append((left, bottom))
            elif case in (2, 13):
                segs.append((bottom, right))
            elif case in (3, 12):
                segs.append((left, right))
            elif case in (4, 11):
                segs.append((right, top))
            elif case in (6, 9):
                segs.append((bottom, top))
            elif case in (7, 8):
                segs.append((left, top))
            elif case in (5, 10):
                center_above = (v00 + v10 + v01 + v11) / 4.0 > level
                if (case == 5) == center_above:
                    segs.append((left, bottom))
                    segs.append((right, top))
                else:
                    segs.append((left, top))
                    segs.append((bottom, right))
    return segs


def _grid_transform(x_range, y_range):
    def to_px(x, y):
        fx = (x - x_range[0]) / (x_range[1] - x_range[0])
        fy = (y - y_range[0]) / (y_range[1] - y_range[0])
        return MARGIN_L + fx * PLOT_W, MARGIN_T + PLOT_H - fy * PLOT_H

    return to_px


def heatmap_svg(
    grid: DecisionGrid,
    path: Union[str, Path],
    title: str = "decision grid",
    points: Optional[np.ndarray] = None,
    labels: Optional[np.ndarray] = None,
    contour_level: Optional[float] = 0.0,
) -> None:
    """Decision-score heatmap with the dashed p = 0.5 boundary contour."""
    doc = SvgDoc(MARGIN_L + PLOT_W + MARGIN_R, MARGIN_T + PLOT_H + MARGIN_B)
    nx, ny = grid.resolution
    to_px = _grid_transform(grid.x_range, grid.y_range)
    cw, ch = PLOT_W / nx, PLOT_H / ny
    xs, ys = grid.cell_centers()
    for iy in range(ny):
        for ix in range(nx):
            px, py = to_px(xs[ix], ys[iy])
            doc.rect(px - cw / 2, py - ch / 2, cw, ch, fill=diverging_color(grid.scores[iy, ix]))
    if contour_level is not None:
        for (ax, ay), (bx, by) in marching_squares(xs, ys, grid.scores, contour_level):
            doc.line(*to_px(ax, ay), *to_px(bx, by), stroke="#000000", width=1.6, dashed=True)
    if points is not None:
        labs = labels if labels is not None else np.zeros(len(points), dtype=int)
        for (x, y), lab in zip(points, labs):
            px, py = to_px(x, y)
            doc.circle(px, py, 3.0, fill="#111111" if lab else "#ffffff", stroke="#111111")
    _axes(doc, grid.x_range, grid.y_range, title, "x1", "x2")
    doc.save(path)


def matrix_heatmap_svg(
    xs: np.ndarray,
    ys: np.ndarray,
    z: np.ndarray,
    path: Union[str, Path],
    title: str,
    xlabel: str = "x",
    ylabel: str = "y",
    n_contours: int = 0,
) -> None:
    """Sequential heatmap of an arbitrary matrix (e.g. loss slice, |diff| map)."""
    doc = SvgDoc(MARGIN_L + PLOT_W + MARGIN_R, MARGIN_T + PLOT_H + MARGIN_B)
    x_range = (float(xs[0]), float(xs[-1]))
    y_range = (float(ys[0]), float(ys[-1]))
    to_px = _grid_transform(x_range, y_range)
    lo, hi = float(np.min(z)), float(np.max(z))
    span = hi - lo if hi > lo else 1.0
    cw, ch = PLOT_W / (len(xs) - 1), PLOT_H / (len(ys) - 1)
    for iy in range(len(ys)):
        for ix in range(len(xs)):
            px, py = to_px(xs[ix], ys[iy])
            doc.rect(px - cw / 2, py - ch / 2, cw, ch,
                     fill=sequential_color((z[iy, ix] - lo) / span))
    for k in range(1, n_contours + 1):
        level = lo + span * k / (n_contours + 1)
        for (ax, ay), (bx, by) in marching_squares(xs, ys, z, level):
            doc.line(*to_px(ax, ay), *to_px(bx, by), stroke="#ffffff", width=0.8)
    _axes(doc, x_range, y_range, f"{title} [{lo:.4g}, {hi:.4g}]", xlabel, ylabel)
    doc.save(path)


def line_chart_svg(
    x_values: Sequence,
    series: Dict[str, Tuple[Sequence[float], Optional[Sequence[float]]]],
    path: Union[str, Path],
    title: str,
    xlabel: str,
    ylabel: str,
    y_range: Optional[Tuple[float, float]] = None,
) -> None:
    """Mean lines with optional +/- std bands; categorical x positions."""
    doc = SvgDoc(MARGIN_L + PLOT_W + MARGIN_R + 150, MARGIN_T + PLOT_H + MARGIN_B)
    n = len(x_values)
    if y_range is None:
        vals = []
        for means, stds in series.values():
            vals.extend(means)
            if stds is not None:
                vals.extend(np.asarray(means) + np.asarray(stds))
                vals.extend(np.asarray(means) - np.asarray(stds))
        lo, hi = float(min(vals)), float(max(vals))
        pad = 0.05 * (hi - lo if hi > lo else 1.0)
        y_range = (lo - pad, hi + pad)

    def to_px(i, v):
        fx = i / (n - 1) if n > 1 else 0.5
        fy = (v - y_range[0]) / (y_range[1] - y_range[0])
        return MARGIN_L + fx * PLOT_W, MARGIN_T + PLOT_H - fy * PLOT_H

    for si, (label, (means, stds)) in enumerate(series.items()):
        color = SERIES_COLORS[si % len(SERIES_COLORS)]
        if stds is not None:
            upper = [to_px(i, m + s) for i, (m, s) in enumerate(zip(means, stds))]
            lower = [to_px(i, m - s) for i, (m, s) in enumerate(zip(means, stds))]
            doc.polygon(upper + lower[::-1], fill=color)
        doc.polyline([to_px(i, m) for i, m in enumerate(means)], stroke=color, width=2.0)
        ly = MARGIN_T + 16 + 16 * si
        doc.line(MARGIN_L + PLOT_W + 28, ly - 4, MARGIN_L + PLOT_W + 48, ly - 4, stroke=color, width=2.0)
        doc.text(MARGIN_L + PLOT_W + 54, ly, label, size=11)

    x0, y0 = MARGIN_L, MARGIN_T
    doc.rect(x0, y0, PLOT_W, PLOT_H, fill="none", stroke="#222222")
    doc.text(MARGIN_L + PLOT_W / 2, MARGIN_T - 12, title, size=13, anchor="middle")
    doc.text(MARGIN_L + PLOT_W / 2, MARGIN_T + PLOT_H + 36, xlabel, anchor="middle")
    doc.text(14, MARGIN_T + PLOT_H / 2, ylabel, anchor="middle")
    for i, xv in enumerate(x_values):
        px, _ = to_px(i, y_range[0])
        doc.line(px, MARGIN_T + PLOT_H, px, MARGIN_T + PLOT_H + 4)
        doc.text(px, MARGIN_T + PLOT_H + 18, str(xv), size=10, anchor="middle")
    for k in range(5):
        v = y_range[0] + (y_range[1] - y_range[0]) * k / 4
        _, py = to_px(0, v)
        doc.line(MARGIN_L - 4, py, MARGIN_L, py)
        doc.text(MARGIN_L - 7, py + 3, f"{v:.3f}", size=10, anchor="end")
    doc.save(path)


def histogram_pair_svg(
    bin_edges: np.ndarray,
    hist_a: np.ndarray,
    hist_b: np.ndarray,
    path: Union[str, Path],
    label_a: str,
    label_b: str,
    title: str,
) -> None:
    """Two overlaid bar sets on shared bins (decision-score distributions)."""
    doc = SvgDoc(MARGIN_L + PLOT_W + MARGIN_R + 150, MARGIN_T + PLOT_H + MARGIN_B)
    top = max(1, int(max(np.max(hist_a), np.max(hist_b))))
    nb = len(hist_a)
    bw = PLOT_W / nb
    for i in range(nb):
        ha = PLOT_H * hist_a[i] / top
        hb = PLOT_H * hist_b[i] / top
        x = MARGIN_L + i * bw
        doc.rect(x + 1, MARGIN_T + PLOT_H - ha, bw / 2 - 1, ha, fill=SERIES_COLORS[0])
        doc.rect(x + bw / 2, MARGIN_T + PLOT_H - hb, bw / 2 - 1, hb, fill=SERIES_COLORS[1])
    doc.rect(MARGIN_L, MARGIN_T, PLOT_W, PLOT_H, fill="none", stroke="#222222")
    doc.text(MARGIN_L + PLOT_W / 2, MARGIN_T - 12, title, size=13, anchor="middle")
    doc.text(MARGIN_L + PLOT_W / 2, MARGIN_T + PLOT_H + 36, "decision score f", anchor="middle")
    doc.text(14, MARGIN_T + PLOT_H / 2, "count", anchor="middle")
    for i in range(5):
        v = bin_edges[0] + (bin_edges[-1] - bin_edges[0]) * i / 4
        px = MARGIN_L + PLOT_W * i / 4
        doc.line(px, MARGIN_T + PLOT_H, px, MARGIN_T + PLOT_H + 4)
        doc.text(px, MARGIN_T + PLOT_H + 18, f"{v:.1f}", size=10, anchor="middle")
    for si, label in enumerate([label_a, label_b]):
        ly = MARGIN_T + 16 + 16 * si
        doc.rect(MARGIN_L + PLOT_W + 28, ly - 10, 18, 10, fill=SERIES_COLORS[si])
        doc.text(MARGIN_L + PLOT_W + 54, ly, label, size=11)
    doc.save(path)
