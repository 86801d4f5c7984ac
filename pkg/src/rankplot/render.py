"""Deterministic SVG rendering of every supported plot style.

Styles can be layered: dissimilarity heatmap background, density contours,
pair segments or untransformed pairwise lines, endpoint markers, and clock
vectors.  Identical inputs and config always produce byte-identical SVG;
floats are serialized with 6 significant digits and nothing time- or
id-dependent is emitted unless explicitly requested.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ._anchoring import TransformConfig, TransformMode
from .dataset import Observation, RankedDataset
from .geometry import (
    ClockMode,
    ClockVectors,
    TransformedSegment,
    clock_vectors,
    dissimilarity_field_at,
    tau_for_config,
    transform_all,
)
from .kendall import PairClass, enumerate_comparisons

__all__ = [
    "RenderError",
    "UnknownStyleToken",
    "DensityGrid",
    "PlotStyle",
    "RenderConfig",
    "STYLE_TOKENS",
    "kde_grid",
    "contour_polylines",
    "render_svg",
    "render_pair_bars",
    "render_styled",
]


class RenderError(ValueError):
    """Inconsistent rendering request (missing layer inputs, empty style, ...)."""


class UnknownStyleToken(RenderError):
    """A style string contained a token outside STYLE_TOKENS."""


# ---------------------------------------------------------------------------
# density estimation


@dataclass(frozen=True)
class DensityGrid:
    """Gaussian product-kernel density evaluated at cell centers.

    values[i][j] is the density at x-center i, y-center j.  When the extents
    reach at least 4 bandwidths past every point, cell_sum * cell_area is
    within 2% of 1.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    values: np.ndarray
    bandwidth: tuple[float, float]

    def x_centers(self) -> np.ndarray:
        step = (self.x_max - self.x_min) / self.nx
        return self.x_min + step * (np.arange(self.nx) + 0.5)

    def y_centers(self) -> np.ndarray:
        step = (self.y_max - self.y_min) / self.ny
        return self.y_min + step * (np.arange(self.ny) + 0.5)

    @property
    def cell_area(self) -> float:
        return ((self.x_max - self.x_min) / self.nx) * (
            (self.y_max - self.y_min) / self.ny
        )

    def mass(self) -> float:
        return float(self.values.sum() * self.cell_area)


def _scott_bandwidth(values: np.ndarray) -> float:
    n = values.size
    extent = float(values.max() - values.min()) if n else 0.0
    sigma = float(values.std(ddof=1)) if n > 1 else 0.0
    h = sigma * n ** (-1.0 / 6.0) if sigma > 0 else 0.0
    h = max(h, 1e-6 * extent)
    return h if h > 0 else 1.0


def kde_grid(
    points,
    nx: int = 128,
    ny: int = 128,
    bandwidth: float | tuple[float, float] | None = None,
) -> DensityGrid:
    """Evaluate a Gaussian KDE of 2-D points on a regular grid.

    Bandwidth defaults to Scott's rule per axis (sigma * N^(-1/6), floored
    at 1e-6 of the extent, falling back to 1 for degenerate inputs).  The
    grid spans 4 bandwidths beyond the data on each side.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise RenderError("density estimation needs at least one point")
    px, py = pts[:, 0], pts[:, 1]
    if bandwidth is None:
        hx, hy = _scott_bandwidth(px), _scott_bandwidth(py)
    elif np.isscalar(bandwidth):
        hx = hy = float(bandwidth)
    else:
        hx, hy = float(bandwidth[0]), float(bandwidth[1])
    if hx <= 0 or hy <= 0:
        raise RenderError("bandwidth must be positive")

    x_min, x_max = float(px.min() - 4 * hx), float(px.max() + 4 * hx)
    y_min, y_max = float(py.min() - 4 * hy), float(py.max() + 4 * hy)
    xc = x_min + (x_max - x_min) / nx * (np.arange(nx) + 0.5)
    yc = y_min + (y_max - y_min) / ny * (np.arange(ny) + 0.5)

    gx = np.exp(-((xc[:, None] - px[None, :]) ** 2) / (2 * hx * hx))
    gy = np.exp(-((yc[:, None] - py[None, :]) ** 2) / (2 * hy * hy))
    values = gx @ gy.T / (pts.shape[0] * 2 * math.pi * hx * hy)
    return DensityGrid(x_min, x_max, y_min, y_max, nx, ny, values, (hx, hy))


# ---------------------------------------------------------------------------
# marching-squares contours


def _edge_crossings(grid: DensityGrid, level: float):
    """Interpolated crossing point for every grid edge the level crosses.

    Keyed by ('h'|'v', i, j) so both cells sharing an edge reference the
    exact same point; 'h' edges run from vertex (i, j) to (i+1, j), 'v'
    edges to (i, j+1).
    """
    v = grid.values
    xc = grid.x_centers()
    yc = grid.y_centers()
    inside = v > level
    crossings: dict[tuple, tuple[float, float]] = {}
    hx = inside[:-1, :] != inside[1:, :]
    for i, j in zip(*np.nonzero(hx)):
        va, vb = v[i, j], v[i + 1, j]
        t = (level - va) / (vb - va)
        crossings[("h", int(i), int(j))] = (
            float(xc[i] + t * (xc[i + 1] - xc[i])),
            float(yc[j]),
        )
    vx = inside[:, :-1] != inside[:, 1:]
    for i, j in zip(*np.nonzero(vx)):
        va, vb = v[i, j], v[i, j + 1]
        t = (level - va) / (vb - va)
        crossings[("v", int(i), int(j))] = (
            float(xc[i]),
            float(yc[j] + t * (yc[j + 1] - yc[j])),
        )
    return inside, crossings


# cell-local segment table: case index -> list of (edge, edge) connections,
# with edges named b(ottom), r(ight), t(op), l(eft); saddles resolved at
# runtime from the cell-center mean
_MS_TABLE = {
    0: [],
    1: [("l", "b")],
    2: [("b", "r")],
    3: [("l", "r")],
    4: [("r", "t")],
    6: [("b", "t")],
    7: [("l", "t")],
    8: [("t", "l")],
    9: [("b", "t")],
    11: [("r", "t")],
    12: [("l", "r")],
    13: [("b", "r")],
    14: [("l", "b")],
    15: [],
}


def _cell_edges(i: int, j: int) -> dict[str, tuple]:
    return {
        "b": ("h", i, j),
        "t": ("h", i, j + 1),
        "l": ("v", i, j),
        "r": ("v", i + 1, j),
    }


def _marching_segments(grid: DensityGrid, level: float):
    inside, crossings = _edge_crossings(grid, level)
    v = grid.values
    segments: list[tuple[tuple, tuple]] = []
    for j in range(grid.ny - 1):
        for i in range(grid.nx - 1):
            case = (
                (1 if inside[i, j] else 0)
                | (2 if inside[i + 1, j] else 0)
                | (4 if inside[i + 1, j + 1] else 0)
                | (8 if inside[i, j + 1] else 0)
            )
            if case in (0, 15):
                continue
            edges = _cell_edges(i, j)
            if case in (5, 10):
                center = (
                    v[i, j] + v[i + 1, j] + v[i, j + 1] + v[i + 1, j + 1]
                ) / 4.0
                center_in = center > level
                if case == 5:  # inside at BL and TR
                    pairs = [("b", "r"), ("t", "l")] if center_in else [("l", "b"), ("r", "t")]
                else:  # inside at BR and TL
                    pairs = [("l", "b"), ("r", "t")] if center_in else [("b", "r"), ("t", "l")]
            else:
                pairs = _MS_TABLE[case]
            for a, b in pairs:
                segments.append((edges[a], edges[b]))
    return crossings, segments


def _stitch(crossings, segments) -> list[np.ndarray]:
    """Chain edge-to-edge segments into open paths and closed loops."""
    adjacency: dict[tuple, list[tuple]] = {}
    for a, b in segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    unused = {edge: list(nbrs) for edge, nbrs in adjacency.items()}
    polylines = []

    def walk(start: tuple) -> list[tuple]:
        chain = [start]
        current = start
        while unused[current]:
            nxt = unused[current].pop(0)
            unused[nxt].remove(current)
            chain.append(nxt)
            current = nxt
        return chain

    for edge in adjacency:  # open paths first: endpoints have degree 1
        if len(adjacency[edge]) == 1 and unused[edge]:
            chain = walk(edge)
            polylines.append(np.array([crossings[e] for e in chain]))
    for edge in adjacency:  # what remains are closed loops
        if unused[edge]:
            chain = walk(edge)
            if chain[0] != chain[-1]:
                chain.append(chain[0])
            polylines.append(np.array([crossings[e] for e in chain]))
    return polylines


def contour_polylines(
    grid: DensityGrid, levels: Sequence[float] | None = None
) -> list[list[np.ndarray]]:
    """Marching-squares isolines, one list of polylines per level.

    Closed loops repeat their first vertex at the end.  Default levels are
    equally spaced between 10% and 90% of the grid maximum.  Cells at
    exactly the level count as outside, so a level at or above the maximum
    (or at 0 for an everywhere-positive grid) yields nothing.
    """
    if grid.nx < 2 or grid.ny < 2 or grid.values.size == 0:
        raise RenderError("contour extraction needs at least a 2x2 grid")
    if levels is None:
        peak = float(grid.values.max())
        levels = list(np.linspace(0.1 * peak, 0.9 * peak, 8))
    out = []
    for level in levels:
        crossings, segments = _marching_segments(grid, float(level))
        out.append(_stitch(crossings, segments))
    return out


# ---------------------------------------------------------------------------
# style and config


STYLE_TOKENS = {
    "lines": "untransformed_lines",
    "segments": "segments",
    "points": "points",
    "density": "density",
    "clock": "clock",
    "heatmap": "heatmap_background",
}


@dataclass(frozen=True)
class PlotStyle:
    """Which layers to draw, plus the transform they are drawn in."""

    untransformed_lines: bool = False
    segments: bool = False
    points: bool = False
    density: bool = False
    clock: bool = False
    heatmap_background: bool = False
    mode: TransformConfig = field(default_factory=TransformConfig)

    @property
    def any_layer(self) -> bool:
        return (
            self.untransformed_lines
            or self.segments
            or self.points
            or self.density
            or self.clock
            or self.heatmap_background
        )

    @property
    def any_transformed(self) -> bool:
        return self.segments or self.points or self.density or self.clock

    @classmethod
    def from_tokens(
        cls, tokens: str | Sequence[str], mode: TransformConfig | None = None
    ) -> "PlotStyle":
        if isinstance(tokens, str):
            tokens = [t.strip() for t in tokens.split(",") if t.strip()]
        flags = {}
        for token in tokens:
            if token not in STYLE_TOKENS:
                raise UnknownStyleToken(
                    f"unknown style token {token!r}; valid: {', '.join(sorted(STYLE_TOKENS))}"
                )
            flags[STYLE_TOKENS[token]] = True
        if not flags:
            raise UnknownStyleToken("style must enable at least one layer")
        return cls(mode=mode or TransformConfig(), **flags)


_DEFAULT_CLASS_COLORS = {
    PairClass.CONCORDANT: "#1f77b4",
    PairClass.DISCORDANT: "#ff7f0e",
    PairClass.TIE_X: "#8c8c8c",
    PairClass.TIE_Y: "#8c8c8c",
    PairClass.TIE_XY: "#555555",
}

_PALETTES = {
    "viridis": [
        "#440154", "#481a6c", "#472f7d", "#414487", "#39568c", "#31688e",
        "#2a788e", "#23888e", "#1f988b", "#22a884", "#35b779", "#54c568",
        "#7ad151", "#a5db36", "#d2e21b", "#fde725",
    ],
    "grays": ["#f7f7f7", "#252525"],
}


@dataclass(frozen=True)
class RenderConfig:
    width: int = 720
    height: int = 560
    margin: int = 48
    palette: str = "viridis"
    contour_levels: int = 8
    class_colors: Mapping[PairClass, str] = field(
        default_factory=lambda: dict(_DEFAULT_CLASS_COLORS)
    )
    deterministic: bool = True
    heatmap_cells: int = 64
    density_grid: int = 128

    def __post_init__(self):
        if self.width <= 2 * self.margin or self.height <= 2 * self.margin:
            raise RenderError("width and height must each exceed 2 * margin")
        if self.contour_levels < 1:
            raise RenderError("contour_levels must be >= 1")
        if self.palette not in _PALETTES:
            raise RenderError(
                f"unknown palette {self.palette!r}; valid: {', '.join(sorted(_PALETTES))}"
            )


def _fmt(value: float) -> str:
    value = float(value)
    if value == 0.0:  # normalize -0.0
        value = 0.0
    return f"{value:.6g}"


def _palette_color(palette: str, t: float) -> str:
    stops = _PALETTES[palette]
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(stops) - 1)
    low = int(pos)
    high = min(low + 1, len(stops) - 1)
    frac = pos - low
    c0 = stops[low].lstrip("#")
    c1 = stops[high].lstrip("#")
    rgb = tuple(
        round(int(c0[k : k + 2], 16) * (1 - frac) + int(c1[k : k + 2], 16) * frac)
        for k in (0, 2, 4)
    )
    return "#{:02x}{:02x}{:02x}".format(*rgb)


class _Mapper:
    """Equal-scale affine map from data space to pixel space (y flipped)."""

    def __init__(self, bbox, width: int, height: int, margin: int):
        x0, x1, y0, y1 = bbox
        span_x = max(x1 - x0, 1e-12)
        span_y = max(y1 - y0, 1e-12)
        inner_w = width - 2 * margin
        inner_h = height - 2 * margin
        self.scale = min(inner_w / span_x, inner_h / span_y)
        self.ox = margin + (inner_w - self.scale * span_x) / 2 - self.scale * x0
        self.oy = height - margin - (inner_h - self.scale * span_y) / 2 + self.scale * y0

    def to_px(self, x: float, y: float) -> tuple[float, float]:
        return (self.ox + self.scale * x, self.oy - self.scale * y)

    def to_data(self, px: float, py: float) -> tuple[float, float]:
        return ((px - self.ox) / self.scale, (self.oy - py) / self.scale)


class _Bounds:
    def __init__(self):
        self.x0 = math.inf
        self.x1 = -math.inf
        self.y0 = math.inf
        self.y1 = -math.inf

    def add(self, x: float, y: float):
        self.x0 = min(self.x0, x)
        self.x1 = max(self.x1, x)
        self.y0 = min(self.y0, y)
        self.y1 = max(self.y1, y)

    def padded(self, frac: float = 0.04):
        if not math.isfinite(self.x0):
            return (-1.0, 1.0, -1.0, 1.0)
        pad_x = max((self.x1 - self.x0) * frac, 1e-9)
        pad_y = max((self.y1 - self.y0) * frac, 1e-9)
        pad = max(pad_x, pad_y)
        return (self.x0 - pad, self.x1 + pad, self.y0 - pad, self.y1 + pad)


def render_svg(
    dataset: RankedDataset | None = None,
    segments: list[TransformedSegment] | None = None,
    clock: ClockVectors | None = None,
    grid: DensityGrid | None = None,
    style: PlotStyle | None = None,
    config: RenderConfig | None = None,
) -> str:
    """Compose the requested layers into a standalone SVG 1.1 document.

    Layer order bottom-to-top: half-plane shading (translate-rotate only),
    heatmap background, density contours, axes, segments or untransformed
    lines, endpoint markers, clock vectors.  Every layer requested by the
    style must have its input supplied.
    """
    style = style or PlotStyle()
    config = config or RenderConfig()
    if not style.any_layer:
        raise RenderError("style enables no layer")
    if style.untransformed_lines and dataset is None:
        raise RenderError("untransformed_lines layer needs the dataset")
    if (style.segments or style.points) and segments is None:
        raise RenderError("segments/points layers need transformed segments")
    if style.density and grid is None:
        raise RenderError("density layer needs a DensityGrid")
    if style.clock and clock is None:
        raise RenderError("clock layer needs ClockVectors")
    if style.untransformed_lines and style.any_transformed:
        raise RenderError(
            "untransformed_lines uses the original data plane and cannot be "
            "combined with transformed layers"
        )

    bounds = _Bounds()
    if style.untransformed_lines and dataset is not None:
        for x, y in zip(dataset.x, dataset.y):
            bounds.add(float(x), float(y))
    if (style.segments or style.points) and segments is not None:
        bounds.add(0.0, 0.0)
        for seg in segments:
            bounds.add(seg.endpoint[0], seg.endpoint[1])
    if style.density and grid is not None:
        bounds.add(grid.x_min, grid.y_min)
        bounds.add(grid.x_max, grid.y_max)

    # display radius for clock vectors: sized from the other layers' content
    clock_radius = 1.0
    if (style.segments or style.points) and segments:
        clock_radius = max((s.length for s in segments), default=1.0) or 1.0
    elif style.density and grid is not None:
        clock_radius = 0.5 * min(grid.x_max - grid.x_min, grid.y_max - grid.y_min)
    if style.clock:
        bounds.add(-clock_radius, -clock_radius)
        bounds.add(clock_radius, clock_radius)

    bbox = bounds.padded()
    mapper = _Mapper(bbox, config.width, config.height, config.margin)
    x0, x1, y0, y1 = bbox

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{config.width}" height="{config.height}" '
        f'viewBox="0 0 {config.width} {config.height}">'
    )
    if not config.deterministic:
        parts.append(f"<!-- rendered {time.strftime('%Y-%m-%dT%H:%M:%S')} -->")
    parts.append(
        f'<rect x="0" y="0" width="{config.width}" height="{config.height}" fill="#ffffff"/>'
    )

    transformed_canvas = (
        style.any_transformed and style.mode.mode is TransformMode.TRANSLATE_ROTATE
    )
    if transformed_canvas and y0 < 0:
        # concordant half-plane stays white; discordant half-plane is shaded
        top_px = mapper.to_px(x0, min(y1, 0.0))[1]
        bot_px = mapper.to_px(x0, y0)[1]
        left_px = mapper.to_px(x0, 0.0)[0]
        right_px = mapper.to_px(x1, 0.0)[0]
        parts.append(
            f'<rect class="halfplane-lower" x="{_fmt(left_px)}" y="{_fmt(top_px)}" '
            f'width="{_fmt(right_px - left_px)}" height="{_fmt(bot_px - top_px)}" '
            f'fill="#e0e0e0"/>'
        )

    if style.heatmap_background:
        parts.append('<g class="heatmap">')
        cells = config.heatmap_cells
        xs = np.linspace(x0, x1, cells + 1)
        ys = np.linspace(y0, y1, cells + 1)
        cx = (xs[:-1] + xs[1:]) / 2
        cy = (ys[:-1] + ys[1:]) / 2
        gx, gy = np.meshgrid(cx, cy, indexing="ij")
        field = dissimilarity_field_at((gx, gy), style.mode.mode)
        peak = float(field.max()) or 1.0
        for i in range(cells):
            for j in range(cells):
                px0, py0 = mapper.to_px(float(xs[i]), float(ys[j + 1]))
                px1, py1 = mapper.to_px(float(xs[i + 1]), float(ys[j]))
                color = _palette_color(config.palette, float(field[i, j]) / peak)
                parts.append(
                    f'<rect class="heatmap-cell" x="{_fmt(px0)}" y="{_fmt(py0)}" '
                    f'width="{_fmt(px1 - px0)}" height="{_fmt(py1 - py0)}" fill="{color}"/>'
                )
        parts.append("</g>")

    if style.density and grid is not None:
        peak = float(grid.values.max())
        levels = list(np.linspace(0.1 * peak, 0.9 * peak, config.contour_levels))
        parts.append('<g class="density">')
        for level_polys in contour_polylines(grid, levels):
            for poly in level_polys:
                pts = " ".join(
                    f"{_fmt(px)},{_fmt(py)}"
                    for px, py in (mapper.to_px(float(p[0]), float(p[1])) for p in poly)
                )
                parts.append(
                    f'<polyline class="density-contour" points="{pts}" '
                    f'fill="none" stroke="#2a788e" stroke-width="1"/>'
                )
        parts.append("</g>")

    # axes: cross through the origin on transformed canvases, frame otherwise
    if style.any_transformed:
        ax0 = mapper.to_px(x0, 0.0)
        ax1 = mapper.to_px(x1, 0.0)
        ay0 = mapper.to_px(0.0, y0)
        ay1 = mapper.to_px(0.0, y1)
        parts.append(
            f'<line class="axis" x1="{_fmt(ax0[0])}" y1="{_fmt(ax0[1])}" '
            f'x2="{_fmt(ax1[0])}" y2="{_fmt(ax1[1])}" stroke="#777777" stroke-width="1"/>'
        )
        parts.append(
            f'<line class="axis" x1="{_fmt(ay0[0])}" y1="{_fmt(ay0[1])}" '
            f'x2="{_fmt(ay1[0])}" y2="{_fmt(ay1[1])}" stroke="#777777" stroke-width="1"/>'
        )

    if style.untransformed_lines and dataset is not None:
        parts.append('<g class="pairlines">')
        for cmp in enumerate_comparisons(dataset, style.mode):
            xa, ya = mapper.to_px(float(dataset.x[cmp.i]), float(dataset.y[cmp.i]))
            xb, yb = mapper.to_px(float(dataset.x[cmp.j]), float(dataset.y[cmp.j]))
            color = config.class_colors[cmp.pair_class]
            parts.append(
                f'<line class="pairline" x1="{_fmt(xa)}" y1="{_fmt(ya)}" '
                f'x2="{_fmt(xb)}" y2="{_fmt(yb)}" stroke="{color}" stroke-width="1"/>'
            )
        parts.append("</g>")
        parts.append('<g class="observations">')
        for x, y in zip(dataset.x, dataset.y):
            px, py = mapper.to_px(float(x), float(y))
            parts.append(
                f'<circle class="observation" cx="{_fmt(px)}" cy="{_fmt(py)}" '
                f'r="3" fill="#333333"/>'
            )
        parts.append("</g>")

    origin_px = mapper.to_px(0.0, 0.0)
    if style.segments and segments is not None:
        parts.append('<g class="segments">')
        for seg in segments:
            ex, ey = mapper.to_px(seg.endpoint[0], seg.endpoint[1])
            color = config.class_colors[seg.pair.pair_class]
            parts.append(
                f'<line class="segment" x1="{_fmt(origin_px[0])}" y1="{_fmt(origin_px[1])}" '
                f'x2="{_fmt(ex)}" y2="{_fmt(ey)}" stroke="{color}" '
                f'stroke-width="1" stroke-opacity="0.75"/>'
            )
        parts.append("</g>")

    if style.points and segments is not None:
        parts.append('<g class="endpoints">')
        for seg in segments:
            ex, ey = mapper.to_px(seg.endpoint[0], seg.endpoint[1])
            color = config.class_colors[seg.pair.pair_class]
            parts.append(
                f'<circle class="endpoint" cx="{_fmt(ex)}" cy="{_fmt(ey)}" '
                f'r="2.5" fill="{color}" fill-opacity="0.8"/>'
            )
        parts.append("</g>")

    if style.clock and clock is not None:
        parts.append('<g class="clock">')
        vectors = [
            (clock.concordant_mean, "#000000"),
            (clock.discordant_mean, "#000000"),
            (clock.summary, "#cc0000"),
        ]
        for vec, color in vectors:
            if vec is None:
                continue
            ex, ey = mapper.to_px(vec[0] * clock_radius, vec[1] * clock_radius)
            parts.append(
                f'<line class="clock-vector" x1="{_fmt(origin_px[0])}" '
                f'y1="{_fmt(origin_px[1])}" x2="{_fmt(ex)}" y2="{_fmt(ey)}" '
                f'stroke="{color}" stroke-width="2.5"/>'
            )
        parts.append("</g>")

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_pair_bars(
    a: Observation,
    b: Observation,
    config: RenderConfig | None = None,
    x_name: str = "x",
    y_name: str = "y",
) -> str:
    """Grouped bar chart for one pair: two variables x two entities."""
    config = config or RenderConfig()
    width, height, margin = config.width, config.height, config.margin
    inner_w = width - 2 * margin
    inner_h = height - 2 * margin
    values = [a.x, b.x, a.y, b.y]
    top = max(max(values), 0.0)
    bottom = min(min(values), 0.0)
    span = max(top - bottom, 1e-12)
    scale = (inner_h - 30) / span  # headroom for value labels
    baseline = margin + 15 + top * scale

    colors = ("#4c78a8", "#e45756")
    group_w = inner_w / 2
    bar_w = group_w / 3

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    )
    parts.append(
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>'
    )
    parts.append(
        f'<text class="title" x="{_fmt(width / 2)}" y="{_fmt(margin / 2 + 5)}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="14">'
        f"{_escape(a.label)} vs {_escape(b.label)}</text>"
    )
    for g, (name, va, vb) in enumerate([(x_name, a.x, b.x), (y_name, a.y, b.y)]):
        gx = margin + g * group_w
        for k, value in enumerate((va, vb)):
            bx = gx + bar_w * (0.5 + k)
            h = abs(value) * scale
            by = baseline - h if value >= 0 else baseline
            parts.append(
                f'<rect class="bar" x="{_fmt(bx)}" y="{_fmt(by)}" '
                f'width="{_fmt(bar_w * 0.9)}" height="{_fmt(h)}" fill="{colors[k]}"/>'
            )
            label_y = by - 4 if value >= 0 else by + h + 12
            parts.append(
                f'<text class="bar-value" x="{_fmt(bx + bar_w * 0.45)}" '
                f'y="{_fmt(label_y)}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{_fmt(value)}</text>'
            )
        parts.append(
            f'<text class="group-label" x="{_fmt(gx + group_w / 2)}" '
            f'y="{_fmt(height - margin / 2)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_escape(name)}</text>'
        )
    parts.append(
        f'<line class="baseline" x1="{_fmt(margin)}" y1="{_fmt(baseline)}" '
        f'x2="{_fmt(width - margin)}" y2="{_fmt(baseline)}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    for k, (entity, color) in enumerate(zip((a.label, b.label), colors)):
        lx = margin + 10 + k * (inner_w / 2)
        parts.append(
            f'<rect class="legend-swatch" x="{_fmt(lx)}" y="{_fmt(margin - 8)}" '
            f'width="10" height="10" fill="{color}"/>'
        )
        parts.append(
            f'<text class="legend-label" x="{_fmt(lx + 14)}" y="{_fmt(margin + 1)}" '
            f'font-family="sans-serif" font-size="11">{_escape(entity)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def render_styled(
    dataset: RankedDataset,
    style: PlotStyle,
    config: RenderConfig | None = None,
    clock_mode: ClockMode = ClockMode.CALIBRATED,
) -> str:
    """Full pipeline: transform, estimate density, compute clock, render.

    Clock vectors are always computed from translate-rotate geometry (their
    half-plane semantics only exist there) even when the displayed layers
    use translation alone, matching how summary vectors are overlaid on
    translate-only plots.
    """
    config = config or RenderConfig()
    segments = None
    if style.any_transformed:
        segments = transform_all(dataset, style.mode)
    grid = None
    if style.density:
        pts = np.array([s.endpoint for s in segments], dtype=float)
        grid = kde_grid(pts, config.density_grid, config.density_grid)
    clock = None
    if style.clock:
        tau = tau_for_config(dataset, style.mode)
        if style.mode.mode is TransformMode.TRANSLATE_ROTATE:
            rotated = segments
        else:
            rotated = transform_all(
                dataset,
                TransformConfig(
                    TransformMode.TRANSLATE_ROTATE,
                    style.mode.anchor_policy,
                    style.mode.tie_epsilon,
                ),
            )
        clock = clock_vectors(rotated, tau, clock_mode)
    return render_svg(
        dataset=dataset,
        segments=segments,
        clock=clock,
        grid=grid,
        style=style,
        config=config,
    )
