import math
import re

import numpy as np
import pytest

from rankplot import (
    AnchorPolicy,
    ClockMode,
    Observation,
    PairClass,
    RankedDataset,
    RenderConfig,
    RenderError,
    TransformConfig,
    TransformMode,
    UnknownStyleToken,
    clock_vectors,
    contour_polylines,
    kde_grid,
    render_pair_bars,
    render_styled,
    render_svg,
    tau_b_brute,
    transform_all,
)
from rankplot.render import PlotStyle, _Mapper

TR = TransformConfig(mode=TransformMode.TRANSLATE_ROTATE)
TO = TransformConfig(mode=TransformMode.TRANSLATE_ONLY)


# --- KDE ----------------------------------------------------------------------

def test_kde_single_point_peaks_at_point():
    grid = kde_grid([(2.0, -1.0)], nx=41, ny=41)
    peak = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    x_at = grid.x_centers()[peak[0]]
    y_at = grid.y_centers()[peak[1]]
    cell_w = (grid.x_max - grid.x_min) / grid.nx
    assert abs(x_at - 2.0) <= cell_w
    assert abs(y_at + 1.0) <= cell_w


def test_kde_mirror_symmetry():
    grid = kde_grid([(-3.0, 0.0), (3.0, 0.0)], nx=64, ny=32)
    assert np.allclose(grid.values, grid.values[::-1, :], rtol=1e-12, atol=1e-300)


def test_kde_mass_is_normalized():
    rng = np.random.default_rng(42)
    pts = rng.standard_normal((10_000, 2))
    grid = kde_grid(pts, nx=128, ny=128)
    assert grid.mass() == pytest.approx(1.0, abs=0.02)


def test_kde_explicit_bandwidth_and_errors():
    grid = kde_grid([(0.0, 0.0), (1.0, 1.0)], nx=16, ny=16, bandwidth=0.5)
    assert grid.bandwidth == (0.5, 0.5)
    with pytest.raises(RenderError):
        kde_grid([], nx=8, ny=8)
    with pytest.raises(RenderError):
        kde_grid([(0, 0)], nx=8, ny=8, bandwidth=-1)


def test_kde_degenerate_spread_falls_back():
    grid = kde_grid([(5.0, 5.0)] * 3, nx=16, ny=16)
    assert grid.bandwidth == (1.0, 1.0)
    assert np.isfinite(grid.values).all()


# --- contours -------------------------------------------------------------------

def _circle_grid(n=160):
    return kde_grid([(0.0, 0.0)], nx=n, ny=n, bandwidth=1.0)


def test_contours_empty_above_max_and_at_zero():
    grid = _circle_grid(32)
    peak = float(grid.values.max())
    assert contour_polylines(grid, [peak * 2]) == [[]]
    assert contour_polylines(grid, [0.0]) == [[]]


def test_contours_constant_grid_is_empty():
    grid = _circle_grid(16)
    flat = grid.__class__(
        grid.x_min, grid.x_max, grid.y_min, grid.y_max, 16, 16,
        np.full((16, 16), 3.0), grid.bandwidth,
    )
    assert contour_polylines(flat, [5.0]) == [[]]
    assert contour_polylines(flat, [3.0]) == [[]]  # cells at the level are outside


def test_contours_single_kernel_is_nearly_circular():
    grid = _circle_grid()
    peak = float(grid.values.max())
    for level in (0.3 * peak, 0.6 * peak):
        (polys,) = contour_polylines(grid, [level])
        assert len(polys) == 1
        poly = polys[0]
        assert np.array_equal(poly[0], poly[-1])  # closed loop
        radii = np.hypot(poly[:-1, 0], poly[:-1, 1])
        r_min, r_max = radii.min(), radii.max()
        eccentricity = math.sqrt(1.0 - (r_min / r_max) ** 2)
        assert eccentricity < 0.05
        expected_r = math.sqrt(-2.0 * math.log(level * 2 * math.pi))
        assert radii.mean() == pytest.approx(expected_r, rel=0.01)


def test_contour_vertices_lie_on_level():
    grid = _circle_grid(48)
    level = 0.5 * float(grid.values.max())
    (polys,) = contour_polylines(grid, [level])
    # sample the analytic density at extracted vertices
    for poly in polys:
        values = np.exp(-(poly[:, 0] ** 2 + poly[:, 1] ** 2) / 2) / (2 * math.pi)
        assert np.allclose(values, level, rtol=0.01)


def test_default_levels_span_10_to_90_percent():
    grid = _circle_grid(48)
    levels = contour_polylines(grid)
    assert len(levels) == 8


# --- style parsing ---------------------------------------------------------------

def test_style_tokens_round_trip():
    style = PlotStyle.from_tokens("segments,clock")
    assert style.segments and style.clock and not style.density
    style = PlotStyle.from_tokens(["lines"])
    assert style.untransformed_lines


def test_style_rejects_unknown_token():
    with pytest.raises(UnknownStyleToken):
        PlotStyle.from_tokens("segments,bogus")
    with pytest.raises(UnknownStyleToken):
        PlotStyle.from_tokens("")


def test_render_config_validates():
    with pytest.raises(RenderError):
        RenderConfig(width=10, height=10, margin=48)
    with pytest.raises(RenderError):
        RenderConfig(palette="sunburst")


# --- SVG output -------------------------------------------------------------------

def test_svg_is_deterministic(ranks8):
    style = PlotStyle.from_tokens("segments,points,clock,heatmap")
    first = render_styled(ranks8, style)
    second = render_styled(ranks8, style)
    assert first == second
    assert "<svg" in first and first.rstrip().endswith("</svg>")


def test_svg_segment_count_law(ranks8):
    svg = render_styled(ranks8, PlotStyle.from_tokens("segments"))
    assert svg.count('class="segment"') == 28
    svg = render_styled(ranks8, PlotStyle.from_tokens("points"))
    assert svg.count('class="endpoint"') == 28


def test_svg_color_law(ranks8):
    config = RenderConfig()
    svg = render_styled(ranks8, PlotStyle.from_tokens("segments"), config)
    segments = transform_all(ranks8, TR)
    lines = re.findall(r'<line class="segment".*?stroke="(#\w{6})"', svg)
    assert len(lines) == 28
    for seg, color in zip(segments, lines):
        assert color == config.class_colors[seg.pair.pair_class]


def test_svg_clock_only_has_three_vectors(ranks8):
    svg = render_styled(ranks8, PlotStyle.from_tokens("clock"))
    strokes = re.findall(r'<line class="clock-vector".*?stroke="(#\w{6})"', svg)
    assert len(strokes) == 3
    assert strokes.count("#000000") == 2
    assert strokes.count("#cc0000") == 1


def test_svg_shading_only_in_rotate_mode(ranks8):
    rotated = render_styled(ranks8, PlotStyle.from_tokens("segments", TR))
    translated = render_styled(ranks8, PlotStyle.from_tokens("segments", TO))
    assert 'class="halfplane-lower"' in rotated
    assert 'class="halfplane-lower"' not in translated


def test_svg_heatmap_layer(ranks8):
    config = RenderConfig(heatmap_cells=16)
    svg = render_styled(ranks8, PlotStyle.from_tokens("heatmap,segments"), config)
    assert svg.count('class="heatmap-cell"') == 16 * 16


def test_svg_untransformed_lines(ranks8):
    svg = render_styled(ranks8, PlotStyle.from_tokens("lines"))
    assert svg.count('class="pairline"') == 28
    assert svg.count('class="observation"') == 8


def test_untransformed_cannot_mix_with_transformed(ranks8):
    with pytest.raises(RenderError):
        render_styled(ranks8, PlotStyle.from_tokens("lines,segments"))


def test_render_svg_validates_inputs(ranks8):
    with pytest.raises(RenderError, match="no layer"):
        render_svg(style=PlotStyle(), config=RenderConfig())
    with pytest.raises(RenderError, match="segments"):
        render_svg(style=PlotStyle(segments=True), config=RenderConfig())
    with pytest.raises(RenderError, match="clock"):
        render_svg(
            style=PlotStyle(clock=True),
            segments=transform_all(ranks8, TR),
            config=RenderConfig(),
        )


def test_density_layer_renders_contours(ranks8):
    svg = render_styled(ranks8, PlotStyle.from_tokens("density"))
    assert svg.count('class="density-contour"') >= 1


def test_mapper_round_trips():
    mapper = _Mapper((-3.0, 7.0, -2.0, 11.0), 720, 560, 48)
    for x, y in [(-3, -2), (7, 11), (0.123, -1.9), (4.56, 10.99)]:
        px, py = mapper.to_px(x, y)
        back = mapper.to_data(px, py)
        assert back[0] == pytest.approx(x, abs=1e-6 / mapper.scale)
        assert back[1] == pytest.approx(y, abs=1e-6 / mapper.scale)
        assert 0 <= px <= 720 and 0 <= py <= 560


# --- pair bar charts ---------------------------------------------------------------

def _bar_heights(svg):
    return [float(h) for h in re.findall(r'<rect class="bar"[^>]*height="([\d.e+-]+)"', svg)]


def test_pair_bars_concordant_pattern():
    a = Observation("Alpha", 5.2, 4.9)
    b = Observation("Beta", 1.1, 2.3)
    svg = render_pair_bars(a, b, x_name="military", y_name="research")
    heights = _bar_heights(svg)
    assert len(heights) == 4
    assert heights[0] > heights[1]  # alpha taller in group x
    assert heights[2] > heights[3]  # alpha taller in group y
    assert "Alpha" in svg and "Beta" in svg
    assert "military" in svg and "research" in svg


def test_pair_bars_equal_values():
    a = Observation("P", 5, 5)
    b = Observation("Q", 5, 5)
    heights = _bar_heights(render_pair_bars(a, b))
    assert len(set(heights)) == 1


def test_pair_bars_zero_value_keeps_label():
    a = Observation("Zed", 0.0, 3.0)
    b = Observation("Won", 2.0, 1.0)
    svg = render_pair_bars(a, b)
    heights = _bar_heights(svg)
    assert heights[0] == 0.0
    assert svg.count('class="bar-value"') == 4
    assert "Zed" in svg


def test_pair_bars_escapes_markup():
    a = Observation("<&>", 1, 2)
    b = Observation("ok", 2, 1)
    svg = render_pair_bars(a, b)
    assert "<&>" not in svg
    assert "&lt;&amp;&gt;" in svg
