"""Layer styles freely: a gallery of six useful combinations.

Styles compose; the only restriction is that raw-plane pairwise lines
("lines") cannot be mixed with transformed layers, because they live in a
different coordinate plane.  Clock vectors are always computed in rotated
space, where their half-plane semantics hold, even when the displayed
segments use translation alone.
"""
from pathlib import Path

import numpy as np

import rankplot as rp

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

rng = np.random.default_rng(4)
m = 60
x = rng.uniform(0, 50, size=m)
y = 0.8 * x + rng.uniform(0, 45, size=m)
ds = rp.RankedDataset(x=x, y=y)
print(f"tau={rp.tau_b_fast(ds).tau:.4f}")

translate = rp.TransformConfig(mode=rp.TransformMode.TRANSLATE_ONLY)
rotate = rp.TransformConfig(mode=rp.TransformMode.TRANSLATE_ROTATE)

GALLERY = [
    ("04a_translate_segments_clock.svg", "segments,clock", translate),
    ("04b_translate_density_clock.svg", "density,clock", translate),
    ("04c_translate_segments_points.svg", "segments,points", translate),
    ("04d_rotate_density_clock.svg", "density,clock", rotate),
    ("04e_rotate_points_only.svg", "points", rotate),
    ("04f_rotate_everything.svg", "segments,density,clock,heatmap", rotate),
]

for filename, tokens, config in GALLERY:
    svg = rp.render_styled(ds, rp.PlotStyle.from_tokens(tokens, config))
    (OUT / filename).write_text(svg)
    print(f"{filename:40s} style={tokens:30s} mode={config.mode.value}")

print(f"wrote {len(GALLERY)} SVG files to {OUT}")
