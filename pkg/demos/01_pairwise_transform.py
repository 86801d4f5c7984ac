"""Walkthrough of the pairwise transform on a small two-column ranking.

Eight observations give 28 pairwise comparisons.  This script renders the
same data three ways:

  1. the raw coordinate plane with a line for every pairwise comparison,
  2. each pair translated so its anchor (lowest x, lowest y on ties) sits
     at the origin, then rotated by doubling its polar angle -- concordant
     pairs end above the x-axis, discordant pairs below, ties on it,
  3. the rotated view over a heatmap of the dissimilarity field |dx - dy|.

It also prints the tau summary and a per-quadrant tally so you can read
the plot and the statistic side by side.
"""
from collections import Counter
from pathlib import Path

import rankplot as rp

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

ds = rp.RankedDataset(
    x=[20, 86, 35, 55, 60, 85, 8, 15],
    y=[40, 78, 80, 35, 25, 15, 19, 93],
    x_name="first rater",
    y_name="second rater",
)

result = rp.tau_b_brute(ds)
c = result.counts
print(f"m={len(ds)} pairs={c.total}")
print(f"tau={result.tau:.4f}  c={c.c} d={c.d} t_x={c.t_x} t_y={c.t_y} t_xy={c.t_xy}")

raw = rp.render_styled(ds, rp.PlotStyle.from_tokens("lines"))
(OUT / "01_raw_pairwise_lines.svg").write_text(raw)

translate_only = rp.TransformConfig(mode=rp.TransformMode.TRANSLATE_ONLY)
moved = rp.render_styled(ds, rp.PlotStyle.from_tokens("segments,points", translate_only))
(OUT / "01_translated.svg").write_text(moved)

rotated_cfg = rp.TransformConfig(mode=rp.TransformMode.TRANSLATE_ROTATE)
rotated = rp.render_styled(ds, rp.PlotStyle.from_tokens("segments,points", rotated_cfg))
(OUT / "01_translated_rotated.svg").write_text(rotated)

with_field = rp.render_styled(ds, rp.PlotStyle.from_tokens("heatmap,segments", rotated_cfg))
(OUT / "01_dissimilarity_heatmap.svg").write_text(with_field)

# where did every pair land?
segments = rp.transform_all(ds, rotated_cfg)
tally = Counter(rp.quadrant_of(seg).value for seg in segments)
print("quadrant tally:", dict(sorted(tally.items())))

# the most "expensive" disagreement: largest dissimilarity among discordant pairs
worst = max(
    (s for s in segments if s.pair.pair_class is rp.PairClass.DISCORDANT),
    key=lambda s: s.pair.dissimilarity,
)
a = ds.observation(worst.pair.i)
b = ds.observation(worst.pair.j)
print(
    f"most dissimilar discordant pair: #{worst.pair.i} vs #{worst.pair.j} "
    f"(dissimilarity {worst.pair.dissimilarity:.0f})"
)
bars = rp.render_pair_bars(a, b, x_name=ds.x_name, y_name=ds.y_name)
(OUT / "01_pair_drilldown.svg").write_text(bars)

print(f"wrote 5 SVG files to {OUT}")
