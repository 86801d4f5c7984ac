"""Join two indicator exports and read the rank relationship off the plot.

The bundled files mimic the World Bank export layout (metadata preamble,
then one column per year): military spending and R&D spending as % of GDP
for a dozen made-up countries.  Countries missing either 2020 value are
dropped during the join.

A near-zero tau here does not mean "nothing to see": discordant pairs in
the lower quadrants show country pairs that prioritized one budget over
the other, and the drill-down bar chart makes each single comparison
concrete.
"""
from pathlib import Path

import rankplot as rp

HERE = Path(__file__).parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

ds = rp.parse_worldbank_pair(
    (HERE / "data" / "military_pct_gdp.csv").read_bytes(),
    (HERE / "data" / "rnd_pct_gdp.csv").read_bytes(),
    year=2020,
)
print(f"joined {len(ds)} countries ({ds.dropped_rows} dropped for missing values)")
print(f"x = {ds.x_name}")
print(f"y = {ds.y_name}")

result = rp.tau_b_fast(ds)
c = result.counts
print(f"tau={result.tau:.4f}  c={c.c} d={c.d} ties={c.t_x + c.t_y + c.t_xy}")

svg = rp.render_styled(ds, rp.PlotStyle.from_tokens("segments,points"))
(OUT / "02_indicator_segments.svg").write_text(svg)

# drill into the most discordant comparison: one country led on military
# spending, the other led on R&D
segments = rp.transform_all(ds)
discordant = [s for s in segments if s.pair.pair_class is rp.PairClass.DISCORDANT]
pick = max(discordant, key=lambda s: s.pair.dissimilarity)
a = ds.observation(pick.pair.i)
b = ds.observation(pick.pair.j)
print(f"drill-down: {a.label} vs {b.label} "
      f"(dissimilarity {pick.pair.dissimilarity:.2f}, {rp.quadrant_of(pick).value})")
bars = rp.render_pair_bars(a, b, x_name="military % GDP", y_name="R&D % GDP")
(OUT / "02_pair_drilldown.svg").write_text(bars)

print(f"wrote 2 SVG files to {OUT}")
