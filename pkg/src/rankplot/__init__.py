"""rankplot: Kendall tau-b rank correlation with rigid-transform visualizations.

Every pairwise comparison behind tau-b is mapped onto the plane: translate
the pair's anchor to the origin, optionally double the segment's polar
angle, and the sign structure of the statistic becomes spatial structure
(concordant above the x-axis, discordant below, ties on it).  Renderers
produce deterministic SVG line, density, heatmap, and clock-plot layers; a
CLI and an HTTP service expose the same pipeline.
"""

from ._anchoring import AnchorPolicy, TransformConfig, TransformMode
from .dataset import (
    ColumnSpec,
    DatasetError,
    Observation,
    RankedDataset,
    ValidationReport,
    parse_csv,
    parse_worldbank_pair,
    to_csv,
    to_midranks,
    validate_dataset,
)
from .geometry import (
    ClockMode,
    ClockVectors,
    GeometryError,
    Quadrant,
    TransformedSegment,
    anchor_pair,
    clock_vectors,
    dissimilarity_field_at,
    dissimilarity_of_pair,
    geometry_document,
    quadrant_of,
    tau_for_config,
    transform_all,
    transform_pair,
)
from .kendall import (
    PairClass,
    PairComparison,
    PairCounts,
    TauResult,
    UndefinedTauError,
    classify_pair,
    enumerate_comparisons,
    generate_permutation_with_target_tau,
    tau_b_brute,
    tau_b_fast,
)
from .render import (
    DensityGrid,
    PlotStyle,
    RenderConfig,
    RenderError,
    UnknownStyleToken,
    contour_polylines,
    kde_grid,
    render_pair_bars,
    render_styled,
    render_svg,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorPolicy",
    "TransformConfig",
    "TransformMode",
    "ColumnSpec",
    "DatasetError",
    "Observation",
    "RankedDataset",
    "ValidationReport",
    "parse_csv",
    "parse_worldbank_pair",
    "to_csv",
    "to_midranks",
    "validate_dataset",
    "ClockMode",
    "ClockVectors",
    "GeometryError",
    "Quadrant",
    "TransformedSegment",
    "anchor_pair",
    "clock_vectors",
    "dissimilarity_field_at",
    "dissimilarity_of_pair",
    "geometry_document",
    "quadrant_of",
    "tau_for_config",
    "transform_all",
    "transform_pair",
    "PairClass",
    "PairComparison",
    "PairCounts",
    "TauResult",
    "UndefinedTauError",
    "classify_pair",
    "enumerate_comparisons",
    "generate_permutation_with_target_tau",
    "tau_b_brute",
    "tau_b_fast",
    "DensityGrid",
    "PlotStyle",
    "RenderConfig",
    "RenderError",
    "UnknownStyleToken",
    "contour_polylines",
    "kde_grid",
    "render_pair_bars",
    "render_styled",
    "render_svg",
    "__version__",
]
