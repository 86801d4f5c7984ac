"""Rigid pair transforms, quadrant semantics, and clock vectors.

Each pair is translated so its anchor (lowest x, then lowest y) sits at the
origin; the translate-rotate mode then doubles the segment's polar angle at
constant length.  That sends concordant pairs strictly above the x-axis,
discordant pairs strictly below, and ties onto the x-axis, with quadrant
membership encoding whether the x-delta or the y-delta dominates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._anchoring import (
    AnchorPolicy,
    TransformConfig,
    TransformMode,
    anchor_delta,
    transform_point,
    transform_points,
)
from .dataset import Observation, RankedDataset
from .kendall import (
    _CLASS_BY_CODE,
    PairClass,
    PairComparison,
    TauResult,
    UndefinedTauError,
    _pair_arrays,
    enumerate_comparisons,
    tau_b_brute,
    tau_b_fast,
)

__all__ = [
    "AnchorPolicy",
    "TransformMode",
    "TransformConfig",
    "GeometryError",
    "TransformedSegment",
    "Quadrant",
    "ClockMode",
    "ClockVectors",
    "anchor_pair",
    "transform_pair",
    "transform_all",
    "quadrant_of",
    "dissimilarity_of_pair",
    "dissimilarity_field_at",
    "clock_vectors",
    "geometry_document",
    "tau_for_config",
]

AXIS_REL_TOL = 1e-9


class GeometryError(ValueError):
    """Operation applied to geometry of the wrong transform mode."""


class Quadrant(Enum):
    QI = "QI"
    QII = "QII"
    QIII = "QIII"
    QIV = "QIV"
    POS_X_AXIS = "PosXAxis"
    NEG_X_AXIS = "NegXAxis"
    POS_Y_AXIS = "PosYAxis"
    NEG_Y_AXIS = "NegYAxis"
    ORIGIN = "Origin"


class ClockMode(Enum):
    EMPIRICAL = "empirical"
    CALIBRATED = "calibrated"


@dataclass(frozen=True)
class TransformedSegment:
    """One pair's post-transform segment from the origin to ``endpoint``."""

    pair: PairComparison
    endpoint: tuple[float, float]
    angle_theta: float  # polar angle of the anchored delta, before doubling
    length: float
    mode: TransformMode


@dataclass(frozen=True)
class ClockVectors:
    """Mean direction vectors of the clock plot.

    The two class means are empirical means of unit endpoint vectors.  The
    summary is either the empirical mean over concordant plus discordant
    pairs, or the calibrated vector of length |tau| at angle tau * pi/2,
    whose half-plane matches the sign of tau by construction.
    """

    concordant_mean: tuple[float, float] | None
    discordant_mean: tuple[float, float] | None
    summary: tuple[float, float] | None
    mode: ClockMode


def anchor_pair(
    a: Observation,
    b: Observation,
    policy: AnchorPolicy = AnchorPolicy.MIN_X_THEN_MIN_Y,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Anchor of the pair and the delta from it: ``(anchor, other - anchor)``.

    ``a`` must be the lower-index observation; it wins exact-duplicate ties
    and is the anchor under FIRST_INDEX.
    """
    return anchor_delta((a.x, a.y), (b.x, b.y), policy)


def transform_pair(
    delta: tuple[float, float], mode: TransformMode = TransformMode.TRANSLATE_ROTATE
) -> tuple[float, float]:
    """Endpoint of an anchored delta: unchanged, or at the doubled angle."""
    return transform_point(delta[0], delta[1], mode)


def transform_all(
    dataset: RankedDataset, config: TransformConfig | None = None
) -> list[TransformedSegment]:
    """One TransformedSegment per pair, ordered as enumerate_comparisons."""
    config = config or TransformConfig()
    comparisons = enumerate_comparisons(dataset, config)
    segments = []
    for cmp in comparisons:
        ex, ey = transform_point(cmp.dx, cmp.dy, config.mode)
        segments.append(
            TransformedSegment(
                pair=cmp,
                endpoint=(ex, ey),
                angle_theta=math.atan2(cmp.dy, cmp.dx),
                length=math.hypot(cmp.dx, cmp.dy),
                mode=config.mode,
            )
        )
    return segments


def _plane_region(x: float, y: float) -> Quadrant:
    length = math.hypot(x, y)
    if length == 0.0:
        return Quadrant.ORIGIN
    tol = AXIS_REL_TOL * length
    if abs(y) <= tol:
        return Quadrant.POS_X_AXIS if x > 0 else Quadrant.NEG_X_AXIS
    if abs(x) <= tol:
        return Quadrant.POS_Y_AXIS if y > 0 else Quadrant.NEG_Y_AXIS
    if x > 0:
        return Quadrant.QI if y > 0 else Quadrant.QIV
    return Quadrant.QII if y > 0 else Quadrant.QIII


def quadrant_of(segment: TransformedSegment) -> Quadrant:
    """Quadrant (or axis) holding the rotated endpoint.

    Concordant endpoints land in QI/QII split by whether dx or dy dominates,
    discordant ones in QIV/QIII, ties on the x-axis.  Only meaningful after
    rotation, so translate-only segments are rejected.
    """
    if segment.mode is not TransformMode.TRANSLATE_ROTATE:
        raise GeometryError("quadrant semantics require translate-rotate mode")
    return _plane_region(segment.endpoint[0], segment.endpoint[1])


def dissimilarity_of_pair(delta: tuple[float, float]) -> float:
    """``|dx - dy|`` of the anchored delta: 0 when both variables moved alike."""
    return abs(delta[0] - delta[1])


def dissimilarity_field_at(
    point: tuple[float, float], mode: TransformMode = TransformMode.TRANSLATE_ROTATE
):
    """Dissimilarity of the delta whose transformed endpoint is ``point``.

    Translate-only endpoints are the deltas themselves, so the field is
    |X - Y|.  Under rotation the unique min-x-anchored preimage of (X, Y)
    sits at half the polar angle, giving r*sqrt(2)*|cos(phi/2 + pi/4)|.
    Accepts scalars or arrays.
    """
    x = np.asarray(point[0], dtype=float)
    y = np.asarray(point[1], dtype=float)
    if mode is TransformMode.TRANSLATE_ONLY:
        out = np.abs(x - y)
    else:
        r = np.hypot(x, y)
        phi = np.arctan2(y, x)
        out = r * math.sqrt(2.0) * np.abs(np.cos(phi / 2.0 + math.pi / 4.0))
    return float(out) if out.ndim == 0 else out


def _unit_mean(ex: np.ndarray, ey: np.ndarray) -> tuple[float, float] | None:
    lengths = np.hypot(ex, ey)
    keep = lengths > 0
    if not keep.any():
        return None
    ux = ex[keep] / lengths[keep]
    uy = ey[keep] / lengths[keep]
    return (float(ux.mean()), float(uy.mean()))


def clock_vectors(
    segments: list[TransformedSegment],
    tau: TauResult,
    mode: ClockMode = ClockMode.CALIBRATED,
) -> ClockVectors:
    """Mean concordant, mean discordant, and summary vectors.

    Per-pair endpoint vectors are unit-normalized before averaging so that
    direction, not rank-gap magnitude, drives the means.  The calibrated
    summary requires a defined tau.
    """
    if any(s.mode is not TransformMode.TRANSLATE_ROTATE for s in segments):
        raise GeometryError("clock vectors require translate-rotate segments")
    ex = np.array([s.endpoint[0] for s in segments], dtype=float)
    ey = np.array([s.endpoint[1] for s in segments], dtype=float)
    conc = np.array(
        [s.pair.pair_class is PairClass.CONCORDANT for s in segments], dtype=bool
    )
    disc = np.array(
        [s.pair.pair_class is PairClass.DISCORDANT for s in segments], dtype=bool
    )

    concordant_mean = _unit_mean(ex[conc], ey[conc]) if conc.any() else None
    discordant_mean = _unit_mean(ex[disc], ey[disc]) if disc.any() else None

    if mode is ClockMode.CALIBRATED:
        t = tau.require_tau()
        angle = t * math.pi / 2.0
        summary = (abs(t) * math.cos(angle), abs(t) * math.sin(angle))
    else:
        either = conc | disc
        summary = _unit_mean(ex[either], ey[either]) if either.any() else None
    return ClockVectors(concordant_mean, discordant_mean, summary, mode)


def tau_for_config(dataset: RankedDataset, config: TransformConfig) -> TauResult:
    """tau-b honoring the config's tie tolerance (fast path when exact)."""
    if config.tie_epsilon == 0.0:
        return tau_b_fast(dataset)
    return tau_b_brute(dataset, tie_epsilon=config.tie_epsilon)


def geometry_document(
    dataset: RankedDataset, config: TransformConfig | None = None
) -> dict:
    """JSON-ready document with metadata, counts, tau, and all segments.

    Per-segment ``x``/``y`` are the anchored delta components; ``endpoint``
    is the transformed endpoint and ``quadrant`` the plane region it lies
    in.  Round-trips losslessly through JSON (floats serialize via repr).
    """
    config = config or TransformConfig()
    result = tau_for_config(dataset, config)
    i_idx, j_idx, codes, dx, dy = _pair_arrays(dataset, config)
    ex, ey = transform_points(dx, dy, config.mode)
    dis = np.abs(dx - dy)
    segments = [
        {
            "i": int(i),
            "j": int(j),
            "class": _CLASS_BY_CODE[int(code)].value,
            "x": float(a),
            "y": float(b),
            "endpoint": [float(px), float(py)],
            "dissimilarity": float(s),
            "quadrant": _plane_region(float(px), float(py)).value,
        }
        for i, j, code, a, b, px, py, s in zip(i_idx, j_idx, codes, dx, dy, ex, ey, dis)
    ]
    counts = result.counts
    return {
        "x_name": dataset.x_name,
        "y_name": dataset.y_name,
        "m": len(dataset),
        "mode": config.mode.value,
        "anchor": config.anchor_policy.value,
        "epsilon": config.tie_epsilon,
        "tau": result.tau,
        "counts": {
            "c": counts.c,
            "d": counts.d,
            "t_x": counts.t_x,
            "t_y": counts.t_y,
            "t_xy": counts.t_xy,
            "total": counts.total,
        },
        "segments": segments,
    }
