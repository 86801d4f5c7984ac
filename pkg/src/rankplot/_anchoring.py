"""Shared pair-level primitives: anchor selection and the angle-doubling rotation.

Kept separate so that :mod:`rankplot.kendall` (pair classification) and
:mod:`rankplot.geometry` (segment geometry) can both use the exact same
arithmetic without importing each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class TransformMode(Enum):
    TRANSLATE_ONLY = "translate-only"
    TRANSLATE_ROTATE = "translate-rotate"


class AnchorPolicy(Enum):
    MIN_X_THEN_MIN_Y = "min-x"
    MAX_X_THEN_MAX_Y = "max-x"
    FIRST_INDEX = "first-index"


@dataclass(frozen=True)
class TransformConfig:
    """How pairs are anchored, rotated, and how ties are detected.

    ``tie_epsilon`` widens tie detection: differences with absolute value
    <= tie_epsilon classify as tied.  Anchoring itself always uses exact
    comparisons, so the anchored delta is independent of tie_epsilon.
    """

    mode: TransformMode = TransformMode.TRANSLATE_ROTATE
    anchor_policy: AnchorPolicy = AnchorPolicy.MIN_X_THEN_MIN_Y
    tie_epsilon: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.tie_epsilon) or self.tie_epsilon < 0:
            raise ValueError("tie_epsilon must be finite and >= 0")


def anchor_delta(
    a: tuple[float, float],
    b: tuple[float, float],
    policy: AnchorPolicy = AnchorPolicy.MIN_X_THEN_MIN_Y,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Pick the anchor of the pair and return ``(anchor, other - anchor)``.

    ``a`` is the lower-index observation; it wins every exact tie, and is
    the anchor outright under FIRST_INDEX.
    """
    if policy is AnchorPolicy.MIN_X_THEN_MIN_Y:
        anchored_first = a <= b  # lexicographic: lowest x, then lowest y
    elif policy is AnchorPolicy.MAX_X_THEN_MAX_Y:
        anchored_first = a >= b
    elif policy is AnchorPolicy.FIRST_INDEX:
        anchored_first = True
    else:
        raise ValueError(f"unknown anchor policy: {policy!r}")
    anchor, other = (a, b) if anchored_first else (b, a)
    return anchor, (other[0] - anchor[0], other[1] - anchor[1])


def anchored_deltas(xa, ya, xb, yb, policy: AnchorPolicy):
    """Vectorized :func:`anchor_delta` over parallel coordinate arrays.

    Returns ``(dx, dy)`` where the b-side observation is swapped in as the
    anchor wherever the policy selects it.
    """
    if policy is AnchorPolicy.MIN_X_THEN_MIN_Y:
        swap = (xb < xa) | ((xb == xa) & (yb < ya))
    elif policy is AnchorPolicy.MAX_X_THEN_MAX_Y:
        swap = (xb > xa) | ((xb == xa) & (yb > ya))
    elif policy is AnchorPolicy.FIRST_INDEX:
        swap = np.zeros(np.shape(xa), dtype=bool)
    else:
        raise ValueError(f"unknown anchor policy: {policy!r}")
    sign = np.where(swap, -1.0, 1.0)
    return sign * (xb - xa), sign * (yb - ya)


def transform_point(
    dx: float, dy: float, mode: TransformMode = TransformMode.TRANSLATE_ROTATE
) -> tuple[float, float]:
    """Map an anchored delta to its endpoint in the transformed plane.

    TRANSLATE_ONLY leaves the delta unchanged.  TRANSLATE_ROTATE doubles the
    polar angle at constant radius, using the closed form
    ``((dx^2 - dy^2)/r, 2*dx*dy/r)`` rather than trig calls so the result is
    deterministic across platforms.  The degenerate delta (0, 0) maps to the
    origin.
    """
    dx, dy = float(dx), float(dy)
    if mode is TransformMode.TRANSLATE_ONLY:
        return (dx, dy)
    r = math.hypot(dx, dy)
    if r == 0.0:
        return (0.0, 0.0)
    # exact power-of-2 rescale keeps the squares inside the normal float
    # range; for ordinary magnitudes the result is bit-identical to the
    # unscaled formula
    scale = math.ldexp(1.0, min(math.frexp(r)[1], 1023))
    sx, sy, sr = dx / scale, dy / scale, r / scale
    return (scale * ((sx * sx - sy * sy) / sr), scale * (2.0 * sx * sy / sr))


def transform_points(dx, dy, mode: TransformMode):
    """Vectorized :func:`transform_point`."""
    dx = np.asarray(dx, dtype=float)
    dy = np.asarray(dy, dtype=float)
    if mode is TransformMode.TRANSLATE_ONLY:
        return dx.copy(), dy.copy()
    r = np.hypot(dx, dy)
    scale = np.ldexp(1.0, np.minimum(np.frexp(r)[1], 1023))
    sx = dx / scale
    sy = dy / scale
    sr = np.where(r == 0.0, 1.0, r / scale)
    zero = r == 0.0
    ex = np.where(zero, 0.0, scale * ((sx * sx - sy * sy) / sr))
    ey = np.where(zero, 0.0, scale * (2.0 * sx * sy / sr))
    return ex, ey


# Pair class codes shared by the vectorized paths; rankplot.kendall wraps
# them in the public PairClass enum.
CODE_CONCORDANT = 0
CODE_DISCORDANT = 1
CODE_TIE_X = 2
CODE_TIE_Y = 3
CODE_TIE_XY = 4


def class_codes(dx, dy, tie_epsilon: float = 0.0):
    """Classify per-pair deltas into the five codes above.

    A difference counts as tied when ``|difference| <= tie_epsilon``.  The
    classification is symmetric in the pair's orientation, so anchored and
    index-ordered deltas give the same codes.
    """
    dx = np.asarray(dx, dtype=float)
    dy = np.asarray(dy, dtype=float)
    tx = np.abs(dx) <= tie_epsilon
    ty = np.abs(dy) <= tie_epsilon
    same = (dx > 0) == (dy > 0)
    codes = np.where(same, CODE_CONCORDANT, CODE_DISCORDANT)
    codes = np.where(tx & ~ty, CODE_TIE_X, codes)
    codes = np.where(ty & ~tx, CODE_TIE_Y, codes)
    codes = np.where(tx & ty, CODE_TIE_XY, codes)
    return codes.astype(np.int8)
