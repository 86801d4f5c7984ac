"""Pairwise concordance classification and Kendall's tau-b.

Every unordered pair of observations is exactly one of: concordant,
discordant, tied in x only, tied in y only, or tied in both.  With c, d,
t_x, t_y, t_xy the per-class totals,

    tau = (c - d) / sqrt((c + d + t_x) * (c + d + t_y))

whenever both factors are positive; a column that is entirely tied makes
tau undefined, which is reported explicitly rather than coerced to 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._anchoring import (
    CODE_CONCORDANT,
    CODE_DISCORDANT,
    CODE_TIE_X,
    CODE_TIE_XY,
    CODE_TIE_Y,
    AnchorPolicy,
    TransformConfig,
    anchored_deltas,
    class_codes,
)
from .dataset import DatasetError, Observation, RankedDataset

__all__ = [
    "PairClass",
    "PairComparison",
    "PairCounts",
    "TauResult",
    "UndefinedTauError",
    "classify_pair",
    "enumerate_comparisons",
    "tau_b_brute",
    "tau_b_fast",
    "generate_permutation_with_target_tau",
]


class UndefinedTauError(ValueError):
    """Raised where an operation needs a defined tau but a column is fully tied."""


class PairClass(Enum):
    CONCORDANT = "concordant"
    DISCORDANT = "discordant"
    TIE_X = "tie_x"
    TIE_Y = "tie_y"
    TIE_XY = "tie_xy"


_CLASS_BY_CODE = {
    CODE_CONCORDANT: PairClass.CONCORDANT,
    CODE_DISCORDANT: PairClass.DISCORDANT,
    CODE_TIE_X: PairClass.TIE_X,
    CODE_TIE_Y: PairClass.TIE_Y,
    CODE_TIE_XY: PairClass.TIE_XY,
}


@dataclass(frozen=True)
class PairComparison:
    """Classification and anchored geometry of one pair (i < j).

    dx, dy are the deltas from the anchor chosen by the transform config's
    anchor policy; dissimilarity is ``|dx - dy|``.
    """

    i: int
    j: int
    pair_class: PairClass
    dx: float
    dy: float
    dissimilarity: float


@dataclass(frozen=True)
class PairCounts:
    """Aggregate tallies over all m(m-1)/2 pairwise comparisons."""

    c: int
    d: int
    t_x: int
    t_y: int
    t_xy: int
    total: int

    def __post_init__(self):
        if self.c + self.d + self.t_x + self.t_y + self.t_xy != self.total:
            raise ValueError("pair counts do not partition the total")


@dataclass(frozen=True)
class TauResult:
    """tau-b plus the counts it was computed from; tau is None when undefined."""

    tau: float | None
    counts: PairCounts

    @property
    def defined(self) -> bool:
        return self.tau is not None

    def require_tau(self) -> float:
        if self.tau is None:
            raise UndefinedTauError(
                "tau is undefined: a column is entirely tied"
            )
        return self.tau


def classify_pair(a: Observation, b: Observation, tie_epsilon: float = 0.0) -> PairClass:
    """Classify one pair by the signs of its coordinate differences.

    Concordant if both differences have the same nonzero sign, discordant if
    opposite; a difference with ``|diff| <= tie_epsilon`` counts as tied.
    """
    dx = b.x - a.x
    dy = b.y - a.y
    tied_x = abs(dx) <= tie_epsilon
    tied_y = abs(dy) <= tie_epsilon
    if tied_x and tied_y:
        return PairClass.TIE_XY
    if tied_x:
        return PairClass.TIE_X
    if tied_y:
        return PairClass.TIE_Y
    return PairClass.CONCORDANT if (dx > 0) == (dy > 0) else PairClass.DISCORDANT


def _require_pairs(dataset: RankedDataset) -> int:
    m = len(dataset)
    if m < 2:
        raise DatasetError("at least 2 observations required")
    if not (np.isfinite(dataset.x).all() and np.isfinite(dataset.y).all()):
        raise DatasetError("pairwise comparison requires finite values")
    return m


def _pair_arrays(dataset: RankedDataset, config: TransformConfig):
    """(i, j, codes, dx, dy) arrays over all pairs, lexicographic in (i, j)."""
    m = _require_pairs(dataset)
    i_idx, j_idx = np.triu_indices(m, k=1)
    x, y = dataset.x, dataset.y
    dx, dy = anchored_deltas(
        x[i_idx], y[i_idx], x[j_idx], y[j_idx], config.anchor_policy
    )
    codes = class_codes(dx, dy, config.tie_epsilon)
    return i_idx, j_idx, codes, dx, dy


def enumerate_comparisons(
    dataset: RankedDataset, config: TransformConfig | None = None
) -> list[PairComparison]:
    """All m(m-1)/2 pair comparisons, ordered lexicographically by (i, j)."""
    config = config or TransformConfig()
    i_idx, j_idx, codes, dx, dy = _pair_arrays(dataset, config)
    dis = np.abs(dx - dy)
    return [
        PairComparison(
            int(i), int(j), _CLASS_BY_CODE[int(code)], float(a), float(b), float(s)
        )
        for i, j, code, a, b, s in zip(i_idx, j_idx, codes, dx, dy, dis)
    ]


def _tau_from_counts(counts: PairCounts) -> TauResult:
    f1 = counts.c + counts.d + counts.t_x
    f2 = counts.c + counts.d + counts.t_y
    if f1 == 0 or f2 == 0:
        return TauResult(tau=None, counts=counts)
    return TauResult(tau=(counts.c - counts.d) / math.sqrt(f1 * f2), counts=counts)


def tau_b_brute(dataset: RankedDataset, tie_epsilon: float = 0.0) -> TauResult:
    """tau-b from full O(m^2) enumeration of sign pairs.

    The reference implementation: every pair's two sign functions are
    evaluated directly via broadcasting.  Kept independent of the
    sort-based fast path so each can check the other.
    """
    m = _require_pairs(dataset)
    dx = dataset.x[None, :] - dataset.x[:, None]
    dy = dataset.y[None, :] - dataset.y[:, None]
    upper = np.triu(np.ones((m, m), dtype=bool), k=1)
    tied_x = (np.abs(dx) <= tie_epsilon) & upper
    tied_y = (np.abs(dy) <= tie_epsilon) & upper
    both = tied_x & tied_y
    untied = upper & ~tied_x & ~tied_y
    same_sign = (dx > 0) == (dy > 0)
    counts = PairCounts(
        c=int((untied & same_sign).sum()),
        d=int((untied & ~same_sign).sum()),
        t_x=int((tied_x & ~both).sum()),
        t_y=int((tied_y & ~both).sum()),
        t_xy=int(both.sum()),
        total=m * (m - 1) // 2,
    )
    return _tau_from_counts(counts)


def _count_inversions(values: np.ndarray) -> int:
    """Exact count of pairs i < j with values[i] > values[j].

    Bottom-up merge counting: at each level the cross-block inversions of
    every block pair are counted with one searchsorted call, made possible
    by offsetting each block pair into a disjoint key range.  O(n log^2 n)
    but fully vectorized.
    """
    values = np.asarray(values)
    n = values.size
    if n < 2:
        return 0
    # dense integer ranks keep keys small and make sentinel handling exact
    ranks = np.unique(values, return_inverse=True)[1].astype(np.int64)
    size = 1 << int(n - 1).bit_length()
    sentinel = int(ranks.max()) + 1
    buf = np.full(size, sentinel, dtype=np.int64)
    buf[:n] = ranks
    total = 0
    width = 1
    while width < size:
        rows = buf.reshape(-1, 2 * width)
        left = rows[:, :width]
        right = rows[:, width:]
        n_rows = rows.shape[0]
        offsets = np.arange(n_rows, dtype=np.int64) * (sentinel + 1)
        left_keys = (left + offsets[:, None]).ravel()
        right_keys = (right + offsets[:, None]).ravel()
        pos = np.searchsorted(left_keys, right_keys, side="right")
        at_most = pos - np.repeat(np.arange(n_rows, dtype=np.int64) * width, width)
        total += int((width - at_most).sum())
        buf = np.sort(rows, axis=1).ravel()
        width *= 2
    return total


def _tied_pair_count(group_sizes: np.ndarray) -> int:
    sizes = group_sizes.astype(np.int64)
    return int((sizes * (sizes - 1) // 2).sum())


def _run_lengths(changes: np.ndarray) -> np.ndarray:
    # changes[k] is True where element k+1 starts a new run
    boundaries = np.flatnonzero(np.concatenate(([True], changes, [True])))
    return np.diff(boundaries)


def tau_b_fast(dataset: RankedDataset) -> TauResult:
    """tau-b in O(m log m): lexicographic sort plus inversion counting.

    Returns counts identical to :func:`tau_b_brute` with exact ties
    (tie_epsilon 0); discordant pairs are the strict inversions of the
    y-sequence after sorting by (x, y).
    """
    m = _require_pairs(dataset)
    order = np.lexsort((dataset.y, dataset.x))
    xs = dataset.x[order]
    ys = dataset.y[order]

    total = m * (m - 1) // 2
    x_change = xs[1:] != xs[:-1]
    xy_change = x_change | (ys[1:] != ys[:-1])
    tied_in_x = _tied_pair_count(_run_lengths(x_change))
    tied_in_both = _tied_pair_count(_run_lengths(xy_change))
    ys_sorted = np.sort(ys)
    tied_in_y = _tied_pair_count(_run_lengths(ys_sorted[1:] != ys_sorted[:-1]))

    d = _count_inversions(ys)
    c = total - tied_in_x - tied_in_y + tied_in_both - d
    counts = PairCounts(
        c=c,
        d=d,
        t_x=tied_in_x - tied_in_both,
        t_y=tied_in_y - tied_in_both,
        t_xy=tied_in_both,
        total=total,
    )
    return _tau_from_counts(counts)


def _permutation_with_inversions(m: int, k: int, rng: np.random.Generator) -> list[int]:
    """Permutation of 1..m with exactly k inversions.

    Random walk of k adjacent transpositions, each applied at an ascent so
    it adds exactly one inversion.  The ascent set is maintained
    incrementally, so the walk costs O(m + k).
    """
    y = list(range(1, m + 1))
    ascents = list(range(m - 1))  # positions p with y[p] < y[p+1]
    slot_of = {p: idx for idx, p in enumerate(ascents)}

    def sync(p: int):
        is_ascent = y[p] < y[p + 1]
        if is_ascent and p not in slot_of:
            slot_of[p] = len(ascents)
            ascents.append(p)
        elif not is_ascent and p in slot_of:
            idx = slot_of.pop(p)
            last = ascents.pop()
            if last != p:
                ascents[idx] = last
                slot_of[last] = idx

    for _ in range(k):
        p = ascents[int(rng.integers(len(ascents)))]
        y[p], y[p + 1] = y[p + 1], y[p]
        for q in (p - 1, p, p + 1):
            if 0 <= q < m - 1:
                sync(q)
    return y


def generate_permutation_with_target_tau(
    m: int, target_tau: float, seed: int
) -> RankedDataset:
    """Dataset with x = 1..m and y a permutation whose tau is as close as
    the inversion-count granularity 4/(m(m-1)) allows to ``target_tau``.

    The achieved value is 1 - 4k/(m(m-1)) with k = round(m(m-1)(1-t)/4)
    inversions, realized deterministically from the seed.
    """
    if m < 2:
        raise DatasetError("m must be at least 2")
    if not -1.0 <= target_tau <= 1.0:
        raise ValueError("target_tau must lie in [-1, 1]")
    pairs = m * (m - 1)
    k = int(round(pairs * (1.0 - target_tau) / 4.0))
    k = max(0, min(pairs // 2, k))
    rng = np.random.default_rng(seed)
    y = _permutation_with_inversions(m, k, rng)
    return RankedDataset(
        x=np.arange(1, m + 1, dtype=float),
        y=np.array(y, dtype=float),
        labels=tuple(str(i) for i in range(m)),
    )
