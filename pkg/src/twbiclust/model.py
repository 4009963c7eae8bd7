"""Observed-matrix data model, bicluster assignments, and group standardization.

The central objects are a dense real matrix, an entry-level group assignment
(group 0 is the background, groups 1..K are combinatorial submatrices), and
the residual matrix obtained by centering and scaling every entry with its
group's sample mean and (biased) sample standard deviation.  The residual
matrix feeds the spectral test statistic.

All types are immutable after construction (backing arrays are marked
read-only) and safe to share across concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateGroupError,
    EmptyBackgroundError,
    EmptyGroupError,
    EmptyRectangleError,
    NonPositiveStdError,
    OverlapError,
)

#: below this, a group's sample std is treated as zero (constant group)
DEGENERATE_STD = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ObservedMatrix:
    """Dense real n x p data matrix with optional row/column labels.

    Requires n >= 2, p >= 2 and all entries finite.
    """

    values: np.ndarray
    row_labels: Optional[tuple] = None
    col_labels: Optional[tuple] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {v.shape}")
        n, p = v.shape
        if n < 2 or p < 2:
            raise ValueError(f"matrix must be at least 2x2, got {n}x{p}")
        if not np.isfinite(v).all():
            raise ValueError("matrix entries must all be finite")
        if self.row_labels is not None and len(self.row_labels) != n:
            raise ValueError("row_labels length must match row count")
        if self.col_labels is not None and len(self.col_labels) != p:
            raise ValueError("col_labels length must match column count")
        object.__setattr__(self, "values", _readonly(v.copy()))
        if self.row_labels is not None:
            object.__setattr__(self, "row_labels", tuple(self.row_labels))
        if self.col_labels is not None:
            object.__setattr__(self, "col_labels", tuple(self.col_labels))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class BiclusterAssignment:
    """Entry-level group indices in {0..K}; group 0 is the background.

    Invariants enforced at construction:

    * every entry carries exactly one group index;
    * every group 0..K is non-empty;
    * each group k >= 1 is a combinatorial submatrix: there are index sets
      I_k, J_k with the group's entries exactly I_k x J_k.

    The background need not form a submatrix.  Row or column sharing between
    different groups is allowed (the structure need not be bi-disjoint).
    """

    group_of: np.ndarray
    k: int

    def __post_init__(self):
        g = np.asarray(self.group_of)
        if g.ndim != 2:
            raise ValueError(f"expected a 2-d assignment, got shape {g.shape}")
        if not np.issubdtype(g.dtype, np.integer):
            raise ValueError("assignment entries must be integers")
        g = g.astype(np.int32, copy=True)
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if g.min() < 0 or g.max() > self.k:
            raise ValueError(f"group indices must lie in 0..{self.k}")
        counts = np.bincount(g.ravel(), minlength=self.k + 1)
        for grp in range(self.k + 1):
            if counts[grp] == 0:
                raise EmptyGroupError(grp)
        for grp in range(1, self.k + 1):
            mask = g == grp
            rows = np.flatnonzero(mask.any(axis=1))
            cols = np.flatnonzero(mask.any(axis=0))
            if counts[grp] != rows.size * cols.size or not mask[np.ix_(rows, cols)].all():
                raise ValueError(f"group {grp} is not a combinatorial submatrix")
        object.__setattr__(self, "group_of", _readonly(g))

    @property
    def shape(self) -> tuple:
        return self.group_of.shape

    def rectangle(self, grp: int) -> tuple:
        """Row and column index arrays (I_k, J_k) of group grp >= 1."""
        if not 1 <= grp <= self.k:
            raise ValueError(f"rectangle defined only for groups 1..{self.k}")
        mask = self.group_of == grp
        return np.flatnonzero(mask.any(axis=1)), np.flatnonzero(mask.any(axis=0))

    def counts(self) -> np.ndarray:
        return np.bincount(self.group_of.ravel(), minlength=self.k + 1)


def all_background(n: int, p: int) -> BiclusterAssignment:
    """The K = 0 assignment: one background group covering the matrix."""
    return BiclusterAssignment(np.zeros((n, p), dtype=np.int32), 0)


@dataclass(frozen=True)
class GroupStats:
    """Per-group sample mean, biased (divide-by-count) std, and entry count."""

    mean: np.ndarray
    std: np.ndarray
    count: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", _readonly(np.asarray(self.mean, dtype=np.float64).copy()))
        object.__setattr__(self, "std", _readonly(np.asarray(self.std, dtype=np.float64).copy()))
        object.__setattr__(self, "count", _readonly(np.asarray(self.count, dtype=np.int64).copy()))

    @property
    def n_groups(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class ResidualMatrix:
    """Group-standardized residuals.

    When built by :func:`standardize`, every group of the assignment used has
    residual mean 0 and residual mean-square 1 (exact up to rounding).  The
    same container holds population-standardized residuals from
    :func:`standardize_population`.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("residual entries must all be finite")
        object.__setattr__(self, "values", _readonly(v.copy()))

    @property
    def shape(self) -> tuple:
        return self.values.shape


def _check_shapes(a: ObservedMatrix, g: BiclusterAssignment):
    if a.values.shape != g.group_of.shape:
        raise ValueError(
            f"matrix shape {a.values.shape} and assignment shape "
            f"{g.group_of.shape} differ"
        )


def compute_group_stats(
    a: ObservedMatrix,
    g: BiclusterAssignment,
    std_floor: Optional[float] = None,
) -> GroupStats:
    """Sample mean, biased std, and count of every group under ``g``.

    The std uses the divide-by-count normalization (no Bessel correction).
    A group whose std falls below ``DEGENERATE_STD`` raises
    :class:`DegenerateGroupError` unless ``std_floor`` is given, in which case
    the std is floored at that value instead.
    """
    _check_shapes(a, g)
    gf = g.group_of.ravel()
    af = a.values.ravel()
    k1 = g.k + 1
    count = np.bincount(gf, minlength=k1)
    for grp in range(k1):
        if count[grp] == 0:
            raise EmptyGroupError(grp)
    mean = np.bincount(gf, weights=af, minlength=k1) / count
    sq = np.bincount(gf, weights=(af - mean[gf]) ** 2, minlength=k1)
    std = np.sqrt(sq / count)
    if std_floor is not None:
        std = np.maximum(std, float(std_floor))
    else:
        for grp in range(k1):
            if std[grp] < DEGENERATE_STD:
                raise DegenerateGroupError(grp, float(std[grp]))
    return GroupStats(mean=mean, std=std, count=count)


def standardize(
    a: ObservedMatrix,
    g: BiclusterAssignment,
    std_floor: Optional[float] = None,
) -> ResidualMatrix:
    """Residuals (A_ij - mean_of_group) / std_of_group using sample stats."""
    stats = compute_group_stats(a, g, std_floor=std_floor)
    z = (a.values - stats.mean[g.group_of]) / stats.std[g.group_of]
    return ResidualMatrix(z)


def standardize_population(
    a: ObservedMatrix,
    g: BiclusterAssignment,
    b: Sequence[float],
    s: Sequence[float],
) -> ResidualMatrix:
    """Residuals built from known population means ``b`` and stds ``s``.

    Used by the calibration harness when the generating parameters are known.
    """
    _check_shapes(a, g)
    b = np.asarray(b, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if b.shape != (g.k + 1,) or s.shape != (g.k + 1,):
        raise ValueError(f"b and s must have length K+1 = {g.k + 1}")
    for grp in range(g.k + 1):
        if not s[grp] > 0:
            raise NonPositiveStdError(grp, float(s[grp]))
    z = (a.values - b[g.group_of]) / s[g.group_of]
    return ResidualMatrix(z)


def assignment_from_rectangles(
    n: int, p: int, rects: Sequence[tuple]
) -> BiclusterAssignment:
    """Build an assignment from (row_indices, col_indices) rectangles.

    The rectangle at position k-1 in ``rects`` becomes group k and claims the
    entry set I_k x J_k.  Rectangles must be pairwise entry-disjoint and must
    leave at least one background entry.
    """
    group_of = np.zeros((n, p), dtype=np.int32)
    for idx, (rows, cols) in enumerate(rects, start=1):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if rows.size == 0 or cols.size == 0:
            raise EmptyRectangleError(idx)
        if rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= p:
            raise ValueError(f"rectangle {idx} out of bounds for a {n}x{p} matrix")
        block = group_of[np.ix_(rows, cols)]
        clash = block.nonzero()
        if clash[0].size:
            i, j = clash[0][0], clash[1][0]
            raise OverlapError((int(rows[i]), int(cols[j])), int(block[i, j]), idx)
        group_of[np.ix_(rows, cols)] = idx
    if (group_of != 0).all():
        raise EmptyBackgroundError()
    return BiclusterAssignment(group_of, len(rects))
