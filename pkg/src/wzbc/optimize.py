"""Grid sweeps, lower convex envelopes, and Pareto merging of tradeoff curves."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .core import DistortionPoint, TradeoffCurve

log = logging.getLogger(__name__)

DEFAULT_CELL_CAP = 10**7


@dataclass(frozen=True)
class GridAxis:
    name: str
    lower: float
    upper: float
    count: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"axis {self.name}: lower {self.lower} > upper {self.upper}")
        if self.count < 1:
            raise ValueError(f"axis {self.name}: count must be >= 1, got {self.count}")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lower])
        return np.linspace(self.lower, self.upper, self.count)


@dataclass(frozen=True)
class GridSpec:
    axes: tuple
    cell_cap: int = DEFAULT_CELL_CAP

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if self.cells > self.cell_cap:
            raise ValueError(
                f"grid has {self.cells} cells, exceeding the cap of {self.cell_cap}"
            )

    @property
    def cells(self) -> int:
        n = 1
        for ax in self.axes:
            n *= ax.count
        return n

    def __iter__(self):
        """Yield one {axis name: value} dict per cell, last axis fastest."""
        grids = [ax.values() for ax in self.axes]
        names = [ax.name for ax in self.axes]
        for combo in itertools.product(*grids):
            yield dict(zip(names, combo))


def sweep(grid: GridSpec, evaluator) -> list:
    """Evaluate every grid cell, collecting the points the evaluator returns.

    The evaluator maps a {name: value} dict to a DistortionPoint or None
    (rejection).  Output order is deterministic (grid iteration order).
    """
    points = []
    for cell in grid:
        point = evaluator(cell)
        if point is not None:
            points.append(point)
    if not points:
        log.warning("sweep over %d cells produced no points", grid.cells)
    return points


def lower_envelope_indices(x, y):
    """Indices (into the input arrays) of the lower-left convex boundary.

    The boundary is the chain of lower-convex-hull vertices from the smallest
    x up to the first vertex attaining the minimal y; vertices are strictly
    decreasing in y with strictly increasing slopes (collinear interior points
    are dropped, and of points sharing an x only the one with minimal y is
    kept).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0:
        raise ValueError("envelope of an empty point set")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("envelope requires finite coordinates")
    order = np.lexsort((y, x))
    hull = []  # indices into the original arrays

    def cross(i, j, k):
        return (x[j] - x[i]) * (y[k] - y[i]) - (y[j] - y[i]) * (x[k] - x[i])

    for idx in order:
        if hull and x[hull[-1]] == x[idx]:
            continue  # same x: the lexsort already placed the minimal y first
        while len(hull) >= 2 and cross(hull[-2], hull[-1], idx) <= 0:
            hull.pop()
        hull.append(idx)
    # keep the strictly decreasing part: cut at the first vertex of minimal y
    ys = y[hull]
    cut = int(np.argmin(ys))
    return hull[: cut + 1]


def lower_convex_envelope(points) -> TradeoffCurve:
    """Lower convex envelope of a set of (D1, D2) points.

    Accepts a sequence of DistortionPoint or an array-like of (x, y) pairs;
    returns a TradeoffCurve whose points are the selected input points
    (synthesized with scheme "envelope" for raw coordinate input), sorted by
    D1 and strictly decreasing in D2.
    """
    pts = list(points)
    if not pts:
        raise ValueError("envelope of an empty point set")
    if isinstance(pts[0], DistortionPoint):
        x = np.array([p.D[0] for p in pts])
        y = np.array([p.D[1] for p in pts])
        keep = lower_envelope_indices(x, y)
        return TradeoffCurve(points=tuple(pts[i] for i in keep), envelope_applied=True)
    arr = np.asarray(pts, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected (n, 2) coordinates, got shape {arr.shape}")
    keep = lower_envelope_indices(arr[:, 0], arr[:, 1])
    made = tuple(
        DistortionPoint(D=(arr[i, 0], arr[i, 1]), scheme="envelope", params={}) for i in keep
    )
    return TradeoffCurve(points=made, envelope_applied=True)


def pareto_merge(curves) -> TradeoffCurve:
    """Union of the curves' points followed by the lower convex envelope."""
    curves = list(curves)
    if not curves:
        raise ValueError("pareto_merge of an empty curve list")
    merged = [p for curve in curves for p in curve.points]
    return lower_convex_envelope(merged)


def envelope_value(curve: TradeoffCurve, x) -> np.ndarray:
    """Piecewise-linear envelope evaluated at x (scalar or array), clipped to range."""
    xs = np.asarray(curve.d1())
    ys = np.asarray(curve.d2())
    return np.interp(np.asarray(x, dtype=float), xs, ys)
