"""
Linearity and error-curve metrics.

A point counts as linear when its residual against the ideal straight-line
response is within a tolerance in millimetres; the percentage of linear
points is the headline figure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError

# Frozen once from the bundled fixture: the sorted raw residuals against the
# least-squares sensor line are 0.307, 0.538, 0.956, ... mm, and the
# tolerance sits between the 2nd and 3rd of them.
DEFAULT_TOLERANCE_MM = 0.75


@dataclass(frozen=True)
class LinearityReport:
    total_points: int
    linear_points: int
    percent_linear: float
    tolerance_mm: float
    per_point_residuals: tuple

    def __str__(self):
        return (f"{self.percent_linear:.2f}% linear "
                f"({self.linear_points}/{self.total_points} within {self.tolerance_mm:g} mm)")


@dataclass(frozen=True)
class ErrorCurve:
    """Pointwise ``candidate - reference`` keyed by displacement.

    ``max_abs_interior_error`` ignores the first and last points.
    """

    points: tuple
    max_abs_error: float
    max_abs_interior_error: float

    @property
    def displacements(self):
        return np.array([p[0] for p in self.points])

    @property
    def errors(self):
        return np.array([p[1] for p in self.points])


def _check_tolerance(tolerance_mm):
    if not (math.isfinite(tolerance_mm) and tolerance_mm > 0):
        raise ValueError(f"tolerance must be positive and finite, got {tolerance_mm}")


def linearity(pairs, tolerance_mm: float = DEFAULT_TOLERANCE_MM) -> LinearityReport:
    """Percentage of ``(truth, output)`` pairs with ``|output - truth| <= tolerance_mm``."""
    _check_tolerance(tolerance_mm)
    pairs = list(pairs)
    if not pairs:
        raise ValueError("linearity needs at least one point")
    arr = np.asarray(pairs, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite value in linearity pairs")
    resid = arr[:, 1] - arr[:, 0]
    n_lin = int(np.count_nonzero(np.abs(resid) <= tolerance_mm))
    return LinearityReport(
        total_points=len(pairs),
        linear_points=n_lin,
        percent_linear=100.0 * n_lin / len(pairs),
        tolerance_mm=float(tolerance_mm),
        per_point_residuals=tuple(float(r) for r in resid),
    )


def sensor_line(displacements, voltages):
    """Least-squares line ``v = slope * x + intercept`` through the raw sweep."""
    slope, intercept = np.polyfit(np.asarray(displacements, float), np.asarray(voltages, float), 1)
    return float(slope), float(intercept)


def raw_sensor_pairs(dataset):
    """(truth, displacement read off the fitted sensor line) for every sample."""
    x = np.array([s.displacement for s in dataset], dtype=float)
    v = np.array([s.voltage for s in dataset], dtype=float)
    if len(x) < 2 or np.ptp(x) == 0:
        # a single point always lies on its own line
        return list(zip(x.tolist(), x.tolist()))
    slope, intercept = sensor_line(x, v)
    x_hat = (v - intercept) / slope
    return list(zip(x.tolist(), x_hat.tolist()))


def raw_sensor_linearity(dataset, tolerance_mm: float = DEFAULT_TOLERANCE_MM) -> LinearityReport:
    """Linearity of the uncompensated sensor against its least-squares line."""
    return linearity(raw_sensor_pairs(dataset), tolerance_mm)


def error_curve(reference, candidate) -> ErrorCurve:
    """Difference curve between two back-ends evaluated on the same displacements."""
    reference, candidate = list(reference), list(candidate)
    if len(reference) != len(candidate):
        raise AlignmentError(f"curves have {len(reference)} and {len(candidate)} points")
    if not reference:
        raise ValueError("error curve needs at least one point")
    points = []
    for i, ((xr, yr), (xc, yc)) in enumerate(zip(reference, candidate)):
        if xr != xc:
            raise AlignmentError(f"point {i}: displacement {xr} vs {xc}")
        points.append((float(xr), float(yc) - float(yr)))
    err = np.abs([p[1] for p in points])
    interior = err[1:-1]
    return ErrorCurve(
        points=tuple(points),
        max_abs_error=float(err.max()),
        max_abs_interior_error=float(interior.max()) if interior.size else 0.0,
    )
