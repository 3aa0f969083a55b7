import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lvdt_flann.errors import AlignmentError
from lvdt_flann.metrics import (DEFAULT_TOLERANCE_MM, error_curve, linearity,
                                raw_sensor_linearity)
from lvdt_flann.model import CalibrationDataset, CalibrationSample

pair = st.tuples(st.floats(-100, 100), st.floats(-100, 100))
pairs = st.lists(pair, min_size=1, max_size=30)
tol = st.floats(1e-3, 50)


def _raw_residuals(data):
    # independent line fit: lstsq on [x, 1]
    A = np.column_stack([data.displacements, np.ones(len(data))])
    (a, b), *_ = np.linalg.lstsq(A, data.voltages, rcond=None)
    return np.abs((data.voltages - b) / a - data.displacements)


def test_tolerance_calibration(table1):
    r = np.sort(_raw_residuals(table1))
    assert r[1] < DEFAULT_TOLERANCE_MM < r[2]


def test_identity_is_fully_linear():
    rep = linearity([(x, x) for x in range(-30, 31, 5)], 0.1)
    assert rep.percent_linear == 100.0 and rep.linear_points == 13


@pytest.mark.parametrize("n_in, expected", [(2, 15.38), (5, 38.46), (11, 84.62)])
def test_thirteen_point_percentages(n_in, expected):
    p = [(float(i), float(i) + (0.0 if i < n_in else 5.0)) for i in range(13)]
    rep = linearity(p, 1.0)
    assert rep.linear_points == n_in
    assert round(rep.percent_linear, 2) == expected
    assert rep.percent_linear == 100.0 * n_in / 13


def test_linearity_rejects_bad_input():
    with pytest.raises(ValueError):
        linearity([], 1.0)
    with pytest.raises(ValueError):
        linearity([(0, 0)], 0.0)
    with pytest.raises(ValueError):
        linearity([(0, 0)], math.inf)


def test_raw_sensor_table1(table1):
    rep = raw_sensor_linearity(table1)
    assert rep.linear_points == 2 and rep.total_points == 13
    assert round(rep.percent_linear, 2) == 15.38
    np.testing.assert_allclose(np.abs(rep.per_point_residuals), _raw_residuals(table1), rtol=1e-9)


def test_raw_sensor_perfect_line():
    x = np.arange(-30, 31, 5.0)
    data = CalibrationDataset.from_arrays(x, 0.17 * x)
    assert raw_sensor_linearity(data, 1e-6).percent_linear == 100.0


def test_raw_sensor_single_point():
    assert raw_sensor_linearity([CalibrationSample(0.0, 0.001)], 0.1).percent_linear == 100.0


@given(pairs, tol, tol)
def test_linearity_monotone_in_tolerance(p, t1, t2):
    lo, hi = sorted((t1, t2))
    assert linearity(p, lo).percent_linear <= linearity(p, hi).percent_linear


@given(pairs, tol)
def test_linearity_symmetric(p, t):
    swapped = [(b, a) for a, b in p]
    assert linearity(p, t).percent_linear == linearity(swapped, t).percent_linear


@given(pairs, tol, st.randoms())
def test_linearity_order_invariant(p, t, rnd):
    q = list(p)
    rnd.shuffle(q)
    assert linearity(p, t).percent_linear == linearity(q, t).percent_linear


def test_error_curve_identical():
    ref = [(float(x), 0.1 * x) for x in range(5)]
    c = error_curve(ref, ref)
    assert c.max_abs_error == 0 and c.max_abs_interior_error == 0
    assert all(e == 0 for _, e in c.points)


def test_error_curve_endpoint_exclusion():
    ref = [(float(x), 0.0) for x in range(5)]
    cand = list(ref)
    cand[-1] = (4.0, 0.2)
    c = error_curve(ref, cand)
    assert c.max_abs_error == pytest.approx(0.2)
    assert c.max_abs_interior_error == 0.0


def test_error_curve_alignment():
    with pytest.raises(AlignmentError):
        error_curve([(0, 0), (1, 0)], [(0, 0)])
    with pytest.raises(AlignmentError):
        error_curve([(0, 0), (1, 0)], [(0, 0), (2, 0)])
