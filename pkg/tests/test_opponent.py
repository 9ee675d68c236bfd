import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wecsf.imagecore import RgbImage
from wecsf.opponent import OPPONENT_FROM_RGB, RGB_FROM_OPPONENT, OpponentImage, rgb_to_opponent


def _transform_pixel(r, g, b):
    image = RgbImage(np.array([[[r, g, b]]], dtype=np.float64))
    out = rgb_to_opponent(image)
    return out.wb[0, 0], out.rg[0, 0], out.yb[0, 0]


def test_pure_red_is_first_matrix_column():
    assert_allclose(_transform_pixel(1, 0, 0), (0.2814, -0.0971, -0.0930), atol=1e-15)


def test_black_maps_to_zero():
    assert _transform_pixel(0, 0, 0) == (0.0, 0.0, 0.0)


def test_white_row_sums():
    # independent matrix-vector product: row sums accumulated with fsum
    expected = tuple(math.fsum(row) for row in OPPONENT_FROM_RGB.tolist())
    assert_allclose(_transform_pixel(1, 1, 1), expected, atol=1e-15)
    assert_allclose(expected, (1.0390, 0.0237, 0.1206), atol=1e-12)


def test_linearity(rng):
    x = rng.random((5, 5, 3))
    y = rng.random((5, 5, 3))
    a, b = 0.7, -1.3
    lhs = rgb_to_opponent(RgbImage(a * x + b * y))
    rx = rgb_to_opponent(RgbImage(x))
    ry = rgb_to_opponent(RgbImage(y))
    for plane, px, py in zip(lhs.planes(), rx.planes(), ry.planes()):
        assert_allclose(plane, a * px + b * py, atol=1e-12)


def test_inverse_round_trip(rng):
    data = rng.random((7, 9, 3))
    opp = rgb_to_opponent(RgbImage(data))
    stacked = np.stack(opp.planes(), axis=-1)
    back = stacked @ RGB_FROM_OPPONENT.T
    assert_allclose(back, data, atol=1e-9)


def test_bounds_hold_for_random_pixels(rng):
    pixels = rng.random((100_000, 3))
    out = pixels @ OPPONENT_FROM_RGB.T
    limits = np.abs(OPPONENT_FROM_RGB).sum(axis=1)  # row-wise absolute sums
    assert_allclose(limits, [1.039, 0.2679, 0.8124], atol=1e-12)
    assert (np.abs(out) <= limits[None, :] + 1e-12).all()


def test_mismatched_planes_rejected():
    with pytest.raises(ValueError):
        OpponentImage(wb=np.zeros((2, 2)), rg=np.zeros((2, 3)), yb=np.zeros((2, 2)))
