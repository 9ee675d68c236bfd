import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from reference import energy_map_oracle, haar_synthesis
from wecsf.imagecore import read_plane
from wecsf.wavelet import (
    DecompositionError,
    DetailBands,
    WaveletPyramid,
    dump_pyramid,
    dwt_level,
    dwt_multilevel,
    max_levels,
    wavelet_energy_map,
)


# --- max_levels -------------------------------------------------------------


def test_max_levels_known_values():
    assert max_levels(256, 256) == 8
    assert max_levels(511, 681) == 8  # floor(log2(511)) = 8
    assert max_levels(2, 2) == 1


def test_max_levels_degenerate():
    with pytest.raises(DecompositionError):
        max_levels(1, 1)
    with pytest.raises(DecompositionError):
        max_levels(1, 64)
    with pytest.raises(ValueError):
        max_levels(0, 4)


# --- single level -----------------------------------------------------------


def test_2x2_reference_values():
    # brute-force separable Haar with low=[1,1]/sqrt(2), high=[1,-1]/sqrt(2)
    a, bands = dwt_level(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert_allclose(a, [[5.0]], atol=1e-12)
    assert_allclose(bands.h, [[-1.0]], atol=1e-12)
    assert_allclose(bands.v, [[-2.0]], atol=1e-12)
    assert_allclose(bands.d, [[0.0]], atol=1e-12)


def test_constant_plane_kills_details():
    plane = np.full((8, 8), 0.4)
    pyr = dwt_multilevel(plane, 3)
    for level in pyr.details:
        for band in level:
            assert np.array_equal(band, np.zeros_like(band))
    # orthonormal scaling: approximation = c * 2^levels
    assert_allclose(pyr.approximation, np.full((1, 1), 0.4 * 2**3), rtol=1e-12)


def test_levels_out_of_range():
    plane = np.zeros((8, 8))
    with pytest.raises(DecompositionError):
        dwt_multilevel(plane, 4)  # max is 3
    with pytest.raises(DecompositionError):
        dwt_multilevel(plane, 0)


# --- pyramid structure ------------------------------------------------------


@settings(max_examples=60)
@given(st.integers(2, 128), st.integers(2, 128), st.integers(0, 2**31 - 1))
def test_dimension_law(w, h, seed):
    plane = np.random.default_rng(seed).standard_normal((h, w))
    levels = max_levels(w, h)
    pyr = dwt_multilevel(plane, levels)
    assert pyr.subband_count == 3 * levels + 1
    for k, bands in enumerate(pyr.details, start=1):
        expected = (-(-h // 2**k), -(-w // 2**k))  # ceil division
        for band in bands:
            assert band.shape == expected
    assert pyr.approximation.shape == pyr.details[-1].h.shape


def test_dimension_law_512():
    pyr = dwt_multilevel(np.zeros((512, 512)), 9)
    assert pyr.approximation.shape == (1, 1)


# --- energy conservation and reconstruction ---------------------------------


def test_parseval_on_random_even_plane(rng):
    plane = rng.standard_normal((64, 64))
    pyr = dwt_multilevel(plane, max_levels(64, 64))
    coeff_energy = sum(float(np.sum(b * b)) for lvl in pyr.details for b in lvl)
    coeff_energy += float(np.sum(pyr.approximation**2))
    pixel_energy = float(np.sum(plane * plane))
    assert abs(coeff_energy - pixel_energy) / pixel_energy <= 1e-9


@pytest.mark.parametrize("shape", [(7, 9), (33, 17), (2, 3), (61, 100)])
def test_parseval_odd_sizes(shape, rng):
    plane = rng.standard_normal(shape)
    levels = max_levels(shape[1], shape[0])
    pyr = dwt_multilevel(plane, levels)
    coeff_energy = sum(float(np.sum(b * b)) for lvl in pyr.details for b in lvl)
    coeff_energy += float(np.sum(pyr.approximation**2))
    pixel_energy = float(np.sum(plane * plane))
    assert abs(coeff_energy - pixel_energy) / pixel_energy <= 1e-9


@pytest.mark.parametrize("shape", [(16, 16), (7, 9), (33, 64), (21, 5)])
def test_synthesis_reconstructs(shape, rng):
    plane = rng.standard_normal(shape)
    levels = max_levels(shape[1], shape[0])
    pyr = dwt_multilevel(plane, levels)
    back = haar_synthesis(pyr)
    assert np.sqrt(np.mean((back - plane) ** 2)) <= 1e-9


def test_constant_shift_leaves_detail_energy(rng):
    plane = rng.standard_normal((32, 48))
    base = dwt_multilevel(plane, 3)
    shifted = dwt_multilevel(plane + 5.0, 3)
    for lvl_a, lvl_b in zip(base.details, shifted.details):
        for a, b in zip(lvl_a, lvl_b):
            assert_allclose(a, b, atol=1e-9)


# --- energy map -------------------------------------------------------------


def _pyramid_from_bands(levels_shapes, approx, src_shape):
    details = tuple(
        DetailBands(h=np.zeros(s), v=np.zeros(s), d=np.zeros(s)) for s in levels_shapes
    )
    return WaveletPyramid(details=details, approximation=approx, source_shape=src_shape)


def test_zero_pyramid_zero_energy():
    pyr = _pyramid_from_bands([(4, 4), (2, 2)], np.zeros((2, 2)), (8, 8))
    assert np.array_equal(wavelet_energy_map(pyr), np.zeros((8, 8)))


def test_single_coefficient_energy_block():
    h = np.zeros((2, 2))
    h[0, 0] = 3.0
    details = (DetailBands(h=h, v=np.zeros((2, 2)), d=np.zeros((2, 2))),)
    pyr = WaveletPyramid(details=details, approximation=np.zeros((2, 2)), source_shape=(4, 4))
    energy = wavelet_energy_map(pyr, include_approximation=False)
    assert energy[0, 0] == 9.0  # v^2 at the aligned corner
    assert energy.max() == 9.0
    assert energy[-1, -1] == 0.0


@pytest.mark.parametrize("include_approx", [True, False])
@pytest.mark.parametrize("shape", [(32, 32), (33, 21)])
def test_energy_map_matches_naive_oracle(shape, include_approx, rng):
    plane = rng.standard_normal(shape)
    pyr = dwt_multilevel(plane, 3)
    fast = wavelet_energy_map(pyr, include_approx)
    slow = energy_map_oracle(pyr, include_approx)
    assert_allclose(fast, slow, atol=1e-9)


def test_energy_nonnegative(rng):
    plane = rng.standard_normal((40, 28)) * 100
    pyr = dwt_multilevel(plane, 4)
    for flag in (True, False):
        assert wavelet_energy_map(pyr, flag).min() >= 0.0


def test_detail_only_energy_of_constant_is_zero():
    pyr = dwt_multilevel(np.full((16, 16), 2.5), 4)
    energy = wavelet_energy_map(pyr, include_approximation=False)
    assert np.array_equal(energy, np.zeros((16, 16)))


# --- dumps ------------------------------------------------------------------


def test_pyramid_dump_round_trip(tmp_path, rng):
    plane = rng.standard_normal((16, 16))
    pyr = dwt_multilevel(plane, 2)
    sidecar = dump_pyramid(pyr, tmp_path, prefix="t")
    meta = json.loads(sidecar.read_text())
    assert meta["levels"] == 2
    assert len(meta["subbands"]) == 7
    for entry in meta["subbands"]:
        band = read_plane(tmp_path / entry["file"])
        if entry["orientation"] == "a":
            assert np.array_equal(band, pyr.approximation)
        else:
            level = pyr.details[entry["level"] - 1]
            assert np.array_equal(band, getattr(level, entry["orientation"]))
