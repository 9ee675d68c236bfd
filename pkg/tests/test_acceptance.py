"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``. Criteria needing the
real eye-tracking datasets read their roots from the environment
(WECSF_SID4VAM, WECSF_TORONTO, WECSF_MIT1003, prepared in the documented
layout) and skip with a notice when unset.
"""

import os
import time
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from reference import (
    auc_judd_oracle,
    cc_oracle,
    csf_oracle,
    haar_synthesis,
    ig_oracle,
    kl_oracle,
    nss_oracle,
    sim_oracle,
)
from wecsf.csf import ACHROMATIC_DEFAULTS, CsfGrid, apply_csf, build_acsf, csf_gain
from wecsf.datasets import DatasetLayout, load_dataset
from wecsf.evaluation import EvalItem, MetricSettings, evaluate_items
from wecsf.imagecore import RgbImage
from wecsf.metrics import EPSILON, MetricUndefined, auc_judd, cc, ig, kl, nss, sim
from wecsf.pipeline import PipelineParams, predict_saliency, predict_video
from wecsf.wavelet import dwt_multilevel, max_levels


PRESET = Path(__file__).resolve().parents[1] / "configs" / "table_reproduction.toml"


def _passed(number: int, name: str) -> None:
    print(f"\nACCEPTANCE {number:02d} {name}: PASS")


def _preset_params() -> PipelineParams:
    """The recorded table-reproduction parameter set."""
    from wecsf.config import load_config_file, resolve_config

    return resolve_config(load_config_file(PRESET)).pipeline


def _dataset_items(root, params: PipelineParams, limit: int | None = None):
    samples = list(load_dataset(DatasetLayout.at(root)))
    if limit is not None:
        samples = samples[:limit]
    items = []
    for sample in samples:
        sal = predict_saliency(sample.stimulus, params).plane
        items.append(
            EvalItem(
                id=sample.id,
                saliency=sal,
                points=None if sample.fixations is None else sample.fixations.points,
                density=None if sample.fixations is None else sample.fixations.density,
                category=sample.category,
            )
        )
    return samples, items


def _env_dataset(var: str):
    root = os.environ.get(var)
    if not root:
        pytest.skip(f"notice: {var} not set; place the prepared dataset layout there to run")
    if not os.path.isdir(root):
        pytest.skip(f"notice: {var}={root} is not a directory")
    return root


def test_c01_metric_oracle_equivalence():
    rng = np.random.default_rng(20240501)
    start = time.perf_counter()
    for _ in range(200):
        sal = rng.random((16, 16))
        dens = rng.random((16, 16))
        baseline = rng.random((16, 16))
        pts = np.stack([rng.integers(0, 16, 6), rng.integers(0, 16, 6)], axis=1)
        assert abs(nss(sal, pts) - nss_oracle(sal, pts)) <= 1e-12
        assert abs(sim(sal, dens) - sim_oracle(sal, dens)) <= 1e-12
        assert abs(cc(sal, dens) - cc_oracle(sal, dens)) <= 1e-12
        assert abs(kl(sal, dens) - kl_oracle(sal, dens, EPSILON)) <= 1e-12
        assert abs(ig(sal, baseline, pts) - ig_oracle(sal, baseline, pts, EPSILON)) <= 1e-12
        assert auc_judd(sal, pts) == auc_judd_oracle(sal, pts)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"criterion budget exceeded: {elapsed:.1f}s"
    _passed(1, "metric oracle equivalence (200 instances)")


def test_c02_dwt_parseval_and_reconstruction():
    rng = np.random.default_rng(20240502)
    start = time.perf_counter()
    for trial in range(100):
        h = int(rng.integers(2, 97))
        w = int(rng.integers(2, 97))
        if trial % 2 == 0:  # force odd sizes in half the trials
            h += 1 - h % 2
            w += 1 - w % 2
        plane = rng.standard_normal((h, w))
        levels = max_levels(w, h)
        pyr = dwt_multilevel(plane, levels)
        coeff = sum(float(np.sum(b * b)) for lvl in pyr.details for b in lvl)
        coeff += float(np.sum(pyr.approximation**2))
        pixel = float(np.sum(plane * plane))
        assert abs(coeff - pixel) / pixel <= 1e-9
        back = haar_synthesis(pyr)
        assert np.sqrt(np.mean((back - plane) ** 2)) <= 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"criterion budget exceeded: {elapsed:.1f}s"
    _passed(2, "orthonormal Haar Parseval + reconstruction (100 planes)")


def test_c03_csf_golden_values():
    assert abs(csf_gain(0.0, 0.0) - 53.9106) <= 1e-3

    rng = np.random.default_rng(20240503)
    grid = build_acsf(96, 80, 32.0)
    fx = (np.arange(96) - 48) / 96 * 32.0
    fy = (np.arange(80) - 40) / 80 * 32.0
    p = ACHROMATIC_DEFAULTS
    for _ in range(1000):
        i = int(rng.integers(0, 80))
        j = int(rng.integers(0, 96))
        expected = csf_oracle(float(fx[j]), float(fy[i]), p.g, p.fm, p.l, p.s, p.w, p.os)
        assert_allclose(grid.gains[i, j], expected, rtol=1e-12, atol=1e-12)

    x = rng.standard_normal((64, 64))
    identity = apply_csf(x, CsfGrid(gains=np.ones((64, 64)), ppd=32.0))
    assert np.abs(identity - x).max() <= 1e-9
    _passed(3, "CSF golden values, scalar oracle, identity filter")


def test_c04_pipeline_determinism_and_invariances(sample10_root):
    params = PipelineParams()
    start = time.perf_counter()
    samples = list(load_dataset(DatasetLayout.at(sample10_root)))
    assert len(samples) == 10

    first = predict_saliency(samples[0].stimulus, params)
    again = predict_saliency(samples[0].stimulus, params)
    assert np.array_equal(first.plane, again.plane), "repeat run not bitwise identical"

    data = samples[1].stimulus.data
    for k in (0.5, 2.0):
        scaled = predict_saliency(RgbImage(k * data), params)
        base = predict_saliency(RgbImage(data), params)
        assert np.array_equal(scaled.plane, base.plane), f"scale invariance broken at k={k}"

    for sample in samples:
        sal = predict_saliency(sample.stimulus, params)
        assert np.isfinite(sal.plane).all()
        assert sal.plane.min() >= 0.0 and sal.plane.max() <= 1.0
        assert sal.plane.shape == (sample.stimulus.height, sample.stimulus.width)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"criterion budget exceeded: {elapsed:.1f}s"
    _passed(4, "pipeline determinism, scale invariance, output range")


def test_c05_sid4vam_popout():
    root = _env_dataset("WECSF_SID4VAM")
    params = PipelineParams()
    samples = list(load_dataset(DatasetLayout.at(root)))
    boxed = [s for s in samples if s.bbox is not None and s.category]
    if len(boxed) < 20 or len({s.category for s in boxed}) < 4:
        pytest.skip(
            "notice: need >= 20 manifest entries with bbox spanning >= 4 categories "
            f"(found {len(boxed)} across {len({s.category for s in boxed})})"
        )
    hits = 0
    for sample in boxed:
        sal = predict_saliency(sample.stimulus, params)
        y, x = np.unravel_index(np.argmax(sal.plane), sal.plane.shape)
        x0, y0, x1, y1 = sample.bbox
        hits += int(x0 <= x < x1 and y0 <= y < y1)
    rate = hits / len(boxed)
    assert rate >= 0.70, f"pop-out hit rate {rate:.2f} below 0.70"
    _passed(5, f"SID4VAM pop-out localization ({rate:.2f} over {len(boxed)} images)")


def test_c06_table3_sid4vam_reproduction():
    root = _env_dataset("WECSF_SID4VAM")
    _, items = _dataset_items(root, _preset_params())
    report = evaluate_items(
        items,
        metrics=("auc_judd", "sauc", "nss", "cc", "sim"),
        settings=MetricSettings(seed=0),
    )
    expected = {"auc_judd": 0.667, "sauc": 0.646, "nss": 1.019, "cc": 0.378, "sim": 0.459}
    for metric, target in expected.items():
        got = report.aggregate[metric]
        assert got is not None, f"{metric} undefined"
        assert abs(got - target) <= 0.05, f"{metric}: {got:.3f} vs {target} +/- 0.05"
    _passed(6, "table reproduction on SID4VAM")


def test_c07_table2_toronto_reproduction():
    root = _env_dataset("WECSF_TORONTO")
    _, items = _dataset_items(root, _preset_params())
    report = evaluate_items(
        items, metrics=("auc_judd", "nss", "sim"), settings=MetricSettings(seed=0)
    )
    expected = {"auc_judd": 0.701, "nss": 0.844, "sim": 0.365}
    for metric, target in expected.items():
        got = report.aggregate[metric]
        assert got is not None
        assert abs(got - target) <= 0.05, f"{metric}: {got:.3f} vs {target} +/- 0.05"
    _passed(7, "table reproduction on TORONTO")


def test_c08_table1_mit1003_spot_check():
    root = _env_dataset("WECSF_MIT1003")
    _, items = _dataset_items(root, _preset_params(), limit=100)
    report = evaluate_items(items, metrics=("auc_judd",), settings=MetricSettings(seed=0))
    got = report.aggregate["auc_judd"]
    assert got is not None
    assert abs(got - 0.705) <= 0.07, f"auc_judd: {got:.3f} vs 0.705 +/- 0.07"
    _passed(8, "table spot check on a 100-image MIT1003 subset")


def test_c09_constant_map_handling():
    flat = np.full((32, 32), 0.25)
    pts = np.array([[4, 4], [20, 11]])
    dens = np.random.default_rng(0).random((32, 32))
    with pytest.raises(MetricUndefined):
        nss(flat, pts)
    with pytest.raises(MetricUndefined):
        cc(flat, dens)
    assert auc_judd(flat, pts) == 0.5

    items = [
        EvalItem(id="flat", saliency=flat, points=pts),
        EvalItem(id="ok", saliency=dens, points=pts),
    ]
    report = evaluate_items(items, settings=MetricSettings(n_splits=10))
    assert report.rows[0]["scores"]["nss"] is None
    assert report.rows[0]["scores"]["auc_judd"] == 0.5
    assert "constant_map_ties" in report.rows[0]["flags"]
    assert report.skip_counts["nss"] == 1
    assert report.aggregate["auc_judd"] is not None
    _passed(9, "constant-map skip handling")


def test_c10_video_mode():
    rng = np.random.default_rng(20240510)
    base = rng.random((128, 128, 3))
    frames = []
    for t in range(50):
        drift = np.roll(base, shift=t, axis=1)
        frames.append(RgbImage.from_array(drift))
    params = PipelineParams()

    start = time.perf_counter()
    outputs = predict_video(frames, params)
    elapsed = time.perf_counter() - start
    fps = len(frames) / elapsed
    assert fps >= 1.0, f"video throughput {fps:.2f} fps below 1 fps"

    statics = [predict_saliency(f, params) for f in frames[:5]]
    for static, framewise in zip(statics, outputs):
        assert np.array_equal(static.plane, framewise.plane), "alpha=0 video differs from static"
    _passed(10, f"video mode ({fps:.1f} frames/s, alpha=0 bitwise static)")
