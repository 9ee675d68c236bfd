import sys
from pathlib import Path

import numpy as np
import pytest

TESTS_DIR = Path(__file__).resolve().parent
REPO_ROOT = TESTS_DIR.parent
SAMPLE10 = REPO_ROOT / "data" / "sample10"

sys.path.insert(0, str(TESTS_DIR))  # make reference/stimuli importable


@pytest.fixture(scope="session")
def sample10_root() -> Path:
    if not (SAMPLE10 / "manifest.json").is_file():
        pytest.skip("bundled sample dataset missing (run scripts/make_sample_dataset.py)")
    return SAMPLE10


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
