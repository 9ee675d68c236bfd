"""Bottom-up saliency prediction from opponent colors, wavelet energy and
contrast sensitivity filtering, plus the standard fixation-metric suite."""

from .adaptation import AdaptationParams, von_kries_adapt
from .csf import CsfGrid, CsfParams, apply_csf, build_acsf, build_chromatic_csf
from .imagecore import RgbImage, SaliencyMap, load_image, normalize_minmax, resize_bilinear
from .metrics import FixationData, MetricUndefined
from .opponent import OpponentImage, rgb_to_opponent
from .pipeline import PipelineParams, predict_saliency, predict_video
from .wavelet import WaveletPyramid, dwt_multilevel, max_levels, wavelet_energy_map

__version__ = "0.1.0"

__all__ = [
    "AdaptationParams",
    "CsfGrid",
    "CsfParams",
    "FixationData",
    "MetricUndefined",
    "OpponentImage",
    "PipelineParams",
    "RgbImage",
    "SaliencyMap",
    "WaveletPyramid",
    "apply_csf",
    "build_acsf",
    "build_chromatic_csf",
    "dwt_multilevel",
    "load_image",
    "max_levels",
    "normalize_minmax",
    "predict_saliency",
    "predict_video",
    "resize_bilinear",
    "rgb_to_opponent",
    "von_kries_adapt",
    "wavelet_energy_map",
]
