"""TOML run configuration: load, override, and echo.

Precedence is CLI flag > config file > built-in default. Every run echoes
its fully resolved configuration into the output directory so results are
self-describing and reproducible from the echoed file plus the seed.

Schema (all keys optional)::

    [pipeline]
    working_width = 256
    working_height = 256
    levels = 0                 # 0 = decompose as deep as possible
    include_approximation = true
    ppd = 32.0
    smoothing_sigma = 0.03
    temporal_alpha = 0.0
    fusion_weights = [1.0, 1.0, 1.0]

    [adaptation]
    gain_l = 0.6
    gain_m = 0.6
    gain_s = 0.6

    [csf.achromatic]           # likewise csf.red_green, csf.yellow_blue
    g = 330.74
    fm = 7.28
    l = 0.837
    s = 1.809
    w = 1.0
    os = 6.664

    [metrics]
    epsilon = 2.220446049250313e-16
    n_splits = 100
    density_sigma_deg = 1.0

    [run]
    seed = 0
    jobs = 0                   # 0 = logical cores
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .adaptation import AdaptationParams
from .csf import ACHROMATIC_DEFAULTS, RED_GREEN_DEFAULTS, YELLOW_BLUE_DEFAULTS, CsfParams
from .evaluation import MetricSettings
from .pipeline import PipelineParams

__all__ = ["RunConfig", "load_config_file", "resolve_config", "dumps_toml", "config_as_dict"]


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for one CLI run."""

    pipeline: PipelineParams = PipelineParams()
    metric_settings: MetricSettings = MetricSettings()
    seed: int = 0
    jobs: int = 0  # 0 = logical cores


def load_config_file(path: str | Path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _csf_params(section: dict, defaults: CsfParams) -> CsfParams:
    return CsfParams(
        g=section.get("g", defaults.g),
        fm=section.get("fm", defaults.fm),
        l=section.get("l", defaults.l),
        s=section.get("s", defaults.s),
        w=section.get("w", defaults.w),
        os=section.get("os", defaults.os),
    )


def resolve_config(
    cfg: dict | None = None,
    *,
    ppd: float | None = None,
    gain: float | None = None,
    smoothing: float | None = None,
    include_approximation: bool | None = None,
    seed: int | None = None,
    jobs: int | None = None,
    temporal_alpha: float | None = None,
) -> RunConfig:
    """Merge a parsed config dict with CLI overrides onto the defaults."""
    cfg = cfg or {}
    pip = cfg.get("pipeline", {})
    adapt = cfg.get("adaptation", {})
    csf_cfg = cfg.get("csf", {})
    met = cfg.get("metrics", {})
    run = cfg.get("run", {})

    if gain is not None:
        gains = AdaptationParams.uniform(gain)
    else:
        defaults = AdaptationParams()
        gains = AdaptationParams(
            gain_l=adapt.get("gain_l", defaults.gain_l),
            gain_m=adapt.get("gain_m", defaults.gain_m),
            gain_s=adapt.get("gain_s", defaults.gain_s),
        )

    levels_cfg = pip.get("levels", 0)
    effective_ppd = ppd if ppd is not None else pip.get("ppd", 32.0)
    pipeline = PipelineParams(
        working_width=pip.get("working_width", 256),
        working_height=pip.get("working_height", 256),
        gains=gains,
        levels=None if not levels_cfg else int(levels_cfg),
        include_approximation=(
            include_approximation
            if include_approximation is not None
            else pip.get("include_approximation", True)
        ),
        ppd=effective_ppd,
        acsf=_csf_params(csf_cfg.get("achromatic", {}), ACHROMATIC_DEFAULTS),
        rgcsf=_csf_params(csf_cfg.get("red_green", {}), RED_GREEN_DEFAULTS),
        ybcsf=_csf_params(csf_cfg.get("yellow_blue", {}), YELLOW_BLUE_DEFAULTS),
        fusion_weights=tuple(pip.get("fusion_weights", (1.0, 1.0, 1.0))),
        smoothing_sigma=smoothing if smoothing is not None else pip.get("smoothing_sigma", 0.03),
        temporal_alpha=(
            temporal_alpha if temporal_alpha is not None else pip.get("temporal_alpha", 0.0)
        ),
    )
    effective_seed = seed if seed is not None else run.get("seed", 0)
    metric_settings = MetricSettings(
        epsilon=met.get("epsilon", MetricSettings().epsilon),
        n_splits=met.get("n_splits", 100),
        seed=effective_seed,
        density_sigma_deg=met.get("density_sigma_deg", 1.0),
        ppd=effective_ppd,
    )
    return RunConfig(
        pipeline=pipeline,
        metric_settings=metric_settings,
        seed=effective_seed,
        jobs=jobs if jobs is not None else run.get("jobs", 0),
    )


def config_as_dict(config: RunConfig) -> dict:
    """The echo form of a resolved configuration."""
    p = config.pipeline
    return {
        "pipeline": {
            "working_width": p.working_width,
            "working_height": p.working_height,
            "levels": 0 if p.levels is None else p.levels,
            "include_approximation": p.include_approximation,
            "ppd": p.ppd,
            "smoothing_sigma": p.smoothing_sigma,
            "temporal_alpha": p.temporal_alpha,
            "fusion_weights": list(p.fusion_weights),
        },
        "adaptation": {
            "gain_l": p.gains.gain_l,
            "gain_m": p.gains.gain_m,
            "gain_s": p.gains.gain_s,
        },
        "csf": {
            "achromatic": _csf_dict(p.acsf),
            "red_green": _csf_dict(p.rgcsf),
            "yellow_blue": _csf_dict(p.ybcsf),
        },
        "metrics": {
            "epsilon": config.metric_settings.epsilon,
            "n_splits": config.metric_settings.n_splits,
            "density_sigma_deg": config.metric_settings.density_sigma_deg,
        },
        "run": {"seed": config.seed, "jobs": config.jobs},
    }


def _csf_dict(params: CsfParams) -> dict:
    return {"g": params.g, "fm": params.fm, "l": params.l, "s": params.s, "w": params.w, "os": params.os}


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)} to TOML")


def dumps_toml(data: dict) -> str:
    """Serialize a two-level dict of sections (and dotted subsections)."""
    lines: list[str] = []

    def emit(prefix: str, table: dict) -> None:
        scalars = {k: v for k, v in table.items() if not isinstance(v, dict)}
        subtables = {k: v for k, v in table.items() if isinstance(v, dict)}
        if prefix:
            lines.append(f"[{prefix}]")
        for key, value in scalars.items():
            lines.append(f"{key} = {_toml_value(value)}")
        if scalars or prefix:
            lines.append("")
        for key, sub in subtables.items():
            emit(f"{prefix}.{key}" if prefix else key, sub)

    emit("", data)
    return "\n".join(lines).rstrip() + "\n"


def write_effective_config(outdir: str | Path, config: RunConfig, name: str = "config.toml") -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(dumps_toml(config_as_dict(config)))
    return path
