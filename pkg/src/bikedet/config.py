"""Pipeline configuration: one pydantic model per TOML section."""

import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError

DEFAULT_LAYOUT = (
    "fg_count",
    "width",
    "height",
    "aspect_ratio",
    "r_f",
    "r_f_upper",
    "r_f_lower",
    "speed",
)

DEFAULT_STAGE_ORDER = (
    "width",
    "height",
    "aspect_ratio",
    "fg_count",
    "r_f",
    "r_f_upper",
    "r_f_lower",
    "speed",
)

S = TypeVar("S", bound="Section")


class Section(BaseModel):
    """Base for config sections: frozen, unknown keys rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    @classmethod
    def build(cls: Type[S], params: Union[S, Mapping[str, Any], None] = None) -> S:
        """
        Coerce a model instance or plain mapping into this section.

        Args:
            params: Existing section, mapping of overrides, or None for defaults

        Returns:
            Validated section

        Raises:
            ConfigError: If any value violates its constraint
        """
        if isinstance(params, cls):
            return params
        try:
            return cls.model_validate(dict(params or {}))
        except ValidationError as e:
            raise ConfigError(f"invalid [{cls.section_name()}] parameters: {e}") from e

    @classmethod
    def section_name(cls) -> str:
        return cls.__name__.replace("Params", "").lower()


class BackgroundParams(Section):
    """Adaptive GMM parameters (`[background]`)."""

    k: int = Field(default=3, ge=1)
    alpha: float = Field(default=0.005, gt=0.0, lt=1.0)
    t_bg: float = Field(default=0.7, gt=0.0, le=1.0)
    match_sigma: float = Field(default=2.5, gt=0.0)
    initial_variance: float = Field(default=225.0, gt=0.0)
    variance_floor: float = Field(default=4.0, gt=0.0)
    warmup_frames: int = Field(default=50, ge=0)


class SegmentationParams(Section):
    """Aftertreatment and partitioning parameters (`[segmentation]`)."""

    opening_element: Literal["box", "cross"] = "box"
    opening_iterations: int = Field(default=1, ge=0)
    closing_element: Literal["box", "cross"] = "box"
    closing_iterations: int = Field(default=1, ge=0)
    min_area: int = Field(default=50, ge=0)
    max_gap: int = Field(default=5, ge=0)


class ClassifierParams(Section):
    """Single-frame fuser selection and training parameters (`[classifier]`)."""

    method: Literal["svm", "cascade"] = "cascade"
    layout: List[str] = Field(default_factory=lambda: list(DEFAULT_LAYOUT))
    regularization: float = Field(default=1e-3, gt=0.0)
    budget: int = Field(default=200, gt=0)
    per_stage_tpr: float = Field(default=0.99, gt=0.5, le=1.0)
    stage_order: List[str] = Field(default_factory=lambda: list(DEFAULT_STAGE_ORDER))

    @field_validator("layout", "stage_order")
    @classmethod
    def _known_features(cls, names: List[str]) -> List[str]:
        unknown = [n for n in names if n not in DEFAULT_LAYOUT]
        if unknown:
            raise ValueError(f"unknown features: {', '.join(unknown)}")
        if len(set(names)) != len(names):
            raise ValueError("duplicate feature names")
        return names


class TrackingParams(Section):
    """Life cycle, confidence and Kalman parameters (`[tracking]`)."""

    life_cycle: int = Field(default=15, ge=1)
    t_cof: float = Field(default=0.2, ge=0.0, le=1.0)
    match_min_overlap: float = Field(default=0.3, gt=0.0, le=1.0)
    process_noise: float = Field(default=1.0, gt=0.0)
    measurement_noise: float = Field(default=4.0, gt=0.0)
    initial_velocity_variance: float = Field(default=100.0, gt=0.0)


class EvalParams(Section):
    """Ground-truth matching protocol and gates (`[eval]`)."""

    overlap_min: float = Field(default=0.3, gt=0.0, le=1.0)
    min_overlap_frames: int = Field(default=3, ge=1)
    thresholds: List[float] = Field(default_factory=lambda: [0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    budget_ms: float = Field(default=30.0, gt=0.0)

    @field_validator("thresholds")
    @classmethod
    def _unit_interval(cls, values: List[float]) -> List[float]:
        if any(v < 0.0 or v > 1.0 for v in values):
            raise ValueError("thresholds must lie in [0, 1]")
        return values


class PipelineConfig(Section):
    """Every section of the config file."""

    background: BackgroundParams = Field(default_factory=BackgroundParams)
    segmentation: SegmentationParams = Field(default_factory=SegmentationParams)
    classifier: ClassifierParams = Field(default_factory=ClassifierParams)
    tracking: TrackingParams = Field(default_factory=TrackingParams)
    eval: EvalParams = Field(default_factory=EvalParams)


PIPELINE_SECTIONS = ("background", "segmentation", "classifier", "tracking", "eval")


def read_toml(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a TOML file, raising ConfigError with the path on failure."""
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML in {path}: {e}") from e


def load_config(path: Union[str, Path, None] = None) -> PipelineConfig:
    """
    Load the pipeline sections of a config file.

    Tables other than the pipeline sections (per-command flag tables such as
    `[detect]`) are ignored here; the CLI consumes them.

    Args:
        path: TOML file, or None for all defaults

    Returns:
        Validated pipeline configuration
    """
    if path is None:
        return PipelineConfig()
    data = read_toml(path)
    sections = {name: data[name] for name in PIPELINE_SECTIONS if name in data}
    return PipelineConfig.build(sections)
