"""Versioned plain-text model files for both fuser kinds."""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Tuple, Union

from jinja2 import Environment

from .. import __version__
from ..errors import BikedetError, ConfigError, ModelFormatError
from ..features import FeatureLayout
from .cascade import Cascade, CascadeStage
from .svm import SvmModel

logger = logging.getLogger(__name__)

MAGIC = "bikedet-model"
FORMAT_VERSION = 1

Model = Union[SvmModel, Cascade]

MODEL_TEMPLATE = """\
# Generated by bikedet {{ version }}
{{ magic }} {{ format_version }}
kind = {{ model.kind }}
{% for section, m in svm_sections %}
{% if section %}
[{{ section }}]
{% endif %}
layout = {{ m.layout }}
mean = {{ m.mean | map("fmt") | join(" ") }}
std = {{ m.std | map("fmt") | join(" ") }}
w = {{ m.w | map("fmt") | join(" ") }}
b = {{ m.b | fmt }}
{% if m.objective is not none %}
objective = {{ m.objective | fmt }}
{% endif %}
iterations = {{ m.iterations }}
{% for warning in m.warnings %}
warning = {{ warning }}
{% endfor %}
{% endfor %}
{% for stage in stages %}
stage = {{ stage.feature }} {{ stage.lo | fmt }} {{ stage.hi | fmt }}
{% endfor %}
"""


def _fmt(value: float) -> str:
    return repr(float(value))


def render_model(model: Model) -> str:
    """Model file text for an SVM or a cascade."""
    env = Environment(trim_blocks=True, keep_trailing_newline=True)
    env.filters["fmt"] = _fmt
    template = env.from_string(MODEL_TEMPLATE)

    svm_sections = []
    if isinstance(model, SvmModel):
        svm_sections.append(("", model))
        if model.fallback is not None:
            svm_sections.append(("fallback", model.fallback))
    return template.render(
        model=model,
        magic=MAGIC,
        format_version=FORMAT_VERSION,
        version=__version__,
        svm_sections=svm_sections,
        stages=model.stages if isinstance(model, Cascade) else (),
    )


def save_model(model: Model, path: Union[str, Path]) -> str:
    """
    Write a trained model to disk.

    Args:
        model: SvmModel or Cascade
        path: Destination file; parent directories are created

    Returns:
        Path to the written file
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render_model(model), encoding="utf-8")
    except OSError as e:
        raise BikedetError(f"cannot write model {path}: {e}") from e
    logger.info("wrote %s model to %s", model.kind, path)
    return str(path)


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in text.split())


def _svm_from_fields(fields: Dict[str, List[str]]) -> SvmModel:
    def one(key: str) -> str:
        values = fields.get(key)
        if not values:
            raise ModelFormatError(f"missing key {key!r}")
        return values[-1]

    objective = fields.get("objective")
    return SvmModel(
        layout=FeatureLayout.parse(one("layout")),
        mean=_floats(one("mean")),
        std=_floats(one("std")),
        w=_floats(one("w")),
        b=float(one("b")),
        warnings=tuple(fields.get("warning", [])),
        objective=float(objective[-1]) if objective else None,
        iterations=int(fields.get("iterations", ["0"])[-1]),
    )


def parse_model(text: str) -> Model:
    """
    Parse model file text.

    Raises:
        ModelFormatError: Wrong magic or version, unknown kind, or malformed values
    """
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise ModelFormatError("empty model file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != MAGIC:
        raise ModelFormatError(f"not a bikedet model file (header {lines[0]!r})")
    if header[1] != str(FORMAT_VERSION):
        raise ModelFormatError(f"unsupported model format version {header[1]}")

    sections: Dict[str, Dict[str, List[str]]] = {"": {}}
    current = sections[""]
    for line in lines[1:]:
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1], {})
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ModelFormatError(f"expected 'key = value', got {line!r}")
        current.setdefault(key.strip(), []).append(value.strip())

    main = sections[""]
    kind = main.get("kind", [""])[-1]
    try:
        if kind == "svm":
            model = _svm_from_fields(main)
            if "fallback" in sections:
                fallback = _svm_from_fields(sections["fallback"])
                model = replace(model, fallback=fallback)
            return model
        if kind == "cascade":
            stages = []
            for entry in main.get("stage", []):
                parts = entry.split()
                if len(parts) != 3:
                    raise ModelFormatError(f"expected 'stage = feature lo hi', got {entry!r}")
                stages.append(CascadeStage(parts[0], float(parts[1]), float(parts[2])))
            unknown = [s.feature for s in stages if s.feature not in FeatureLayout().names]
            if unknown:
                raise ModelFormatError(f"unknown stage features: {', '.join(unknown)}")
            return Cascade(tuple(stages))
    except (ValueError, ConfigError) as e:
        raise ModelFormatError(f"malformed {kind} model: {e}") from e
    raise ModelFormatError(f"unknown model kind {kind!r}")


def load_model(path: Union[str, Path]) -> Model:
    """Read a model written by `save_model`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise BikedetError(f"cannot read model {path}: {e}") from e
    try:
        return parse_model(text)
    except ModelFormatError as e:
        raise ModelFormatError(f"{path}: {e}") from e
