#!/usr/bin/env python3
"""
Experiment configuration.

An ExperimentConfig is resolved in three layers, later layers winning:

1. the figure template defaults (mixedness.templates),
2. a config file (JSON, TOML or flat ``key = value`` text),
3. command-line overrides.

Every problem is reported as a ConfigError naming the field and, for file
input, the line.
"""

import json
import logging
import math
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, get_args, get_origin

from mixedness.errors import ConfigError
from mixedness.states import MAX_SPINS
from mixedness.templates import get_all_figures, get_figure_defaults

logger = logging.getLogger(__name__)

MODELS = ("two_level", "spin_chain", "matrix")
# Model each figure is drawn from; only custom runs choose freely.
FIGURE_MODELS = {
    "fig1": "two_level", "fig2": "two_level", "fig6": "two_level", "fig7": "two_level",
    "fig3": "spin_chain", "fig4": "spin_chain", "fig5": "spin_chain",
}
# Fields that only affect where results go; kept out of the CSV header.
OUTPUT_FIELDS = ("out", "emit_plot")
MIN_MESH_FIG1 = 16

_PI_PATTERN = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$", re.IGNORECASE)
_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


@dataclass
class ExperimentConfig:
    """
    Every physical, grid and output parameter of one run.

    Two-level runs use γ = 1, so rates and times are in units of γ and 1/γ.
    Spin-chain runs measure time in units of 1/J; ``ising_ratio`` is Jz/J.
    """

    experiment: str = "fig2"
    model: str = "two_level"

    # two-level system
    detuning_over_gamma: float = 0.5
    omega_values: List[float] = field(default_factory=lambda: [1.0])
    r: float = 0.25
    theta_values: List[float] = field(default_factory=lambda: [math.pi / 4])
    phi: float = math.pi / 4

    # spin chain
    spins: int = 8
    subsystem_sizes: List[int] = field(default_factory=lambda: [5])
    mixing_values: List[float] = field(default_factory=lambda: [0.5])
    coupling: float = 1.0
    ising_ratio: float = 0.5
    anisotropy: float = 0.75
    transverse_field: float = 0.0

    # arbitrary matrices (model = "matrix")
    state_file: str = ""
    hamiltonian_file: str = ""
    subsystem_dims: List[int] = field(default_factory=list)

    # grids
    t_max: float = 0.5
    steps: int = 400
    mesh: int = 41
    fd_step: float = 1e-4
    with_exact: bool = False

    # output
    out: str = ""
    emit_plot: bool = False

    def validate(self) -> "ExperimentConfig":
        """
        Check every field against its allowed range.

        Returns:
            self, for chaining

        Raises:
            ConfigError: Naming the first offending field
        """
        if self.experiment not in get_all_figures():
            raise ConfigError(f"unknown experiment '{self.experiment}' "
                              f"(choose from {', '.join(get_all_figures())})", field="experiment")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model '{self.model}' (choose from {', '.join(MODELS)})", field="model")
        required = FIGURE_MODELS.get(self.experiment)
        if required is not None and self.model != required:
            raise ConfigError(f"{self.experiment} uses model '{required}'", field="model")

        if not 0.0 <= self.r <= 1.0:
            raise ConfigError(f"r={self.r} outside [0, 1]", field="r")
        if not self.theta_values or any(not 0.0 <= th <= math.pi for th in self.theta_values):
            raise ConfigError("every theta must lie in [0, pi]", field="theta_values")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ConfigError(f"phi={self.phi} outside [0, 2pi)", field="phi")
        if not self.omega_values or any(not math.isfinite(w) or w < 0.0 for w in self.omega_values):
            raise ConfigError("omega_values must be finite and nonnegative", field="omega_values")
        if not math.isfinite(self.detuning_over_gamma):
            raise ConfigError("detuning must be finite", field="detuning_over_gamma")

        if not 2 <= self.spins <= MAX_SPINS:
            raise ConfigError(f"spins={self.spins} outside [2, {MAX_SPINS}]", field="spins")
        if not self.subsystem_sizes or any(not 1 <= k < self.spins for k in self.subsystem_sizes):
            raise ConfigError(f"every subsystem size must lie in [1, {self.spins - 1}]", field="subsystem_sizes")
        if not self.mixing_values or any(not 0.0 <= p <= 1.0 for p in self.mixing_values):
            raise ConfigError("every mixing value must lie in [0, 1]", field="mixing_values")
        if not -1.0 <= self.anisotropy <= 1.0:
            raise ConfigError(f"anisotropy={self.anisotropy} outside [-1, 1]", field="anisotropy")
        for name in ("coupling", "ising_ratio", "transverse_field"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite", field=name)
        if self.model == "spin_chain" and self.coupling == 0.0:
            raise ConfigError("time is measured in units of 1/J, so J must be nonzero", field="coupling")

        if self.model == "matrix" and self.experiment == "custom":
            for name in ("state_file", "hamiltonian_file"):
                if not getattr(self, name):
                    raise ConfigError("required for model 'matrix'", field=name)
        if any(d < 1 for d in self.subsystem_dims):
            raise ConfigError("subsystem dimensions must be positive", field="subsystem_dims")

        if not self.t_max > 0.0:
            raise ConfigError(f"t_max={self.t_max} must be positive", field="t_max")
        if self.steps < 2:
            raise ConfigError(f"steps={self.steps} must be at least 2", field="steps")
        min_mesh = MIN_MESH_FIG1 if self.experiment == "fig1" else 2
        if self.mesh < min_mesh:
            raise ConfigError(f"mesh={self.mesh} must be at least {min_mesh}", field="mesh")
        if not self.fd_step > 0.0:
            raise ConfigError(f"fd_step={self.fd_step} must be positive", field="fd_step")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def header_items(self) -> List[Tuple[str, str]]:
        """(name, text) pairs of every result-affecting field, floats with 17 digits."""
        return [(f.name, format_value(getattr(self, f.name)))
                for f in fields(self) if f.name not in OUTPUT_FIELDS]


# ============================================================================
# VALUE PARSING
# ============================================================================

def _field_kinds() -> Dict[str, str]:
    kinds = {}
    for f in fields(ExperimentConfig):
        if get_origin(f.type) is list:
            kinds[f.name] = f"list[{get_args(f.type)[0].__name__}]"
        else:
            kinds[f.name] = f.type.__name__
    return kinds


FIELD_KINDS = _field_kinds()


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, (list, tuple)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def _parse_float(text: str) -> float:
    match = _PI_PATTERN.match(text)
    if match:
        factor = match.group(1)
        numerator = float(factor) if factor not in ("", "+", "-") else (-1.0 if factor == "-" else 1.0)
        denominator = float(match.group(2)) if match.group(2) else 1.0
        return numerator * math.pi / denominator
    return float(text)


def _scalar(name: str, kind: str, value: Any, line: Optional[int]) -> Any:
    try:
        if kind == "bool":
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise ValueError(value)
        if kind == "int":
            if isinstance(value, bool):
                raise ValueError(value)
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value) if not isinstance(value, str) else int(value.strip())
        if kind == "float":
            if isinstance(value, bool):
                raise ValueError(value)
            return _parse_float(value) if isinstance(value, str) else float(value)
        return str(value).strip().strip('"').strip("'")
    except (TypeError, ValueError):
        raise ConfigError(f"cannot read {value!r} as {kind}", field=name, line=line)


def coerce_value(name: str, value: Any, line: Optional[int] = None) -> Any:
    """
    Convert a raw value (from a file or a flag) to the field's type.

    Lists accept sequences or comma-separated text; floats accept multiples
    of pi such as ``3pi/4``.

    Raises:
        ConfigError: For an unknown field or an unreadable value
    """
    if name not in FIELD_KINDS:
        raise ConfigError("unknown field", field=name, line=line)
    kind = FIELD_KINDS[name]
    if kind.startswith("list["):
        item_kind = kind[5:-1]
        if isinstance(value, str):
            items = [part for part in value.replace("[", "").replace("]", "").split(",") if part.strip()]
        elif isinstance(value, (list, tuple)):
            items = list(value)
        else:
            items = [value]
        return [_scalar(name, item_kind, item, line) for item in items]
    return _scalar(name, kind, value, line)


# ============================================================================
# FILE LOADING
# ============================================================================

RawValues = Dict[str, Tuple[Any, Optional[int]]]


def _load_json(text: str) -> RawValues:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg}", line=e.lineno)
    if not isinstance(data, dict):
        raise ConfigError("top level of a JSON config must be an object")
    lines = _key_lines(text)
    return {k: (v, lines.get(k)) for k, v in data.items() if not k.startswith("_")}


def _load_toml(text: str) -> RawValues:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML: {e}")
    lines = _key_lines(text)
    return {k: (v, lines.get(k)) for k, v in data.items() if not k.startswith("_")}


def _load_key_value(text: str) -> RawValues:
    values: RawValues = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("missing key before '='", line=number)
        if key in values:
            raise ConfigError("field given twice", field=key, line=number)
        values[key] = (value, number)
    return values


def _key_lines(text: str) -> Dict[str, int]:
    """First line on which each key appears (best effort, for diagnostics)."""
    lines: Dict[str, int] = {}
    pattern = re.compile(r'^\s*"?([A-Za-z_][A-Za-z0-9_]*)"?\s*[:=]')
    for number, raw in enumerate(text.splitlines(), start=1):
        match = pattern.match(raw)
        if match:
            lines.setdefault(match.group(1), number)
    return lines


def load_config_file(path: str) -> RawValues:
    """
    Read a config file into {field: (raw value, line)}.

    The format follows the suffix: ``.json``, ``.toml``, anything else is
    read as ``key = value`` lines with ``#`` comments. Keys starting with
    an underscore are comments in JSON and TOML.

    Raises:
        ConfigError: If the file is missing or malformed
    """
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    text = config_path.read_text(encoding="utf-8")
    suffix = config_path.suffix.lower()
    if suffix == ".json":
        values = _load_json(text)
    elif suffix == ".toml":
        values = _load_toml(text)
    else:
        values = _load_key_value(text)
    logger.debug(f"loaded {len(values)} fields from {config_path}")
    return values


def resolve_config(experiment: str, file_values: Optional[RawValues] = None,
                   overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """
    Build and validate the config of one run.

    Args:
        experiment: Experiment id; selects the template defaults
        file_values: Output of load_config_file, or None
        overrides: Field values from the command line, or None

    Returns:
        A validated ExperimentConfig

    Raises:
        ConfigError: For unknown fields, unreadable values or range violations
    """
    if experiment not in get_all_figures():
        raise ConfigError(f"unknown experiment '{experiment}'", field="experiment")
    values: Dict[str, Any] = {"experiment": experiment}
    if experiment in FIGURE_MODELS:
        values["model"] = FIGURE_MODELS[experiment]
    values.update(get_figure_defaults(experiment))

    for name, (raw, line) in (file_values or {}).items():
        if name == "experiment":
            if coerce_value(name, raw, line) != experiment:
                raise ConfigError(f"file is for '{raw}', not '{experiment}'", field=name, line=line)
            continue
        values[name] = coerce_value(name, raw, line)
    for name, raw in (overrides or {}).items():
        values[name] = coerce_value(name, raw)

    return ExperimentConfig(**values).validate()
