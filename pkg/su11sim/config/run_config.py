"""Run configuration: one JSON file, validated before any compute starts."""

import hashlib
import json
import logging
import math
import os
from typing import Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from su11sim.errors import ConfigError
from su11sim.observables.sensitivity import DERIVATIVE_NOISE
from su11sim.phasematch.mismatch import Regime, Variant
from su11sim.seeding.specs import DetectionKind, SeedKind

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class DispersionSection(_Section):
    file: Optional[str] = None

    @field_validator("file")
    @classmethod
    def _file_exists(cls, value):
        if value is not None and not os.path.isfile(value):
            raise ValueError(f"dispersion file not found: {value}")
        return value


class DeviceSection(_Section):
    variant: Variant = Variant.COMPENSATED
    length_m: float = Field(default=8e-3, gt=0)
    gap_m: float = Field(default=10e-3, ge=0)
    poling_period_m: Optional[float] = Field(default=None, gt=0)
    grating_phase_rad: float = 0.0
    include_gap_region: bool = False


class PumpSection(_Section):
    wavelength_m: float = Field(default=766e-9, gt=0)
    regime: Regime = Regime.CW
    duration_s: float = Field(default=3.5e-13, gt=0)


class ModulatorSection(_Section):
    chirp_slope: float = 0.0


class GridSection(_Section):
    half_width_rad_s: float = Field(default=4.5e12, gt=0)
    points: int = Field(default=257, ge=16)


class SchmidtSection(_Section):
    k_max: int = Field(default=64, ge=1)
    k_max_cw: Optional[int] = Field(default=None, ge=1)
    first_mode: str = Field(default="tracked", pattern="^(tracked|argmax)$")
    tracking_threshold: float = Field(default=0.5, gt=0, le=1)
    track_depth: int = Field(default=16, ge=1)


class PhiSection(_Section):
    start: float = 0.0
    stop: float = TWO_PI
    count: int = Field(default=401, ge=33)
    endpoint: bool = False

    @model_validator(mode="after")
    def _ordered(self):
        if not self.stop > self.start:
            raise ValueError("phi.stop must exceed phi.start")
        return self


class ObservablesSection(_Section):
    # relative noise of N; slopes a difference of that size could produce count as zero
    derivative_noise: float = Field(default=DERIVATIVE_NOISE, ge=0, lt=1e-3)


class SnlSection(_Section):
    single_section_ratio: float = Field(default=0.5, gt=0)


class SeedSection(_Section):
    kind: SeedKind = SeedKind.VACUUM
    alpha2: float = Field(default=1e6, ge=0)


class DetectionSection(_Section):
    kind: DetectionKind = DetectionKind.DIRECT
    theta_a: float = Field(default=0.0, ge=0, lt=TWO_PI)
    beta_lo: float = Field(default=1.0, gt=0)


class FilterSection(_Section):
    half_width_rad_s: float = Field(gt=0)


class ConvergenceSection(_Section):
    mode: str = Field(default="flag", pattern="^(off|flag|strict)$")
    threshold: float = Field(default=5e-3, gt=0)
    probe_phis: List[float] = Field(
        default_factory=lambda: [math.pi / 3, math.pi / 2, 2 * math.pi / 3],
        min_length=1,
    )
    probe_gamma: Optional[float] = Field(default=None, gt=0)


class RunConfig(_Section):
    """Complete description of one simulation run."""

    dispersion: DispersionSection = Field(default_factory=DispersionSection)
    device: DeviceSection = Field(default_factory=DeviceSection)
    pump: PumpSection = Field(default_factory=PumpSection)
    modulator: ModulatorSection = Field(default_factory=ModulatorSection)
    grid: GridSection = Field(default_factory=GridSection)
    schmidt: SchmidtSection = Field(default_factory=SchmidtSection)
    phi: PhiSection = Field(default_factory=PhiSection)
    observables: ObservablesSection = Field(default_factory=ObservablesSection)
    gammas: List[float] = Field(default_factory=lambda: [1.3], min_length=1)
    snl: SnlSection = Field(default_factory=SnlSection)
    seed: SeedSection = Field(default_factory=SeedSection)
    detection: DetectionSection = Field(default_factory=DetectionSection)
    filter: Optional[FilterSection] = None
    convergence: ConvergenceSection = Field(default_factory=ConvergenceSection)
    output_dir: Optional[str] = None

    @field_validator("gammas")
    @classmethod
    def _positive_gammas(cls, values):
        if any(g <= 0 for g in values):
            raise ValueError("all gamma values must be > 0")
        return values

    @model_validator(mode="after")
    def _seed_detection_pairing(self):
        if (
            self.detection.kind == DetectionKind.HOMODYNE
            and self.seed.kind not in (SeedKind.COHERENT_FIRST_MODE, SeedKind.COHERENT_PLANE_WAVE)
        ):
            raise ValueError("homodyne detection needs a coherent seed")
        if self.seed.kind == SeedKind.COHERENT_PLANE_WAVE and self.detection.kind != DetectionKind.HOMODYNE:
            raise ValueError("a plane-wave seed is only defined with homodyne detection")
        return self


def config_hash(config: RunConfig) -> str:
    """Short SHA-256 digest of the canonical JSON form of ``config``."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(data: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """Apply ``a.b.c=value`` overrides to a raw config dict in place.

    Args:
        data: Parsed JSON object
        overrides: Strings of the form ``dotted.path=value``; values are read
            as JSON literals when possible, otherwise as plain strings

    Returns:
        The same dict, for chaining
    """
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}' is not of the form key.path=value", code="bad_override")
        path, raw = item.split("=", 1)
        keys = [k for k in path.strip().split(".") if k]
        if not keys:
            raise ConfigError(f"override '{item}' has an empty key path", code="bad_override")
        node = data
        for key in keys[:-1]:
            child = node.get(key)
            if not isinstance(child, dict):
                child = {}
                node[key] = child
            node = child
        node[keys[-1]] = _parse_value(raw)
    return data


def _format_validation_error(exc: ValidationError) -> List[str]:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(part) for part in err.get("loc", ())) or "<root>"
        lines.append(f"{loc}: {err.get('msg')}")
    return lines


def validate_run_config(data: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = _format_validation_error(e)
        raise ConfigError(
            "invalid run configuration:\n  " + "\n  ".join(problems),
            code="invalid_config",
            details={"errors": problems},
        ) from e


def load_run_config(path: Optional[str] = None, overrides: Iterable[str] = ()) -> RunConfig:
    """Read, override and validate a run configuration.

    Args:
        path: JSON file; ``None`` starts from the built-in defaults
        overrides: Dotted ``--set`` strings

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: unreadable file, malformed JSON (with line/column) or
            schema violations (with field paths)
    """
    data: Dict[str, Any] = {}
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"config file not found: {path}", code="missing_config")
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"{path}: line {e.lineno}, column {e.colno}: {e.msg}",
                code="malformed_json",
                details={"line": e.lineno, "column": e.colno},
            ) from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a JSON object", code="malformed_json")
        logger.info(f"Configuration loaded from {path}")

    apply_overrides(data, overrides)
    return validate_run_config(data)
