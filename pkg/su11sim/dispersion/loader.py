"""Load coefficient sets and tabulated overrides from JSON."""

import json
import logging
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from su11sim.dispersion.model import (
    DispersionModel,
    IndexProfile,
    Polarization,
    SellmeierProfile,
    TabulatedProfile,
    default_ktp,
)
from su11sim.errors import ConfigError, InvalidParameter
from su11sim.utils.validators import validate_json_file

logger = logging.getLogger(__name__)


class DispersionEntry(BaseModel):
    """One polarization's index data as stored on disk."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    pol: Polarization
    type: Literal["sellmeier", "table"]
    coeffs: Optional[List[float]] = None
    points: Optional[List[Tuple[float, float]]] = Field(default=None, min_length=2)
    window: Optional[Tuple[float, float]] = None
    name: Optional[str] = None

    @model_validator(mode="after")
    def _payload_matches_type(self):
        if self.type == "sellmeier" and not self.coeffs:
            raise ValueError("sellmeier entry needs 'coeffs'")
        if self.type == "table" and not self.points:
            raise ValueError("table entry needs 'points'")
        return self

    def to_profile(self, default_window: Tuple[float, float]) -> IndexProfile:
        name = self.name or f"{self.type}-{self.pol.value}"
        if self.type == "sellmeier":
            return SellmeierProfile(tuple(self.coeffs), self.window or default_window, name=name)
        omegas = tuple(p[0] for p in self.points)
        indices = tuple(p[1] for p in self.points)
        return TabulatedProfile(omegas, indices, window=self.window, name=name)


def parse_dispersion_entries(data: Union[dict, list], base: Optional[DispersionModel] = None) -> DispersionModel:
    """Build a model from decoded JSON; polarizations not listed keep ``base``."""
    model = base or default_ktp()
    entries = data if isinstance(data, list) else [data]
    seen = set()
    for raw in entries:
        try:
            entry = DispersionEntry.model_validate(raw)
        except ValidationError as e:
            problems = [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]
            raise ConfigError(
                "invalid dispersion entry:\n  " + "\n  ".join(problems),
                code="invalid_dispersion",
                details={"errors": problems},
            ) from e
        if entry.pol in seen:
            raise ConfigError(f"polarization '{entry.pol.value}' listed twice", code="invalid_dispersion")
        seen.add(entry.pol)
        try:
            model = model.with_profile(entry.pol, entry.to_profile(model.window(entry.pol)))
        except InvalidParameter as e:
            raise ConfigError(str(e.message), code="invalid_dispersion") from e
    return model


def load_dispersion_file(path: str) -> DispersionModel:
    """Load a dispersion override file.

    Args:
        path: JSON file holding one entry or a list of entries

    Returns:
        DispersionModel with the file's profiles over the bulk-KTP default

    Raises:
        ConfigError: missing or malformed file, invalid entries
    """
    check = validate_json_file(path)
    if not check["valid"]:
        raise ConfigError(f"dispersion file {path}: {check['error']}", code="invalid_dispersion")
    with open(path, "r") as f:
        data = json.load(f)
    model = parse_dispersion_entries(data)
    logger.info(f"Dispersion loaded from {path} ({model.name})")
    return model
