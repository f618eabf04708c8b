"""Configuration models and loading."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal, Mapping, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from paraxial_tomo.core.grid import Grid2D
from paraxial_tomo.errors import UnknownKey, ValueOutOfRange
from paraxial_tomo.formats.report import iter_assignments
from paraxial_tomo.inversion.filters import RampFilterSpec
from paraxial_tomo.paraxial.params import WaveParams, uniform_angles


class AppSettings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="PARAXIAL_TOMO_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    threads: Optional[int] = Field(default=None, ge=1, description="Worker threads; overrides --threads")
    log_level: str = Field(default="INFO", description="Log level")
    log_file: Optional[str] = Field(default=None, description="Optional log file path")
    json_logs: bool = Field(default=False, description="Render log events as JSON")


def get_app_settings() -> AppSettings:
    """Load application settings from environment.

    Returns:
        AppSettings object with validated settings.
    """
    return AppSettings()


class ToolConfig(BaseModel):
    """Run description shared by every subcommand.

    Fields are addressed by their dotted file keys (``grid.n``,
    ``wave.l_over_lambda`` ...) and by attribute name in code.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    grid_n: int = Field(default=256, alias="grid.n", ge=8)
    grid_length: float = Field(default=1.0, alias="grid.length", gt=0)
    l_over_lambda: float = Field(default=100.0, alias="wave.l_over_lambda", gt=0)
    angles_count: int = Field(default=360, alias="angles.count", ge=1)
    angles_step_deg: Optional[float] = Field(default=None, alias="angles.step_deg", gt=0)
    filter_kind: Literal["ramlak", "ramlak_hann"] = Field(default="ramlak", alias="filter.kind")
    filter_cutoff: float = Field(default=1.0, alias="filter.cutoff", gt=0, le=1)
    seed: Optional[int] = Field(default=None, alias="seed", ge=0)

    phantom_kind: Literal["shepp-logan", "disk", "gaussian", "raster"] = Field(
        default="shepp-logan", alias="phantom.kind"
    )
    recon_part: Literal["real", "modulus"] = Field(default="real", alias="recon.part")
    recon_calibration_scale: Optional[float] = Field(
        default=None, alias="recon.calibration_scale", gt=0
    )

    riccati_profile: str = Field(default="flat", alias="riccati.profile")
    riccati_step: float = Field(default=1e-3, alias="riccati.step", gt=0)
    riccati_tau_max: float = Field(default=1.0, alias="riccati.tau_max", gt=0)

    xray_offset: float = Field(default=0.0, alias="xray.offset")
    xray_angle_deg: float = Field(default=0.0, alias="xray.angle_deg")

    westervelt_n_x: int = Field(default=800, alias="westervelt.n_x", ge=32)
    westervelt_eps: float = Field(default=1e-3, alias="westervelt.eps", gt=0, le=0.1)

    paths_phantom: Optional[Path] = Field(default=None, alias="paths.phantom")
    paths_image: Optional[Path] = Field(default=None, alias="paths.image")
    paths_sino: Optional[Path] = Field(default=None, alias="paths.sino")
    paths_recon: Optional[Path] = Field(default=None, alias="paths.recon")
    paths_truth: Optional[Path] = Field(default=None, alias="paths.truth")
    paths_report: Optional[Path] = Field(default=None, alias="paths.report")
    paths_pgm: Optional[Path] = Field(default=None, alias="paths.pgm")
    paths_field_pgm: Optional[Path] = Field(default=None, alias="paths.field_pgm")
    paths_sino_pgm: Optional[Path] = Field(default=None, alias="paths.sino_pgm")

    base_dir: Optional[Path] = Field(default=None, exclude=True)

    @classmethod
    def keys(cls) -> set[str]:
        """Every key accepted in a configuration file."""
        return {f.alias for name, f in cls.model_fields.items() if f.alias and name != "base_dir"}

    @classmethod
    def from_mapping(
        cls, data: Mapping[str, Any], base_dir: Optional[Path] = None
    ) -> "ToolConfig":
        """Validate a dotted-key mapping.

        Raises:
            ValueOutOfRange: Naming the first offending key.
        """
        try:
            config = cls.model_validate({**data, "base_dir": base_dir})
        except ValidationError as exc:
            error = exc.errors()[0]
            key = str(error["loc"][0]) if error["loc"] else "config"
            raise ValueOutOfRange(key, error["msg"]) from exc
        step = config.angles_step_deg
        if step is not None and config.angles_count * step > 360.0 + 1e-9:
            raise ValueOutOfRange(
                "angles.step_deg",
                f"{config.angles_count} x {step} degrees exceeds a full turn",
            )
        return config

    def merged(self, overrides: Mapping[str, Any]) -> "ToolConfig":
        """Copy with command-line values applied; ``None`` entries are ignored."""
        data = self.model_dump(by_alias=True, exclude={"base_dir"})
        data.update({key: value for key, value in overrides.items() if value is not None})
        return ToolConfig.from_mapping(data, self.base_dir)

    def path(self, name: str) -> Optional[Path]:
        """``paths.<name>`` resolved against the config file's directory."""
        value: Optional[Path] = getattr(self, f"paths_{name}")
        if value is None:
            return None
        if self.base_dir is not None and not value.is_absolute():
            return self.base_dir / value
        return value

    def grid(self) -> Grid2D:
        return Grid2D.square(self.grid_n, self.grid_length)

    def wave_params(self, length_L: Optional[float] = None) -> WaveParams:
        return WaveParams(length_L or self.grid_length, self.l_over_lambda)

    def angles(self) -> np.ndarray:
        """Uniform angle set; raises ValueOutOfRange when it wraps past a full turn."""
        return uniform_angles(self.angles_count, self.angles_step_deg)

    def filter_spec(self) -> RampFilterSpec:
        return RampFilterSpec(kind=self.filter_kind, cutoff_fraction=self.filter_cutoff)


def parse_config(config_path: Union[str, Path]) -> ToolConfig:
    """Load a ``key = value`` configuration file.

    Args:
        config_path: Path to the UTF-8 configuration file.

    Returns:
        ToolConfig with relative paths anchored at the file's directory.

    Raises:
        FileNotFoundError: If config file doesn't exist.
        ConfigSyntaxError: A line is not an assignment.
        UnknownKey: A key is not recognized (with its line number).
        ValueOutOfRange: A value fails validation.
    """
    config_path = Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    text = config_path.read_text(encoding="utf-8")
    known = ToolConfig.keys()
    data: dict[str, Any] = {}
    for line, key, value in iter_assignments(text):
        if key not in known:
            raise UnknownKey(key, line)
        if value.lower() == "none":
            continue
        data[key] = value

    return ToolConfig.from_mapping(data, config_path.resolve().parent)
