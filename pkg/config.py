"""
Configuration Module

Settings for the weylab command line and the library defaults it forwards.

Values are merged from four layers, lowest precedence first:
1. the defaults declared on Settings,
2. an optional TOML file (either a top-level table or a [weylab] table),
3. explicit command-line flags,
4. environment variables named WEYLAB_<FIELD>, e.g. WEYLAB_TOLERANCE.

Library modules never read Settings; they take explicit keyword arguments whose
defaults are the module-level constants below.

Classes:
    Settings: Validated configuration values.

Functions:
    load_settings: Merge defaults, file, flags and environment into Settings.
"""
import os
import sys
import logging
from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from errors import FormatError

DEFAULT_TOLERANCE: float = 1e-9
DEFAULT_MAX_QUBITS: int = 7
DEFAULT_KMAX: int = 3
DEFAULT_SEED: int = 7
ENV_PREFIX: str = "WEYLAB_"

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    """
    Validated configuration values.

    Attributes:
        tolerance (float): Magnitude below which expansion coefficients are zero.
        max_qubits (int): Largest m for which dense 2^m x 2^m matrices are built.
        kmax (int): Default hierarchy level ceiling for classification.
        seed (int): Seed for every randomized suite.
        log_level (str): Name of the stderr logging level.
    """

    model_config = ConfigDict(extra="forbid")

    tolerance: float = Field(DEFAULT_TOLERANCE, gt=0.0, lt=1.0)
    max_qubits: int = Field(DEFAULT_MAX_QUBITS, ge=1, le=12)
    kmax: int = Field(DEFAULT_KMAX, ge=1, le=6)
    seed: int = Field(DEFAULT_SEED, ge=0)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level '{value}'")
        return level


def _read_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except FileNotFoundError as exc:
        raise FormatError(f"config file '{path}' does not exist") from exc
    except tomllib.TOMLDecodeError as exc:
        raise FormatError(f"config file '{path}' is not valid TOML: {exc}") from exc
    table = raw.get("weylab", raw)
    if not isinstance(table, dict):
        raise FormatError(f"config file '{path}': [weylab] must be a table")
    return dict(table)


def load_settings(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Settings:
    """
    Merge defaults, an optional TOML file, flags and environment variables.

    Args:
        path (Optional[str]): TOML file to read, or None.
        overrides (Optional[Mapping[str, Any]]): Flag values; None entries are ignored.
        environ (Optional[Mapping[str, str]]): Environment to read, defaults to os.environ.

    Returns:
        Settings: The merged, validated settings.

    Raises:
        FormatError: If the file is missing, malformed, or a value fails validation.
    """
    values: Dict[str, Any] = {}
    if path:
        values.update(_read_file(path))
    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})

    env = os.environ if environ is None else environ
    for field in Settings.model_fields:
        key = ENV_PREFIX + field.upper()
        if key in env:
            values[field] = env[key]

    try:
        settings = Settings(**values)
    except ValidationError as exc:
        raise FormatError(f"invalid configuration: {exc}") from exc
    logger.debug("settings resolved to %s", settings.model_dump())
    return settings
