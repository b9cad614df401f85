"""
This module provides utilities for handling motionkit configuration files
in JSON format and the numeric settings shared by every solver.

Main functions:
- load_config: Loads a JSON configuration file.
- save_config: Saves a dictionary to a JSON configuration file.
- configure: Loads and validates a settings file and makes it active.
- scoped_settings: Temporarily activates settings with overrides.
- get_settings: Returns the active numeric settings.
- get_tolerance: Returns the global tolerance, honoring MOTIONKIT_TOL.
"""

import os
import json
from contextlib import contextmanager
from typing import Iterator

from pydantic import BaseModel, ConfigDict, Field

from core.log import get_logger

DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'config'
)
DEFAULT_CONFIG_NAME = 'motionkit'
TOLERANCE_ENV = 'MOTIONKIT_TOL'

logger = get_logger(__name__)


class Settings(BaseModel):
    """Numeric defaults of the library and the command-line front end."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    tolerance: float = Field(1e-9, gt=0)
    fd_step: float = Field(1e-5, gt=0)
    fd_tolerance: float = Field(1e-6, gt=0)
    rank_tolerance: float = Field(1e-7, gt=0)
    root_cluster_tolerance: float = Field(1e-7, gt=0)
    newton_grid: int = Field(5, ge=1)
    newton_box: float = Field(3.0, gt=0)
    newton_max_iter: int = Field(60, ge=1)
    dedup_distance: float = Field(1e-6, gt=0)
    svg_scale: float = Field(100.0, gt=0)
    samples: int = Field(41, ge=2)


_active = Settings()
_explicit_tolerance = False


def load_config(config_path: str, name: str) -> dict:
    """Loads a JSON configuration file and returns its content.

    Args:
        config_path (str): Folder holding the configuration files.
        name (str): Configuration name, without the `.json` extension.

    Returns:
        dict: Content of the JSON file as a dictionary.

    Raises:
        FileNotFoundError: If the folder or the file does not exist.
        json.JSONDecodeError: If the file is not a valid JSON.
    """
    if not os.path.exists(config_path):
        raise FileNotFoundError(
            f'The configuration folder {config_path} was not found.'
        )

    full_config_path = os.path.join(config_path, f'{name}.json')

    if not os.path.exists(full_config_path):
        raise FileNotFoundError(
            f'The configuration file {full_config_path} was not found.'
        )

    with open(full_config_path, 'r', encoding='utf-8') as file:
        return json.load(file)


def save_config(config_path: str, config_data: dict, name: str) -> None:
    """Saves a dictionary to a JSON configuration file.

    Args:
        config_path (str): Folder holding the configuration files.
        config_data (dict): Configuration data to be saved.
        name (str): Configuration name, without the `.json` extension.

    Raises:
        TypeError: If the data is not serializable to JSON.
    """
    os.makedirs(config_path, exist_ok=True)
    full_config_path = os.path.join(config_path, f'{name}.json')

    with open(full_config_path, 'w', encoding='utf-8') as file:
        json.dump(config_data, file, indent=4)


def configure(
    config_path: str = DEFAULT_CONFIG_PATH, name: str = DEFAULT_CONFIG_NAME
) -> Settings:
    """Loads a settings file, validates it and makes it the active one.

    Args:
        config_path (str): Folder holding the configuration files.
        name (str): Configuration name.

    Returns:
        Settings: The validated settings.

    Raises:
        FileNotFoundError: If the settings file does not exist.
        pydantic.ValidationError: On unknown keys or invalid values.
    """
    global _active
    _active = Settings(**load_config(config_path, name))
    logger.info('[CONFIG] loaded %s/%s.json', config_path, name)
    return _active


def reset_settings() -> None:
    """Restores the built-in defaults."""
    global _active, _explicit_tolerance
    _active = Settings()
    _explicit_tolerance = False


@contextmanager
def scoped_settings(**updates) -> Iterator[Settings]:
    """Activates a validated copy of the settings with `updates` applied and
    restores the previous settings on exit, including any `configure` call
    made inside the block.

    A tolerance passed here takes precedence over MOTIONKIT_TOL.

    Raises:
        pydantic.ValidationError: On unknown keys or invalid values.
    """
    global _active, _explicit_tolerance
    previous = (_active, _explicit_tolerance)
    _active = Settings(**{**_active.model_dump(), **updates})
    _explicit_tolerance = _explicit_tolerance or 'tolerance' in updates
    try:
        yield _active
    finally:
        _active, _explicit_tolerance = previous


def get_settings() -> Settings:
    """Returns the active settings."""
    return _active


def get_tolerance() -> float:
    """Returns the global tolerance.

    A tolerance set through scoped_settings comes first, then the
    environment variable MOTIONKIT_TOL, then the configured value.

    Raises:
        ValueError: If MOTIONKIT_TOL is not a positive number.
    """
    if _explicit_tolerance:
        return _active.tolerance
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or raw.strip() == '':
        return _active.tolerance
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(
            f'{TOLERANCE_ENV} must be a positive number, got {raw!r}'
        ) from exc
    if value <= 0:
        raise ValueError(f'{TOLERANCE_ENV} must be positive, got {raw!r}')
    return value
