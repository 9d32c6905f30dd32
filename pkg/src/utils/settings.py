"""Layered configuration: defaults, then a YAML file, then the environment."""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml
from dotenv import find_dotenv, load_dotenv

from src.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS: Dict[str, Dict[str, Any]] = {
    "precision": {"initial_bits": 64, "max_bits": 65536, "target_width": 1e-12},
    "tower": {"first_d": 2, "max_p_bits": 40000, "d_scan_cap": 1_000_000, "scan_jobs": 1},
    "certify": {"witness_eta": 0.5, "level_cap": 10},
    "output": {"format": "json"},
}

# environment variable -> (section, key, parser)
ENV_OVERRIDES = {
    "HEIGHTTOWER_MAX_BITS": ("precision", "max_bits", int),
    "HEIGHTTOWER_SCAN_JOBS": ("tower", "scan_jobs", int),
}


def _merge(base: Dict[str, Dict[str, Any]], overlay: Mapping[str, Any], origin: str) -> None:
    for section, values in overlay.items():
        if section not in base:
            raise DomainError(f"{origin}: unknown settings section {section!r}")
        if not isinstance(values, Mapping):
            raise DomainError(f"{origin}: section {section!r} must be a mapping")
        for key, value in values.items():
            if key not in base[section]:
                raise DomainError(f"{origin}: unknown setting {section}.{key}")
            base[section][key] = value


def read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    """Load a YAML settings file; an empty file yields no overrides."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = yaml.safe_load(handle)
        except yaml.YAMLError as e:
            raise DomainError(f"{path}: invalid YAML ({e})") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise DomainError(f"{path}: top level must be a mapping")
    return data


def load_settings(
    config_path: Optional[Union[str, Path]] = None,
    environ: Optional[Mapping[str, str]] = None,
    use_dotenv: bool = True,
) -> Dict[str, Dict[str, Any]]:
    """Resolve settings from all layers, later layers winning.

    Args:
        config_path: Optional YAML file.
        environ: Environment mapping; defaults to ``os.environ``.
        use_dotenv: Load a ``.env`` file from the working directory first.

    Returns:
        Nested dict shaped like DEFAULT_SETTINGS.

    Raises:
        DomainError: For unknown keys, invalid YAML or malformed env values.
        OSError: If config_path cannot be read.
    """
    settings = copy.deepcopy(DEFAULT_SETTINGS)
    if config_path is not None:
        _merge(settings, read_yaml(config_path), str(config_path))
        logger.debug("loaded settings from %s", config_path)

    if use_dotenv and environ is None:
        dotenv_path = find_dotenv(usecwd=True)
        if dotenv_path:
            load_dotenv(dotenv_path, override=False)
    env = os.environ if environ is None else environ

    for name, (section, key, parse) in ENV_OVERRIDES.items():
        raw = env.get(name)
        if raw is None or raw == "":
            continue
        try:
            settings[section][key] = parse(raw)
        except ValueError as e:
            raise DomainError(f"{name}={raw!r} is not a valid {parse.__name__}") from e
    return settings
