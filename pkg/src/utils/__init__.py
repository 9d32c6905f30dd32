"""Configuration and helper utilities."""

from src.utils.helpers import run_metadata, sha256_digest
from src.utils.settings import DEFAULT_SETTINGS, load_settings

__all__ = ["DEFAULT_SETTINGS", "load_settings", "run_metadata", "sha256_digest"]
