"""Small helpers shared by the CLI."""

import hashlib
import platform
from datetime import datetime, timezone
from importlib import metadata
from typing import Dict, Sequence

TRACKED_PACKAGES = ("mpmath", "gmpy2", "pydantic", "pandas", "joblib")


def sha256_digest(payload: str) -> str:
    """Hex SHA-256 of a text payload encoded as UTF-8."""
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def package_versions(names: Sequence[str] = TRACKED_PACKAGES) -> Dict[str, str]:
    versions = {"python": platform.python_version()}
    for name in names:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def run_metadata(payload: str, command: Sequence[str]) -> Dict[str, object]:
    """Sidecar record for an output payload; the payload itself stays run-independent."""
    return {
        "sha256": sha256_digest(payload),
        "bytes": len(payload.encode("utf-8")),
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": list(command),
        "versions": package_versions(),
    }
