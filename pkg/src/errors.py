"""Exception hierarchy shared by every heighttower module.

Each error class carries the CLI exit code it maps to, so the command-line
front end can translate failures without a lookup table of its own.
"""

from typing import Optional


class HeightTowerError(Exception):
    """Base class for all heighttower failures."""

    exit_code = 1

    def __init__(self, message: str, level: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.level = level

    def __str__(self) -> str:
        if self.level is not None:
            return f"{self.message} (level {self.level})"
        return self.message


class DomainError(HeightTowerError, ValueError):
    """Input outside the mathematical domain or an invalid parameter set."""

    exit_code = 1


class PrecisionExhausted(HeightTowerError, ArithmeticError):
    """A width target or integer bracket was unreachable at max_bits."""

    exit_code = 2

    def __init__(self, message: str, max_bits: int, level: Optional[int] = None):
        super().__init__(message, level=level)
        self.max_bits = max_bits


class IntervalExhausted(HeightTowerError):
    """No eligible prime exists inside a p-bracket."""

    exit_code = 2

    def __init__(self, lo: int, hi: int, d: int, level: Optional[int] = None):
        super().__init__(
            f"no eligible prime in [{lo}, {hi}] for d={d}", level=level
        )
        self.lo = lo
        self.hi = hi
        self.d = d


class SearchExhausted(HeightTowerError):
    """The d-search scanned its whole cap without finding a prime."""

    exit_code = 2


class BitSizeExceeded(HeightTowerError):
    """A p-bracket would contain integers wider than the configured cap."""

    exit_code = 2


class WitnessNotReached(HeightTowerError):
    """The witness search hit its level cap before b dropped below eta."""

    exit_code = 2

    def __init__(self, message: str, level: Optional[int] = None, payload: Optional[str] = None):
        super().__init__(message, level=level)
        self.payload = payload
