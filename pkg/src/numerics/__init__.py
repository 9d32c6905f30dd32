"""Certified real arithmetic."""

from src.numerics.bigreal import (
    Enclosure,
    IntegerBracket,
    NeedsMorePrecision,
    PrecisionPolicy,
    enclose,
    exp_enc,
    integer_bracket,
    log_enc,
    pow_enc,
)

__all__ = [
    "Enclosure",
    "IntegerBracket",
    "NeedsMorePrecision",
    "PrecisionPolicy",
    "enclose",
    "exp_enc",
    "integer_bracket",
    "log_enc",
    "pow_enc",
]
