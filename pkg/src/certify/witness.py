"""Search for a level whose generator has f_(gamma-epsilon) value below eta."""

import logging
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Optional, Union

from src.certify.metrics import b_metric
from src.errors import DomainError
from src.numerics.bigreal import Enclosure, as_fraction
from src.tower.construction import iter_tower
from src.tower.params import ConstructionParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessResult:
    """Outcome of :func:`witness_index`.

    When ``reached`` is False, ``index`` and ``b`` are None and the
    smallest b seen is reported through ``best_index`` and ``best_b``.
    """

    eta: Decimal
    reached: bool
    index: Optional[int]
    b: Optional[Enclosure]
    best_index: int
    best_b: Enclosure
    levels_built: int


def witness_index(
    params: ConstructionParams,
    eta: Union[Decimal, float, str],
    level_cap: int = 10,
) -> WitnessResult:
    """Smallest level i <= level_cap with ``b_i.hi < eta``.

    The tower is extended past the horizon as needed. A b enclosure that
    straddles eta is recomputed once at escalated precision.
    """
    try:
        eta = Decimal(repr(eta)) if isinstance(eta, float) else Decimal(eta)
        positive = eta.is_finite() and eta > 0
    except (InvalidOperation, TypeError, ValueError) as e:
        raise DomainError(f"eta must be a positive real, got {eta!r}") from e
    if not positive:
        raise DomainError(f"eta must be positive, got {eta}")
    if int(level_cap) < 1:
        raise DomainError(f"level cap must be at least 1, got {level_cap}")
    threshold = as_fraction(eta)

    best_index, best_b = 0, None
    built = 0
    for level in iter_tower(params, limit=level_cap):
        built = level.index
        b = b_metric(level, params)
        verdict = b.compare(threshold)
        if verdict is None:
            b = b_metric(level, params, params.precision.escalated())
            verdict = b.compare(threshold)
        if best_b is None or b.hi < best_b.hi:
            best_index, best_b = level.index, b
        if verdict == -1:
            logger.info("witness reached at level %d", level.index)
            return WitnessResult(eta, True, level.index, b, best_index, best_b, built)
    logger.info("witness not reached within %d levels", built)
    return WitnessResult(eta, False, None, None, best_index, best_b, built)
