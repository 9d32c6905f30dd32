"""Certified per-level metrics of a radical tower.

For a level (d, p) and exponents gamma, epsilon:

* ``a = d^(gamma-1) (log p - log d)``, the Northcott growth term;
* ``b = d^(gamma-epsilon-1) log p``, the f_(gamma-epsilon) value of
  ``p^(1/d)``;
* ``silverman_floor = log p / (2d) - log d / (2(d-1))``, a lower bound for
  the height of any number whose minimal containing level is this one;
* ``f_floor = (a - 1) / 2``, the relaxed f_gamma floor.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from joblib import Parallel, delayed

from src.heights.weil import f_value
from src.numerics.bigreal import Enclosure, PrecisionPolicy, log_enc, pow_enc
from src.tower.construction import TowerLevel
from src.tower.params import ConstructionParams

logger = logging.getLogger(__name__)


class CheckOutcome(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"


CHECK_NAMES = ("identity", "rewrite", "chain", "generator_floor")


@dataclass(frozen=True)
class LevelMetrics:
    index: int
    a: Enclosure
    b: Enclosure
    silverman_floor: Enclosure
    f_floor: Enclosure
    witness_f: Enclosure
    silverman_rewrite: Enclosure
    chain_lhs: Enclosure
    generator_f: Enclosure
    checks: Dict[str, CheckOutcome] = field(default_factory=dict)
    escalated: bool = False

    @property
    def all_hold(self) -> bool:
        return all(outcome is CheckOutcome.HOLDS for outcome in self.checks.values())


def _overlap(left: Enclosure, right: Enclosure) -> CheckOutcome:
    return CheckOutcome.HOLDS if left.overlaps(right) else CheckOutcome.FAILS


def _dominates(left: Enclosure, right: Enclosure) -> CheckOutcome:
    if left.lo >= right.hi:
        return CheckOutcome.HOLDS
    if left.hi < right.lo:
        return CheckOutcome.FAILS
    return CheckOutcome.INDETERMINATE


def _logs(level: TowerLevel, policy: PrecisionPolicy, fresh: bool):
    if not fresh:
        return level.log_p, level.log_d
    bits = policy.initial_bits
    return (
        log_enc(Enclosure.from_int(level.p, bits), policy),
        log_enc(Enclosure.from_int(level.d, bits), policy),
    )


def b_metric(level: TowerLevel, params: ConstructionParams, policy: Optional[PrecisionPolicy] = None) -> Enclosure:
    """``d^(gamma-epsilon-1) log p`` in closed form."""
    policy = policy or params.precision
    log_p, _ = _logs(level, policy, fresh=policy != params.precision)
    return pow_enc(level.d, params.witness_exponent - 1, policy) * log_p


def _compute(level: TowerLevel, params: ConstructionParams, policy: PrecisionPolicy, fresh: bool) -> LevelMetrics:
    d = level.d
    gamma = params.gamma_q
    log_p, log_d = _logs(level, policy, fresh)
    height = log_p / d

    d_gamma = pow_enc(d, gamma, policy)
    a = pow_enc(d, gamma - 1, policy) * (log_p - log_d)
    b = pow_enc(d, params.witness_exponent - 1, policy) * log_p
    silverman_floor = log_p / (2 * d) - log_d / (2 * (d - 1))
    f_floor = (a - 1) / 2

    # the Silverman floor before relaxing log d / (d - 1) <= 1
    one_minus_inverse = Enclosure.from_value(Fraction(d - 1, d), policy.initial_bits)
    relaxed_tail = log_d / (pow_enc(d, 2 - gamma, policy) * one_minus_inverse)
    silverman_rewrite = (a - relaxed_tail) / (d_gamma * 2)
    chain_lhs = d_gamma * silverman_floor

    witness_f = f_value(d, params.witness_exponent, height, policy)
    generator_f = f_value(d, gamma, height, policy)

    checks = {
        "identity": _overlap(witness_f, b),
        "rewrite": _overlap(silverman_rewrite, silverman_floor),
        "chain": _dominates(chain_lhs, f_floor),
        "generator_floor": _dominates(generator_f, f_floor),
    }
    return LevelMetrics(
        index=level.index,
        a=a,
        b=b,
        silverman_floor=silverman_floor,
        f_floor=f_floor,
        witness_f=witness_f,
        silverman_rewrite=silverman_rewrite,
        chain_lhs=chain_lhs,
        generator_f=generator_f,
        checks=checks,
        escalated=fresh,
    )


def level_metrics(level: TowerLevel, params: ConstructionParams) -> LevelMetrics:
    """Certified metrics of one level.

    A check left indeterminate triggers one recomputation under
    ``params.precision.escalated()``; whatever that yields is recorded.
    """
    metrics = _compute(level, params, params.precision, fresh=False)
    if any(outcome is CheckOutcome.INDETERMINATE for outcome in metrics.checks.values()):
        logger.info("level %d: indeterminate check, escalating precision", level.index)
        metrics = _compute(level, params, params.precision.escalated(), fresh=True)
    return metrics


def compute_metrics(levels: Sequence[TowerLevel], params: ConstructionParams, jobs: int = 1) -> List[LevelMetrics]:
    """Metrics for every level, in level order."""
    if jobs <= 1 or len(levels) <= 1:
        return [level_metrics(level, params) for level in levels]
    return Parallel(n_jobs=jobs, prefer="threads")(
        delayed(level_metrics)(level, params) for level in levels
    )
