"""Assembly of certificate reports for built or user-supplied towers."""

import logging
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.certify.metrics import LevelMetrics, compute_metrics, level_metrics
from src.errors import DomainError
from src.numerics.bigreal import Enclosure, PrecisionPolicy, as_fraction
from src.primes.primality import PrimalityStatus, is_prime
from src.tower.construction import TowerLevel, build_tower, check_admissible, make_level
from src.tower.params import ConstructionParams

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
DEFAULT_ETA = Decimal("0.5")


@dataclass(frozen=True)
class AuditSummary:
    """Onsets of the certified monotone tails of the a and b sequences."""

    a_monotone_from: int
    b_decreasing_from: int


@dataclass(frozen=True)
class WitnessSummary:
    eta: Decimal
    index: Optional[int]


@dataclass(frozen=True)
class CertificateReport:
    """Everything certified about one tower.

    ``source`` is ``"construction"`` for towers built from params and
    ``"sequence"`` for audited user-supplied pairs; ``i0`` is only set
    for the latter.
    """

    params: ConstructionParams
    levels: List[Tuple[TowerLevel, LevelMetrics]]
    audit: AuditSummary
    witness: WitnessSummary
    primality_summary: Dict[str, int]
    admissibility: List[str]
    statements: Dict[str, str]
    source: str = "construction"
    i0: Optional[int] = None
    schema_version: str = SCHEMA_VERSION

    @property
    def towers(self) -> List[TowerLevel]:
        return [level for level, _ in self.levels]

    @property
    def metrics(self) -> List[LevelMetrics]:
        return [metrics for _, metrics in self.levels]


def _onset(
    values: Sequence[Enclosure],
    strictly: Callable[[Enclosure, Enclosure], Optional[bool]],
    refresh: Callable[[int], Enclosure],
) -> int:
    """Smallest s with ``strictly(v_i, v_(i+1))`` for every i >= s.

    An overlapping pair is re-evaluated once through ``refresh``. The last
    index always qualifies, so the onset is never undefined.
    """
    onset = len(values)
    for i in range(len(values) - 1, 0, -1):
        verdict = strictly(values[i - 1], values[i])
        if verdict is None:
            verdict = strictly(refresh(i - 1), refresh(i))
        if not verdict:
            break
        onset = i
    return onset


def _increasing(left: Enclosure, right: Enclosure) -> Optional[bool]:
    c = right.compare(left)
    return None if c is None else c == 1


def _decreasing(left: Enclosure, right: Enclosure) -> Optional[bool]:
    c = right.compare(left)
    return None if c is None else c == -1


def audit_onsets(
    levels: Sequence[TowerLevel], metrics: Sequence[LevelMetrics], params: ConstructionParams
) -> AuditSummary:
    """Certified onsets of strict growth of a and strict decay of b."""
    cache: Dict[int, LevelMetrics] = {}

    def escalated(i: int) -> LevelMetrics:
        if i not in cache:
            strict = params.with_precision(params.precision.escalated())
            cache[i] = level_metrics(levels[i], strict)
        return cache[i]

    return AuditSummary(
        a_monotone_from=_onset([m.a for m in metrics], _increasing, lambda i: escalated(i).a),
        b_decreasing_from=_onset([m.b for m in metrics], _decreasing, lambda i: escalated(i).b),
    )


def primality_summary(levels: Sequence[TowerLevel]) -> Dict[str, int]:
    counts = Counter()
    for level in levels:
        counts[level.d_verdict.status.value] += 1
        counts[level.p_verdict.status.value] += 1
    return {status.value: counts.get(status.value, 0) for status in PrimalityStatus}


def _first_witness(metrics: Sequence[LevelMetrics], eta: Decimal) -> Optional[int]:
    threshold = as_fraction(eta)
    for m in metrics:
        if m.b.compare(threshold) == -1:
            return m.index
    return None


def statements(params: ConstructionParams, witness: WitnessSummary, horizon: int) -> Dict[str, str]:
    """Plain-language conclusions the report supports."""
    gamma = params.gamma
    exponent = params.witness_exponent
    northcott = (
        f"Any alpha in L with minimal containing level i has "
        f"(deg alpha)^{gamma} h(alpha) >= f_floor(i); the floors are certified for levels 1..{horizon}."
    )
    if witness.index is not None:
        bogomolov = (
            f"The generator p_{witness.index}^(1/d_{witness.index}) has "
            f"(deg)^({exponent}) h < {witness.eta}, evidence that 0 is approached "
            f"by f_(gamma-epsilon) values."
        )
    else:
        bogomolov = f"No generator within levels 1..{horizon} has f_(gamma-epsilon) value below {witness.eta}."
    return {
        "northcott": northcott,
        "bogomolov": bogomolov,
        "scope": "Finite certified evidence only; limits are not asserted.",
    }


def _assemble(
    params: ConstructionParams,
    levels: List[TowerLevel],
    eta: Decimal,
    admissibility: List[str],
    source: str,
    i0: Optional[int] = None,
) -> CertificateReport:
    metrics = compute_metrics(levels, params, jobs=params.scan_jobs)
    witness = WitnessSummary(eta=eta, index=_first_witness(metrics, eta))
    return CertificateReport(
        params=params,
        levels=list(zip(levels, metrics)),
        audit=audit_onsets(levels, metrics, params),
        witness=witness,
        primality_summary=primality_summary(levels),
        admissibility=admissibility,
        statements=statements(params, witness, len(levels)),
        source=source,
        i0=i0,
    )


def audit_report(params: ConstructionParams, eta: Decimal = DEFAULT_ETA) -> CertificateReport:
    """Build the tower to the horizon and certify every level."""
    levels = build_tower(params)
    logger.info("built %d levels, certifying", len(levels))
    return _assemble(params, levels, Decimal(eta), check_admissible(levels, params), "construction")


def parse_pairs(text: str) -> List[Tuple[int, int]]:
    """Parse ``"2:5,7:53"`` into ``[(2, 5), (7, 53)]``."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            d, p = chunk.split(":")
            pairs.append((int(d), int(p)))
        except ValueError as e:
            raise DomainError(f"malformed level {chunk!r}, expected d:p") from e
    if not pairs:
        raise DomainError("no levels given")
    return pairs


def audit_sequence(
    pairs: Sequence[Tuple[int, int]],
    gamma=Decimal(1),
    epsilon=Decimal(1),
    policy: Optional[PrecisionPolicy] = None,
    eta: Decimal = DEFAULT_ETA,
) -> CertificateReport:
    """Audit user-supplied pairs (d_i, p_i) against the height-floor hypotheses.

    Every entry must be prime, and p_i must avoid
    ``{d_1, p_1, ..., d_(i-1), p_(i-1)}`` for i > i0. The report's ``i0`` is
    the last index violating that, so 0 means the condition holds throughout.
    """
    if not pairs:
        raise DomainError("no levels given")
    params = ConstructionParams.build(
        gamma=gamma,
        epsilon=epsilon if epsilon is not None else Decimal(1),
        horizon=len(pairs),
        precision=policy or PrecisionPolicy(),
    )
    problems: List[str] = []
    earlier: set = set()
    i0 = 0
    levels: List[TowerLevel] = []
    abs_degree = 1
    for index, (d, p) in enumerate(pairs, start=1):
        if d < 2 or p < 2:
            raise DomainError(f"level {index}: d and p must be at least 2, got ({d}, {p})")
        for name, value in (("d", d), ("p", p)):
            if not is_prime(value).is_prime:
                problems.append(f"level {index}: {name}={value} is not prime")
        if p in earlier:
            i0 = index
            problems.append(f"level {index}: p={p} repeats an earlier prime")
        earlier.update((d, p))
        level = make_level(index, d, p, abs_degree, params.precision)
        abs_degree = level.abs_degree
        levels.append(level)
    return _assemble(params, levels, Decimal(eta), problems, "sequence", i0=i0)
