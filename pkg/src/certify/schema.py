"""Serializable report schema.

Big integers travel as decimal strings and every real as an
``{lo, hi, precision_bits}`` enclosure with outward-rounded decimal
endpoints, so a JSON consumer never sees a float for a certified value.
"""

from typing import Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from src.certify.metrics import CHECK_NAMES, LevelMetrics
from src.certify.report import SCHEMA_VERSION, CertificateReport
from src.certify.witness import WitnessResult
from src.numerics.bigreal import Enclosure
from src.primes.primality import PrimalityStatus, PrimalityVerdict
from src.tower.construction import TowerLevel
from src.tower.params import ConstructionParams


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class EnclosureModel(_Frozen):
    lo: str = Field(..., description="Lower endpoint, rounded toward -inf")
    hi: str = Field(..., description="Upper endpoint, rounded toward +inf")
    precision_bits: int = Field(..., gt=0)

    @classmethod
    def of(cls, enclosure: Enclosure) -> "EnclosureModel":
        lo, hi = enclosure.to_decimal_strings()
        return cls(lo=lo, hi=hi, precision_bits=enclosure.precision_bits)


class VerdictModel(_Frozen):
    status: Literal["composite", "provable_prime", "probable_prime"]
    method: Literal["trial_division", "deterministic_mr", "bpsw"]
    rounds: int = Field(..., ge=0)

    @classmethod
    def of(cls, verdict: PrimalityVerdict) -> "VerdictModel":
        return cls(status=verdict.status.value, method=verdict.method.value, rounds=verdict.rounds)


class BracketModel(_Frozen):
    lo: str
    hi: str


class MetricsModel(_Frozen):
    a: EnclosureModel
    b: EnclosureModel
    silverman_floor: EnclosureModel
    f_floor: EnclosureModel
    witness_f: EnclosureModel
    silverman_rewrite: EnclosureModel
    chain_lhs: EnclosureModel
    generator_f: EnclosureModel
    checks: Dict[str, Literal["holds", "fails", "indeterminate"]]
    escalated: bool

    @classmethod
    def of(cls, metrics: LevelMetrics) -> "MetricsModel":
        enclosures = {
            name: EnclosureModel.of(getattr(metrics, name))
            for name in (
                "a",
                "b",
                "silverman_floor",
                "f_floor",
                "witness_f",
                "silverman_rewrite",
                "chain_lhs",
                "generator_f",
            )
        }
        checks = {name: metrics.checks[name].value for name in CHECK_NAMES}
        return cls(**enclosures, checks=checks, escalated=metrics.escalated)


class TowerLevelModel(_Frozen):
    index: int = Field(..., ge=1)
    d: str
    p: str
    primality: Literal["provable", "bpsw"] = Field(
        ..., description="'bpsw' when d or p is only a probable prime"
    )
    d_verdict: VerdictModel
    p_verdict: VerdictModel
    p_bracket: Optional[BracketModel]
    abs_degree: str
    log_p: EnclosureModel
    log_d: EnclosureModel
    generator_height: EnclosureModel

    @staticmethod
    def fields_of(level: TowerLevel) -> dict:
        probable = PrimalityStatus.PROBABLE_PRIME
        bracket = None
        if level.p_bracket is not None:
            bracket = BracketModel(lo=str(level.p_bracket[0]), hi=str(level.p_bracket[1]))
        return dict(
            index=level.index,
            d=str(level.d),
            p=str(level.p),
            primality="bpsw" if probable in (level.d_verdict.status, level.p_verdict.status) else "provable",
            d_verdict=VerdictModel.of(level.d_verdict),
            p_verdict=VerdictModel.of(level.p_verdict),
            p_bracket=bracket,
            abs_degree=str(level.abs_degree),
            log_p=EnclosureModel.of(level.log_p),
            log_d=EnclosureModel.of(level.log_d),
            generator_height=EnclosureModel.of(level.generator_height),
        )

    @classmethod
    def of(cls, level: TowerLevel) -> "TowerLevelModel":
        return cls(**cls.fields_of(level))


class CertifiedLevelModel(TowerLevelModel):
    metrics: MetricsModel


class PrecisionModel(_Frozen):
    initial_bits: int
    max_bits: int
    target_width: float


class ParamsModel(_Frozen):
    variant: Literal["general", "delta"]
    gamma: str
    epsilon: Optional[str]
    delta: Optional[str]
    horizon: int
    first_d: int
    precision: PrecisionModel

    @classmethod
    def of(cls, params: ConstructionParams) -> "ParamsModel":
        return cls(
            variant=params.variant,
            gamma=str(params.gamma),
            epsilon=None if params.epsilon is None else str(params.epsilon),
            delta=None if params.delta is None else str(params.delta),
            horizon=params.horizon,
            first_d=params.first_d,
            precision=PrecisionModel(**params.precision.model_dump()),
        )


class AuditModel(_Frozen):
    a_monotone_from: int = Field(..., ge=1)
    b_decreasing_from: int = Field(..., ge=1)


class WitnessSummaryModel(_Frozen):
    eta: str
    index: Optional[int]


class CertificateReportModel(_Frozen):
    """JSON form of a certificate report."""

    schema_version: str = SCHEMA_VERSION
    source: Literal["construction", "sequence"]
    params: ParamsModel
    levels: List[CertifiedLevelModel]
    audit: AuditModel
    witness: WitnessSummaryModel
    primality_summary: Dict[str, int]
    admissibility: List[str]
    i0: Optional[int] = None
    statements: Dict[str, str]


class WitnessResultModel(_Frozen):
    eta: str
    reached: bool
    index: Optional[int]
    b: Optional[EnclosureModel]
    best_index: int
    best_b: Optional[EnclosureModel]
    levels_built: int


class HeightResultModel(_Frozen):
    kind: Literal["radical", "minpoly", "mahler"]
    input: str
    degree: int
    value: EnclosureModel


def report_model(report: CertificateReport) -> CertificateReportModel:
    levels = [
        CertifiedLevelModel(**TowerLevelModel.fields_of(level), metrics=MetricsModel.of(metrics))
        for level, metrics in report.levels
    ]
    return CertificateReportModel(
        schema_version=report.schema_version,
        source=report.source,
        params=ParamsModel.of(report.params),
        levels=levels,
        audit=AuditModel(
            a_monotone_from=report.audit.a_monotone_from,
            b_decreasing_from=report.audit.b_decreasing_from,
        ),
        witness=WitnessSummaryModel(eta=str(report.witness.eta), index=report.witness.index),
        primality_summary=dict(report.primality_summary),
        admissibility=list(report.admissibility),
        i0=report.i0,
        statements=dict(report.statements),
    )


def tower_models(levels: Sequence[TowerLevel]) -> List[TowerLevelModel]:
    return [TowerLevelModel.of(level) for level in levels]


def witness_model(result: WitnessResult) -> WitnessResultModel:
    return WitnessResultModel(
        eta=str(result.eta),
        reached=result.reached,
        index=result.index,
        b=None if result.b is None else EnclosureModel.of(result.b),
        best_index=result.best_index,
        best_b=None if result.best_b is None else EnclosureModel.of(result.best_b),
        levels_built=result.levels_built,
    )


def report_json_schema() -> dict:
    """JSON schema of :class:`CertificateReportModel`."""
    return CertificateReportModel.model_json_schema()
