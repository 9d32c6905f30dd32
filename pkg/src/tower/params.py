"""Construction parameters for radical towers."""

from decimal import Decimal
from fractions import Fraction
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.errors import DomainError
from src.numerics.bigreal import PrecisionPolicy, as_fraction


class ConstructionParams(BaseModel):
    """Free parameters of the tower construction.

    Exactly one variant is selected: the general variant sets ``epsilon``
    and brackets p by ``[e^(d^tau), 2 e^(d^tau)]`` with
    ``tau = 1 - gamma + epsilon/2``; the delta variant sets ``delta`` (and
    needs ``gamma = 1``) and brackets p by ``[d^delta, 2 d^delta]``. In the
    delta variant ``epsilon`` is optional and only sets the witness
    exponent ``gamma - epsilon``.
    """

    model_config = ConfigDict(frozen=True)

    gamma: Decimal = Field(Decimal(1), description="Northcott exponent, 0 < gamma <= 1")
    epsilon: Optional[Decimal] = Field(None, description="Bogomolov gap, > 0")
    delta: Optional[Decimal] = Field(None, description="Polynomial bracket exponent, > 1")
    horizon: int = Field(..., ge=1, description="Number of tower levels")
    precision: PrecisionPolicy = Field(default_factory=PrecisionPolicy)
    first_d: int = Field(2, ge=2, description="Lower bound for the first degree")
    max_p_bits: int = Field(40000, ge=2, description="Bit-size cap for p")
    d_scan_cap: int = Field(1_000_000, ge=1, description="Integers scanned per degree search")
    scan_jobs: int = Field(1, ge=1, description="Concurrent chunks in prime scans")

    @field_validator("gamma", "epsilon", "delta", mode="before")
    @classmethod
    def _floats_by_repr(cls, value: Any) -> Any:
        if isinstance(value, float):
            return Decimal(repr(value))
        return value

    @model_validator(mode="after")
    def _check_variant(self) -> "ConstructionParams":
        if not (0 < self.gamma <= 1):
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.delta is not None:
            if self.delta <= 1:
                raise ValueError(f"delta must exceed 1, got {self.delta}")
            if self.gamma != 1:
                raise ValueError("the delta variant requires gamma = 1")
        elif self.epsilon is None:
            raise ValueError("set epsilon (general variant) or delta (delta variant)")
        return self

    @classmethod
    def build(cls, **kwargs: Any) -> "ConstructionParams":
        """Validate keyword arguments, raising DomainError on failure."""
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise DomainError(first_error(e)) from e

    @property
    def variant(self) -> str:
        return "delta" if self.delta is not None else "general"

    @property
    def witness_epsilon(self) -> Decimal:
        return self.epsilon if self.epsilon is not None else Decimal(1)

    @property
    def gamma_q(self) -> Fraction:
        return as_fraction(self.gamma)

    @property
    def witness_exponent(self) -> Fraction:
        """``gamma - epsilon``, the exponent of the b metric."""
        return self.gamma_q - as_fraction(self.witness_epsilon)

    @property
    def exponent(self) -> Fraction:
        """``tau = 1 - gamma + epsilon / 2`` of the general bracket."""
        if self.epsilon is None:
            raise DomainError("the delta variant has no tau exponent")
        return 1 - self.gamma_q + as_fraction(self.epsilon) / 2

    def with_horizon(self, horizon: int) -> "ConstructionParams":
        return self.model_copy(update={"horizon": int(horizon)})

    def with_precision(self, precision: PrecisionPolicy) -> "ConstructionParams":
        return self.model_copy(update={"precision": precision})


def first_error(error: ValidationError) -> str:
    details = error.errors()
    if not details:
        return str(error)
    first = details[0]
    where = ".".join(str(part) for part in first.get("loc", ()))
    message = first.get("msg", "invalid value")
    return f"{where}: {message}" if where else message
