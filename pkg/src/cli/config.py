"""Command-line parsing and the validated CliConfig model."""

import argparse
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.errors import DomainError
from src.numerics.bigreal import PrecisionPolicy
from src.tower.params import ConstructionParams, first_error

SUBCOMMANDS = ("construct", "certify", "witness", "height", "measure")


class CliConfig(BaseModel):
    """One fully resolved CLI invocation."""

    model_config = ConfigDict(frozen=True)

    subcommand: Literal["construct", "certify", "witness", "height", "measure"]
    gamma: Optional[Decimal] = None
    epsilon: Optional[Decimal] = None
    delta: Optional[Decimal] = None
    horizon: Optional[int] = Field(None, ge=1)
    eta: Decimal = Decimal("0.5")
    level_cap: int = Field(10, ge=1)
    poly: Optional[str] = None
    p: Optional[int] = None
    d: Optional[int] = None
    levels: Optional[str] = None
    output_format: Literal["json", "csv", "text"] = "json"
    output_path: Optional[Path] = None
    precision: PrecisionPolicy = Field(default_factory=PrecisionPolicy)
    first_d: int = Field(2, ge=2)
    max_p_bits: int = Field(40000, ge=2)
    d_scan_cap: int = Field(1_000_000, ge=1)
    scan_jobs: int = Field(1, ge=1)
    verbose: bool = False
    metadata: bool = False
    command: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_combination(self) -> "CliConfig":
        if self.delta is not None and self.gamma is not None and self.gamma != 1:
            raise ValueError("--delta requires --gamma 1 or no --gamma")
        if self.eta <= 0:
            raise ValueError("--eta must be positive")
        if self.subcommand in ("construct", "certify", "witness"):
            sequence_mode = self.subcommand == "certify" and self.levels is not None
            if not sequence_mode:
                if self.epsilon is None and self.delta is None:
                    raise ValueError("give --epsilon or --delta")
                if self.subcommand != "witness" and self.horizon is None:
                    raise ValueError("--horizon is required")
            elif self.delta is not None or self.horizon is not None:
                raise ValueError("--levels cannot be combined with --delta or --horizon")
        if self.subcommand == "height":
            radical = self.p is not None or self.d is not None
            if radical and self.poly is not None:
                raise ValueError("give either --poly or --p/--d, not both")
            if radical and (self.p is None or self.d is None):
                raise ValueError("--p and --d go together")
            if not radical and self.poly is None:
                raise ValueError("height needs --poly or --p/--d")
        if self.subcommand == "measure" and self.poly is None:
            raise ValueError("measure needs --poly")
        if self.metadata and self.output_path is None:
            raise ValueError("--metadata needs --output")
        return self

    def construction_params(self, horizon: Optional[int] = None) -> ConstructionParams:
        return ConstructionParams.build(
            gamma=self.gamma,
            epsilon=self.epsilon,
            delta=self.delta,
            horizon=horizon or self.horizon or 1,
            precision=self.precision,
            first_d=self.first_d,
            max_p_bits=self.max_p_bits,
            d_scan_cap=self.d_scan_cap,
            scan_jobs=self.scan_jobs,
        )


def _decimal(text: str) -> Decimal:
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}")
    if not value.is_finite():
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise DomainError(f"{self.prog}: {message}")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", dest="output_format", choices=["json", "csv", "text"])
    parser.add_argument("--output", dest="output_path", help="Write the payload to a file")
    parser.add_argument("--metadata", action="store_true", help="Write <output>.meta.json")
    parser.add_argument("--initial-bits", type=int)
    parser.add_argument("--max-bits", type=int)
    parser.add_argument("--target-width", type=float)
    parser.add_argument("--jobs", dest="scan_jobs", type=int, help="Concurrent prime-scan chunks")
    parser.add_argument("--config", help="YAML settings file")
    parser.add_argument("--verbose", "-v", action="store_true")


def _tower_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=_decimal)
    parser.add_argument("--epsilon", type=_decimal)
    parser.add_argument("--delta", type=_decimal)
    parser.add_argument("--first-d", type=int)
    parser.add_argument("--max-p-bits", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="heighttower",
        description="Construct radical towers and certify their height floors and witnesses.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    construct = sub.add_parser("construct", help="Build the (d_i, p_i) table")
    _tower_options(construct)
    construct.add_argument("--horizon", type=int)

    certify = sub.add_parser("certify", help="Full certificate report")
    _tower_options(certify)
    certify.add_argument("--horizon", type=int)
    certify.add_argument("--eta", type=_decimal)
    certify.add_argument("--levels", help="Audit given pairs instead, e.g. 2:5,7:53")

    witness = sub.add_parser("witness", help="Smallest level with b_i below eta")
    _tower_options(witness)
    witness.add_argument("--horizon", type=int)
    witness.add_argument("--eta", type=_decimal)
    witness.add_argument("--cap", dest="level_cap", type=int)

    height = sub.add_parser("height", help="Weil height of a radical or a minimal polynomial")
    height.add_argument("--poly")
    height.add_argument("--p", type=int)
    height.add_argument("--d", type=int)

    measure = sub.add_parser("measure", help="Mahler measure of an integer polynomial")
    measure.add_argument("--poly")

    for child in (construct, certify, witness, height, measure):
        _common(child)
    return parser


def _attach_poly_values(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--poly VALUE`` as ``--poly=VALUE``.

    argparse reads a detached value starting with ``-`` (``-5,0,1``,
    ``-x^2+2``) as an option, so the pair is joined before parsing.
    """
    tokens = list(argv)
    joined: List[str] = []
    i = 0
    while i < len(tokens):
        if tokens[i] == "--poly" and i + 1 < len(tokens):
            joined.append(f"--poly={tokens[i + 1]}")
            i += 2
        else:
            joined.append(tokens[i])
            i += 1
    return joined


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    return build_parser().parse_args(_attach_poly_values(argv))


def build_config(args: argparse.Namespace, settings: Dict[str, Dict[str, Any]], argv: Sequence[str]) -> CliConfig:
    """Overlay explicit flags on resolved settings and validate the result."""
    flags = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    precision = dict(settings["precision"])
    for key in ("initial_bits", "max_bits", "target_width"):
        if key in flags:
            precision[key] = flags.pop(key)
    values: Dict[str, Any] = {
        "eta": settings["certify"]["witness_eta"],
        "level_cap": settings["certify"]["level_cap"],
        "output_format": settings["output"]["format"],
        "first_d": settings["tower"]["first_d"],
        "max_p_bits": settings["tower"]["max_p_bits"],
        "d_scan_cap": settings["tower"]["d_scan_cap"],
        "scan_jobs": settings["tower"]["scan_jobs"],
        "command": list(argv),
    }
    if isinstance(values["eta"], float):
        values["eta"] = Decimal(repr(values["eta"]))
    values.update(flags)
    try:
        values["precision"] = PrecisionPolicy(**precision)
        return CliConfig(**values)
    except ValidationError as e:
        raise DomainError(first_error(e)) from e
