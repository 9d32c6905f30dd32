"""Execution of a validated CLI invocation."""

import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, TextIO

from pydantic import ValidationError

from src.certify.export import render_height, render_report, render_tower, render_witness
from src.certify.report import audit_report, audit_sequence, parse_pairs
from src.certify.schema import EnclosureModel, HeightResultModel
from src.certify.witness import witness_index
from src.cli.config import CliConfig
from src.errors import HeightTowerError, WitnessNotReached
from src.heights.mahler import mahler_measure
from src.heights.polynomial import IntPolynomial
from src.heights.weil import radical_height, weil_height_from_minpoly
from src.tower.construction import build_tower
from src.utils.helpers import run_metadata

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_SEARCH = 2
EXIT_IO = 3


def report_error(error: BaseException, stream: Optional[TextIO] = None) -> int:
    """Print the one-line JSON error record and return the exit code."""
    stream = stream or sys.stderr
    if isinstance(error, HeightTowerError):
        code, message, level = error.exit_code, error.message, error.level
    elif isinstance(error, ValidationError):
        code, message, level = EXIT_DOMAIN, str(error).splitlines()[0], None
    elif isinstance(error, OSError):
        code, message, level = EXIT_IO, str(error), None
    else:
        raise error
    record = {"error": type(error).__name__, "exit_code": code, "message": message, "level": level}
    stream.write(json.dumps(record) + "\n")
    stream.flush()
    return code


class _Progress:
    """Step banners on stderr, printed only when verbose."""

    def __init__(self, enabled: bool, total: int):
        self.enabled = enabled
        self.total = total
        self.step = 0

    def start(self, text: str) -> None:
        self.step += 1
        if self.enabled:
            print(f"[{self.step}/{self.total}] {text}...", file=sys.stderr)

    def done(self, text: str) -> None:
        if self.enabled:
            print(f"✓ {text}", file=sys.stderr)


def _construct(config: CliConfig, progress: _Progress) -> str:
    progress.start("Building tower")
    levels = build_tower(config.construction_params())
    progress.done(f"Built {len(levels)} levels")
    return render_tower(levels, config.output_format)


def _certify(config: CliConfig, progress: _Progress) -> str:
    progress.start("Building and certifying tower")
    if config.levels is not None:
        report = audit_sequence(
            parse_pairs(config.levels),
            gamma=config.gamma if config.gamma is not None else 1,
            epsilon=config.epsilon,
            policy=config.precision,
            eta=config.eta,
        )
    else:
        report = audit_report(config.construction_params(), eta=config.eta)
    progress.done(f"Certified {len(report.levels)} levels")
    if report.admissibility:
        logger.warning("%d admissibility violations", len(report.admissibility))
    return render_report(report, config.output_format)


def _witness(config: CliConfig, progress: _Progress) -> str:
    progress.start(f"Searching for a witness below eta={config.eta}")
    result = witness_index(config.construction_params(), config.eta, config.level_cap)
    payload = render_witness(result, config.output_format)
    if not result.reached:
        raise WitnessNotReached(
            f"b stayed above {config.eta} for {result.levels_built} levels", level=result.best_index,
            payload=payload,
        )
    progress.done(f"Witness at level {result.index}")
    return payload


def _height(config: CliConfig, progress: _Progress) -> str:
    progress.start("Computing height")
    if config.poly is not None:
        f = IntPolynomial.parse(config.poly)
        value = weil_height_from_minpoly(f, config.precision)
        result = HeightResultModel(kind="minpoly", input=str(f), degree=f.degree, value=EnclosureModel.of(value))
    else:
        value = radical_height(config.p, config.d, config.precision)
        result = HeightResultModel(
            kind="radical", input=f"{config.p}^(1/{config.d})", degree=config.d, value=EnclosureModel.of(value)
        )
    progress.done("Height certified")
    return render_height(result, config.output_format)


def _measure(config: CliConfig, progress: _Progress) -> str:
    progress.start("Computing Mahler measure")
    f = IntPolynomial.parse(config.poly)
    value = mahler_measure(f, config.precision)
    result = HeightResultModel(kind="mahler", input=str(f), degree=f.degree, value=EnclosureModel.of(value))
    progress.done("Mahler measure certified")
    return render_height(result, config.output_format)


COMMANDS: dict = {
    "construct": _construct,
    "certify": _certify,
    "witness": _witness,
    "height": _height,
    "measure": _measure,
}


def _emit(config: CliConfig, payload: str, progress: _Progress) -> None:
    if config.output_path is None:
        sys.stdout.write(payload)
        sys.stdout.flush()
        return
    progress.start(f"Writing {config.output_path}")
    path = Path(config.output_path)
    path.write_text(payload, encoding="utf-8")
    if config.metadata:
        sidecar = path.with_name(path.name + ".meta.json")
        sidecar.write_text(json.dumps(run_metadata(payload, config.command), indent=2) + "\n", encoding="utf-8")
    progress.done(f"Wrote {len(payload)} characters")


def run(config: CliConfig) -> int:
    """Execute one subcommand and return its exit code."""
    total = 2 if config.output_path is not None else 1
    progress = _Progress(config.verbose, total)
    handler: Callable[[CliConfig, _Progress], str] = COMMANDS[config.subcommand]
    try:
        payload = handler(config, progress)
        _emit(config, payload, progress)
    except WitnessNotReached as e:
        if e.payload is not None:
            try:
                _emit(config, e.payload, progress)
            except OSError as io_error:
                return report_error(io_error)
        return report_error(e)
    except (HeightTowerError, ValidationError, OSError) as e:
        return report_error(e)
    return EXIT_OK
