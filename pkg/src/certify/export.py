"""Rendering of towers, reports and results as json, csv or text."""

from typing import List, Sequence

import pandas as pd

from src.certify.report import CertificateReport
from src.certify.schema import (
    CertificateReportModel,
    EnclosureModel,
    HeightResultModel,
    WitnessResultModel,
    report_model,
    tower_models,
    witness_model,
)
from src.certify.witness import WitnessResult
from src.errors import DomainError
from src.tower.construction import TowerLevel

FORMATS = ("json", "csv", "text")

REPORT_CSV_COLUMNS = [
    "index",
    "d",
    "p",
    "log_p_lo",
    "log_p_hi",
    "a_lo",
    "a_hi",
    "b_lo",
    "b_hi",
    "silverman_floor_lo",
    "silverman_floor_hi",
    "f_floor_lo",
    "f_floor_hi",
]

TOWER_CSV_COLUMNS = [
    "index",
    "d",
    "p",
    "p_bracket_lo",
    "p_bracket_hi",
    "abs_degree",
    "log_p_lo",
    "log_p_hi",
    "primality",
]


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise DomainError(f"unknown output format {fmt!r}, expected one of {', '.join(FORMATS)}")


def _csv(rows: List[dict], columns: List[str]) -> str:
    frame = pd.DataFrame(rows, columns=columns)
    return frame.to_csv(index=False, lineterminator="\n")


def _span(enclosure: EnclosureModel) -> str:
    return f"[{enclosure.lo}, {enclosure.hi}]"


def render_report(report: CertificateReport, fmt: str = "json") -> str:
    _check_format(fmt)
    model = report_model(report)
    if fmt == "json":
        return model.model_dump_json(indent=2) + "\n"
    if fmt == "csv":
        rows = [
            {
                "index": level.index,
                "d": level.d,
                "p": level.p,
                "log_p_lo": level.log_p.lo,
                "log_p_hi": level.log_p.hi,
                "a_lo": level.metrics.a.lo,
                "a_hi": level.metrics.a.hi,
                "b_lo": level.metrics.b.lo,
                "b_hi": level.metrics.b.hi,
                "silverman_floor_lo": level.metrics.silverman_floor.lo,
                "silverman_floor_hi": level.metrics.silverman_floor.hi,
                "f_floor_lo": level.metrics.f_floor.lo,
                "f_floor_hi": level.metrics.f_floor.hi,
            }
            for level in model.levels
        ]
        return _csv(rows, REPORT_CSV_COLUMNS)
    return _report_text(model)


def _report_text(model: CertificateReportModel) -> str:
    params = model.params
    lines = [
        f"heighttower certificate (schema {model.schema_version}, {model.source})",
        f"variant={params.variant} gamma={params.gamma} epsilon={params.epsilon} "
        f"delta={params.delta} horizon={params.horizon}",
        "",
    ]
    for level in model.levels:
        m = level.metrics
        lines.append(f"level {level.index}: d={level.d} p={level.p} ({level.primality})")
        lines.append(f"  a               {_span(m.a)}")
        lines.append(f"  b               {_span(m.b)}")
        lines.append(f"  silverman_floor {_span(m.silverman_floor)}")
        lines.append(f"  f_floor         {_span(m.f_floor)}")
        checks = ", ".join(f"{name}={outcome}" for name, outcome in m.checks.items())
        lines.append(f"  checks          {checks}")
    lines.append("")
    lines.append(f"a strictly increasing from level {model.audit.a_monotone_from}")
    lines.append(f"b strictly decreasing from level {model.audit.b_decreasing_from}")
    witness = model.witness.index if model.witness.index is not None else "not reached"
    lines.append(f"witness (eta={model.witness.eta}): {witness}")
    if model.i0 is not None:
        lines.append(f"smallest admissible i0: {model.i0}")
    summary = ", ".join(f"{k}={v}" for k, v in model.primality_summary.items())
    lines.append(f"primality: {summary}")
    if model.admissibility:
        lines.append("violations:")
        lines.extend(f"  {item}" for item in model.admissibility)
    else:
        lines.append("admissible: yes")
    for key, text in model.statements.items():
        lines.append(f"{key}: {text}")
    return "\n".join(lines) + "\n"


def render_tower(levels: Sequence[TowerLevel], fmt: str = "json") -> str:
    _check_format(fmt)
    models = tower_models(levels)
    if fmt == "json":
        payload = "[\n" + ",\n".join(m.model_dump_json(indent=2) for m in models) + "\n]"
        return payload + "\n"
    if fmt == "csv":
        rows = [
            {
                "index": m.index,
                "d": m.d,
                "p": m.p,
                "p_bracket_lo": m.p_bracket.lo if m.p_bracket else "",
                "p_bracket_hi": m.p_bracket.hi if m.p_bracket else "",
                "abs_degree": m.abs_degree,
                "log_p_lo": m.log_p.lo,
                "log_p_hi": m.log_p.hi,
                "primality": m.primality,
            }
            for m in models
        ]
        return _csv(rows, TOWER_CSV_COLUMNS)
    lines = [
        f"{m.index:>3}  d={m.d}  p={m.p}  log p in {_span(m.log_p)}  ({m.primality})"
        for m in models
    ]
    return "\n".join(lines) + "\n"


def render_witness(result: WitnessResult, fmt: str = "json") -> str:
    _check_format(fmt)
    model: WitnessResultModel = witness_model(result)
    if fmt == "json":
        return model.model_dump_json(indent=2) + "\n"
    if fmt == "csv":
        row = {
            "eta": model.eta,
            "reached": model.reached,
            "index": model.index if model.index is not None else "",
            "best_index": model.best_index,
            "best_b_lo": model.best_b.lo if model.best_b else "",
            "best_b_hi": model.best_b.hi if model.best_b else "",
            "levels_built": model.levels_built,
        }
        return _csv([row], list(row))
    if model.reached:
        return f"witness index {model.index}: b in {_span(model.b)} < {model.eta}\n"
    best = _span(model.best_b) if model.best_b else "n/a"
    return (
        f"not reached within {model.levels_built} levels; "
        f"best b at level {model.best_index}: {best}\n"
    )


def render_height(result: HeightResultModel, fmt: str = "json") -> str:
    _check_format(fmt)
    if fmt == "json":
        return result.model_dump_json(indent=2) + "\n"
    if fmt == "csv":
        row = {
            "kind": result.kind,
            "input": result.input,
            "degree": result.degree,
            "lo": result.value.lo,
            "hi": result.value.hi,
            "precision_bits": result.value.precision_bits,
        }
        return _csv([row], list(row))
    return f"{result.kind}({result.input}) in {_span(result.value)}\n"
