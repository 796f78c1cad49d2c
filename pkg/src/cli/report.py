"""Report schema and its JSON, CSV and table renderings.

Floats are stored rounded to 12 significant digits, so a report parsed
from its own JSON re-emits byte-identical text. The table shows 6.
"""

import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, field_validator, model_validator

from src.cli.ensemble_file import EncodedMatrix, decode_matrix

logger = logging.getLogger(__name__)

JSON_DIGITS = 12
TABLE_DIGITS = 6

# oracle values may exceed an upper bound by this much before an ordering fails
ORDERING_SLACK = 1e-6

CSV_COLUMNS = [
    "ensemble_id",
    "n_states",
    "dim",
    "ns_success_upper",
    "l4_error",
    "one_minus_l4",
    "oracle_success",
    "certificate_gap",
    "orderings_ok",
]

TABLE_COLUMNS = [
    "ensemble_id", "n_states", "dim", "ns_success_upper", "ns_error_lower", "construction",
    "l4_error", "one_minus_l4", "oracle_success", "certificate_gap", "closed_form", "formula",
    "orderings_ok",
]

FORMATS = ("table", "json", "csv")


def round_sig(value: Any, digits: int = JSON_DIGITS) -> Any:
    """Round every float inside ``value`` (lists and tuples included)."""
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    if isinstance(value, (list, tuple)):
        return type(value)(round_sig(v, digits) for v in value)
    return value


class ReportModel(BaseModel):
    @field_validator("*", mode="after")
    @classmethod
    def round_floats(cls, v):
        return round_sig(v)


class NsBoundRecord(ReportModel):
    success_upper: float
    error_lower: float
    construction: str


class L4Record(ReportModel):
    error_lower: float
    success_upper: float
    argmin: int


class OracleRecord(ReportModel):
    success: float
    certificate_gap: float
    converged: bool
    iterations: int
    start: int = 0
    povm: Optional[List[EncodedMatrix]] = None


class ClosedFormRecord(ReportModel):
    value: float
    formula: str


class FamilySummary(ReportModel):
    construction: str
    target_weights: List[float]
    average: EncodedMatrix


class OrderingsRecord(ReportModel):
    oracle_le_one_minus_l4: Optional[bool] = None
    oracle_le_ns_bound: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return all(v is not False for v in (self.oracle_le_one_minus_l4, self.oracle_le_ns_bound))


class EnsembleRecord(ReportModel):
    """Everything computed for one ensemble. Inapplicable parts are null."""
    ensemble_id: str
    n_states: int
    dim: int
    ns_bound: Optional[NsBoundRecord] = None
    l4: Optional[L4Record] = None
    oracle: Optional[OracleRecord] = None
    closed_form: Optional[ClosedFormRecord] = None
    family: Optional[FamilySummary] = None
    orderings: Optional[OrderingsRecord] = None

    @model_validator(mode="after")
    def derive_orderings(self):
        if self.oracle is None:
            self.orderings = None
            return self
        success = self.oracle.success
        self.orderings = OrderingsRecord(
            oracle_le_one_minus_l4=(
                None if self.l4 is None else success <= self.l4.success_upper + ORDERING_SLACK
            ),
            oracle_le_ns_bound=(
                None if self.ns_bound is None
                else success <= self.ns_bound.success_upper + ORDERING_SLACK
            ),
        )
        return self

    @property
    def orderings_ok(self) -> Optional[bool]:
        return None if self.orderings is None else self.orderings.ok


class CheckRecord(ReportModel):
    name: str
    passed: bool
    value: Optional[float] = None
    expected: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""


class Report(ReportModel):
    command: str
    seed: Optional[int] = None
    records: List[EnsembleRecord] = []
    checks: List[CheckRecord] = []
    ok: bool = True

    @model_validator(mode="after")
    def derive_ok(self):
        self.ok = all(c.passed for c in self.checks) and all(
            r.orderings_ok is not False for r in self.records
        )
        return self

    def failures(self) -> List[str]:
        out = [f"{c.name}: {c.detail or 'failed'}" for c in self.checks if not c.passed]
        out.extend(
            f"{r.ensemble_id}: ordering violated" for r in self.records if r.orderings_ok is False
        )
        return out


def to_json(report: Report) -> str:
    return report.model_dump_json(indent=2) + "\n"


def parse_report(text: str) -> Report:
    return Report.model_validate_json(text)


def _row(record: EnsembleRecord) -> dict:
    ns, l4, oracle = record.ns_bound, record.l4, record.oracle
    return {
        "ensemble_id": record.ensemble_id,
        "n_states": record.n_states,
        "dim": record.dim,
        "ns_success_upper": ns.success_upper if ns else None,
        "ns_error_lower": ns.error_lower if ns else None,
        "construction": ns.construction if ns else None,
        "l4_error": l4.error_lower if l4 else None,
        "one_minus_l4": l4.success_upper if l4 else None,
        "oracle_success": oracle.success if oracle else None,
        "certificate_gap": oracle.certificate_gap if oracle else None,
        "closed_form": record.closed_form.value if record.closed_form else None,
        "formula": record.closed_form.formula if record.closed_form else None,
        "orderings_ok": record.orderings_ok,
    }


def to_frame(report: Report) -> pd.DataFrame:
    """One row per record with every column the table can show."""
    return pd.DataFrame([_row(r) for r in report.records], columns=TABLE_COLUMNS)


def to_csv(report: Report) -> str:
    """Fixed CSV columns; empty cells where a value does not apply."""
    frame = to_frame(report)[CSV_COLUMNS]
    return frame.to_csv(index=False, float_format=f"%.{JSON_DIGITS}g", lineterminator="\n")


def _format_matrix(rows: EncodedMatrix) -> str:
    return np.array2string(decode_matrix(rows), precision=TABLE_DIGITS, suppress_small=True)


def to_table(report: Report) -> str:
    lines = []
    if report.records:
        frame = to_frame(report)
        keep = ["ensemble_id"] + [c for c in frame.columns[1:] if frame[c].notna().any()]
        lines.append(
            frame[keep].to_string(
                index=False,
                na_rep="-",
                float_format=lambda x: f"{x:.{TABLE_DIGITS}g}",
            )
        )
    for record in report.records:
        if record.oracle is not None and record.oracle.povm is not None:
            lines.append("")
            lines.append(
                f"{record.ensemble_id}: converged={record.oracle.converged} "
                f"after {record.oracle.iterations} iterations"
            )
            for k, element in enumerate(record.oracle.povm):
                lines.append(f"M_{k} =")
                lines.append(_format_matrix(element))
    if report.checks:
        lines.append("")
        passed = sum(c.passed for c in report.checks)
        lines.append(f"Checks: {passed}/{len(report.checks)} passed")
        for c in report.checks:
            if not c.passed:
                lines.append(f"  FAIL {c.name}: {c.detail}")
    lines.append("")
    lines.append("OK" if report.ok else "FAILED")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "table":
        return to_table(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def emit(report: Report, fmt: str, out: Optional[Union[str, Path]] = None) -> None:
    """Print the report; with ``out``, write it there instead.

    A table always goes to stdout; ``out`` then receives the JSON.
    """
    if out is None:
        sys.stdout.write(render(report, fmt))
        return
    if fmt == "table":
        sys.stdout.write(to_table(report))
        fmt = "json"
    Path(out).write_text(render(report, fmt), encoding="utf-8")
    logger.info("Wrote %s report to %s", fmt, out)
