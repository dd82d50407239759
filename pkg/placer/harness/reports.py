import csv
import logging
from pathlib import Path
from statistics import median
from typing import Dict, Iterable, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from .reference import GSRC_CIRCUITS

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class RunReport(BaseModel):
    """
    One row of the results table. `kind` is "run" for a single seed, "median"
    for the per-(circuit, method, variant) aggregate and "reference" for the
    shipped GSRC floorplan.
    """

    model_config = ConfigDict(extra="forbid")

    circuit: str
    method: str
    variant: str = ""
    kind: Literal["run", "median", "reference"] = "run"
    seed: Optional[int] = None
    hpwl: float
    overlap: float
    time_s: float = 0.0
    lhpwl: Optional[float] = None
    loverlap: Optional[float] = None
    legal: Optional[bool] = None

    @model_validator(mode="after")
    def _legalization_fields_together(self):
        if (self.lhpwl is None) != (self.legal is None):
            raise ValueError("lhpwl and legal must both be set when legalization ran, and both empty otherwise")
        if (self.kind == "run") != (self.seed is not None):
            raise ValueError("Only per-seed rows carry a seed")
        return self


REPORT_COLUMNS = list(RunReport.model_fields)
_KIND_ORDER = {"reference": 0, "run": 1, "median": 2}


def _circuit_key(circuit: str) -> Tuple[int, str]:
    if circuit in GSRC_CIRCUITS:
        return GSRC_CIRCUITS.index(circuit), circuit
    return len(GSRC_CIRCUITS), circuit


def sort_reports(reports: Iterable[RunReport]) -> List[RunReport]:
    return sorted(
        reports,
        key=lambda r: (_circuit_key(r.circuit), r.method, r.variant, _KIND_ORDER[r.kind],
                       -1 if r.seed is None else r.seed),
    )


def median_reports(reports: Iterable[RunReport]) -> List[RunReport]:
    """One median row per (circuit, method, variant) over the per-seed rows"""
    groups: Dict[Tuple[str, str, str], List[RunReport]] = {}
    for report in reports:
        if report.kind == "run":
            groups.setdefault((report.circuit, report.method, report.variant), []).append(report)

    rows = []
    for (circuit, method, variant), members in groups.items():
        legalized = all(r.lhpwl is not None for r in members)
        rows.append(RunReport(
            circuit=circuit,
            method=method,
            variant=variant,
            kind="median",
            hpwl=median(r.hpwl for r in members),
            overlap=median(r.overlap for r in members),
            time_s=median(r.time_s for r in members),
            lhpwl=median(r.lhpwl for r in members) if legalized else None,
            loverlap=median(r.loverlap for r in members) if legalized else None,
            legal=all(r.legal for r in members) if legalized else None,
        ))
    return rows


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_reports_csv(reports: Iterable[RunReport], path: PathLike) -> Path:
    """Write rows sorted by circuit, method, variant, kind and seed"""
    path = Path(path)
    rows = sort_reports(reports)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(REPORT_COLUMNS)
            for report in rows:
                writer.writerow([_format(getattr(report, c)) for c in REPORT_COLUMNS])
    except OSError as e:
        raise OSError(f"Cannot write report CSV {path}: {e}") from e
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path


def read_reports_csv(path: PathLike) -> List[RunReport]:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != REPORT_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        # empty cells are missing values; pydantic parses the rest
        return [RunReport(**{k: v for k, v in row.items() if v != ""}) for row in reader]
