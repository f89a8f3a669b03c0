"""Deterministic CSV/JSON writers for index tables and correlation reports.

CSV output uses fixed decimals (ac and aac to one place, correlations to
four). JSON output keeps full float precision.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, List, Mapping, Sequence

from .indices import InstitutionIndices
from .ranking import CorrelationReport, RankingTable

INDEX_NAMES = ("ac", "aac", "ah", "aj")
INDEX_COLUMNS = ("institution_id", "ac", "aac", "ah_int", "ah_real", "aj", "n_authors", "n_papers")

_VALUE_FORMAT = {"ac": "{:.1f}", "aac": "{:.1f}", "ah": "{:.4f}", "aj": "{:.4f}"}


def _fmt_h_real(h_int: int, h_real: float) -> str:
    # never let rounding display a value whose integer part exceeds h_int
    text = f"{h_real:.4f}"
    if float(text) >= h_int + 1:
        text = f"{h_int}.9999"
    return text


def index_values(results: Mapping[str, InstitutionIndices], name: str) -> Dict[str, float]:
    """Per-institution value of one index; ``ah`` ranks by the real-valued statistic."""
    if name == "ah":
        return {k: r.ah.h_real for k, r in results.items()}
    if name not in INDEX_NAMES:
        raise ValueError(f"unknown index {name!r}; choose from {', '.join(INDEX_NAMES)}")
    return {k: getattr(r, name) for k, r in results.items()}


def _csv_text(header: Sequence[str], rows: List[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def indices_text(results: Mapping[str, InstitutionIndices], order: Sequence[str], fmt: str) -> str:
    rows = [results[k] for k in order]
    if fmt == "json":
        return _json_text({"columns": list(INDEX_COLUMNS), "rows": [
            {"institution_id": r.institution_id, "ac": r.ac, "aac": r.aac,
             "ah_int": r.ah.h_int, "ah_real": r.ah.h_real, "aj": r.aj,
             "n_authors": r.n_authors, "n_papers": r.n_papers}
            for r in rows]})
    return _csv_text(INDEX_COLUMNS, [
        (r.institution_id, f"{r.ac:.1f}", f"{r.aac:.1f}", r.ah.h_int,
         _fmt_h_real(r.ah.h_int, r.ah.h_real), f"{r.aj:.4f}", r.n_authors, r.n_papers)
        for r in rows])


def ranking_text(table: RankingTable, fmt: str) -> str:
    if fmt == "json":
        return _json_text({"index": table.index_name, "entries": [
            {"rank": e.rank, "institution_id": e.institution_id, "value": e.value, "avg_rank": e.avg_rank}
            for e in table.entries]})
    if table.index_name == "ah":
        fmt_value = lambda v: _fmt_h_real(math.floor(v), v)  # noqa: E731
    else:
        fmt_value = _VALUE_FORMAT.get(table.index_name, "{!r}").format
    return _csv_text(("rank", "institution_id", "value", "avg_rank"), [
        (e.rank, e.institution_id, fmt_value(e.value), f"{e.avg_rank:.1f}") for e in table.entries])


def _lower_triangle(labels: Sequence[str], matrix, cell) -> List[List[str]]:
    return [[labels[i]] + [cell(matrix[i][j]) if j <= i else "" for j in range(len(labels))]
            for i in range(len(labels))]


def correlation_texts(report: CorrelationReport, fmt: str) -> Dict[str, str]:
    """File name -> contents for a correlation report."""
    if fmt == "json":
        return {"correlation.json": _json_text(report.to_dict())}
    labels = list(report.labels)
    out = {}
    for name, matrix, cell in (("spearman", report.spearman, "{:.4f}".format),
                               ("kendall", report.kendall, "{:.4f}".format),
                               ("n_common", report.n_common, str)):
        header = [f"{name} correlation" if name != "n_common" else "n_common"] + labels
        out[f"{name}.csv"] = _csv_text(header, _lower_triangle(labels, matrix, cell))
    return out


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
