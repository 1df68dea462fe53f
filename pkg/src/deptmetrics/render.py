"""Shared presentation helpers.

The CLI and the HTTP API both render through these functions, which is what
keeps their numeric output identical for identical parameters.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .model import Department, DepartmentMetrics, Institution, round_ratio
from .ranking import RankingTable


def ratio_json(value: Fraction) -> dict:
    return {
        "display": round_ratio(value),
        "num": value.numerator,
        "den": value.denominator,
    }


def metrics_json(metrics: DepartmentMetrics) -> dict:
    return {
        "window": {
            "start_year": metrics.window.start_year,
            "end_year": metrics.window.end_year,
        },
        "trs_total": metrics.trs_total,
        "trs_without_profile": metrics.trs_without_profile,
        "paper_count": metrics.paper_count,
        "citation_count": metrics.citation_count,
        "papers_per_trs": ratio_json(metrics.papers_per_trs),
        "citations_per_trs": ratio_json(metrics.citations_per_trs),
        "citations_per_paper": ratio_json(metrics.citations_per_paper),
    }


def table_json(
    table: RankingTable,
    departments: Mapping[str, Department],
    institutions: Mapping[str, Institution],
) -> dict:
    rows = []
    for row in table.rows:
        dept = departments[row.department_id]
        inst = institutions[dept.institution_id]
        rows.append(
            {
                "rank": row.rank,
                "department_id": row.department_id,
                "department": dept.name,
                "unit_kind": dept.unit_kind.value,
                "institution": inst.abbreviation,
                "metrics": metrics_json(row.metrics),
            }
        )
    return {
        "metric": table.metric.value,
        "direction": table.direction.value,
        "scope": table.scope.value,
        "scope_params": dict(table.scope_params),
        "rows": rows,
    }


def human_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Plain fixed-width table for terminal output."""
    cells = [[str(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for row in cells:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)


def ranking_human_rows(table_payload: dict) -> tuple[list[str], list[list[str]]]:
    """Flatten a table_json payload into headers + printable rows."""
    headers = [
        "rank",
        "institution",
        "department",
        "trs",
        "no_profile",
        "papers",
        "papers/trs",
        "citations",
        "cit/trs",
        "cit/paper",
    ]
    rows = []
    for row in table_payload["rows"]:
        m = row["metrics"]
        rows.append(
            [
                str(row["rank"]),
                row["institution"],
                row["department"],
                str(m["trs_total"]),
                str(m["trs_without_profile"]),
                str(m["paper_count"]),
                m["papers_per_trs"]["display"],
                str(m["citation_count"]),
                m["citations_per_trs"]["display"],
                m["citations_per_paper"]["display"],
            ]
        )
    return headers, rows
