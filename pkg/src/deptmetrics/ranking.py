"""Ranking products: intra-institution tables, thematic queries, ad-hoc compares.

Read-only over an immutable snapshot view; fully parallelizable. Orderings are
deterministic: exact rational comparisons plus a fixed tie-break chain
(chosen metric, then the headline metrics not chosen, then department name).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping, Optional, Sequence

from .model import (
    Department,
    DepartmentMetrics,
    DomainError,
    NotFoundError,
    ValidationError,
    normalize_text,
)

if TYPE_CHECKING:  # pragma: no cover
    from .snapshot import Snapshot

ADHOC_MIN = 2
ADHOC_MAX = 5


class Metric(Enum):
    CITATIONS_PER_TRS = "citations_per_trs"
    CITATIONS_PER_PAPER = "citations_per_paper"
    PAPERS_PER_TRS = "papers_per_trs"
    PAPER_COUNT = "paper_count"
    CITATION_COUNT = "citation_count"


#: The two metrics the study reports side by side.
HEADLINE_METRICS = (Metric.CITATIONS_PER_TRS, Metric.CITATIONS_PER_PAPER)


class Direction(Enum):
    DESCENDING = "desc"
    ASCENDING = "asc"


class Scope(Enum):
    INSTITUTION = "institution"
    THEMATIC = "thematic"
    ADHOC = "adhoc"


def metric_value(metrics: DepartmentMetrics, metric: Metric) -> Fraction:
    return Fraction(getattr(metrics, metric.value))


@dataclass(frozen=True)
class RankingRow:
    rank: int
    department_id: str
    metrics: DepartmentMetrics


@dataclass(frozen=True)
class RankingTable:
    metric: Metric
    direction: Direction
    scope: Scope
    scope_params: tuple[tuple[str, str], ...]
    rows: tuple[RankingRow, ...]

    def department_ids(self) -> tuple[str, ...]:
        return tuple(row.department_id for row in self.rows)


def _tie_break_chain(metric: Metric) -> list[Metric]:
    return [metric] + [m for m in HEADLINE_METRICS if m is not metric]


def _make_table(
    entries: Iterable[tuple[Department, DepartmentMetrics]],
    metric: Metric,
    direction: Direction,
    scope: Scope,
    scope_params: Mapping[str, str],
    k: Optional[int] = None,
) -> RankingTable:
    chain = _tie_break_chain(metric)

    def sort_key(entry: tuple[Department, DepartmentMetrics]):
        dept, m = entry
        primary = metric_value(m, metric)
        if direction is Direction.DESCENDING:
            primary = -primary
        # Secondary metrics always compare descending; name breaks the rest.
        extras = tuple(-metric_value(m, extra) for extra in chain[1:])
        return (primary, *extras, dept.name)

    ordered = sorted(entries, key=sort_key)

    rows: list[RankingRow] = []
    previous: Optional[Fraction] = None
    rank = 0
    for position, (dept, m) in enumerate(ordered, start=1):
        value = metric_value(m, metric)
        if previous is None or value != previous:
            rank = position
            previous = value
        rows.append(RankingRow(rank=rank, department_id=dept.id, metrics=m))
    if k is not None:
        if k < 0:
            raise ValidationError("top-k must be non-negative")
        rows = rows[:k]
    return RankingTable(
        metric=metric,
        direction=direction,
        scope=scope,
        scope_params=tuple(sorted(scope_params.items())),
        rows=tuple(rows),
    )


def _metrics_by_department(snapshot: "Snapshot") -> dict[str, DepartmentMetrics]:
    return {m.department_id: m for m in snapshot.metrics}


def rank_institution(
    snapshot: "Snapshot",
    institution_id: str,
    metric: Metric = Metric.CITATIONS_PER_TRS,
    *,
    k: Optional[int] = None,
    direction: Direction = Direction.DESCENDING,
) -> RankingTable:
    """Rank every department of one institution; decreasing order by default."""
    if institution_id not in {inst.id for inst in snapshot.institutions}:
        raise NotFoundError(f"unknown institution: {institution_id}")
    by_dept = _metrics_by_department(snapshot)
    entries = [
        (dept, by_dept[dept.id])
        for dept in snapshot.departments
        if dept.institution_id == institution_id and dept.id in by_dept
    ]
    if not entries:
        raise DomainError(f"no computed metrics for institution {institution_id}")
    return _make_table(
        entries,
        metric,
        direction,
        Scope.INSTITUTION,
        {"institution_id": institution_id},
        k,
    )


def _matches_terms(dept: Department, terms: Sequence[str]) -> bool:
    name = normalize_text(dept.name)
    tags = [normalize_text(tag) for tag in dept.thematic_tags]
    for term in terms:
        if term in name or any(term in tag for tag in tags):
            return True
    return False


def rank_thematic(
    snapshot: "Snapshot",
    query_terms: Sequence[str],
    *,
    exclude: Iterable[str] = (),
    metric: Metric = Metric.CITATIONS_PER_TRS,
    k: Optional[int] = None,
    direction: Direction = Direction.DESCENDING,
) -> RankingTable:
    """Cross-university ranking of departments matching any query term.

    Matching is case-insensitive, diacritic-folded substring search over
    department names and thematic tags. An empty candidate set is a valid,
    empty table.
    """
    terms = [normalize_text(term) for term in query_terms if term.strip()]
    if not terms:
        raise ValidationError("query terms required")
    excluded = set(exclude)
    by_dept = _metrics_by_department(snapshot)
    entries = [
        (dept, by_dept[dept.id])
        for dept in snapshot.departments
        if dept.id in by_dept
        and dept.id not in excluded
        and _matches_terms(dept, terms)
    ]
    return _make_table(
        entries,
        metric,
        direction,
        Scope.THEMATIC,
        {"query": " ".join(terms), "exclude": ",".join(sorted(excluded))},
        k,
    )


def compare_adhoc(
    snapshot: "Snapshot",
    department_ids: Sequence[str],
    metric: Metric = Metric.CITATIONS_PER_TRS,
    *,
    direction: Direction = Direction.DESCENDING,
) -> RankingTable:
    """Side-by-side table over two to five chosen departments."""
    unique_ids = list(dict.fromkeys(department_ids))
    if len(unique_ids) > ADHOC_MAX:
        raise ValidationError("comparison limited to five departments")
    if len(unique_ids) < ADHOC_MIN:
        raise ValidationError("comparison needs at least two departments")
    departments = {dept.id: dept for dept in snapshot.departments}
    by_dept = _metrics_by_department(snapshot)
    missing = [i for i in unique_ids if i not in departments or i not in by_dept]
    if missing:
        raise NotFoundError(f"unknown department: {', '.join(missing)}")
    entries = [(departments[i], by_dept[i]) for i in unique_ids]
    return _make_table(
        entries,
        metric,
        direction,
        Scope.ADHOC,
        {"ids": ",".join(unique_ids)},
    )
