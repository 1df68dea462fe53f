"""Department statistics: window filtering, within-department dedup, aggregates.

Everything here is a pure function over immutable inputs; departments can be
computed in parallel with no shared state.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Collection, Iterable, Mapping, Optional, Sequence

from .model import (
    Department,
    DepartmentMetrics,
    DomainError,
    FacultyMember,
    ProfileStatus,
    Publication,
    YearWindow,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DedupReport:
    department_id: str
    raw_doc_instances: int
    unique_docs: int
    duplicates_removed: int

    def __post_init__(self) -> None:
        if self.duplicates_removed != self.raw_doc_instances - self.unique_docs:
            raise DomainError("dedup report counts are inconsistent")
        if self.duplicates_removed < 0:
            raise DomainError("duplicates_removed must be non-negative")


@dataclass(frozen=True)
class Override:
    """Explicit per-document exclusion, applied to one member before dedup."""

    member_id: str
    doc_id: str
    reason: str = ""


def window_filter(
    publications: Iterable[Publication], window: YearWindow
) -> list[Publication]:
    """Keep exactly the in-window docs, in stable (year, doc_id) order."""
    kept = [pub for pub in publications if window.contains(pub.year)]
    kept.sort(key=lambda pub: (pub.year, pub.doc_id))
    return kept


def dedup_department(
    department_id: str,
    docs_by_member: Mapping[str, Collection[Publication]],
) -> tuple[list[Publication], DedupReport]:
    """Union the members' publication sets by doc_id.

    A paper co-authored by several members of the department counts once.
    Conflicting citation counts for the same doc keep the maximum and log a
    data-quality warning.
    """
    instances = 0
    by_doc: dict[str, Publication] = {}
    for member_id in sorted(docs_by_member):
        member_docs = sorted(docs_by_member[member_id], key=lambda p: p.doc_id)
        for pub in member_docs:
            instances += 1
            current = by_doc.get(pub.doc_id)
            if current is None:
                by_doc[pub.doc_id] = pub
            elif pub.citation_count != current.citation_count:
                log.warning(
                    "conflicting citation counts for %s in %s (%d vs %d); keeping max",
                    pub.doc_id,
                    department_id,
                    current.citation_count,
                    pub.citation_count,
                )
                if pub.citation_count > current.citation_count:
                    by_doc[pub.doc_id] = pub
    unique = sorted(by_doc.values(), key=lambda p: (p.year, p.doc_id))
    report = DedupReport(
        department_id=department_id,
        raw_doc_instances=instances,
        unique_docs=len(unique),
        duplicates_removed=instances - len(unique),
    )
    return unique, report


def compute_metrics(
    department_id: str,
    publications: Collection[Publication],
    window: YearWindow,
    *,
    trs_total: int,
    trs_without_profile: int,
) -> DepartmentMetrics:
    """Aggregate a deduplicated in-window publication set.

    Self-citations are not excluded; citation counts are taken as fetched.
    """
    if trs_total < 1:
        raise DomainError("empty department")
    return DepartmentMetrics.from_counts(
        department_id,
        window,
        trs_total=trs_total,
        trs_without_profile=trs_without_profile,
        paper_count=len(publications),
        citation_count=sum(pub.citation_count for pub in publications),
    )


def member_publications(
    member: FacultyMember, publications: Iterable[Publication]
) -> list[Publication]:
    """Docs claimed by any of the member's author profiles."""
    ids = set(member.author_ids)
    if not ids:
        return []
    return [pub for pub in publications if ids.intersection(pub.author_ids)]


def department_pipeline(
    department: Department,
    members: Sequence[FacultyMember],
    publications: Iterable[Publication],
    window: YearWindow,
    *,
    overrides: Iterable[Override] = (),
    doc_types: Optional[Collection[str]] = None,
) -> tuple[list[Publication], DedupReport, DepartmentMetrics]:
    """Full per-department computation from a roster-plus-publications view.

    Order of operations: window filter, doc-type allow-list, per-doc override
    exclusions, then dedup and aggregation. The result is independent of
    member and publication ordering.
    """
    excluded = {(o.member_id, o.doc_id) for o in overrides}
    pubs = list(publications)
    docs_by_member: dict[str, list[Publication]] = {}
    for member in members:
        docs = window_filter(member_publications(member, pubs), window)
        if doc_types is not None:
            docs = [d for d in docs if d.doc_type in doc_types]
        docs = [d for d in docs if (member.id, d.doc_id) not in excluded]
        docs_by_member[member.id] = docs
    unique, report = dedup_department(department.id, docs_by_member)
    metrics = compute_metrics(
        department.id,
        unique,
        window,
        trs_total=len(members),
        trs_without_profile=sum(
            1 for m in members if m.profile_status is ProfileStatus.NOT_FOUND
        ),
    )
    return unique, report, metrics
