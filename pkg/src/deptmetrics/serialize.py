"""JSON codecs for the domain types.

One canonical dict shape per type; the snapshot store, the response cache and
the fixture record files all share these field names.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .model import (
    AuthorId,
    Department,
    DepartmentMetrics,
    FacultyMember,
    Institution,
    ProfileStatus,
    Publication,
    Rank,
    UnitKind,
    ValidationError,
    YearWindow,
)


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def author_id_to_json(author_id: AuthorId) -> dict:
    return {"provider": author_id.provider, "value": author_id.value}


def author_id_from_json(data: Any) -> AuthorId:
    if isinstance(data, str):
        return AuthorId.parse(data)
    if isinstance(data, Mapping):
        return AuthorId(str(data["provider"]), str(data["value"]))
    raise ValidationError(f"cannot parse author id from {data!r}")


def window_to_json(window: YearWindow) -> dict:
    return {"start_year": window.start_year, "end_year": window.end_year}


def window_from_json(data: Mapping) -> YearWindow:
    return YearWindow(int(data["start_year"]), int(data["end_year"]))


def institution_to_json(inst: Institution) -> dict:
    return {
        "id": inst.id,
        "name": inst.name,
        "abbreviation": inst.abbreviation,
        "trs_count": inst.trs_count,
    }


def institution_from_json(data: Mapping) -> Institution:
    return Institution(
        id=str(data["id"]),
        name=str(data["name"]),
        abbreviation=str(data["abbreviation"]),
        trs_count=int(data.get("trs_count", 0)),
    )


def department_to_json(dept: Department) -> dict:
    return {
        "id": dept.id,
        "institution_id": dept.institution_id,
        "name": dept.name,
        "unit_kind": dept.unit_kind.value,
        "thematic_tags": sorted(dept.thematic_tags),
    }


def department_from_json(data: Mapping) -> Department:
    return Department(
        id=str(data["id"]),
        institution_id=str(data["institution_id"]),
        name=str(data["name"]),
        unit_kind=UnitKind(data.get("unit_kind", "Department")),
        thematic_tags=frozenset(data.get("thematic_tags", ())),
    )


def member_to_json(member: FacultyMember) -> dict:
    return {
        "id": member.id,
        "department_id": member.department_id,
        "display_name": member.display_name,
        "rank": member.rank.value,
        "author_ids": [a.token for a in member.author_ids],
        "profile_status": member.profile_status.value,
    }


def member_from_json(data: Mapping) -> FacultyMember:
    return FacultyMember(
        id=str(data["id"]),
        department_id=str(data["department_id"]),
        display_name=str(data["display_name"]),
        rank=Rank(data["rank"]),
        author_ids=tuple(author_id_from_json(a) for a in data.get("author_ids", ())),
        profile_status=ProfileStatus(data["profile_status"]),
    )


def publication_to_json(pub: Publication) -> dict:
    return {
        "doc_id": pub.doc_id,
        "title": pub.title,
        "year": pub.year,
        "citation_count": pub.citation_count,
        "author_ids": [author_id_to_json(a) for a in pub.author_ids],
        "source_title": pub.source_title,
        "doc_type": pub.doc_type,
        "subject_areas": list(pub.subject_areas),
    }


def publication_from_json(data: Mapping) -> Publication:
    return Publication(
        doc_id=str(data["doc_id"]),
        title=str(data["title"]),
        year=int(data["year"]),
        citation_count=int(data["citation_count"]),
        author_ids=tuple(author_id_from_json(a) for a in data["author_ids"]),
        source_title=data.get("source_title"),
        doc_type=data.get("doc_type"),
        subject_areas=tuple(data.get("subject_areas", ())),
    )


def fraction_to_json(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def fraction_from_json(text: str) -> Fraction:
    return Fraction(text)


def metrics_to_json(metrics: DepartmentMetrics) -> dict:
    return {
        "department_id": metrics.department_id,
        "window": window_to_json(metrics.window),
        "trs_total": metrics.trs_total,
        "trs_without_profile": metrics.trs_without_profile,
        "paper_count": metrics.paper_count,
        "citation_count": metrics.citation_count,
        "papers_per_trs": fraction_to_json(metrics.papers_per_trs),
        "citations_per_trs": fraction_to_json(metrics.citations_per_trs),
        "citations_per_paper": fraction_to_json(metrics.citations_per_paper),
    }


def metrics_from_json(data: Mapping) -> DepartmentMetrics:
    return DepartmentMetrics(
        department_id=str(data["department_id"]),
        window=window_from_json(data["window"]),
        trs_total=int(data["trs_total"]),
        trs_without_profile=int(data["trs_without_profile"]),
        paper_count=int(data["paper_count"]),
        citation_count=int(data["citation_count"]),
        papers_per_trs=fraction_from_json(data["papers_per_trs"]),
        citations_per_trs=fraction_from_json(data["citations_per_trs"]),
        citations_per_paper=fraction_from_json(data["citations_per_paper"]),
    )
