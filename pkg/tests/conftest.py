from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from deptmetrics.model import (
    AuthorId,
    Department,
    FacultyMember,
    Institution,
    ProfileStatus,
    Publication,
    Rank,
    YearWindow,
)
from deptmetrics.snapshot import Snapshot, compute_all_metrics, make_snapshot, with_metrics

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES_DIR = REPO_ROOT / "fixtures"


def aid(value: str, provider: str = "fixture") -> AuthorId:
    return AuthorId(provider, value)


def pub(
    doc_id: str,
    year: int,
    citations: int,
    authors: list[str],
    **kwargs,
) -> Publication:
    return Publication(
        doc_id=doc_id,
        title=kwargs.pop("title", f"Title {doc_id}"),
        year=year,
        citation_count=citations,
        author_ids=tuple(aid(a) for a in authors),
        **kwargs,
    )


def member(
    member_id: str,
    department_id: str,
    display_name: str,
    author_values: list[str],
    status: ProfileStatus | None = None,
) -> FacultyMember:
    if status is None:
        status = ProfileStatus.RESOLVED if author_values else ProfileStatus.NOT_FOUND
    return FacultyMember(
        id=member_id,
        department_id=department_id,
        display_name=display_name,
        rank=Rank.PROFESSOR,
        author_ids=tuple(aid(v) for v in author_values),
        profile_status=status,
    )


@pytest.fixture
def window() -> YearWindow:
    return YearWindow(2017, 2021)


def random_corpus(rng: random.Random, n_departments: int = 6) -> Snapshot:
    """Small randomized snapshot with computed metrics, for property tests."""
    window = YearWindow(2017, 2021)
    institutions = [
        Institution(id=f"inst-{i}", name=f"University {i}", abbreviation=f"U{i}")
        for i in range(2)
    ]
    departments = []
    members = []
    publications = []
    author_seq = 0
    doc_seq = 0
    for d in range(n_departments):
        inst = institutions[d % len(institutions)]
        dept = Department(
            id=f"dept-{d}",
            institution_id=inst.id,
            name=f"Department {d}",
        )
        departments.append(dept)
        dept_authors = []
        for m in range(rng.randint(1, 4)):
            author_seq += 1
            value = f"a{author_seq:03d}"
            dept_authors.append(value)
            members.append(
                member(f"{dept.id}-m{m}", dept.id, f"Member {author_seq}", [value])
            )
        for _ in range(rng.randint(0, 8)):
            doc_seq += 1
            n_authors = rng.randint(1, min(3, len(dept_authors)))
            authors = rng.sample(dept_authors, n_authors)
            publications.append(
                pub(
                    f"doc-{doc_seq:04d}",
                    rng.randint(2015, 2023),
                    rng.randint(0, 200),
                    authors,
                )
            )
    base = make_snapshot(
        window=window,
        institutions=institutions,
        departments=departments,
        members=members,
        publications=publications,
        created_at="2024-01-01T00:00:00+00:00",
    )
    return with_metrics(base, compute_all_metrics(base))


def scale_citations(snapshot: Snapshot, k: int) -> Snapshot:
    """Rebuild the snapshot with every citation count multiplied by k."""
    scaled = [
        Publication(
            doc_id=p.doc_id,
            title=p.title,
            year=p.year,
            citation_count=p.citation_count * k,
            author_ids=p.author_ids,
            source_title=p.source_title,
            doc_type=p.doc_type,
            subject_areas=p.subject_areas,
        )
        for p in snapshot.publications
    ]
    base = make_snapshot(
        window=snapshot.window,
        institutions=snapshot.institutions,
        departments=snapshot.departments,
        members=snapshot.members,
        publications=scaled,
        overrides=snapshot.overrides,
        provenance=snapshot.provenance,
        created_at=snapshot.created_at,
    )
    return with_metrics(base, compute_all_metrics(base))


def write_records(root: Path, records: list[dict]) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    for i, record in enumerate(records):
        name = (
            f"author_{record['author_id']['value']}.json"
            if "author_id" in record
            else f"pub_{record['doc_id']}.json"
        )
        (root / name).write_text(
            json.dumps(record, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return root


def profile_record(
    value: str,
    indexed_name: str,
    variants: list[str] | None = None,
    affiliations: list[str] | None = None,
    subjects: list[str] | None = None,
    document_count: int = 0,
) -> dict:
    return {
        "author_id": {"provider": "fixture", "value": value},
        "indexed_name": indexed_name,
        "name_variants": variants if variants is not None else [indexed_name],
        "affiliation_history": affiliations or [],
        "document_count": document_count,
        "subject_areas": subjects or [],
    }


def pub_record(
    doc_id: str,
    year: int,
    citations: int,
    authors: list[str],
    subjects: list[str] | None = None,
) -> dict:
    return {
        "doc_id": doc_id,
        "title": f"Title {doc_id}",
        "year": year,
        "citation_count": citations,
        "author_ids": [{"provider": "fixture", "value": v} for v in authors],
        "source_title": None,
        "doc_type": "Article",
        "subject_areas": subjects or [],
    }


@pytest.fixture
def gateway_records_dir(tmp_path: Path) -> Path:
    """Small provider corpus: the alpha-search trio plus a paginated author.

    fixture:001 claims 23 in-window docs (plus one from 2016); doc P010 is
    co-authored with fixture:002.
    """
    records: list[dict] = [
        profile_record(
            "001",
            "Alpha, A.",
            variants=["Alpha, A.", "Alpha, Anna"],
            affiliations=["Alpha University"],
            subjects=["Physics"],
            document_count=24,
        ),
        profile_record(
            "002",
            "Alphas, B.",
            variants=["Alphas, B."],
            affiliations=["Beta Institute"],
            document_count=1,
        ),
        profile_record("003", "Beta, C.", variants=["Beta, C."]),
    ]
    years = [2017, 2018, 2019, 2020, 2021]
    for i in range(1, 24):
        authors = ["001", "002"] if i == 10 else ["001"]
        records.append(
            pub_record(f"P{i:03d}", years[i % 5], i * 3, authors, subjects=["Physics"])
        )
    records.append(pub_record("P024", 2016, 99, ["001"], subjects=["Physics"]))
    return write_records(tmp_path / "records", records)


class FakeClock:
    """Deterministic clock + sleep pair for limiter and retry tests."""

    def __init__(self) -> None:
        self.now = 0.0
        self.sleeps: list[float] = []

    def monotonic(self) -> float:
        return self.now

    def sleep(self, seconds: float) -> None:
        self.sleeps.append(seconds)
        self.now += max(seconds, 1e-9)
