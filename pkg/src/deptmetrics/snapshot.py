"""Content-addressed, immutable snapshot store.

A snapshot bundles rosters, fetched records, overrides, computed metrics and
fetch provenance. On disk it is one directory of line-delimited JSON
collections plus a manifest with digests: diff-able, streamable, no database.
Snapshots never mutate; writes always create a new directory atomically.

The snapshot id is the SHA-256 of the canonical content (collections in
canonical order); ``created_at`` is stamped at save time and deliberately
excluded, so identical content always yields the identical id.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
import os
import shutil
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .metrics import Override, department_pipeline
from .model import (
    Department,
    DepartmentMetrics,
    DomainError,
    FacultyMember,
    Institution,
    NotFoundError,
    Publication,
    ValidationError,
    YearWindow,
    round_ratio,
)
from .providers.base import FetchReceipt
from .serialize import (
    canonical_json,
    department_from_json,
    department_to_json,
    institution_from_json,
    institution_to_json,
    member_from_json,
    member_to_json,
    metrics_from_json,
    metrics_to_json,
    publication_from_json,
    publication_to_json,
    window_from_json,
    window_to_json,
)

FORMAT_VERSION = 1

EXPORT_COLUMNS = [
    "institution",
    "department",
    "trs_total",
    "trs_without_profile",
    "paper_count",
    "papers_per_trs",
    "citation_count",
    "citations_per_trs",
    "citations_per_paper",
]


class SnapshotCorruptionError(DomainError):
    """Stored bytes do not match the manifest digests."""


def receipt_to_json(receipt: FetchReceipt) -> dict:
    return {
        "requested_author_ids": list(receipt.requested_author_ids),
        "retrieved_doc_count": receipt.retrieved_doc_count,
        "pages_fetched": receipt.pages_fetched,
        "cache_hits": receipt.cache_hits,
        "fetched_at": receipt.fetched_at,
    }


def receipt_from_json(data: dict) -> FetchReceipt:
    return FetchReceipt(
        requested_author_ids=tuple(data["requested_author_ids"]),
        retrieved_doc_count=int(data["retrieved_doc_count"]),
        pages_fetched=int(data["pages_fetched"]),
        cache_hits=int(data["cache_hits"]),
        fetched_at=str(data["fetched_at"]),
    )


@dataclass(frozen=True)
class Snapshot:
    snapshot_id: str
    created_at: str
    window: YearWindow
    institutions: tuple[Institution, ...]
    departments: tuple[Department, ...]
    members: tuple[FacultyMember, ...]
    publications: tuple[Publication, ...]
    overrides: tuple[Override, ...]
    metrics: tuple[DepartmentMetrics, ...]
    provenance: tuple[FetchReceipt, ...]


def _canonical_collections(
    window: YearWindow,
    institutions: Iterable[Institution],
    departments: Iterable[Department],
    members: Iterable[FacultyMember],
    publications: Iterable[Publication],
    overrides: Iterable[Override],
    metrics: Iterable[DepartmentMetrics],
    provenance: Iterable[FetchReceipt],
) -> dict:
    return {
        "format": FORMAT_VERSION,
        "window": window_to_json(window),
        "institutions": [
            institution_to_json(i) for i in sorted(institutions, key=lambda x: x.id)
        ],
        "departments": [
            department_to_json(d) for d in sorted(departments, key=lambda x: x.id)
        ],
        "members": [member_to_json(m) for m in sorted(members, key=lambda x: x.id)],
        "publications": [
            publication_to_json(p)
            for p in sorted(publications, key=lambda x: (x.year, x.doc_id))
        ],
        "overrides": [
            {"member_id": o.member_id, "doc_id": o.doc_id, "reason": o.reason}
            for o in sorted(overrides, key=lambda x: (x.member_id, x.doc_id))
        ],
        "metrics": [
            metrics_to_json(m) for m in sorted(metrics, key=lambda x: x.department_id)
        ],
        "provenance": [
            receipt_to_json(r)
            for r in sorted(
                provenance, key=lambda x: (x.fetched_at, x.requested_author_ids)
            )
        ],
    }


def _validate_identity_rules(
    institutions: tuple[Institution, ...],
    departments: tuple[Department, ...],
    members: tuple[FacultyMember, ...],
    publications: tuple[Publication, ...],
) -> None:
    abbreviations = [i.abbreviation for i in institutions]
    if len(set(abbreviations)) != len(abbreviations):
        raise DomainError("institution abbreviations must be unique within a snapshot")
    institution_ids = {i.id for i in institutions}
    if len(institution_ids) != len(institutions):
        raise DomainError("duplicate institution id")
    dept_ids = {d.id for d in departments}
    if len(dept_ids) != len(departments):
        raise DomainError("duplicate department id")
    for dept in departments:
        if dept.institution_id not in institution_ids:
            raise DomainError(f"department {dept.id} references unknown institution")
    claims: dict = {}
    member_ids = set()
    for m in members:
        if m.id in member_ids:
            raise DomainError(f"duplicate member id {m.id}")
        member_ids.add(m.id)
        if m.department_id not in dept_ids:
            raise DomainError(f"member {m.id} references unknown department")
        for author_id in m.author_ids:
            owner = claims.setdefault(author_id, m.id)
            if owner != m.id:
                raise DomainError(
                    f"author id {author_id.token} claimed by {owner} and {m.id}"
                )
    doc_ids = [p.doc_id for p in publications]
    if len(set(doc_ids)) != len(doc_ids):
        raise DomainError("duplicate doc_id in snapshot publications")


def make_snapshot(
    *,
    window: YearWindow,
    institutions: Iterable[Institution] = (),
    departments: Iterable[Department] = (),
    members: Iterable[FacultyMember] = (),
    publications: Iterable[Publication] = (),
    overrides: Iterable[Override] = (),
    metrics: Iterable[DepartmentMetrics] = (),
    provenance: Iterable[FetchReceipt] = (),
    created_at: Optional[str] = None,
) -> Snapshot:
    """Canonicalize collections and derive the content-addressed id.

    trs_count is derived here (members per institution), never trusted from
    the caller, so the headcount invariant holds by construction.
    """
    departments = tuple(departments)
    members = tuple(members)
    publications = tuple(publications)
    dept_inst = {d.id: d.institution_id for d in departments}
    counts: dict[str, int] = {}
    for m in members:
        inst_id = dept_inst.get(m.department_id)
        if inst_id is not None:
            counts[inst_id] = counts.get(inst_id, 0) + 1
    institutions = tuple(
        Institution(
            id=i.id,
            name=i.name,
            abbreviation=i.abbreviation,
            trs_count=counts.get(i.id, 0),
        )
        for i in institutions
    )
    _validate_identity_rules(institutions, departments, members, publications)
    content = _canonical_collections(
        window, institutions, departments, members, publications, overrides, metrics, provenance
    )
    snapshot_id = hashlib.sha256(canonical_json(content).encode("utf-8")).hexdigest()
    return Snapshot(
        snapshot_id=snapshot_id,
        created_at=created_at
        or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        window=window,
        institutions=tuple(institution_from_json(x) for x in content["institutions"]),
        departments=tuple(department_from_json(x) for x in content["departments"]),
        members=tuple(member_from_json(x) for x in content["members"]),
        publications=tuple(publication_from_json(x) for x in content["publications"]),
        overrides=tuple(
            Override(o["member_id"], o["doc_id"], o["reason"])
            for o in content["overrides"]
        ),
        metrics=tuple(metrics_from_json(x) for x in content["metrics"]),
        provenance=tuple(receipt_from_json(x) for x in content["provenance"]),
    )


def compute_all_metrics(
    snapshot: Snapshot, *, doc_types: Optional[Iterable[str]] = None
) -> tuple[DepartmentMetrics, ...]:
    """Recompute every department's metrics from the snapshot's raw inputs."""
    members_by_dept: dict[str, list[FacultyMember]] = {}
    for member in snapshot.members:
        members_by_dept.setdefault(member.department_id, []).append(member)
    allow = None if doc_types is None else set(doc_types)
    out = []
    for dept in snapshot.departments:
        members = members_by_dept.get(dept.id, [])
        if not members:
            continue
        _, _, metrics = department_pipeline(
            dept,
            members,
            snapshot.publications,
            snapshot.window,
            overrides=snapshot.overrides,
            doc_types=allow,
        )
        out.append(metrics)
    return tuple(out)


def with_metrics(snapshot: Snapshot, metrics: Iterable[DepartmentMetrics]) -> Snapshot:
    """New snapshot (new id) carrying the given computed metrics."""
    return make_snapshot(
        window=snapshot.window,
        institutions=snapshot.institutions,
        departments=snapshot.departments,
        members=snapshot.members,
        publications=snapshot.publications,
        overrides=snapshot.overrides,
        metrics=metrics,
        provenance=snapshot.provenance,
        created_at=snapshot.created_at,
    )


# -- persistence ---------------------------------------------------------------

_COLLECTION_FILES = [
    "institutions.jsonl",
    "departments.jsonl",
    "members.jsonl",
    "publications.jsonl",
    "overrides.jsonl",
    "metrics.jsonl",
    "provenance.jsonl",
]


def _jsonl(records: Iterable[dict]) -> str:
    return "".join(
        json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n"
        for record in records
    )


def save(snapshot: Snapshot, store_dir: Path | str) -> str:
    """Atomic write: no partial snapshot is ever visible under its id."""
    store = Path(store_dir)
    final = store / snapshot.snapshot_id
    if final.exists():
        return snapshot.snapshot_id
    content = _canonical_collections(
        snapshot.window,
        snapshot.institutions,
        snapshot.departments,
        snapshot.members,
        snapshot.publications,
        snapshot.overrides,
        snapshot.metrics,
        snapshot.provenance,
    )
    files = {
        "institutions.jsonl": _jsonl(content["institutions"]),
        "departments.jsonl": _jsonl(content["departments"]),
        "members.jsonl": _jsonl(content["members"]),
        "publications.jsonl": _jsonl(content["publications"]),
        "overrides.jsonl": _jsonl(content["overrides"]),
        "metrics.jsonl": _jsonl(content["metrics"]),
        "provenance.jsonl": _jsonl(content["provenance"]),
    }
    manifest = {
        "format": FORMAT_VERSION,
        "snapshot_id": snapshot.snapshot_id,
        "created_at": snapshot.created_at,
        "window": window_to_json(snapshot.window),
        "files": {
            name: hashlib.sha256(text.encode("utf-8")).hexdigest()
            for name, text in files.items()
        },
    }
    tmp = store / f".tmp-{snapshot.snapshot_id}-{os.getpid()}"
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir(parents=True)
    try:
        for name, text in files.items():
            (tmp / name).write_text(text, encoding="utf-8")
        (tmp / "manifest.json").write_text(
            json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        os.replace(tmp, final)
    finally:
        if tmp.exists():
            shutil.rmtree(tmp)
    return snapshot.snapshot_id


def _read_jsonl(path: Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def load(store_dir: Path | str, snapshot_id: str) -> Snapshot:
    store = Path(store_dir)
    directory = store / snapshot_id
    if not directory.is_dir():
        raise NotFoundError(f"unknown snapshot: {snapshot_id}")
    manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    for name in _COLLECTION_FILES:
        digest = hashlib.sha256((directory / name).read_bytes()).hexdigest()
        if digest != manifest["files"][name]:
            raise SnapshotCorruptionError(f"digest mismatch in {snapshot_id}/{name}")
    snapshot = make_snapshot(
        window=window_from_json(manifest["window"]),
        institutions=[
            institution_from_json(x) for x in _read_jsonl(directory / "institutions.jsonl")
        ],
        departments=[
            department_from_json(x) for x in _read_jsonl(directory / "departments.jsonl")
        ],
        members=[member_from_json(x) for x in _read_jsonl(directory / "members.jsonl")],
        publications=[
            publication_from_json(x)
            for x in _read_jsonl(directory / "publications.jsonl")
        ],
        overrides=[
            Override(o["member_id"], o["doc_id"], o.get("reason", ""))
            for o in _read_jsonl(directory / "overrides.jsonl")
        ],
        metrics=[metrics_from_json(x) for x in _read_jsonl(directory / "metrics.jsonl")],
        provenance=[
            receipt_from_json(x) for x in _read_jsonl(directory / "provenance.jsonl")
        ],
        created_at=manifest["created_at"],
    )
    if snapshot.snapshot_id != snapshot_id:
        raise SnapshotCorruptionError(
            f"content hash {snapshot.snapshot_id} does not match id {snapshot_id}"
        )
    return snapshot


def list_snapshots(store_dir: Path | str) -> list[tuple[str, str]]:
    """(snapshot_id, created_at) pairs, oldest first."""
    store = Path(store_dir)
    if not store.is_dir():
        return []
    entries = []
    for directory in store.iterdir():
        manifest_path = directory / "manifest.json"
        if directory.name.startswith(".") or not manifest_path.is_file():
            continue
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        entries.append((manifest["snapshot_id"], manifest["created_at"]))
    entries.sort(key=lambda pair: (pair[1], pair[0]))
    return entries


# -- export ----------------------------------------------------------------


def _export_rows(snapshot: Snapshot) -> list[dict]:
    metrics_by_dept = {m.department_id: m for m in snapshot.metrics}
    institutions = {i.id: i for i in snapshot.institutions}
    # Institutions in decreasing faculty size, as the roster listings read.
    inst_order = sorted(
        snapshot.institutions, key=lambda i: (-i.trs_count, i.name)
    )
    rows = []
    for inst in inst_order:
        depts = [
            (d, metrics_by_dept[d.id])
            for d in snapshot.departments
            if d.institution_id == inst.id and d.id in metrics_by_dept
        ]
        depts.sort(
            key=lambda pair: (
                -pair[1].citations_per_trs,
                -pair[1].citations_per_paper,
                pair[0].name,
            )
        )
        for dept, m in depts:
            rows.append(
                {
                    "institution": institutions[dept.institution_id].abbreviation,
                    "department": dept.name,
                    "trs_total": m.trs_total,
                    "trs_without_profile": m.trs_without_profile,
                    "paper_count": m.paper_count,
                    "papers_per_trs": round_ratio(m.papers_per_trs),
                    "citation_count": m.citation_count,
                    "citations_per_trs": round_ratio(m.citations_per_trs),
                    "citations_per_paper": round_ratio(m.citations_per_paper),
                }
            )
    return rows


def export_full_table(snapshot: Snapshot, format: str = "csv") -> bytes:
    """Report-style full table: grouped by institution, decreasing
    citations per TRS member within each, ratios rendered with 2 decimals."""
    if snapshot.metrics:
        rows = _export_rows(snapshot)
    elif snapshot.departments:
        raise DomainError("metrics missing: compute before exporting")
    else:
        rows = []
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=EXPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue().encode("utf-8")
    if format == "json":
        payload = {
            "snapshot_id": snapshot.snapshot_id,
            "window": window_to_json(snapshot.window),
            "rows": rows,
        }
        return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    raise ValidationError(f"unsupported export format: {format!r}")
