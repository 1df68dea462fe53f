"""Roster ingestion and profile hygiene.

Ingests institution/department/faculty rosters, attaches author ids, and
assists the manual review work: ranking merge candidates, recording applied
merges, and flagging suspect publications for human decision. Nothing here
auto-removes data; exclusions happen only through explicit overrides.

Registry mutations are serialized (single-writer); snapshot views handed to
the metrics engine are immutable.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Collection, Iterable, Mapping, Optional, Sequence

from .metrics import Override
from .model import (
    AuthorId,
    Department,
    DomainError,
    FacultyMember,
    Institution,
    NotFoundError,
    ProfileStatus,
    Publication,
    UnitKind,
    ValidationError,
    normalize_text,
    parse_rank,
    slugify,
)
from .providers.base import AuthorProfileRecord

log = logging.getLogger(__name__)

ROSTER_HEADER = ["institution", "department", "member", "rank", "author_ids"]

#: Shared co-authors at which co-author evidence saturates to full weight.
COAUTHOR_SATURATION = 3


@dataclass(frozen=True)
class MergeWeights:
    name_variant: Fraction = Fraction(35, 100)
    affiliation: Fraction = Fraction(25, 100)
    coauthor: Fraction = Fraction(30, 100)
    subject_area: Fraction = Fraction(10, 100)
    accept_threshold: Fraction = Fraction(80, 100)


DEFAULT_MERGE_WEIGHTS = MergeWeights()


@dataclass(frozen=True)
class MergeEvidence:
    kind: str
    value: Fraction
    detail: str


@dataclass(frozen=True)
class MergeCandidate:
    member_id: str
    profile_a: AuthorId
    profile_b: AuthorId
    score: Fraction
    evidence: tuple[MergeEvidence, ...]

    def __post_init__(self) -> None:
        if self.profile_a == self.profile_b:
            raise ValidationError("merge candidate profiles must differ")


class FlagReason(Enum):
    SUBJECT_AREA_OUTLIER = "SubjectAreaOutlier"
    COAUTHOR_DISJOINT = "CoauthorDisjoint"


@dataclass(frozen=True)
class ContaminationFlag:
    member_id: str
    author_id: AuthorId
    suspect_doc_ids: tuple[str, ...]
    reason: FlagReason

    def __post_init__(self) -> None:
        if not self.suspect_doc_ids:
            raise ValidationError("contamination flag needs at least one doc id")


@dataclass
class IngestReport:
    created_institutions: int = 0
    created_departments: int = 0
    created_members: int = 0
    updated_members: int = 0
    unchanged_members: int = 0
    member_counts: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def empty_delta(self) -> bool:
        return not (
            self.created_institutions
            or self.created_departments
            or self.created_members
            or self.updated_members
        )


def _normalized_set(values: Iterable[str]) -> set[str]:
    return {normalize_text(v) for v in values if v.strip()}


def _coauthors(
    author_id: AuthorId, publications: Collection[Publication]
) -> set[AuthorId]:
    out: set[AuthorId] = set()
    for pub in publications:
        out.update(pub.author_ids)
    out.discard(author_id)
    return out


def propose_merges(
    member: FacultyMember,
    candidates: Sequence[AuthorProfileRecord],
    *,
    publications_by_author: Optional[Mapping[AuthorId, Collection[Publication]]] = None,
    weights: MergeWeights = DEFAULT_MERGE_WEIGHTS,
) -> list[MergeCandidate]:
    """Rank candidate profiles against the member's anchor profile.

    Pure and deterministic: same inputs give the same ordered output. The
    candidate list must include the anchor's own record (the member's first
    assigned profile); every other record is paired against the anchor.
    Co-author evidence needs ``publications_by_author`` for both sides and
    saturates at COAUTHOR_SATURATION shared co-authors.
    """
    if not member.author_ids:
        raise ValidationError(f"member {member.id} has no assigned profile")
    anchor_id = member.author_ids[0]
    by_id = {}
    for record in candidates:
        by_id.setdefault(record.author_id, record)
    anchor = by_id.get(anchor_id)
    if anchor is None:
        raise ValidationError(
            f"candidates must include the anchor profile {anchor_id.token}"
        )

    anchor_names = _normalized_set(anchor.name_variants) | {
        normalize_text(anchor.indexed_name)
    }
    anchor_affiliations = _normalized_set(anchor.affiliation_history)
    anchor_subjects = _normalized_set(anchor.subject_areas)
    pubs = publications_by_author or {}
    anchor_coauthors = (
        _coauthors(anchor_id, pubs[anchor_id]) if anchor_id in pubs else None
    )

    results: list[MergeCandidate] = []
    for other_id in sorted(by_id):
        if other_id == anchor_id:
            continue
        other = by_id[other_id]
        evidence: list[MergeEvidence] = []

        shared_names = anchor_names & (
            _normalized_set(other.name_variants) | {normalize_text(other.indexed_name)}
        )
        if shared_names:
            evidence.append(
                MergeEvidence(
                    "name-variant-overlap", Fraction(1), sorted(shared_names)[0]
                )
            )
        shared_affiliations = anchor_affiliations & _normalized_set(
            other.affiliation_history
        )
        if shared_affiliations:
            evidence.append(
                MergeEvidence(
                    "affiliation-overlap", Fraction(1), sorted(shared_affiliations)[0]
                )
            )
        if anchor_coauthors is not None and other_id in pubs:
            shared = anchor_coauthors & _coauthors(other_id, pubs[other_id])
            if shared:
                value = min(Fraction(1), Fraction(len(shared), COAUTHOR_SATURATION))
                evidence.append(
                    MergeEvidence(
                        "coauthor-overlap", value, f"{len(shared)} shared co-authors"
                    )
                )
        shared_subjects = anchor_subjects & _normalized_set(other.subject_areas)
        if shared_subjects:
            evidence.append(
                MergeEvidence(
                    "subject-area-overlap", Fraction(1), sorted(shared_subjects)[0]
                )
            )

        weight_of = {
            "name-variant-overlap": weights.name_variant,
            "affiliation-overlap": weights.affiliation,
            "coauthor-overlap": weights.coauthor,
            "subject-area-overlap": weights.subject_area,
        }
        score = sum(
            (weight_of[e.kind] * e.value for e in evidence), start=Fraction(0)
        )
        results.append(
            MergeCandidate(
                member_id=member.id,
                profile_a=anchor_id,
                profile_b=other_id,
                score=score,
                evidence=tuple(evidence),
            )
        )
    results.sort(key=lambda c: (-c.score, c.profile_b.value))
    return results


def flag_contamination(
    member: FacultyMember, publications: Collection[Publication]
) -> list[ContaminationFlag]:
    """Flag publications that look foreign to the member's body of work.

    A document is suspect when its subject areas are disjoint from the
    member's modal subject cluster AND its co-authors are disjoint from the
    co-authors of the member's in-cluster documents. Documents without
    subject data fall back to the co-author test alone. Advisory only: the
    caller decides whether to record an override.
    """
    member_ids = set(member.author_ids)
    by_doc = {pub.doc_id: pub for pub in publications}
    docs = sorted(by_doc.values(), key=lambda p: p.doc_id)
    if len(docs) < 2:
        return []

    subject_counts: dict[str, int] = {}
    for doc in docs:
        for subject in _normalized_set(doc.subject_areas):
            subject_counts[subject] = subject_counts.get(subject, 0) + 1
    if not subject_counts:
        return []
    top = max(subject_counts.values())
    modal = {s for s, n in subject_counts.items() if n == top}

    home_docs = [
        doc for doc in docs if _normalized_set(doc.subject_areas) & modal
    ]
    home_coauthors: set[AuthorId] = set()
    for doc in home_docs:
        home_coauthors.update(set(doc.author_ids) - member_ids)

    flags: list[ContaminationFlag] = []
    for doc in docs:
        subjects = _normalized_set(doc.subject_areas)
        if subjects & modal:
            continue
        doc_coauthors = set(doc.author_ids) - member_ids
        if not doc_coauthors.isdisjoint(home_coauthors):
            continue
        if subjects:
            reason = FlagReason.SUBJECT_AREA_OUTLIER
        elif doc_coauthors and home_coauthors:
            reason = FlagReason.COAUTHOR_DISJOINT
        else:
            continue
        claiming = next(
            (a for a in member.author_ids if a in doc.author_ids),
            member.author_ids[0] if member.author_ids else None,
        )
        if claiming is None:
            continue
        flags.append(
            ContaminationFlag(
                member_id=member.id,
                author_id=claiming,
                suspect_doc_ids=(doc.doc_id,),
                reason=reason,
            )
        )
    return flags


class Registry:
    """Single-writer store for rosters, merges and overrides."""

    def __init__(self, audit_path: Optional[Path | str] = None) -> None:
        self.known_institutions: dict[str, str] = {}
        self.institutions: dict[str, Institution] = {}
        self.departments: dict[str, Department] = {}
        self.members: dict[str, FacultyMember] = {}
        self.merged_pairs: set[tuple[str, str]] = set()
        self.overrides: list[Override] = []
        self.audit_path = Path(audit_path) if audit_path else None

    # -- institution list ---------------------------------------------------

    def load_institution_list(self, path: Path | str) -> int:
        """Load the ``abbreviation,name`` CSV rosters resolve against."""
        count = 0
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or "abbreviation" not in reader.fieldnames:
                raise ValidationError(f"institution list {path} needs an abbreviation column")
            for row in reader:
                abbrev = row["abbreviation"].strip()
                if not abbrev:
                    continue
                name = (row.get("name") or abbrev).strip()
                self.known_institutions[abbrev] = name
                count += 1
        return count

    # -- roster ingestion ---------------------------------------------------

    def ingest_roster(self, path: Path | str) -> IngestReport:
        """Idempotent upsert of a roster file; re-ingesting yields zero changes."""
        rows = self._parse_roster(path)
        report = IngestReport()
        if not rows:
            report.warnings.append(f"roster {path} contains no data rows")
            return report

        claimed: dict[AuthorId, str] = {
            aid: member.id
            for member in self.members.values()
            for aid in member.author_ids
        }
        for line, abbrev, dept_name, display_name, rank, author_ids in rows:
            inst_id = slugify(abbrev)
            if inst_id not in self.institutions:
                self.institutions[inst_id] = Institution(
                    id=inst_id,
                    name=self.known_institutions[abbrev],
                    abbreviation=abbrev,
                )
                report.created_institutions += 1
            dept_id = f"{inst_id}-{slugify(dept_name)}"
            if dept_id not in self.departments:
                self.departments[dept_id] = Department(
                    id=dept_id,
                    institution_id=inst_id,
                    name=dept_name,
                    unit_kind=_unit_kind_for(dept_name),
                )
                report.created_departments += 1
            member_id = f"{dept_id}-{slugify(display_name)}"
            for aid in author_ids:
                owner = claimed.get(aid)
                if owner is not None and owner != member_id:
                    raise DomainError(
                        f"line {line}: author id {aid.token} already claimed by {owner}"
                    )
                claimed[aid] = member_id
            member = FacultyMember(
                id=member_id,
                department_id=dept_id,
                display_name=display_name,
                rank=rank,
                author_ids=author_ids,
                profile_status=(
                    ProfileStatus.RESOLVED if author_ids else ProfileStatus.NOT_FOUND
                ),
            )
            existing = self.members.get(member_id)
            if existing == member:
                report.unchanged_members += 1
            elif existing is None:
                self.members[member_id] = member
                report.created_members += 1
            else:
                self.members[member_id] = member
                report.updated_members += 1
        for member in self.members.values():
            dept = self.departments[member.department_id]
            abbrev = self.institutions[dept.institution_id].abbreviation
            report.member_counts[abbrev] = report.member_counts.get(abbrev, 0) + 1
        self._audit("ingest_roster", {"path": str(path), "rows": len(rows)})
        return report

    def _parse_roster(
        self, path: Path | str
    ) -> list[tuple[int, str, str, str, object, tuple[AuthorId, ...]]]:
        rows = []
        seen_pairs: set[tuple[str, str]] = set()
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                return []
            if [h.strip().lower() for h in header] != ROSTER_HEADER:
                raise ValidationError(
                    f"roster header must be {','.join(ROSTER_HEADER)!r}"
                )
            for line, row in enumerate(reader, start=2):
                if not row or not any(cell.strip() for cell in row):
                    continue
                if len(row) < 4:
                    raise ValidationError(f"line {line}: expected at least 4 columns")
                abbrev = row[0].strip()
                dept_name = row[1].strip()
                display_name = row[2].strip()
                rank_text = row[3].strip()
                ids_cell = row[4].strip() if len(row) > 4 else ""
                if abbrev not in self.known_institutions:
                    raise ValidationError(
                        f"line {line}: unknown institution abbreviation {abbrev!r}"
                    )
                pair = (f"{abbrev}/{dept_name}", display_name)
                if pair in seen_pairs:
                    raise ValidationError(
                        f"line {line}: duplicate member {display_name!r} in {dept_name!r}"
                    )
                seen_pairs.add(pair)
                try:
                    rank = parse_rank(rank_text)
                except ValidationError as exc:
                    raise ValidationError(f"line {line}: {exc}") from None
                author_ids = tuple(
                    AuthorId.parse(token)
                    for token in ids_cell.split("|")
                    if token.strip()
                )
                rows.append((line, abbrev, dept_name, display_name, rank, author_ids))
        return rows

    # -- merges and overrides -----------------------------------------------

    def apply_merge(
        self, member_id: str, from_id: AuthorId, into_id: AuthorId
    ) -> FacultyMember:
        """Record a merge request for a member's profile pair.

        The provider-side merge is external and asynchronous, so the member
        keeps both ids locally; the recorded pair documents that doc_id
        unions must not double-count. Idempotent: re-merging an already
        merged pair writes no second audit entry.
        """
        member = self.members.get(member_id)
        if member is None:
            raise NotFoundError(f"unknown member: {member_id}")
        attached = set(member.author_ids)
        if from_id not in attached or into_id not in attached:
            raise DomainError(
                f"both {from_id.token} and {into_id.token} must be attached to {member_id}"
            )
        pair = tuple(sorted((from_id.token, into_id.token)))
        if pair in self.merged_pairs:
            return member
        self.merged_pairs.add(pair)
        self._audit(
            "apply_merge",
            {
                "member_id": member_id,
                "from": from_id.token,
                "into": into_id.token,
                "before": [a.token for a in member.author_ids],
                "after": [a.token for a in member.author_ids],
            },
        )
        return member

    def add_override(self, member_id: str, doc_id: str, reason: str = "") -> Override:
        if member_id not in self.members:
            raise NotFoundError(f"unknown member: {member_id}")
        override = Override(member_id=member_id, doc_id=doc_id, reason=reason)
        if override not in self.overrides:
            self.overrides.append(override)
            self._audit("add_override", {"member_id": member_id, "doc_id": doc_id})
        return override

    # -- snapshot view ------------------------------------------------------

    def snapshot_inputs(
        self,
    ) -> tuple[
        tuple[Institution, ...],
        tuple[Department, ...],
        tuple[FacultyMember, ...],
        tuple[Override, ...],
    ]:
        """Immutable view with derived institution TRS counts."""
        counts: dict[str, int] = {}
        for member in self.members.values():
            dept = self.departments[member.department_id]
            counts[dept.institution_id] = counts.get(dept.institution_id, 0) + 1
        institutions = tuple(
            Institution(
                id=inst.id,
                name=inst.name,
                abbreviation=inst.abbreviation,
                trs_count=counts.get(inst.id, 0),
            )
            for inst in sorted(self.institutions.values(), key=lambda i: i.id)
        )
        departments = tuple(
            sorted(self.departments.values(), key=lambda d: d.id)
        )
        members = tuple(sorted(self.members.values(), key=lambda m: m.id))
        overrides = tuple(
            sorted(self.overrides, key=lambda o: (o.member_id, o.doc_id))
        )
        return institutions, departments, members, overrides

    # -- persistence ----------------------------------------------------------

    def save(self, path: Path | str) -> None:
        from .serialize import (
            department_to_json,
            institution_to_json,
            member_to_json,
        )

        payload = {
            "known_institutions": self.known_institutions,
            "institutions": [
                institution_to_json(i)
                for i in sorted(self.institutions.values(), key=lambda i: i.id)
            ],
            "departments": [
                department_to_json(d)
                for d in sorted(self.departments.values(), key=lambda d: d.id)
            ],
            "members": [
                member_to_json(m)
                for m in sorted(self.members.values(), key=lambda m: m.id)
            ],
            "merged_pairs": sorted(list(p) for p in self.merged_pairs),
            "overrides": [
                {"member_id": o.member_id, "doc_id": o.doc_id, "reason": o.reason}
                for o in self.overrides
            ],
        }
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_suffix(".tmp")
        tmp.write_text(
            json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        tmp.replace(target)

    @classmethod
    def load(cls, path: Path | str, audit_path: Optional[Path | str] = None) -> "Registry":
        from .serialize import (
            department_from_json,
            institution_from_json,
            member_from_json,
        )

        registry = cls(audit_path=audit_path)
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        registry.known_institutions = dict(data.get("known_institutions", {}))
        for raw in data.get("institutions", ()):
            inst = institution_from_json(raw)
            registry.institutions[inst.id] = inst
        for raw in data.get("departments", ()):
            dept = department_from_json(raw)
            registry.departments[dept.id] = dept
        for raw in data.get("members", ()):
            member = member_from_json(raw)
            registry.members[member.id] = member
        registry.merged_pairs = {
            tuple(pair) for pair in data.get("merged_pairs", ())
        }
        registry.overrides = [
            Override(o["member_id"], o["doc_id"], o.get("reason", ""))
            for o in data.get("overrides", ())
        ]
        return registry

    # -- audit ----------------------------------------------------------------

    def _audit(self, operation: str, details: dict) -> None:
        if self.audit_path is None:
            return
        entry = {
            "ts": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "op": operation,
            **details,
        }
        self.audit_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.audit_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(entry, ensure_ascii=False) + "\n")


def _unit_kind_for(name: str) -> UnitKind:
    lowered = normalize_text(name)
    if lowered.startswith("school"):
        return UnitKind.SCHOOL
    if lowered.startswith("faculty"):
        return UnitKind.FACULTY
    return UnitKind.DEPARTMENT
