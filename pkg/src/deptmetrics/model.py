"""Shared domain types and identity rules.

All types are immutable values, safe to share between threads. Ratios are
carried as exact :class:`~fractions.Fraction` objects and rounded only when
rendered, so orderings never depend on float formatting.
"""

from __future__ import annotations

import datetime as _dt
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional


class DomainError(ValueError):
    """A domain rule was violated."""


class ValidationError(DomainError):
    """Caller-supplied parameters failed validation."""


class NotFoundError(DomainError):
    """A referenced entity does not exist."""


class Rank(Enum):
    PROFESSOR = "Professor"
    ASSOCIATE_PROFESSOR = "AssociateProfessor"
    ASSISTANT_PROFESSOR = "AssistantProfessor"
    LECTURER = "Lecturer"
    PROBATIONARY_ASSISTANT_PROFESSOR = "ProbationaryAssistantProfessor"


class ProfileStatus(Enum):
    RESOLVED = "Resolved"
    NOT_FOUND = "NotFound"
    PENDING_REVIEW = "PendingReview"


class UnitKind(Enum):
    """Naming convention only; carries no semantic weight in comparisons."""

    DEPARTMENT = "Department"
    SCHOOL = "School"
    FACULTY = "Faculty"


_RANK_ALIASES = {
    "professor": Rank.PROFESSOR,
    "associateprofessor": Rank.ASSOCIATE_PROFESSOR,
    "assistantprofessor": Rank.ASSISTANT_PROFESSOR,
    "lecturer": Rank.LECTURER,
    "probationaryassistantprofessor": Rank.PROBATIONARY_ASSISTANT_PROFESSOR,
}


def parse_rank(text: str) -> Rank:
    key = re.sub(r"[\s_\-.]+", "", text).lower()
    try:
        return _RANK_ALIASES[key]
    except KeyError:
        raise ValidationError(f"unknown rank: {text!r}") from None


def normalize_text(text: str) -> str:
    """Case-insensitive, diacritic-folded form used for matching and slugs."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return stripped.casefold().strip()


def slugify(text: str) -> str:
    normalized = normalize_text(text)
    slug = re.sub(r"[^a-z0-9]+", "-", normalized).strip("-")
    return slug or "x"


@dataclass(frozen=True, order=True)
class AuthorId:
    """Provider-scoped author identity; (provider, value) is globally unique."""

    provider: str
    value: str

    def __post_init__(self) -> None:
        if not self.provider or not self.value:
            raise ValidationError("author id needs non-empty provider and value")

    @classmethod
    def parse(cls, token: str) -> "AuthorId":
        provider, sep, value = token.partition(":")
        if not sep:
            raise ValidationError(f"author id token must be provider:value, got {token!r}")
        return cls(provider.strip(), value.strip())

    @property
    def token(self) -> str:
        return f"{self.provider}:{self.value}"

    def __str__(self) -> str:
        return self.token


@dataclass(frozen=True)
class Institution:
    id: str
    name: str
    abbreviation: str
    trs_count: int = 0

    def __post_init__(self) -> None:
        if not self.abbreviation:
            raise ValidationError("institution abbreviation must be non-empty")
        if self.trs_count < 0:
            raise ValidationError("trs_count must be non-negative")


@dataclass(frozen=True)
class Department:
    id: str
    institution_id: str
    name: str
    unit_kind: UnitKind = UnitKind.DEPARTMENT
    thematic_tags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        lowered = frozenset(tag.lower() for tag in self.thematic_tags)
        object.__setattr__(self, "thematic_tags", lowered)


@dataclass(frozen=True)
class FacultyMember:
    """One TRS member with zero or more resolved author-profile identifiers."""

    id: str
    department_id: str
    display_name: str
    rank: Rank
    author_ids: tuple[AuthorId, ...] = ()
    profile_status: ProfileStatus = ProfileStatus.PENDING_REVIEW

    def __post_init__(self) -> None:
        if len(set(self.author_ids)) != len(self.author_ids):
            raise ValidationError(f"duplicate author ids on member {self.id}")
        if self.profile_status is ProfileStatus.NOT_FOUND and self.author_ids:
            raise ValidationError("NotFound member cannot hold author ids")
        if self.profile_status is ProfileStatus.RESOLVED and not self.author_ids:
            raise ValidationError("Resolved member must hold at least one author id")


PUBLICATION_YEAR_FLOOR = 1800


@dataclass(frozen=True)
class Publication:
    """One indexed document; citation_count is the all-time count at fetch date."""

    doc_id: str
    title: str
    year: int
    citation_count: int
    author_ids: tuple[AuthorId, ...]
    source_title: Optional[str] = None
    doc_type: Optional[str] = None
    subject_areas: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.citation_count < 0:
            raise ValidationError(f"citation_count must be >= 0 on {self.doc_id}")
        if not self.author_ids:
            raise ValidationError(f"publication {self.doc_id} has no authors")
        ceiling = _dt.date.today().year + 1
        if not PUBLICATION_YEAR_FLOOR <= self.year <= ceiling:
            raise ValidationError(
                f"publication year {self.year} outside [{PUBLICATION_YEAR_FLOOR}, {ceiling}]"
            )


@dataclass(frozen=True)
class YearWindow:
    """Closed interval of publication years."""

    start_year: int
    end_year: int

    def __post_init__(self) -> None:
        if self.start_year > self.end_year:
            raise ValidationError("start_year must be <= end_year")

    def contains(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    @classmethod
    def parse(cls, text: str) -> "YearWindow":
        match = re.fullmatch(r"(\d{4})[:\-](\d{4})", text.strip())
        if not match:
            raise ValidationError(f"window must look like 2017:2021, got {text!r}")
        return cls(int(match.group(1)), int(match.group(2)))

    def __str__(self) -> str:
        return f"{self.start_year}:{self.end_year}"


@dataclass(frozen=True)
class DepartmentMetrics:
    """The five aggregate statistics for one department over a window.

    Construct through :meth:`from_counts`; the ratio fields are derived and
    validated, never stored independently of the counts.
    """

    department_id: str
    window: YearWindow
    trs_total: int
    trs_without_profile: int
    paper_count: int
    citation_count: int
    papers_per_trs: Fraction
    citations_per_trs: Fraction
    citations_per_paper: Fraction

    def __post_init__(self) -> None:
        if self.trs_total < 1:
            raise DomainError("empty department")
        if not 0 <= self.trs_without_profile <= self.trs_total:
            raise ValidationError("trs_without_profile must be within [0, trs_total]")
        if self.paper_count < 0 or self.citation_count < 0:
            raise ValidationError("counts must be non-negative")
        if self.papers_per_trs != Fraction(self.paper_count, self.trs_total):
            raise ValidationError("papers_per_trs is not paper_count / trs_total")
        if self.citations_per_trs != Fraction(self.citation_count, self.trs_total):
            raise ValidationError("citations_per_trs is not citation_count / trs_total")
        expected = (
            Fraction(self.citation_count, self.paper_count)
            if self.paper_count
            else Fraction(0)
        )
        if self.citations_per_paper != expected:
            raise ValidationError("citations_per_paper inconsistent with counts")

    @classmethod
    def from_counts(
        cls,
        department_id: str,
        window: YearWindow,
        *,
        trs_total: int,
        trs_without_profile: int,
        paper_count: int,
        citation_count: int,
    ) -> "DepartmentMetrics":
        if trs_total < 1:
            raise DomainError("empty department")
        return cls(
            department_id=department_id,
            window=window,
            trs_total=trs_total,
            trs_without_profile=trs_without_profile,
            paper_count=paper_count,
            citation_count=citation_count,
            papers_per_trs=Fraction(paper_count, trs_total),
            citations_per_trs=Fraction(citation_count, trs_total),
            # An empty paper set yields 0 (not undefined) so rankings stay total.
            citations_per_paper=(
                Fraction(citation_count, paper_count) if paper_count else Fraction(0)
            ),
        )


def missing_profile_rate(members: Iterable[FacultyMember]) -> Fraction:
    """Exact share of members whose profile search ended NotFound."""
    total = 0
    missing = 0
    for member in members:
        total += 1
        if member.profile_status is ProfileStatus.NOT_FOUND:
            missing += 1
    if total == 0:
        raise DomainError("no faculty")
    return Fraction(missing, total)


def round_ratio(value: Fraction | int, places: int = 2) -> str:
    """Render an exact rational rounded half-up to ``places`` decimals.

    Pure integer arithmetic: floor(value * 10^places + 1/2), so results never
    depend on binary float or Decimal context behaviour.
    """
    fraction = Fraction(value)
    scale = 10**places
    scaled = fraction * scale
    rounded = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
    sign = "-" if rounded < 0 else ""
    whole, part = divmod(abs(rounded), scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{part:0{places}d}"


def percentage(value: Fraction, places: int = 2) -> str:
    """Render a [0,1] ratio as a percentage string, e.g. ``"11.77%"``."""
    return round_ratio(Fraction(value) * 100, places) + "%"
