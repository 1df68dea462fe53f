"""Provider-facing types, configuration and error taxonomy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Protocol, runtime_checkable

from ..model import AuthorId, Publication, ValidationError, YearWindow

DEFAULT_CACHE_TTL_SECONDS = 30 * 24 * 3600.0


@dataclass(frozen=True)
class ProviderConfig:
    base_endpoint: str = ""
    credential: str = ""
    rate_limit_requests: int = 6
    rate_limit_window: float = 1.0
    page_size: int = 25
    max_retries: int = 3
    backoff_base: float = 0.5
    cache_ttl: float = DEFAULT_CACHE_TTL_SECONDS

    def __post_init__(self) -> None:
        if self.page_size < 1:
            raise ValidationError("page_size must be >= 1")
        if self.rate_limit_window <= 0:
            raise ValidationError("rate limit window must be > 0")
        if self.rate_limit_requests < 1:
            raise ValidationError("rate limit budget must be >= 1")
        if self.max_retries < 0:
            raise ValidationError("max_retries must be >= 0")


@dataclass(frozen=True)
class AuthorProfileRecord:
    author_id: AuthorId
    indexed_name: str
    name_variants: tuple[str, ...] = ()
    affiliation_history: tuple[str, ...] = ()
    document_count: int = 0
    subject_areas: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.document_count < 0:
            raise ValidationError("document_count must be >= 0")


@dataclass(frozen=True)
class FetchReceipt:
    requested_author_ids: tuple[str, ...]
    retrieved_doc_count: int
    pages_fetched: int
    cache_hits: int
    fetched_at: str

    def __post_init__(self) -> None:
        if self.retrieved_doc_count < 0 or self.pages_fetched < 0 or self.cache_hits < 0:
            raise ValidationError("receipt counters must be non-negative")


def profile_to_json(record: AuthorProfileRecord) -> dict:
    return {
        "author_id": {
            "provider": record.author_id.provider,
            "value": record.author_id.value,
        },
        "indexed_name": record.indexed_name,
        "name_variants": list(record.name_variants),
        "affiliation_history": list(record.affiliation_history),
        "document_count": record.document_count,
        "subject_areas": list(record.subject_areas),
    }


def profile_from_json(data: dict) -> AuthorProfileRecord:
    from ..serialize import author_id_from_json

    return AuthorProfileRecord(
        author_id=author_id_from_json(data["author_id"]),
        indexed_name=str(data["indexed_name"]),
        name_variants=tuple(data.get("name_variants", ())),
        affiliation_history=tuple(data.get("affiliation_history", ())),
        document_count=int(data.get("document_count", 0)),
        subject_areas=tuple(data.get("subject_areas", ())),
    )


class ProviderError(Exception):
    """Base class for provider-side failures."""


class TransportError(ProviderError):
    """Retryable transport-level failure (network, 429, 5xx)."""


class CredentialError(ProviderError):
    """Fatal configuration error: the provider rejected our credential."""


class ProfileNotFoundError(ProviderError):
    """The requested author profile does not exist (stale or merged away)."""


class PartialFetchError(ProviderError):
    """A multi-page fetch failed midway.

    Carries the subset retrieved so far; the caller must not persist it as a
    complete snapshot.
    """

    def __init__(
        self,
        message: str,
        *,
        publications: tuple[Publication, ...] = (),
        receipt: Optional[FetchReceipt] = None,
    ) -> None:
        super().__init__(message)
        self.publications = publications
        self.receipt = receipt
        self.incomplete = True


@runtime_checkable
class Provider(Protocol):
    """Uniform surface the gateway drives; fixture and Scopus implement it."""

    name: str

    def search_authors(
        self, name_query: str, affiliation_hint: Optional[str] = None
    ) -> list[AuthorProfileRecord]: ...

    def get_author_profile(self, author_id: AuthorId) -> AuthorProfileRecord: ...

    def fetch_documents_page(
        self, author_id: AuthorId, window: YearWindow, page: int, page_size: int
    ) -> tuple[list[Publication], int]:
        """Return one page of the author's in-window docs plus the total count."""
        ...
