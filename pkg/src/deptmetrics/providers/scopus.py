"""Scopus-compatible provider.

Maps the gateway operations onto that service's author-search and
document-search endpoints; see docs/providers.md for the field mapping.
Only counts are retrieved, never citing-document lists or full text.
"""

from __future__ import annotations

import logging
from typing import Any, Optional

import httpx

from ..model import AuthorId, Publication, ValidationError, YearWindow
from .base import (
    AuthorProfileRecord,
    CredentialError,
    ProfileNotFoundError,
    ProviderConfig,
    TransportError,
)

log = logging.getLogger(__name__)

AUTHOR_SEARCH_PATH = "/content/search/author"
DOCUMENT_SEARCH_PATH = "/content/search/scopus"


def _as_list(value: Any) -> list:
    if value is None:
        return []
    if isinstance(value, list):
        return value
    return [value]


def _preferred_name(entry: dict) -> str:
    name = entry.get("preferred-name") or {}
    surname = name.get("surname", "")
    initials = name.get("initials") or name.get("given-name") or ""
    if surname and initials:
        return f"{surname}, {initials}"
    return surname or initials or entry.get("dc:identifier", "")


def _author_record(entry: dict) -> AuthorProfileRecord:
    identifier = str(entry.get("dc:identifier", ""))
    value = identifier.rpartition(":")[2]
    variants = []
    preferred = _preferred_name(entry)
    if preferred:
        variants.append(preferred)
    for variant in _as_list(entry.get("name-variant")):
        surname = variant.get("surname", "")
        given = variant.get("initials") or variant.get("given-name") or ""
        if surname:
            variants.append(f"{surname}, {given}" if given else surname)
    affiliations = []
    current = entry.get("affiliation-current") or {}
    if current.get("affiliation-name"):
        affiliations.append(current["affiliation-name"])
    for aff in _as_list(entry.get("affiliation-history")):
        name = aff.get("affiliation-name") if isinstance(aff, dict) else None
        if name:
            affiliations.append(name)
    subjects = [
        area.get("$", "")
        for area in _as_list(entry.get("subject-area"))
        if isinstance(area, dict) and area.get("$")
    ]
    return AuthorProfileRecord(
        author_id=AuthorId("scopus", value),
        indexed_name=preferred,
        name_variants=tuple(dict.fromkeys(variants)),
        affiliation_history=tuple(dict.fromkeys(affiliations)),
        document_count=int(entry.get("document-count", 0) or 0),
        subject_areas=tuple(subjects),
    )


def _document(entry: dict) -> Optional[Publication]:
    identifier = str(entry.get("dc:identifier", ""))
    doc_id = identifier.rpartition(":")[2]
    cover_date = str(entry.get("prism:coverDate", ""))
    if not doc_id or len(cover_date) < 4:
        return None
    authors = tuple(
        AuthorId("scopus", str(author["authid"]))
        for author in _as_list(entry.get("author"))
        if isinstance(author, dict) and author.get("authid")
    )
    if not authors:
        return None
    return Publication(
        doc_id=doc_id,
        title=str(entry.get("dc:title", "")),
        year=int(cover_date[:4]),
        citation_count=int(entry.get("citedby-count", 0) or 0),
        author_ids=authors,
        source_title=entry.get("prism:publicationName"),
        doc_type=entry.get("subtypeDescription"),
    )


class ScopusProvider:
    name = "scopus"

    def __init__(self, config: ProviderConfig, client: Optional[httpx.Client] = None) -> None:
        if not config.base_endpoint:
            raise ValidationError("scopus provider needs a base endpoint")
        self.config = config
        self._client = client or httpx.Client(timeout=30.0)

    def _get(self, path: str, params: dict) -> dict:
        url = self.config.base_endpoint.rstrip("/") + path
        headers = {"Accept": "application/json"}
        if self.config.credential:
            headers["X-ELS-APIKey"] = self.config.credential
        try:
            response = self._client.get(url, params=params, headers=headers)
        except httpx.HTTPError as exc:
            raise TransportError(f"transport failure for {path}: {exc}") from exc
        if response.status_code in (401, 403):
            raise CredentialError(f"credential rejected ({response.status_code})")
        if response.status_code == 429 or response.status_code >= 500:
            raise TransportError(f"retryable status {response.status_code} for {path}")
        if response.status_code >= 400:
            raise ValidationError(f"provider rejected request ({response.status_code})")
        return response.json()

    def _entries(self, payload: dict) -> tuple[list[dict], int]:
        results = payload.get("search-results", {})
        total = int(results.get("opensearch:totalResults", 0) or 0)
        entries = [e for e in _as_list(results.get("entry")) if isinstance(e, dict)]
        # An empty result set comes back as one entry carrying only an error note.
        entries = [e for e in entries if "error" not in e]
        return entries, total

    def search_authors(
        self, name_query: str, affiliation_hint: Optional[str] = None
    ) -> list[AuthorProfileRecord]:
        surname, _, first = name_query.partition(",")
        query = f"AUTHLASTNAME({surname.strip()})"
        if first.strip():
            query += f" AND AUTHFIRST({first.strip()})"
        if affiliation_hint:
            query += f" AND AFFIL({affiliation_hint})"
        payload = self._get(AUTHOR_SEARCH_PATH, {"query": query})
        entries, _ = self._entries(payload)
        return [_author_record(entry) for entry in entries]

    def get_author_profile(self, author_id: AuthorId) -> AuthorProfileRecord:
        payload = self._get(AUTHOR_SEARCH_PATH, {"query": f"AU-ID({author_id.value})"})
        entries, _ = self._entries(payload)
        if not entries:
            raise ProfileNotFoundError(f"no profile for {author_id.token}")
        return _author_record(entries[0])

    def fetch_documents_page(
        self, author_id: AuthorId, window: YearWindow, page: int, page_size: int
    ) -> tuple[list[Publication], int]:
        query = (
            f"AU-ID({author_id.value})"
            f" AND PUBYEAR > {window.start_year - 1}"
            f" AND PUBYEAR < {window.end_year + 1}"
        )
        payload = self._get(
            DOCUMENT_SEARCH_PATH,
            {
                "query": query,
                "start": page * page_size,
                "count": page_size,
                "sort": "coverDate,+prism:coverDate",
            },
        )
        entries, total = self._entries(payload)
        docs = []
        for entry in entries:
            doc = _document(entry)
            if doc is None:
                log.warning("skipping unparseable document entry: %s", entry.get("dc:identifier"))
                continue
            docs.append(doc)
        return docs, total
