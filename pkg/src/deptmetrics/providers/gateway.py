"""Uniform client over citation-database providers.

Wraps a provider with the rolling-window rate limiter, the disk response
cache, and retry-with-full-jitter on retryable failures. Safe for concurrent
use: the limiter is the single shared synchronization point, so fetches for
disjoint author sets may proceed in parallel up to the budget.
"""

from __future__ import annotations

import datetime as _dt
import logging
import math
import random
import time
from typing import Callable, Iterable, Optional

from ..model import AuthorId, Publication, ValidationError, YearWindow
from ..serialize import publication_from_json, publication_to_json
from .base import (
    AuthorProfileRecord,
    FetchReceipt,
    PartialFetchError,
    Provider,
    ProviderConfig,
    TransportError,
    profile_from_json,
    profile_to_json,
)
from .cache import ResponseCache, cache_key
from .ratelimit import RollingWindowLimiter

log = logging.getLogger(__name__)


def _utc_now_iso() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


class Gateway:
    def __init__(
        self,
        provider: Provider,
        config: ProviderConfig,
        *,
        cache: Optional[ResponseCache] = None,
        limiter: Optional[RollingWindowLimiter] = None,
        sleep: Callable[[float], None] = time.sleep,
        rng: Optional[random.Random] = None,
        now: Callable[[], str] = _utc_now_iso,
    ) -> None:
        self.provider = provider
        self.config = config
        self.cache = cache
        self.limiter = limiter or RollingWindowLimiter(
            config.rate_limit_requests, config.rate_limit_window
        )
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._now = now

    def _call_with_retry(self, description: str, call: Callable[[], object]) -> object:
        attempt = 0
        while True:
            self.limiter.acquire()
            try:
                return call()
            except TransportError as exc:
                if attempt >= self.config.max_retries:
                    raise TransportError(
                        f"{description} failed after {attempt + 1} attempts: {exc}"
                    ) from exc
                # Full jitter keeps concurrent retries from synchronizing.
                delay = self._rng.uniform(0, self.config.backoff_base * 2**attempt)
                log.debug("%s failed (%s); retrying in %.2fs", description, exc, delay)
                self._sleep(delay)
                attempt += 1

    def _cached(
        self,
        operation: str,
        params: dict,
        page: int,
        fetch: Callable[[], object],
        encode: Callable[[object], object],
        decode: Callable[[object], object],
    ) -> tuple[object, bool]:
        if self.cache is None:
            return fetch(), False
        key = cache_key(self.provider.name, operation, params, page)
        payload = self.cache.get(key)
        if payload is not None:
            return decode(payload), True
        result = fetch()
        self.cache.put(key, encode(result))
        return result, False

    def search_authors(
        self, name_query: str, affiliation_hint: Optional[str] = None
    ) -> list[AuthorProfileRecord]:
        """Candidate profiles in provider relevance order; empty list is fine."""
        if not name_query.strip():
            raise ValidationError("name query must be non-empty")
        params = {"query": name_query, "affiliation": affiliation_hint or ""}
        records, _ = self._cached(
            "search_authors",
            params,
            0,
            lambda: self._call_with_retry(
                f"author search {name_query!r}",
                lambda: self.provider.search_authors(name_query, affiliation_hint),
            ),
            lambda recs: [profile_to_json(r) for r in recs],
            lambda payload: [profile_from_json(d) for d in payload],
        )
        return records

    def get_author_profile(self, author_id: AuthorId) -> AuthorProfileRecord:
        record, _ = self._cached(
            "profile",
            {"author": author_id.token},
            0,
            lambda: self._call_with_retry(
                f"profile {author_id.token}",
                lambda: self.provider.get_author_profile(author_id),
            ),
            profile_to_json,
            profile_from_json,
        )
        return record

    def _documents_page(
        self, author_id: AuthorId, window: YearWindow, page: int
    ) -> tuple[list[Publication], int, bool]:
        params = {
            "author": author_id.token,
            "window": str(window),
            "page_size": self.config.page_size,
        }

        def fetch() -> dict:
            docs, total = self._call_with_retry(
                f"documents page {page} for {author_id.token}",
                lambda: self.provider.fetch_documents_page(
                    author_id, window, page, self.config.page_size
                ),
            )
            return {"docs": docs, "total": total}

        payload, hit = self._cached(
            "documents",
            params,
            page,
            fetch,
            lambda p: {
                "docs": [publication_to_json(d) for d in p["docs"]],
                "total": p["total"],
            },
            lambda p: {
                "docs": [publication_from_json(d) for d in p["docs"]],
                "total": p["total"],
            },
        )
        return payload["docs"], payload["total"], hit

    def fetch_publications(
        self, authors: Iterable[AuthorId], window: YearWindow
    ) -> tuple[list[Publication], FetchReceipt]:
        """Union of in-window publications across the requested authors.

        Every page is consumed; each doc_id appears exactly once (conflicting
        citation counts keep the maximum). On failure midway the subset
        retrieved so far travels on a PartialFetchError and must not be
        persisted as a complete snapshot.
        """
        ids = sorted(set(authors))
        if not ids:
            raise ValidationError("at least one author id is required")
        by_doc: dict[str, Publication] = {}
        pages_fetched = 0
        cache_hits = 0

        def merge(doc: Publication) -> None:
            current = by_doc.get(doc.doc_id)
            if current is None or doc.citation_count > current.citation_count:
                if current is not None and doc.citation_count != current.citation_count:
                    log.warning(
                        "conflicting citation counts for %s; keeping max", doc.doc_id
                    )
                by_doc[doc.doc_id] = doc

        def result_so_far() -> tuple[Publication, ...]:
            return tuple(sorted(by_doc.values(), key=lambda p: (p.year, p.doc_id)))

        for author_id in ids:
            page = 0
            while True:
                try:
                    docs, total, hit = self._documents_page(author_id, window, page)
                except TransportError as exc:
                    partial = result_so_far()
                    raise PartialFetchError(
                        f"fetch incomplete at {author_id.token} page {page}: {exc}",
                        publications=partial,
                        receipt=FetchReceipt(
                            requested_author_ids=tuple(a.token for a in ids),
                            retrieved_doc_count=len(partial),
                            pages_fetched=pages_fetched,
                            cache_hits=cache_hits,
                            fetched_at=self._now(),
                        ),
                    ) from exc
                pages_fetched += 1
                cache_hits += int(hit)
                for doc in docs:
                    if window.contains(doc.year):
                        merge(doc)
                page += 1
                if page * self.config.page_size >= total:
                    break

        result = list(result_so_far())
        receipt = FetchReceipt(
            requested_author_ids=tuple(a.token for a in ids),
            retrieved_doc_count=len(result),
            pages_fetched=pages_fetched,
            cache_hits=cache_hits,
            fetched_at=self._now(),
        )
        return result, receipt
