"""Deterministic provider backed by a directory of static record files.

Each file holds one JSON document: an author profile (``author_id`` field) or
a publication (``doc_id`` field), using exactly the canonical field names from
:mod:`deptmetrics.serialize`. Semantics mirror the live provider: relevance
order is scan order, document listings are windowed and paginated.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from ..model import AuthorId, Publication, ValidationError, YearWindow, normalize_text
from ..serialize import publication_from_json
from .base import AuthorProfileRecord, ProfileNotFoundError, profile_from_json


class FixtureProvider:
    name = "fixture"

    def __init__(self, root: Path | str) -> None:
        self.root = Path(root)
        if not self.root.is_dir():
            raise ValidationError(f"fixture directory not found: {self.root}")
        self._profiles: dict[AuthorId, AuthorProfileRecord] = {}
        self._profile_order: list[AuthorProfileRecord] = []
        self._publications: dict[str, Publication] = {}
        for path in sorted(self.root.rglob("*.json")):
            data = json.loads(path.read_text(encoding="utf-8"))
            if "doc_id" in data:
                pub = publication_from_json(data)
                self._publications[pub.doc_id] = pub
            elif "author_id" in data:
                record = profile_from_json(data)
                self._profiles[record.author_id] = record
                self._profile_order.append(record)
            else:
                raise ValidationError(f"unrecognized fixture record: {path}")

    def search_authors(
        self, name_query: str, affiliation_hint: Optional[str] = None
    ) -> list[AuthorProfileRecord]:
        query = normalize_text(name_query)
        matches = [
            record
            for record in self._profile_order
            if any(query in normalize_text(v) for v in record.name_variants)
            or query in normalize_text(record.indexed_name)
        ]
        if affiliation_hint:
            hint = normalize_text(affiliation_hint)
            matches.sort(
                key=lambda r: not any(
                    hint in normalize_text(a) for a in r.affiliation_history
                )
            )
        return matches

    def get_author_profile(self, author_id: AuthorId) -> AuthorProfileRecord:
        try:
            return self._profiles[author_id]
        except KeyError:
            raise ProfileNotFoundError(f"no profile for {author_id.token}") from None

    def fetch_documents_page(
        self, author_id: AuthorId, window: YearWindow, page: int, page_size: int
    ) -> tuple[list[Publication], int]:
        docs = sorted(
            (
                pub
                for pub in self._publications.values()
                if author_id in pub.author_ids and window.contains(pub.year)
            ),
            key=lambda p: (p.year, p.doc_id),
        )
        start = page * page_size
        return docs[start : start + page_size], len(docs)
