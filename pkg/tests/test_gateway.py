import json
import random

import httpx
import pytest

from deptmetrics.model import AuthorId, ValidationError, YearWindow
from deptmetrics.providers import (
    CredentialError,
    FixtureProvider,
    Gateway,
    PartialFetchError,
    ProfileNotFoundError,
    ProviderConfig,
    ResponseCache,
    RollingWindowLimiter,
    ScopusProvider,
    TransportError,
)
from deptmetrics.serialize import canonical_json, publication_to_json

from conftest import FakeClock, aid

WINDOW = YearWindow(2017, 2021)


def make_gateway(provider, *, page_size=10, cache=None, max_retries=3, clock=None, rng=None):
    config = ProviderConfig(page_size=page_size, max_retries=max_retries, backoff_base=0.1)
    clock = clock or FakeClock()
    limiter = RollingWindowLimiter(1000, 1.0, clock=clock.monotonic, sleep=clock.sleep)
    return Gateway(
        provider,
        config,
        cache=cache,
        limiter=limiter,
        sleep=clock.sleep,
        rng=rng or random.Random(0),
        now=lambda: "2024-01-01T00:00:00+00:00",
    )


class TestFixtureProvider:
    def test_search_matches_name_variants(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        records = gateway.search_authors("alpha")
        assert [r.author_id.value for r in records] == ["001", "002"]

    def test_search_no_match_is_empty(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        assert gateway.search_authors("zzz-no-such-name") == []

    def test_search_empty_query_rejected(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        with pytest.raises(ValidationError):
            gateway.search_authors("   ")

    def test_affiliation_hint_reorders(self, gateway_records_dir):
        provider = FixtureProvider(gateway_records_dir)
        records = provider.search_authors("alpha", affiliation_hint="Beta Institute")
        assert records[0].author_id.value == "002"

    def test_get_profile(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        record = gateway.get_author_profile(aid("001"))
        assert record.indexed_name == "Alpha, A."

    def test_unknown_profile(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        with pytest.raises(ProfileNotFoundError):
            gateway.get_author_profile(aid("999"))

    def test_malformed_id_rejected_at_construction(self):
        with pytest.raises(ValidationError):
            aid("")

    def test_common_surname_yields_multiple_candidates(self):
        from conftest import FIXTURES_DIR

        provider = FixtureProvider(FIXTURES_DIR / "records")
        hits = provider.search_authors("Papadopoulos")
        assert len(hits) >= 2


class TestFetchPublications:
    def test_pagination_counts(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir), page_size=10)
        pubs, receipt = gateway.fetch_publications([aid("001")], WINDOW)
        assert len(pubs) == 23
        assert receipt.pages_fetched == 3
        assert receipt.retrieved_doc_count == 23

    def test_coauthored_doc_appears_once(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        pubs, _ = gateway.fetch_publications([aid("001"), aid("002")], WINDOW)
        assert sum(1 for p in pubs if p.doc_id == "P010") == 1
        assert len(pubs) == 23

    def test_window_excludes_2016(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        pubs, _ = gateway.fetch_publications([aid("001")], WINDOW)
        assert all(p.doc_id != "P024" for p in pubs)
        wide, _ = gateway.fetch_publications([aid("001")], YearWindow(2016, 2021))
        assert any(p.doc_id == "P024" for p in wide)

    def test_empty_author_set_rejected(self, gateway_records_dir):
        gateway = make_gateway(FixtureProvider(gateway_records_dir))
        with pytest.raises(ValidationError):
            gateway.fetch_publications([], WINDOW)

    @pytest.mark.parametrize("page_size", list(range(1, 25)))
    def test_pagination_reassembly(self, gateway_records_dir, page_size):
        gateway = make_gateway(FixtureProvider(gateway_records_dir), page_size=page_size)
        pubs, receipt = gateway.fetch_publications([aid("001")], WINDOW)
        ids = [p.doc_id for p in pubs]
        assert len(ids) == len(set(ids)) == 23
        expected_pages = -(-23 // page_size)
        assert receipt.pages_fetched == expected_pages


class TestRateLimiter:
    def test_budget_never_exceeded(self):
        clock = FakeClock()
        limiter = RollingWindowLimiter(5, 1.0, clock=clock.monotonic, sleep=clock.sleep)
        for _ in range(23):
            limiter.acquire()
        times = limiter.history
        assert len(times) == 23
        for i in range(len(times)):
            in_window = [t for t in times if times[i] - 1.0 < t <= times[i]]
            assert len(in_window) <= 5

    def test_gateway_requests_respect_budget(self, gateway_records_dir):
        clock = FakeClock()
        limiter = RollingWindowLimiter(3, 1.0, clock=clock.monotonic, sleep=clock.sleep)
        config = ProviderConfig(page_size=1, rate_limit_requests=3, rate_limit_window=1.0)
        gateway = Gateway(
            FixtureProvider(gateway_records_dir), config,
            limiter=limiter, sleep=clock.sleep,
        )
        gateway.fetch_publications([aid("001")], WINDOW)
        times = limiter.history
        assert len(times) == 23
        for i in range(len(times)):
            in_window = [t for t in times if times[i] - 1.0 < t <= times[i]]
            assert len(in_window) <= 3


class TestCache:
    def test_warm_cache_is_byte_identical(self, gateway_records_dir, tmp_path):
        cache = ResponseCache(tmp_path / "cache")
        cold_gateway = make_gateway(FixtureProvider(gateway_records_dir), cache=cache)
        cold, cold_receipt = cold_gateway.fetch_publications([aid("001")], WINDOW)
        assert cold_receipt.cache_hits == 0

        warm_gateway = make_gateway(FixtureProvider(gateway_records_dir), cache=cache)
        warm, warm_receipt = warm_gateway.fetch_publications([aid("001")], WINDOW)
        assert warm_receipt.cache_hits == warm_receipt.pages_fetched > 0
        cold_bytes = canonical_json([publication_to_json(p) for p in cold])
        warm_bytes = canonical_json([publication_to_json(p) for p in warm])
        assert cold_bytes == warm_bytes

    def test_expired_entries_refetch(self, gateway_records_dir, tmp_path):
        now = [1000.0]
        cache = ResponseCache(tmp_path / "cache", ttl=10.0, clock=lambda: now[0])
        gateway = make_gateway(FixtureProvider(gateway_records_dir), cache=cache)
        gateway.fetch_publications([aid("001")], WINDOW)
        now[0] += 11.0
        _, receipt = gateway.fetch_publications([aid("001")], WINDOW)
        assert receipt.cache_hits == 0


class FlakyProvider:
    """Fails transport n times per page key, then delegates to the fixture."""

    name = "fixture"

    def __init__(self, inner, failures=2, fail_forever_on=None):
        self.inner = inner
        self.failures = failures
        self.fail_forever_on = fail_forever_on or set()
        self.attempts = {}

    def search_authors(self, name_query, affiliation_hint=None):
        return self.inner.search_authors(name_query, affiliation_hint)

    def get_author_profile(self, author_id):
        return self.inner.get_author_profile(author_id)

    def fetch_documents_page(self, author_id, window, page, page_size):
        key = (author_id.value, page)
        if author_id.value in self.fail_forever_on:
            raise TransportError("permanently down")
        count = self.attempts.get(key, 0)
        self.attempts[key] = count + 1
        if count < self.failures:
            raise TransportError("flaky")
        return self.inner.fetch_documents_page(author_id, window, page, page_size)


class TestRetries:
    def test_retry_recovers(self, gateway_records_dir):
        flaky = FlakyProvider(FixtureProvider(gateway_records_dir), failures=2)
        gateway = make_gateway(flaky, max_retries=3)
        pubs, _ = gateway.fetch_publications([aid("001")], WINDOW)
        assert len(pubs) == 23

    def test_exhausted_retries_carry_partial_subset(self, gateway_records_dir):
        flaky = FlakyProvider(
            FixtureProvider(gateway_records_dir), failures=0, fail_forever_on={"002"}
        )
        gateway = make_gateway(flaky, max_retries=1)
        with pytest.raises(PartialFetchError) as info:
            gateway.fetch_publications([aid("001"), aid("002")], WINDOW)
        error = info.value
        assert error.incomplete
        assert len(error.publications) == 23  # author 001 completed first
        assert error.receipt.pages_fetched == 3

    def test_credential_error_is_fatal(self, gateway_records_dir):
        class Rejecting(FlakyProvider):
            def fetch_documents_page(self, *args, **kwargs):
                raise CredentialError("bad key")

        gateway = make_gateway(Rejecting(FixtureProvider(gateway_records_dir)))
        with pytest.raises(CredentialError):
            gateway.fetch_publications([aid("001")], WINDOW)


def scopus_transport(handler_map):
    def handler(request: httpx.Request) -> httpx.Response:
        for needle, response in handler_map.items():
            if needle in str(request.url):
                return response() if callable(response) else response
        return httpx.Response(404, json={})

    return httpx.MockTransport(handler)


def author_entry(author_id="7004", surname="Papadopoulos", initials="A."):
    return {
        "dc:identifier": f"AUTHOR_ID:{author_id}",
        "preferred-name": {"surname": surname, "given-name": "Anna", "initials": initials},
        "name-variant": [{"surname": surname, "initials": "A.N."}],
        "affiliation-current": {"affiliation-name": "Aristotle University of Thessaloniki"},
        "document-count": "12",
        "subject-area": [{"$": "Physics and Astronomy", "@abbrev": "PHYS"}],
    }


def search_payload(entries, total=None):
    return {
        "search-results": {
            "opensearch:totalResults": str(total if total is not None else len(entries)),
            "entry": entries,
        }
    }


class TestScopusProvider:
    def _provider(self, transport):
        config = ProviderConfig(base_endpoint="https://api.example.org", credential="k")
        client = httpx.Client(transport=transport)
        return ScopusProvider(config, client=client)

    def test_author_search_mapping(self):
        transport = scopus_transport(
            {"search/author": httpx.Response(200, json=search_payload([author_entry()]))}
        )
        records = self._provider(transport).search_authors("Papadopoulos", "AUTH")
        assert len(records) == 1
        record = records[0]
        assert record.author_id == AuthorId("scopus", "7004")
        assert record.indexed_name == "Papadopoulos, A."
        assert "Papadopoulos, A.N." in record.name_variants
        assert record.document_count == 12
        assert record.subject_areas == ("Physics and Astronomy",)

    def test_profile_not_found(self):
        transport = scopus_transport(
            {"search/author": httpx.Response(200, json=search_payload([], total=0))}
        )
        with pytest.raises(ProfileNotFoundError):
            self._provider(transport).get_author_profile(AuthorId("scopus", "1"))

    def test_document_mapping_and_total(self):
        entry = {
            "dc:identifier": "SCOPUS_ID:85012",
            "dc:title": "A study",
            "prism:coverDate": "2019-05-01",
            "citedby-count": "42",
            "author": [{"authid": "7004"}, {"authid": "8001"}],
            "prism:publicationName": "Physics Letters",
            "subtypeDescription": "Article",
        }
        transport = scopus_transport(
            {"search/scopus": httpx.Response(200, json=search_payload([entry], total=57))}
        )
        docs, total = self._provider(transport).fetch_documents_page(
            AuthorId("scopus", "7004"), WINDOW, 0, 25
        )
        assert total == 57
        doc = docs[0]
        assert doc.doc_id == "85012"
        assert doc.year == 2019
        assert doc.citation_count == 42
        assert doc.author_ids == (AuthorId("scopus", "7004"), AuthorId("scopus", "8001"))
        assert doc.doc_type == "Article"

    @pytest.mark.parametrize("status,exc", [(401, CredentialError), (403, CredentialError),
                                            (429, TransportError), (500, TransportError)])
    def test_status_mapping(self, status, exc):
        transport = scopus_transport({"search/author": httpx.Response(status, json={})})
        with pytest.raises(exc):
            self._provider(transport).search_authors("X")

    def test_gateway_retries_scopus_5xx(self):
        calls = {"n": 0}

        def flaky_response():
            calls["n"] += 1
            if calls["n"] < 3:
                return httpx.Response(503, json={})
            return httpx.Response(200, json=search_payload([author_entry()]))

        transport = scopus_transport({"search/author": flaky_response})
        gateway = make_gateway(self._provider(transport), max_retries=3)
        records = gateway.search_authors("Papadopoulos")
        assert len(records) == 1
        assert calls["n"] == 3
