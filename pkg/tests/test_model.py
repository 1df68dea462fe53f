from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from deptmetrics.model import (
    AuthorId,
    DepartmentMetrics,
    DomainError,
    FacultyMember,
    ProfileStatus,
    Publication,
    Rank,
    ValidationError,
    YearWindow,
    missing_profile_rate,
    normalize_text,
    parse_rank,
    percentage,
    round_ratio,
)

from conftest import aid, member, pub
from oracles import round_oracle


class TestAuthorId:
    def test_token_roundtrip(self):
        token = AuthorId("scopus", "7004212771").token
        assert token == "scopus:7004212771"
        assert AuthorId.parse(token) == AuthorId("scopus", "7004212771")

    def test_empty_value_rejected(self):
        with pytest.raises(ValidationError):
            AuthorId("fixture", "")
        with pytest.raises(ValidationError):
            AuthorId.parse("justavalue")


class TestFacultyMember:
    def test_not_found_cannot_hold_ids(self):
        with pytest.raises(ValidationError):
            member("m1", "d1", "X", ["a1"], status=ProfileStatus.NOT_FOUND)

    def test_resolved_requires_ids(self):
        with pytest.raises(ValidationError):
            member("m1", "d1", "X", [], status=ProfileStatus.RESOLVED)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValidationError):
            member("m1", "d1", "X", ["a1", "a1"])


class TestPublication:
    def test_negative_citations_rejected(self):
        with pytest.raises(ValidationError):
            pub("d1", 2020, -1, ["a1"])

    def test_empty_authors_rejected(self):
        with pytest.raises(ValidationError):
            Publication("d1", "t", 2020, 0, ())

    def test_year_bounds(self):
        with pytest.raises(ValidationError):
            pub("d1", 1799, 0, ["a1"])
        with pytest.raises(ValidationError):
            pub("d1", 2300, 0, ["a1"])


class TestYearWindow:
    def test_parse(self):
        assert YearWindow.parse("2017:2021") == YearWindow(2017, 2021)
        assert YearWindow.parse("2017-2021") == YearWindow(2017, 2021)

    def test_invalid(self):
        with pytest.raises(ValidationError):
            YearWindow(2021, 2017)
        with pytest.raises(ValidationError):
            YearWindow.parse("2017")

    def test_closed_interval(self, window):
        assert window.contains(2017) and window.contains(2021)
        assert not window.contains(2016) and not window.contains(2022)


class TestDepartmentMetrics:
    def test_from_counts_exact(self, window):
        m = DepartmentMetrics.from_counts(
            "d1", window, trs_total=2, trs_without_profile=0,
            paper_count=3, citation_count=20,
        )
        assert m.papers_per_trs == Fraction(3, 2)
        assert m.citations_per_trs == Fraction(10)
        assert m.citations_per_paper == Fraction(20, 3)

    def test_zero_papers_ratio_defined(self, window):
        m = DepartmentMetrics.from_counts(
            "d1", window, trs_total=4, trs_without_profile=4,
            paper_count=0, citation_count=0,
        )
        assert m.citations_per_paper == 0

    def test_empty_department_rejected(self, window):
        with pytest.raises(DomainError, match="empty department"):
            DepartmentMetrics.from_counts(
                "d1", window, trs_total=0, trs_without_profile=0,
                paper_count=0, citation_count=0,
            )

    def test_inconsistent_ratio_rejected(self, window):
        with pytest.raises(ValidationError):
            DepartmentMetrics(
                department_id="d1", window=window, trs_total=2,
                trs_without_profile=0, paper_count=3, citation_count=20,
                papers_per_trs=Fraction(3, 2), citations_per_trs=Fraction(10),
                citations_per_paper=Fraction(5),
            )

    @given(count=st.integers(0, 10_000), trs=st.integers(1, 500), k=st.integers(1, 1000))
    def test_citation_scaling_is_exact(self, count, trs, k):
        window = YearWindow(2017, 2021)
        base = DepartmentMetrics.from_counts(
            "d", window, trs_total=trs, trs_without_profile=0,
            paper_count=7, citation_count=count,
        )
        scaled = DepartmentMetrics.from_counts(
            "d", window, trs_total=trs, trs_without_profile=0,
            paper_count=7, citation_count=count * k,
        )
        assert scaled.citations_per_trs == base.citations_per_trs * k
        assert scaled.citations_per_paper == base.citations_per_paper * k
        assert scaled.papers_per_trs == base.papers_per_trs


class TestMissingProfileRate:
    def test_study_figures(self):
        members = [
            member(f"m{i}", "d1", f"M {i}", [] if i < 1158 else [f"a{i}"])
            for i in range(9838)
        ]
        rate = missing_profile_rate(members)
        assert rate == Fraction(1158, 9838)
        assert percentage(rate) == "11.77%"

    def test_all_resolved(self):
        members = [member(f"m{i}", "d1", f"M {i}", [f"a{i}"]) for i in range(10)]
        assert missing_profile_rate(members) == 0

    def test_three_of_eight(self):
        # Counted by hand over the 8-member fixture: m0, m1, m2 lack profiles.
        members = [
            member(f"m{i}", "d1", f"M {i}", [] if i < 3 else [f"a{i}"])
            for i in range(8)
        ]
        assert missing_profile_rate(members) == Fraction(3, 8)

    def test_empty_collection(self):
        with pytest.raises(DomainError, match="no faculty"):
            missing_profile_rate([])


class TestRounding:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (Fraction(3, 2), "1.50"),
            (Fraction(10), "10.00"),
            (Fraction(20, 3), "6.67"),
            (Fraction(1, 8), "0.13"),
            (Fraction(1, 200), "0.01"),
            (Fraction(0), "0.00"),
        ],
    )
    def test_examples(self, value, expected):
        assert round_ratio(value) == expected

    @given(num=st.integers(0, 10**7), den=st.integers(1, 10**5))
    def test_matches_decimal_oracle(self, num, den):
        assert round_ratio(Fraction(num, den)) == round_oracle(num, den)


class TestRankParsing:
    def test_aliases(self):
        assert parse_rank("Associate Professor") is Rank.ASSOCIATE_PROFESSOR
        assert parse_rank("probationary_assistant-professor") is Rank.PROBATIONARY_ASSISTANT_PROFESSOR

    def test_unknown(self):
        with pytest.raises(ValidationError):
            parse_rank("adjunct")


def test_normalize_text_folds_diacritics():
    assert normalize_text("Économie") == "economie"
    assert normalize_text("  PHYSICS ") == "physics"
