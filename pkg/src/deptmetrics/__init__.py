"""Department-level research-impact statistics toolkit."""

from .model import (
    AuthorId,
    Department,
    DepartmentMetrics,
    DomainError,
    FacultyMember,
    Institution,
    NotFoundError,
    ProfileStatus,
    Publication,
    Rank,
    UnitKind,
    ValidationError,
    YearWindow,
    missing_profile_rate,
    percentage,
    round_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "AuthorId",
    "Department",
    "DepartmentMetrics",
    "DomainError",
    "FacultyMember",
    "Institution",
    "NotFoundError",
    "ProfileStatus",
    "Publication",
    "Rank",
    "UnitKind",
    "ValidationError",
    "YearWindow",
    "missing_profile_rate",
    "percentage",
    "round_ratio",
    "__version__",
]
