from .base import (
    AuthorProfileRecord,
    CredentialError,
    FetchReceipt,
    PartialFetchError,
    ProfileNotFoundError,
    Provider,
    ProviderConfig,
    ProviderError,
    TransportError,
)
from .cache import ResponseCache
from .fixture import FixtureProvider
from .gateway import Gateway
from .ratelimit import RollingWindowLimiter
from .scopus import ScopusProvider

__all__ = [
    "AuthorProfileRecord",
    "CredentialError",
    "FetchReceipt",
    "FixtureProvider",
    "Gateway",
    "PartialFetchError",
    "ProfileNotFoundError",
    "Provider",
    "ProviderConfig",
    "ProviderError",
    "ResponseCache",
    "RollingWindowLimiter",
    "ScopusProvider",
    "TransportError",
]
