"""Exception taxonomy shared across the package.

Every failure raised by this package derives from QaError so callers can
catch one base type at the CLI/service boundary.
"""

from __future__ import annotations


class QaError(Exception):
    """Base class for all package errors."""


# --- corpus ingestion ---

class InvalidEncoding(QaError):
    """Input bytes are not valid UTF-8."""


class EmptyBook(QaError):
    """No non-blank paragraph anywhere in the input."""


class SchemaError(QaError):
    """Structured input violates the expected schema or an invariant."""


# --- index persistence ---

class IndexIoError(QaError):
    """Index file could not be read or written."""


class VersionMismatch(QaError):
    """Persisted index has an unsupported format_version."""


class CorruptIndex(QaError):
    """Persisted index fails revalidation (inconsistent entries)."""


# --- backends ---

class BackendError(QaError):
    """Base class for answer/embedding backend failures."""


class BackendTimeout(BackendError):
    """Remote call exceeded the configured timeout."""


class HttpError(BackendError):
    """Remote service replied with a non-2xx status."""

    def __init__(self, status: int, message: str = ""):
        super().__init__(f"HTTP {status}: {message}" if message else f"HTTP {status}")
        self.status = status


class ProviderUnavailable(BackendError):
    """Embedding provider could not be reached."""


class DimensionMismatch(BackendError):
    """Embedding provider returned vectors of inconsistent lengths."""


class SpanOutOfBounds(BackendError):
    """Answer span offsets violate the SpanAnswer invariant."""


class EmptyContext(BackendError):
    """Answer extraction was asked to run over an empty context."""


# --- query pipeline ---

class NoKeywords(QaError):
    """Question contains no content tokens after stopword filtering."""


class ExtractionFailed(QaError):
    """Keyphrase extraction failed for one paragraph."""

    def __init__(self, ref, cause: Exception):
        super().__init__(f"extraction failed at page {ref.page_num} paragraph "
                         f"{ref.paragraph_num}: {cause}")
        self.ref = ref


# --- evaluation ---

class EmptyReference(QaError):
    """BLEU reference is empty after tokenization."""


class NonPositiveBaseline(QaError):
    """Latency improvement requires a positive baseline time."""


class DegenerateAgreement(QaError):
    """Fleiss' kappa is undefined when expected agreement equals 1."""


class EmptySuite(QaError):
    """Benchmark invoked with no questions."""
