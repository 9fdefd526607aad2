"""Exception types raised across the pipeline.

Every error the package raises deliberately derives from MicroforgeError so
callers (and the CLI) can distinguish our failures from genuine bugs.
"""

from __future__ import annotations


class MicroforgeError(Exception):
    """Base class for all errors raised by this package."""


# --- domain model ---------------------------------------------------------


class InvalidBody(MicroforgeError):
    """An element body violates the invariants of its kind."""


class IllegalTransition(MicroforgeError):
    """A status change not permitted by the review status graph."""


# --- ingest ---------------------------------------------------------------


class UnrecognizedFormat(MicroforgeError):
    """Auto-detection matched none of the supported transcript grammars."""


class MalformedCue(MicroforgeError):
    """A broken SRT/VTT timing line; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EmptyDeck(MicroforgeError):
    """A slide file with no non-blank page."""


# --- refine ---------------------------------------------------------------


class BadChunkConfig(MicroforgeError):
    """Chunk sizing preconditions violated."""


class BadInput(MicroforgeError):
    """An operation was handed input its precondition forbids."""


# --- llm gateway ----------------------------------------------------------


class GatewayError(MicroforgeError):
    """Base class for chat-completion transport failures."""


class MissingSlot(GatewayError):
    """A prompt template slot was not supplied at render time."""

    def __init__(self, slot: str):
        super().__init__(f"missing template slot: {slot}")
        self.slot = slot


class AuthError(GatewayError):
    """Endpoint rejected the credential (401/403)."""


class RateLimited(GatewayError):
    """429 persisted after the retry budget was exhausted."""


class ProviderError(GatewayError):
    """Server-side failure (5xx) persisted after retries."""


class MockMiss(GatewayError):
    """Replay mode found no fixture for the request digest."""

    def __init__(self, digest: str):
        super().__init__(f"no recorded completion for digest {digest}")
        self.digest = digest


class Timeout(GatewayError):
    """The call did not complete within the per-call time budget."""


# --- generate -------------------------------------------------------------


class NoStructuredBlock(MicroforgeError):
    """Completion text contained no top-level bracketed array."""


class DecodeError(MicroforgeError):
    """A structured document failed to decode; carries the byte offset when known."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (offset {offset})"
        super().__init__(message)
        self.offset = offset


class SchemaError(MicroforgeError):
    """Decoded records violated body invariants; lists every violation."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class GenerationFailed(MicroforgeError):
    """Parse + repair budget exhausted without a valid payload."""


# --- readability ----------------------------------------------------------


class UndefinedScore(MicroforgeError):
    """Flesch score is undefined for zero words or zero sentences."""


# --- review / export ------------------------------------------------------


class UnknownItem(MicroforgeError):
    """No item with the given id exists in the package."""


class UnreviewedContent(MicroforgeError):
    """Default export refused: some items are not approved."""

    def __init__(self, item_ids: list[str]):
        super().__init__("unreviewed items: " + ", ".join(item_ids))
        self.item_ids = list(item_ids)


class SchemaVersionMismatch(MicroforgeError):
    """Package file declares a schema version this build does not read."""


# --- cli ------------------------------------------------------------------


class ConfigError(MicroforgeError):
    """Configuration file missing, unreadable, or inconsistent."""
