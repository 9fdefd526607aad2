"""Shared domain types: lecture inputs, items, provenance, review statuses, packages.

Everything here is an immutable value; operations return new values, so
instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import TYPE_CHECKING, Mapping

from microforge.elements import Body, Kind, validate_body
from microforge.errors import IllegalTransition, InvalidBody
from microforge.ids import Clock, IdGenerator, utc_now

if TYPE_CHECKING:
    from microforge.readability import ReadabilityReport

SCHEMA_VERSION = "1.0"
PIPELINE_VERSION = "0.1.0"

_default_ids = IdGenerator()


class Status(str, Enum):
    GENERATED = "generated"
    APPROVED = "approved"
    REJECTED = "rejected"
    EDITED = "edited"


# generated -> approved | rejected | edited; edited -> approved | rejected.
ALLOWED_TRANSITIONS: dict[Status, frozenset[Status]] = {
    Status.GENERATED: frozenset({Status.APPROVED, Status.REJECTED, Status.EDITED}),
    Status.EDITED: frozenset({Status.APPROVED, Status.REJECTED}),
    Status.APPROVED: frozenset(),
    Status.REJECTED: frozenset(),
}


class Producer(str, Enum):
    LLM = "llm"
    RULES = "rules"
    HUMAN = "human"


@dataclass(frozen=True)
class TranscriptSegment:
    index: int
    text: str
    start_ms: int | None = None
    end_ms: int | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f"segment {self.index}: text empty after trimming")
        if self.start_ms is not None and self.end_ms is not None:
            if self.end_ms < self.start_ms:
                raise ValueError(
                    f"segment {self.index}: end_ms {self.end_ms} < start_ms {self.start_ms}"
                )


@dataclass(frozen=True)
class SlidePage:
    page_no: int
    text: str
    notes: str | None = None

    def __post_init__(self):
        if self.page_no < 1:
            raise ValueError(f"page_no must be >= 1, got {self.page_no}")


@dataclass(frozen=True)
class LectureSource:
    lecture_id: str
    title: str
    transcript: tuple[TranscriptSegment, ...] = ()
    slides: tuple[SlidePage, ...] = ()
    created_at: datetime = field(default_factory=utc_now)

    def __post_init__(self):
        if not self.transcript and not self.slides:
            raise ValueError("lecture needs at least one input: transcript or slides")
        starts = [s.start_ms for s in self.transcript if s.start_ms is not None]
        if starts != sorted(starts):
            raise ValueError("transcript segments out of order by start time")
        pages = [p.page_no for p in self.slides]
        if any(b <= a for a, b in zip(pages, pages[1:])):
            raise ValueError("slide page numbers must be strictly increasing")


@dataclass(frozen=True)
class Provenance:
    producer: Producer
    pipeline_version: str
    timestamp: datetime
    model_id: str | None = None
    prompt_hash: str | None = None

    def __post_init__(self):
        if self.producer is Producer.LLM and not (self.model_id and self.prompt_hash):
            raise ValueError("llm provenance requires model_id and prompt_hash")
        if self.timestamp.tzinfo is None:
            raise ValueError("provenance timestamp must be timezone-aware UTC")


@dataclass(frozen=True)
class MicroItem:
    item_id: str
    kind: Kind
    body: Body
    provenance: Provenance
    status: Status = Status.GENERATED
    readability: "ReadabilityReport | None" = None

    def __post_init__(self):
        validate_body(self.kind, self.body)


@dataclass(frozen=True)
class SourceRef:
    """Lecture summary carried by a package: ids and titles only."""

    lecture_id: str
    title: str

    @classmethod
    def of(cls, lecture: LectureSource) -> "SourceRef":
        return cls(lecture_id=lecture.lecture_id, title=lecture.title)


@dataclass(frozen=True)
class ReviewLogEntry:
    item_id: str
    action: str  # approve | reject | edit
    actor: str
    timestamp: datetime
    diff_summary: str | None = None


@dataclass(frozen=True)
class Package:
    source: SourceRef
    items: tuple[MicroItem, ...] = ()
    manifest: Mapping[str, object] = field(default_factory=dict)
    review_log: tuple[ReviewLogEntry, ...] = ()
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        ids = [item.item_id for item in self.items]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate item ids in package: {dupes}")

    def get_item(self, item_id: str) -> MicroItem | None:
        for item in self.items:
            if item.item_id == item_id:
                return item
        return None


def new_item(
    kind: Kind,
    body: Body,
    provenance: Provenance,
    *,
    id_gen: IdGenerator | None = None,
) -> MicroItem:
    """Create a generated-status item with a fresh unique id.

    Raises InvalidBody when the body is not a valid record for `kind`.
    """
    validate_body(kind, body)
    gen = id_gen if id_gen is not None else _default_ids
    return MicroItem(
        item_id=gen.new_id(),
        kind=kind,
        body=body,
        provenance=provenance,
        status=Status.GENERATED,
    )


def transition(item: MicroItem, to: Status) -> MicroItem:
    """Move an item along the review status graph; everything else is unchanged."""
    if to not in ALLOWED_TRANSITIONS[item.status]:
        raise IllegalTransition(f"cannot move {item.item_id} from {item.status.value} to {to.value}")
    return replace(item, status=to)


def human_provenance(clock: Clock | None = None) -> Provenance:
    """Provenance for instructor-authored or instructor-edited content."""
    now = (clock or utc_now)()
    return Provenance(
        producer=Producer.HUMAN,
        pipeline_version=PIPELINE_VERSION,
        timestamp=now.astimezone(timezone.utc),
    )
