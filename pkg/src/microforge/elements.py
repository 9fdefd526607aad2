"""The four microlearning element kinds and their body records.

Bodies are plain frozen dataclasses validated on construction; the same
validators gate model output, instructor edits, and package import.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum

from microforge.errors import InvalidBody

logger = logging.getLogger(__name__)

WORDS_PER_MINUTE = 200

FLASHCARD_FRONT_MAX_CHARS = 300
QUIZ_MIN_OPTIONS = 3
QUIZ_MAX_OPTIONS = 6
MINI_LESSON_MINUTES_RANGE = (5.0, 15.0)


class Kind(str, Enum):
    FLASHCARD = "flashcard"
    QUIZ = "quiz"
    MINI_LESSON = "mini_lesson"
    SCENARIO = "scenario"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidBody(message)


def word_count(text: str) -> int:
    """Whitespace-delimited tokens containing at least one letter or digit."""
    return sum(1 for tok in text.split() if any(c.isalnum() for c in tok))


@dataclass(frozen=True)
class FlashcardBody:
    front: str
    back: str
    media: tuple[str, ...] = ()

    def __post_init__(self):
        _require(bool(self.front.strip()), "flashcard front must be non-empty")
        _require(bool(self.back.strip()), "flashcard back must be non-empty")
        _require(self.front != self.back, "flashcard front and back must differ")
        _require(
            len(self.front) <= FLASHCARD_FRONT_MAX_CHARS,
            f"flashcard front exceeds {FLASHCARD_FRONT_MAX_CHARS} characters",
        )


@dataclass(frozen=True)
class QuizOption:
    label: str
    text: str

    def __post_init__(self):
        _require(
            len(self.label) == 1 and self.label.isalpha() and self.label.isupper(),
            f"option label must be a single uppercase letter, got {self.label!r}",
        )
        _require(bool(self.text.strip()), f"option {self.label} text must be non-empty")


@dataclass(frozen=True)
class QuizBody:
    stem: str
    options: tuple[QuizOption, ...]
    correct_label: str
    explanation: str | None = None
    hint: str | None = None
    topic: str | None = None

    def __post_init__(self):
        _require(bool(self.stem.strip()), "quiz stem must be non-empty")
        n = len(self.options)
        _require(
            QUIZ_MIN_OPTIONS <= n <= QUIZ_MAX_OPTIONS,
            f"quiz must have {QUIZ_MIN_OPTIONS}-{QUIZ_MAX_OPTIONS} options, got {n}",
        )
        expected = [chr(ord("A") + i) for i in range(n)]
        labels = [o.label for o in self.options]
        _require(
            labels == expected,
            f"option labels must be consecutive letters from A, got {labels}",
        )
        matches = [o for o in self.options if o.label == self.correct_label]
        _require(
            len(matches) == 1,
            f"exactly one option must match correct_label {self.correct_label!r}",
        )
        texts = [o.text for o in self.options]
        _require(len(set(texts)) == len(texts), "option texts must be pairwise distinct")


@dataclass(frozen=True)
class MiniLessonBody:
    title: str
    objective: str
    content: str
    # Derived from content at 200 words/minute; never taken from model output.
    estimated_minutes: float = field(init=False)

    def __post_init__(self):
        _require(bool(self.title.strip()), "mini lesson title must be non-empty")
        _require(bool(self.objective.strip()), "mini lesson objective must be non-empty")
        _require(bool(self.content.strip()), "mini lesson content must be non-empty")
        minutes = word_count(self.content) / WORDS_PER_MINUTE
        _require(minutes > 0, "mini lesson content must contain words")
        object.__setattr__(self, "estimated_minutes", minutes)
        lo, hi = MINI_LESSON_MINUTES_RANGE
        if not lo <= minutes <= hi:
            logger.warning(
                "mini lesson %r estimated at %.1f min, outside the %g-%g min target",
                self.title, minutes, lo, hi,
            )

    def duration_in_range(self) -> bool:
        lo, hi = MINI_LESSON_MINUTES_RANGE
        return lo <= self.estimated_minutes <= hi


@dataclass(frozen=True)
class ScenarioActivity:
    introduction: str
    hands_on: str
    assessment: str


@dataclass(frozen=True)
class ScenarioBody:
    objective: str
    scenario: str
    task: str
    activity: ScenarioActivity

    def __post_init__(self):
        parts = {
            "objective": self.objective,
            "scenario": self.scenario,
            "task": self.task,
            "activity.introduction": self.activity.introduction,
            "activity.hands_on": self.activity.hands_on,
            "activity.assessment": self.activity.assessment,
        }
        for name, value in parts.items():
            _require(bool(value.strip()), f"scenario {name} must be non-empty")


Body = FlashcardBody | QuizBody | MiniLessonBody | ScenarioBody

_BODY_TYPES: dict[Kind, type] = {
    Kind.FLASHCARD: FlashcardBody,
    Kind.QUIZ: QuizBody,
    Kind.MINI_LESSON: MiniLessonBody,
    Kind.SCENARIO: ScenarioBody,
}


def body_type_for(kind: Kind) -> type:
    return _BODY_TYPES[kind]


def validate_body(kind: Kind, body: object) -> Body:
    """Check that `body` is the (already self-validated) record for `kind`."""
    expected = _BODY_TYPES[kind]
    if not isinstance(body, expected):
        raise InvalidBody(
            f"body for kind {kind.value!r} must be {expected.__name__}, "
            f"got {type(body).__name__}"
        )
    return body


_WS = re.compile(r"\s+")


def dedup_key(kind: Kind, body: Body) -> str:
    """Normalized primary text used for cross-chunk deduplication."""
    if isinstance(body, FlashcardBody):
        text = body.front
    elif isinstance(body, QuizBody):
        text = body.stem
    elif isinstance(body, MiniLessonBody):
        text = body.title
    else:
        text = body.objective
    return _WS.sub(" ", text).strip().lower()
