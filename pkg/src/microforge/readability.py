"""Flesch Reading Ease scoring and grade-band classification for items.

Scores are computed from word, sentence, and syllable counts:

    FRE = 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)

The arithmetic runs over decimal values so that terminating cases come out
exact (FRE of one one-syllable word in one sentence is 121.22, not
121.22000000000003), then converts to float. Scores are deliberately not
clamped to [0, 100]: the formula is unbounded and clamping would hide bad
counts.

Syllables use a vowel-group heuristic (a, e, i, o, u, y), dropping a terminal
silent "e" unless the word ends in a consonant + "le", minimum one per word.
No pronunciation dictionary, no external data; a small, documented error rate
is the trade-off for determinism.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, replace
from decimal import Decimal
from enum import Enum
from functools import lru_cache

from microforge.elements import (
    FlashcardBody,
    Kind,
    MiniLessonBody,
    QuizBody,
    ScenarioBody,
)
from microforge.errors import UndefinedScore
from microforge.model import MicroItem

_FRE_BASE = Decimal("206.835")
_FRE_PER_WORD_RATE = Decimal("1.015")
_FRE_PER_SYLLABLE_RATE = Decimal("84.6")

DIFFICULT_SYLLABLES = 3

# A sentence ends at ./!/? followed by whitespace or end of text.
_SENTENCE_END = re.compile(r"[.!?]+(?=\s|$)")
_VOWEL_GROUPS = re.compile(r"[aeiouy]+")
_NON_ALPHA = re.compile(r"[^a-z]+")
# Whitespace-delimited tokens containing at least one letter or digit.
_WORD_TOKEN = re.compile(r"\S*[^\W_]\S*")
_HAS_ALNUM = re.compile(r"[^\W_]")


class Band(str, Enum):
    FIFTH_GRADE = "5th grade"
    SIXTH_GRADE = "6th grade"
    SEVENTH_GRADE = "7th grade"
    EIGHTH_NINTH_GRADE = "8th & 9th grade"
    TENTH_TWELFTH_GRADE = "10th to 12th grade"
    COLLEGE = "college"
    COLLEGE_GRADUATE = "college graduate"


@dataclass(frozen=True)
class TextStats:
    words: int
    sentences: int
    syllables: int
    difficult_words: int = 0

    def __post_init__(self):
        for name in ("words", "sentences", "syllables", "difficult_words"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.words >= 1 and self.sentences < 1:
            raise ValueError("sentences must be >= 1 when words >= 1")
        if self.syllables < self.words:
            raise ValueError("syllables must be >= words")


@dataclass(frozen=True)
class ReadabilityReport:
    fre: float
    band: Band
    stats: TextStats


@lru_cache(maxsize=65536)
def count_syllables(word: str) -> int:
    """Syllables in one word by the vowel-group heuristic, minimum 1."""
    letters = _NON_ALPHA.sub("", word.lower())
    if not letters:
        return 1
    groups = len(_VOWEL_GROUPS.findall(letters))
    if letters.endswith("e") and not (
        len(letters) >= 3
        and letters.endswith("le")
        and letters[-3] not in "aeiouy"
    ):
        groups -= 1
    return max(groups, 1)


def count_stats(text: str) -> TextStats:
    """Word, sentence, syllable, and difficult-word counts for a text.

    Empty or word-free text yields all zeros. Any text with at least one word
    counts at least one sentence. Single pass over the text; syllables are
    computed once per distinct token, which keeps multi-megabyte inputs fast.
    """
    tokens = _WORD_TOKEN.findall(text)
    if not tokens:
        return TextStats(words=0, sentences=0, syllables=0, difficult_words=0)

    sentences = 0
    last = 0
    for match in _SENTENCE_END.finditer(text):
        if _HAS_ALNUM.search(text, last, match.start()):
            sentences += 1
        last = match.end()
    if _HAS_ALNUM.search(text, last):
        sentences += 1
    sentences = max(sentences, 1)

    syllables = 0
    difficult = 0
    for token, n in Counter(tokens).items():
        s = count_syllables(token)
        syllables += s * n
        if s >= DIFFICULT_SYLLABLES and not _looks_proper(token):
            difficult += n
    return TextStats(
        words=len(tokens),
        sentences=sentences,
        syllables=syllables,
        difficult_words=difficult,
    )


def _looks_proper(token: str) -> bool:
    # Proper-noun heuristic: first alphabetic character is uppercase.
    for c in token:
        if c.isalpha():
            return c.isupper()
    return False


def flesch(stats: TextStats) -> float:
    """Flesch Reading Ease for the given counts, unclamped."""
    if stats.words == 0 or stats.sentences == 0:
        raise UndefinedScore("score undefined without words and sentences")
    value = (
        _FRE_BASE
        - _FRE_PER_WORD_RATE * (Decimal(stats.words) / Decimal(stats.sentences))
        - _FRE_PER_SYLLABLE_RATE * (Decimal(stats.syllables) / Decimal(stats.words))
    )
    return float(value)


def classify(fre: float) -> Band:
    """Map a score to its canonical grade band. Total over the reals."""
    if fre >= 90:
        return Band.FIFTH_GRADE
    if fre >= 80:
        return Band.SIXTH_GRADE
    if fre >= 70:
        return Band.SEVENTH_GRADE
    if fre >= 60:
        return Band.EIGHTH_NINTH_GRADE
    if fre >= 50:
        return Band.TENTH_TWELFTH_GRADE
    if fre >= 30:
        return Band.COLLEGE
    return Band.COLLEGE_GRADUATE


def visible_text(item: MicroItem) -> str:
    """The user-facing text of an item, the input to its readability score."""
    body = item.body
    if isinstance(body, FlashcardBody):
        parts = [body.front, body.back]
    elif isinstance(body, QuizBody):
        parts = [body.stem, *(o.text for o in body.options)]
        if body.explanation:
            parts.append(body.explanation)
    elif isinstance(body, MiniLessonBody):
        parts = [body.content]
    elif isinstance(body, ScenarioBody):
        parts = [
            body.objective,
            body.scenario,
            body.task,
            body.activity.introduction,
            body.activity.hands_on,
            body.activity.assessment,
        ]
    else:  # pragma: no cover - validate_body forbids this
        raise TypeError(f"unknown body type {type(body).__name__}")
    return "\n".join(p for p in parts if p)


def report_for(text: str) -> ReadabilityReport:
    stats = count_stats(text)
    score = flesch(stats)
    return ReadabilityReport(fre=score, band=classify(score), stats=stats)


def score_item(item: MicroItem) -> MicroItem:
    """Return the item with a fresh readability report attached."""
    return replace(item, readability=report_for(visible_text(item)))


def kind_mean_rows(items) -> list[tuple[str, float, Band, int]]:
    """Per-kind (kind, mean FRE, band of mean, item count), in kind order.

    Kinds with no scored items are omitted.
    """
    by_kind: dict[str, list[float]] = {}
    for item in items:
        if item.readability is not None:
            by_kind.setdefault(item.kind.value, []).append(item.readability.fre)
    rows = []
    for kind in Kind:
        scores = by_kind.get(kind.value)
        if scores:
            mean = sum(scores) / len(scores)
            rows.append((kind.value, mean, classify(mean), len(scores)))
    return rows
