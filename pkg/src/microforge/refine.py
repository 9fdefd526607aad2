"""Clean raw classroom transcripts and chunk them for context-limited models.

Long transcripts are flattened to words and cut into fixed-size chunks with a
fixed overlap, so a 225-minute lecture fits common context windows in about
eleven prompts. Refinement runs either through the LLM prompt or through a
deterministic rules pass (filler removal, whitespace collapse, sentence-start
capitalization) used for offline runs and tests; rules mode makes no claim of
parity with the model.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import timezone
from enum import Enum

from microforge.errors import BadChunkConfig, BadInput
from microforge.gateway import Gateway, user_request
from microforge.ids import Clock, utc_now
from microforge.model import (
    PIPELINE_VERSION,
    LectureSource,
    Producer,
    Provenance,
    TranscriptSegment,
)
from microforge.prompts import REFINE_TEMPLATE, prompt_hash, render

DEFAULT_CHUNK_WORDS = 3000
DEFAULT_OVERLAP_WORDS = 200
MIN_CHUNK_WORDS = 100
REFINE_TEMPERATURE = 0.2

# Exactly the filler phrases the refinement prompt names; "like" is excluded
# on purpose to avoid deleting legitimate uses.
DEFAULT_FILLERS = ("um", "uh", "you know", "okay?")


class RefineMode(str, Enum):
    LLM = "llm"
    RULES = "rules"


@dataclass(frozen=True)
class Chunk:
    chunk_no: int
    start_word: int
    end_word: int
    text: str

    def __post_init__(self):
        if not self.start_word < self.end_word:
            raise ValueError(f"chunk {self.chunk_no}: empty word range")


@dataclass(frozen=True)
class RefinedChunk:
    chunk_no: int
    refined_text: str


@dataclass(frozen=True)
class RefinedTranscript:
    lecture_id: str
    chunks: tuple[RefinedChunk, ...]
    mode: RefineMode
    provenance: Provenance


def chunk_transcript(
    segments: list[TranscriptSegment] | tuple[TranscriptSegment, ...],
    chunk_words: int = DEFAULT_CHUNK_WORDS,
    overlap_words: int = DEFAULT_OVERLAP_WORDS,
) -> list[Chunk]:
    """Cut the flattened transcript into overlapping word-range chunks.

    Chunk i starts at i * (chunk_words - overlap_words); consecutive chunks
    overlap by exactly overlap_words except the last, and every word lands in
    at least one chunk.
    """
    if overlap_words < 0:
        raise BadChunkConfig("overlap_words must be >= 0")
    if chunk_words <= overlap_words:
        raise BadChunkConfig("chunk_words must exceed overlap_words")
    if chunk_words < MIN_CHUNK_WORDS:
        raise BadChunkConfig(f"chunk_words must be >= {MIN_CHUNK_WORDS}")

    words = " ".join(seg.text for seg in segments).split()
    if not words:
        return []

    step = chunk_words - overlap_words
    chunks: list[Chunk] = []
    start = 0
    while True:
        end = min(start + chunk_words, len(words))
        chunks.append(
            Chunk(
                chunk_no=len(chunks) + 1,
                start_word=start,
                end_word=end,
                text=" ".join(words[start:end]),
            )
        )
        if end == len(words):
            return chunks
        start += step


def _filler_pattern(phrase: str) -> re.Pattern:
    words = [re.escape(w) for w in phrase.split()]
    body = r"\s+".join(words)
    tail = r"(?![\w])" if phrase[-1].isalnum() else ""
    # Consume one trailing comma so "now, you know, it" closes up to "now, it".
    return re.compile(r"(?<![\w])" + body + tail + r",?", re.IGNORECASE)


_MULTI_WS = re.compile(r"\s+")
_SENTENCE_START = re.compile(r"(^|[.!?]\s+)([a-z])")


def clean_text(text: str, filler_lexicon: tuple[str, ...] = DEFAULT_FILLERS) -> str:
    """Deterministic transcript cleanup: total, idempotent, never deletes
    non-filler words, and introduces nothing but single spaces and case changes."""
    if not filler_lexicon:
        raise BadInput("filler lexicon must be non-empty")
    patterns = [_filler_pattern(p) for p in filler_lexicon]
    # Removal can butt two halves of a lexicon phrase together; repeat to a
    # fixpoint so no word-boundary match survives.
    while True:
        stripped = text
        for pat in patterns:
            stripped = pat.sub(" ", stripped)
        if stripped == text:
            break
        text = stripped
    text = _MULTI_WS.sub(" ", text).strip()
    return _SENTENCE_START.sub(lambda m: m.group(1) + m.group(2).upper(), text)


def refine_rules(chunk: Chunk, filler_lexicon: tuple[str, ...] = DEFAULT_FILLERS) -> str:
    """Rules-mode refinement of one chunk."""
    return clean_text(chunk.text, filler_lexicon)


def refine_llm(chunk: Chunk, gateway: Gateway, *, temperature: float = REFINE_TEMPERATURE) -> str:
    """LLM refinement of one chunk via the built-in refinement prompt."""
    if not chunk.text.strip():
        raise BadInput(f"chunk {chunk.chunk_no} has no text")
    prompt = render(REFINE_TEMPLATE, {"transcript": chunk.text})
    req = user_request(
        gateway.config.model_id,
        prompt,
        temperature=temperature,
        max_tokens=gateway.config.max_tokens,
    )
    return gateway.complete(req)


def refine_transcript(
    lecture: LectureSource,
    *,
    mode: RefineMode = RefineMode.RULES,
    chunk_words: int = DEFAULT_CHUNK_WORDS,
    overlap_words: int = DEFAULT_OVERLAP_WORDS,
    gateway: Gateway | None = None,
    filler_lexicon: tuple[str, ...] = DEFAULT_FILLERS,
    temperature: float = REFINE_TEMPERATURE,
    clock: Clock | None = None,
    max_workers: int = 4,
) -> RefinedTranscript:
    """Chunk and refine a lecture transcript.

    Chunks are refined independently (concurrently in llm mode) and results
    are returned in chunk order regardless of completion order.
    """
    mode = RefineMode(mode)
    chunks = chunk_transcript(lecture.transcript, chunk_words, overlap_words)
    if not chunks:
        raise BadInput(f"lecture {lecture.lecture_id} has no transcript words to refine")

    now = (clock or utc_now)().astimezone(timezone.utc)
    if mode is RefineMode.RULES:
        refined = [refine_rules(c, filler_lexicon) for c in chunks]
        provenance = Provenance(
            producer=Producer.RULES, pipeline_version=PIPELINE_VERSION, timestamp=now
        )
    else:
        if gateway is None:
            raise BadInput("llm mode requires a configured gateway")
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            refined = list(
                pool.map(lambda c: refine_llm(c, gateway, temperature=temperature), chunks)
            )
        provenance = Provenance(
            producer=Producer.LLM,
            pipeline_version=PIPELINE_VERSION,
            timestamp=now,
            model_id=gateway.config.model_id,
            prompt_hash=prompt_hash(REFINE_TEMPLATE.text),
        )
    return RefinedTranscript(
        lecture_id=lecture.lecture_id,
        chunks=tuple(
            RefinedChunk(chunk_no=c.chunk_no, refined_text=t)
            for c, t in zip(chunks, refined)
        ),
        mode=mode,
        provenance=provenance,
    )
