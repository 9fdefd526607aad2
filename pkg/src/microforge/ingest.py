"""Parse transcript files (plain text, SRT, WebVTT) and slide-deck text.

Auto-detection order: the unambiguous `WEBVTT` magic header, then the SRT
cue-number grammar, then plain text. A malformed timing line anywhere aborts
parsing with its line number instead of silently dropping the cue.
"""

from __future__ import annotations

import logging
import re

from microforge.errors import BadInput, EmptyDeck, MalformedCue, UnrecognizedFormat
from microforge.model import SlidePage, TranscriptSegment

logger = logging.getLogger(__name__)

SRT_TIMING = re.compile(
    r"^(\d{2,}):(\d{2}):(\d{2}),(\d{3})\s*-->\s*(\d{2,}):(\d{2}):(\d{2}),(\d{3})\s*$"
)
VTT_TIMING = re.compile(
    r"^(\d{2,}):(\d{2}):(\d{2})\.(\d{3})\s*-->\s*(\d{2,}):(\d{2}):(\d{2})\.(\d{3})\s*$"
)
# Exact page delimiter for slide decks.
PAGE_DELIMITER = re.compile(r"^--- page [0-9]+ ---$", re.MULTILINE)
_PARAGRAPH_SEP = re.compile(r"\n[ \t]*(?:\n[ \t]*)+")


def _decode(raw: bytes) -> str:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        logger.warning("input is not valid UTF-8; undecodable bytes replaced")
        text = raw.decode("utf-8", errors="replace")
    return text.lstrip("﻿")


def _timestamp_ms(h: str, m: str, s: str, ms: str) -> int:
    return ((int(h) * 60 + int(m)) * 60 + int(s)) * 1000 + int(ms)


def _format_ts(ms: int, sep: str) -> str:
    s, milli = divmod(ms, 1000)
    m, sec = divmod(s, 60)
    h, minute = divmod(m, 60)
    return f"{h:02d}:{minute:02d}:{sec:02d}{sep}{milli:03d}"


def parse_transcript(raw: bytes, format_hint: str = "auto") -> list[TranscriptSegment]:
    """Parse transcript bytes into ordered segments.

    `format_hint` is one of auto, plain, srt, vtt. Cue indices and timestamps
    are preserved for SRT/VTT; plain text yields one untimed segment per
    blank-line-separated paragraph. Segments out of order by start time are
    re-sorted with a warning.
    """
    if format_hint not in ("auto", "plain", "srt", "vtt"):
        raise BadInput(f"unknown format hint {format_hint!r}")
    text = _decode(raw)

    if format_hint == "auto":
        format_hint = _detect(text)
    if format_hint == "vtt":
        segments = _parse_cues(text, VTT_TIMING, skip_header=True)
    elif format_hint == "srt":
        segments = _parse_cues(text, SRT_TIMING, skip_header=False)
    else:
        segments = _parse_plain(text)

    starts = [s.start_ms for s in segments if s.start_ms is not None]
    if starts != sorted(starts):
        logger.warning("transcript cues out of order by start time; re-sorting")
        segments.sort(key=lambda s: (s.start_ms if s.start_ms is not None else 0))
    return segments


def _detect(text: str) -> str:
    if text.startswith("WEBVTT"):
        return "vtt"
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) >= 2 and lines[0].strip().isdigit() and SRT_TIMING.match(lines[1].strip()):
        return "srt"
    if text.strip():
        return "plain"
    raise UnrecognizedFormat("input matches no supported transcript grammar")


def _parse_plain(text: str) -> list[TranscriptSegment]:
    body = text.strip()
    if not body:
        return []
    paragraphs = _PARAGRAPH_SEP.split(body)
    return [
        TranscriptSegment(index=i, text=para)
        for i, para in enumerate(paragraphs, start=1)
    ]


def _parse_cues(text: str, timing: re.Pattern, skip_header: bool) -> list[TranscriptSegment]:
    lines = text.splitlines()
    pos = 0
    if skip_header:
        # WEBVTT header line plus any header metadata up to the first blank line.
        if not lines or not lines[0].startswith("WEBVTT"):
            raise MalformedCue("missing WEBVTT header", 1)
        pos = 1
        while pos < len(lines) and lines[pos].strip():
            pos += 1

    segments: list[TranscriptSegment] = []
    fallback_index = 0
    while pos < len(lines):
        if not lines[pos].strip():
            pos += 1
            continue
        cue_start = pos
        # Optional cue identifier line before the timing line.
        index: int | None = None
        line = lines[pos].strip()
        if timing.match(line) is None:
            if line.isdigit():
                index = int(line)
            elif skip_header:
                index = None  # VTT allows arbitrary cue identifiers; renumber.
            else:
                raise MalformedCue(f"expected cue number, got {line!r}", pos + 1)
            pos += 1
            if pos >= len(lines):
                raise MalformedCue("cue ends before its timing line", cue_start + 1)
            line = lines[pos].strip()
        match = timing.match(line)
        if match is None:
            raise MalformedCue(f"bad timing line {line!r}", pos + 1)
        start_ms = _timestamp_ms(*match.groups()[:4])
        end_ms = _timestamp_ms(*match.groups()[4:])
        if end_ms < start_ms:
            raise MalformedCue(f"cue ends before it starts: {line!r}", pos + 1)
        pos += 1
        text_lines = []
        while pos < len(lines) and lines[pos].strip():
            text_lines.append(lines[pos])
            pos += 1
        if not text_lines:
            raise MalformedCue("cue has no text", cue_start + 1)
        fallback_index += 1
        segments.append(
            TranscriptSegment(
                index=index if index is not None else fallback_index,
                text="\n".join(text_lines),
                start_ms=start_ms,
                end_ms=end_ms,
            )
        )
    return segments


def serialize_srt(segments: list[TranscriptSegment]) -> str:
    """Render segments as SubRip text; inverse of parse_transcript(..., srt)."""
    return _serialize_cues(segments, ",", header="")


def serialize_vtt(segments: list[TranscriptSegment]) -> str:
    """Render segments as WebVTT text; inverse of parse_transcript(..., vtt)."""
    return _serialize_cues(segments, ".", header="WEBVTT\n\n")


def _serialize_cues(segments: list[TranscriptSegment], sep: str, header: str) -> str:
    blocks = []
    for seg in segments:
        if seg.start_ms is None or seg.end_ms is None:
            raise BadInput(f"segment {seg.index} has no timestamps")
        blocks.append(
            f"{seg.index}\n"
            f"{_format_ts(seg.start_ms, sep)} --> {_format_ts(seg.end_ms, sep)}\n"
            f"{seg.text}"
        )
    return header + "\n\n".join(blocks) + "\n"


def parse_slides(raw: bytes) -> list[SlidePage]:
    """Split slide-deck text into pages on form feeds or `--- page N ---` lines.

    Page numbers are assigned sequentially from 1; blank blocks are dropped.
    """
    text = _decode(raw)
    blocks: list[str] = []
    for piece in text.split("\f"):
        blocks.extend(PAGE_DELIMITER.split(piece))
    pages = [b.strip() for b in blocks if b.strip()]
    if not pages:
        raise EmptyDeck("no non-blank slide page found")
    return [SlidePage(page_no=i, text=t) for i, t in enumerate(pages, start=1)]


def serialize_slides(pages: list[SlidePage]) -> str:
    """Render pages with `--- page N ---` delimiters; inverse of parse_slides."""
    blocks = [f"--- page {p.page_no} ---\n{p.text}" for p in pages]
    return "\n".join(blocks) + "\n"
